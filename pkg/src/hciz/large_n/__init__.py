"""Leading large-N free energy: cumulants, derivative formulas, exact assembly,
algebraic-curve series and dispersionless residuals."""
