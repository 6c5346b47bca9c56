"""Compare derivatives at theta = 0 with the Taylor coefficients of F."""

from collections import Counter

from ..algebra.rational import ZERO
from .derivatives import derivative_to_coefficient


def triangle_mismatches(F, derivs):
    """Monomials where ``[theta^alpha theta~^beta] F`` disagrees with
    ``[theta~^beta] (d^alpha F at 0) / alpha!``.

    ``derivs`` maps sorted-or-unsorted index tuples ``alpha`` to theta~-series
    (or Rationals).  Both directions are checked: every term of each
    derivative, and every monomial of F whose theta-part is a covered alpha.
    """
    W = F.W
    covered = {}
    for alpha, val in derivs.items():
        key = tuple(sorted(alpha))
        covered.setdefault(key, val)
    bad = []
    for alpha, val in covered.items():
        counts = Counter(alpha)
        ref = derivative_to_coefficient(val, counts)
        if hasattr(ref, "terms"):
            for e, c in ref.terms():
                beta = {q + 1: x for q, x in enumerate(e) if x}
                if F.coefficient(dict(counts), beta) != c:
                    bad.append((alpha, tuple(sorted(beta.items()))))
        elif F.coefficient(dict(counts), {}) != ref:
            bad.append((alpha, ()))
    for e, c in F.terms():
        alpha = tuple(q + 1 for q, x in enumerate(e[:W]) for _ in range(x))
        if alpha not in covered:
            continue
        ref = derivative_to_coefficient(covered[alpha], Counter(alpha))
        beta = {f"tt{q + 1}": x for q, x in enumerate(e[W:]) if x}
        got = ref.coefficient(beta) if hasattr(ref, "coefficient") else (ref if not beta else ZERO)
        if got != c:
            bad.append((alpha, tuple(sorted(beta.items()))))
    return bad
