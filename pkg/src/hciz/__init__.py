"""Large-N expansion of the Harish-Chandra-Itzykson-Zuber integral in exact arithmetic."""

__version__ = "0.1.0"
