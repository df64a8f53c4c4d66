"""Monte Carlo simulator for RIS-aided physical-layer security."""

__version__ = "0.1.0"
