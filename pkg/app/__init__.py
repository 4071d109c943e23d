"""Tax-efficient supply chain equilibrium engine."""
__version__ = "1.0.0"
