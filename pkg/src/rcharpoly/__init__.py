"""r-characteristic polynomials, pavings and barrier bounds."""

__version__ = "0.1.0"
