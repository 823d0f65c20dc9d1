"""Zero-dispersion asymptotics of the Benjamin-Ono equation with rational initial data."""

__version__ = "0.1.0"
