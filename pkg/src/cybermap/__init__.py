"""Space-filling-curve coordinate systems and maps for network data."""

__version__ = "0.1.0"
