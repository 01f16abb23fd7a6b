"""Certified computations around Gronwall's ratio G(n) = sigma(n) / (n log log n)."""

__version__ = "0.1.0"
