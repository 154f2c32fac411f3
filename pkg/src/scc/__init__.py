"""Neural chess engine with grounded, category-specific commentary generation."""

__version__ = "0.1.0"
