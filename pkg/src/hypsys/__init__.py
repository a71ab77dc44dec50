"""Certified computations with isometries of hyperbolic space over totally real fields."""

__version__ = "0.1.0"
