"""Hyperbolic [p,p,p,3] tilings and a census of homogeneous maps on closed surfaces."""

__version__ = "0.1.0"
