"""
Foliation toolkit: leaves with pinched curvature and super-fast distortion in
the hyperbolic and Euclidean planes.
"""

__version__ = "1.0.0"
