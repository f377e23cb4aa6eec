"""Convex geometries of circles on a plane: closure systems, disc hulls,
two-circle triangle configurations and randomized verification campaigns."""

__version__ = "0.1.0"
