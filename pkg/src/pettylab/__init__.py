"""Numerical convex geometry on matrix spaces.

Lp projection and centroid operators on M[n,m], their volumes and the
isoperimetric inequalities relating them, with seeded verification suites.
"""
__version__ = "0.1.0"

from ._accel import backend  # noqa: E402,F401
