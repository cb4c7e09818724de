"""Groups acting on spherically symmetric rooted trees, their level quotients,
and twisted conjugacy (Reidemeister) classes of tree-induced automorphisms."""

__version__ = "0.1.0"
