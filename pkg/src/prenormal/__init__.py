"""Finite categories with a class of trivial objects: kernels, cokernels and factorisation laws."""

from . import backends  # noqa: F401  (registers the concrete backends)
from .core import (Catalog, Mor, Obj, compose, identity, is_epi, is_iso, is_mono, is_trivial_map,
                   pullback)

__all__ = ["Catalog", "Mor", "Obj", "compose", "identity", "is_epi", "is_iso", "is_mono",
           "is_trivial_map", "pullback"]
