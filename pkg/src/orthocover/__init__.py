"""Thinnest hyperball-horoball coverings of truncated orthoscheme cells in
hyperbolic 2- and 3-space, with Monte Carlo cross-checks."""
from .covering3d import CoveringCase, density, optimize_case, optimize_real_p, refute_case
from .lobachevsky import lob
from .orthoscheme import ExistenceError, truncated_orthoscheme, volume3

__all__ = ["CoveringCase", "ExistenceError", "density", "lob", "optimize_case",
           "optimize_real_p", "refute_case", "truncated_orthoscheme", "volume3"]
__version__ = "0.1.0"
