"""Exact tools for universal quadratic lattices over real quadratic fields."""

from .errors import QuadlatError
from .lattice import LatticeDesc, make_lattice
from .qfield import FieldCtx, OInt, QElem, make_field

__all__ = ["FieldCtx", "LatticeDesc", "OInt", "QElem", "QuadlatError", "make_field", "make_lattice"]
__version__ = "0.1.0"
