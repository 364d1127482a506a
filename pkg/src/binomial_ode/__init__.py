"""Exact verification and classification of entire solutions of binomial ODEs."""
from .scalar import Scalar, Tower, TowerGenerator, UnitSymbol, tower_extend, EMPTY_TOWER
from .exppoly import ExpPoly, Poly, Z, exp_of
from .equation import BinomialEquation, Shape, build_equation, residual, verify, aux_pair, theorem1_branch

__all__ = [
    "Scalar", "Tower", "TowerGenerator", "UnitSymbol", "tower_extend", "EMPTY_TOWER",
    "ExpPoly", "Poly", "Z", "exp_of",
    "BinomialEquation", "Shape", "build_equation", "residual", "verify", "aux_pair", "theorem1_branch",
]
