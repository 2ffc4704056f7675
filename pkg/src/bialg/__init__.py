"""Exact Lie-bialgebra calculus on inhomogeneous orthogonal algebras."""
from .exterior import MultiVector, contract, pairing, split2, split3, wedge
from .lie import LieAlgebra, Metric, bracket, build_lie_algebra, semidirect_product
from .poincare import make_inhomogeneous, omega_invariant, poincare
from .schouten import gcybe_check, schouten_bracket

__all__ = [
    "LieAlgebra", "Metric", "MultiVector", "bracket", "build_lie_algebra", "contract",
    "gcybe_check", "make_inhomogeneous", "omega_invariant", "pairing", "poincare",
    "schouten_bracket", "semidirect_product", "split2", "split3", "wedge",
]
__version__ = "0.1.0"
