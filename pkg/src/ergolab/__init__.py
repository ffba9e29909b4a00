"""ergolab: finite-scale constructions from measure-preserving dynamics."""

__version__ = "0.1.0"

from .core import AtomSet, FinitePermutationSystem, Tower  # noqa: F401
from .errors import CapExceeded, DesignError, ErgolabError, Infeasible  # noqa: F401
