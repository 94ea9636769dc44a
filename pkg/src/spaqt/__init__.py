"""Symmetry-protected adiabatic gates: groups, projective representations,
twisted channels, symmetric MPS tensors, exact chain dynamics and
single-qubit synthesis."""

__version__ = "0.1.0"

from . import errors, gatechan, groups, mps, projrep, spin, symmetry, universality  # noqa: E402
from . import chainsim  # noqa: E402

__all__ = ["errors", "gatechan", "groups", "mps", "projrep", "spin", "symmetry", "universality",
           "chainsim", "__version__"]
