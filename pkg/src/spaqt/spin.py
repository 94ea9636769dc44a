"""Angular-momentum matrices and rotations for spin 1/2 and spin 1."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import AxisNotUnit

__all__ = ["spin_operators", "spin_dim", "axis_operator", "rotation", "pi_rotation", "unit"]

AXES = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
    "u": np.array([1.0, 1.0, 0.0]) / np.sqrt(2),
    "v": np.array([1.0, -1.0, 0.0]) / np.sqrt(2),
    "mu": np.array([1.0, 0.0, 1.0]) / np.sqrt(2),
    "nu": np.array([1.0, 0.0, -1.0]) / np.sqrt(2),
}


def unit(axis, tol: float = 1e-9) -> np.ndarray:
    """Resolve an axis name or 3-vector; the vector must already be normalised."""
    if isinstance(axis, str):
        try:
            return AXES[axis].copy()
        except KeyError:
            raise AxisNotUnit(f"unknown axis name {axis!r}") from None
    n = np.asarray(axis, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1) > tol:
        raise AxisNotUnit(f"axis {n} has norm {np.linalg.norm(n):.6g}")
    return n


def spin_dim(spin) -> int:
    s = Fraction(spin).limit_denominator(2)
    if s not in (Fraction(1, 2), Fraction(1)):
        raise ValueError(f"spin must be 1/2 or 1, got {spin}")
    return int(2 * s + 1)


@lru_cache(maxsize=None)
def _ops(d: int):
    s = (d - 1) / 2
    m = s - np.arange(d)                      # +s ... -s
    sp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        sp[k - 1, k] = np.sqrt(s * (s + 1) - m[k] * (m[k] + 1))
    sx = (sp + sp.conj().T) / 2
    sy = (sp - sp.conj().T) / 2j
    sz = np.diag(m).astype(complex)
    for a in (sx, sy, sz):
        a.setflags(write=False)
    return sx, sy, sz


def spin_operators(spin) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Sx, Sy, Sz) in the Sz eigenbasis ordered +s, ..., -s."""
    return _ops(spin_dim(spin))


def axis_operator(spin, axis) -> np.ndarray:
    n = unit(axis)
    return sum(c * S for c, S in zip(n, spin_operators(spin)))


def rotation(spin, axis, angle: float) -> np.ndarray:
    """exp(i angle n.S)."""
    return expm(1j * angle * axis_operator(spin, axis))


def pi_rotation(spin, axis) -> np.ndarray:
    return rotation(spin, axis, np.pi)
