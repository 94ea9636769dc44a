"""Sites, chain layouts and local operator terms embedded into the full space."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionCap
from ..spin import spin_dim

__all__ = ["SpinSite", "ChainLayout", "OperatorTerm", "dimension_cap", "DIM_CAP_ENV"]

DIM_CAP_ENV = "SPAQT_DIM_CAP"
DEFAULT_DIM_CAP = 2 ** 15


def dimension_cap() -> int:
    raw = os.environ.get(DIM_CAP_ENV)
    return int(raw) if raw else DEFAULT_DIM_CAP


@dataclass(frozen=True)
class SpinSite:
    spin: Fraction
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "spin", Fraction(self.spin).limit_denominator(2))
        spin_dim(self.spin)

    @property
    def dim(self) -> int:
        return int(2 * self.spin + 1)

    @classmethod
    def one(cls, name: str = "") -> "SpinSite":
        return cls(Fraction(1), name)

    @classmethod
    def half(cls, name: str = "") -> "SpinSite":
        return cls(Fraction(1, 2), name)


@dataclass(frozen=True, eq=False)
class ChainLayout:
    sites: tuple[SpinSite, ...]

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        if not self.sites:
            raise ValueError("a layout needs at least one site")
        cap = dimension_cap()
        if self.total_dim > cap:
            raise DimensionCap(f"Hilbert space dimension {self.total_dim} exceeds cap {cap} "
                               f"(set {DIM_CAP_ENV} to raise it)")

    def __len__(self):
        return len(self.sites)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.sites)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def index(self, name: str) -> int:
        return next(i for i, s in enumerate(self.sites) if s.name == name)

    @cached_property
    def _digits(self) -> np.ndarray:
        return np.array(np.unravel_index(np.arange(self.total_dim), self.dims)).T

    @cached_property
    def _strides(self) -> np.ndarray:
        d = np.array(self.dims)
        return np.concatenate([np.cumprod(d[::-1])[::-1][1:], [1]]).astype(np.int64)

    def embed(self, support, matrix) -> sp.csr_matrix:
        """Sparse full-space matrix of ``matrix`` acting on ``support`` (any order)."""
        support = list(support)
        sub_dims = [self.dims[s] for s in support]
        M = np.asarray(matrix)
        if M.shape != (int(np.prod(sub_dims)),) * 2:
            raise ValueError(f"matrix shape {M.shape} does not match support dims {sub_dims}")
        digits = self._digits[:, support]
        sub = np.ravel_multi_index(digits.T, sub_dims)
        sub_digits = np.array(np.unravel_index(np.arange(M.shape[0]), sub_dims)).T
        offsets = sub_digits @ self._strides[support]
        b, a = np.nonzero(M)                       # M[b, a]: |a> -> |b>
        rows, cols, vals = [], [], []
        by_sub = [np.flatnonzero(sub == k) for k in range(M.shape[0])]
        for bb, aa in zip(b, a):
            src = by_sub[aa]
            cols.append(src)
            rows.append(src + offsets[bb] - offsets[aa])
            vals.append(np.full(src.shape, M[bb, aa]))
        n = self.total_dim
        if not rows:
            return sp.csr_matrix((n, n), dtype=M.dtype)
        out = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                            shape=(n, n))
        return out.tocsr()

    def product_operator(self, factors: dict[int, np.ndarray]) -> sp.csr_matrix:
        """Tensor product with ``factors[site]`` on the given sites and identity elsewhere."""
        out = None
        for s, d in enumerate(self.dims):
            f = sp.csr_matrix(factors[s]) if s in factors else sp.identity(d, format="csr")
            out = f if out is None else sp.kron(out, f, format="csr")
        return out.tocsr()


@dataclass(frozen=True, eq=False)
class OperatorTerm:
    support: tuple[int, ...]
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError(f"term {self.label!r} is not Hermitian")
        if len(set(self.support)) != len(self.support):
            raise ValueError(f"term {self.label!r} has repeated support sites")
        if np.max(np.abs(m.imag)) == 0:
            m = m.real
        m.setflags(write=False)
        object.__setattr__(self, "support", tuple(int(s) for s in self.support))
        object.__setattr__(self, "matrix", m)

    def embedded(self, layout: ChainLayout) -> sp.csr_matrix:
        if max(self.support) >= len(layout) or min(self.support) < 0:
            raise ValueError(f"term {self.label!r} support {self.support} out of range")
        return layout.embed(self.support, self.matrix)
