"""Symmetric-matrix kernels built on a single eigendecomposition.

Every routine here factors through ``scipy.linalg.eigh``: square roots,
pseudo-inverses, numerical rank and SPD solves all read the same cached
spectrum, so clipped eigenvalues stay exactly zero downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from causal_reg.errors import InvalidInput, NotPositiveSemidefinite, SingularSystem

DEFAULT_CLIP_TOL = 1e-8
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """A real symmetric matrix with a lazily cached descending eigendecomposition."""

    entries: NDArray[np.float64]

    @classmethod
    def from_array(cls, a: ArrayLike) -> SymMatrix:
        """Validate *a* and symmetrize it as (A + Aᵀ)/2."""
        if isinstance(a, SymMatrix):
            return a
        arr = np.atleast_2d(np.asarray(a, dtype=np.float64))
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInput(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("matrix has non-finite entries")
        return cls((arr + arr.T) / 2.0)

    @classmethod
    def from_eigen(cls, w: NDArray[np.float64], v: NDArray[np.float64]) -> SymMatrix:
        """Assemble V·diag(w)·Vᵀ and keep (w, V) as its spectrum."""
        order = np.argsort(w, kind="stable")[::-1]
        w, v = w[order], v[:, order]
        entries = (v * w) @ v.T
        obj = cls((entries + entries.T) / 2.0)
        obj.__dict__["eigen"] = (w, v)
        return obj

    @classmethod
    def zeros(cls, dim: int) -> SymMatrix:
        return cls.from_eigen(np.zeros(dim), np.eye(dim))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def eigen(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        w, v = linalg.eigh(self.entries)
        return w[::-1].copy(), v[:, ::-1].copy()

    def __array__(self, dtype=None, copy=None) -> NDArray:
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __repr__(self) -> str:
        return f"SymMatrix(dim={self.dim})"


def as_sym(a: SymMatrix | ArrayLike) -> SymMatrix:
    return SymMatrix.from_array(a)


def default_rank_tol(dim: int) -> float:
    """Relative numerical-rank tolerance: dim · machine epsilon."""
    return max(dim, 1) * _EPS


def sym_eigen(a: SymMatrix | ArrayLike) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix."""
    w, v = as_sym(a).eigen
    return w.copy(), v.copy()


def _clipped_spectrum(
    s: SymMatrix, clip_tol: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64], int]:
    w, v = s.eigen
    if w.size == 0:
        return w, v, 0
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.any(w < -clip_tol * scale):
        raise NotPositiveSemidefinite(
            f"eigenvalue {float(w.min()):.3e} below -{clip_tol:g}·{scale:.3e}"
        )
    negative = w < 0
    return np.where(negative, 0.0, w), v, int(np.count_nonzero(negative))


def clip_psd(
    a: SymMatrix | ArrayLike, clip_tol: float = DEFAULT_CLIP_TOL,
) -> tuple[SymMatrix, int]:
    """Zero the negative eigenvalues of *a*; return the result and how many were zeroed.

    Raises NotPositiveSemidefinite if an eigenvalue lies below -clip_tol·max(1, |w|max).
    A matrix with nothing to clip is returned as-is.
    """
    s = as_sym(a)
    w, v, n_clipped = _clipped_spectrum(s, clip_tol)
    if n_clipped == 0:
        return s, 0
    return SymMatrix.from_eigen(w, v), n_clipped


def _cutoff(w: NDArray[np.float64], rank_tol: float | None) -> float:
    if w.size == 0:
        return 0.0
    tol = default_rank_tol(w.size) if rank_tol is None else rank_tol
    return tol * max(float(w.max()), 0.0)


def psd_sqrt(
    a: SymMatrix | ArrayLike,
    clip_tol: float = DEFAULT_CLIP_TOL,
    rank_tol: float | None = None,
) -> SymMatrix:
    """Symmetric PSD square root S with S·S == clip(a) and range(S) == range(clip(a)).

    Eigenvalues at or below rank_tol · w_max are zeroed before the root is taken,
    so roundoff in the null space does not turn into singular values near √eps.
    """
    w, v, _ = _clipped_spectrum(as_sym(a), clip_tol)
    w = np.where(w > _cutoff(w, rank_tol), w, 0.0)
    return SymMatrix.from_eigen(np.sqrt(w), v)


def numerical_rank(a: SymMatrix | ArrayLike, rank_tol: float | None = None) -> int:
    """Count of eigenvalues above rank_tol · w_max."""
    w, _ = as_sym(a).eigen
    cut = _cutoff(w, rank_tol)
    return int(np.count_nonzero((w > cut) & (w > 0)))


def pinv_psd(
    a: SymMatrix | ArrayLike,
    rank_tol: float | None = None,
    clip_tol: float = DEFAULT_CLIP_TOL,
) -> SymMatrix:
    """Moore–Penrose pseudo-inverse of a (clipped) PSD matrix."""
    w, v, _ = _clipped_spectrum(as_sym(a), clip_tol)
    cut = _cutoff(w, rank_tol)
    keep = (w > cut) & (w > 0)
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / w[keep]
    return SymMatrix.from_eigen(inv, v)


def range_projector(
    a: SymMatrix | ArrayLike,
    rank_tol: float | None = None,
    clip_tol: float = DEFAULT_CLIP_TOL,
) -> SymMatrix:
    """Orthogonal projection onto range(clip(a)), i.e. A·A^g."""
    w, v, _ = _clipped_spectrum(as_sym(a), clip_tol)
    cut = _cutoff(w, rank_tol)
    return SymMatrix.from_eigen(((w > cut) & (w > 0)).astype(np.float64), v)


def solve_spd(
    a: SymMatrix | ArrayLike,
    b: ArrayLike,
    rank_tol: float | None = None,
) -> NDArray[np.float64]:
    """Solve a·x = b for symmetric positive definite *a*.

    Raises SingularSystem when the smallest eigenvalue is at or below rank_tol · w_max.
    """
    s = as_sym(a)
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.shape != (s.dim,):
        raise InvalidInput(f"right-hand side has shape {rhs.shape}, expected ({s.dim},)")
    if not np.all(np.isfinite(rhs)):
        raise InvalidInput("right-hand side has non-finite entries")
    w, v = s.eigen
    if w.size and (w[-1] <= _cutoff(w, rank_tol) or w[-1] <= 0):
        raise SingularSystem(f"min eigenvalue {float(w[-1]):.3e} at tolerance")
    return v @ ((v.T @ rhs) / w)
