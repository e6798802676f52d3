"""Tolerance policy and complex-matrix validation shared by the whole package."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


class DimensionMismatchError(ValueError):
    """Operands live in incompatible ambient spaces."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for rank decisions and subspace comparisons.

    rank_rel: relative singular-value cutoff (scaled by the largest
        singular value), must stay at or above machine epsilon.
    rank_abs: absolute singular-value floor.
    angle_tol: largest principal angle, in radians, at which two
        subspaces still count as equal.
    """

    rank_rel: float = 1e-10
    rank_abs: float = 1e-12
    angle_tol: float = 1e-8

    def __post_init__(self):
        if not (self.rank_rel > 0 and self.rank_abs > 0 and self.angle_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.rank_rel < _EPS:
            raise ValueError("rank_rel below machine epsilon")

    def rank_cut(self, largest_sv: float) -> float:
        return max(self.rank_abs, self.rank_rel * largest_sv)


DEFAULT_TOL = TolerancePolicy()


def as_matrix(entries, rows=None, cols=None) -> np.ndarray:
    """Validate and return a complex matrix (finite entries, optional shape)."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatchError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise DimensionMismatchError(f"expected {cols} cols, got {m.shape[1]}")
    return m


def as_vector(entries, dim=None) -> np.ndarray:
    v = np.asarray(entries, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected length {dim}, got {v.shape[0]}")
    return v
