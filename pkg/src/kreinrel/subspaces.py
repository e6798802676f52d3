"""Tolerance-aware complex subspace arithmetic.

Every subspace is stored as an orthonormal column frame obtained from an
SVD; the trivial subspace is a zero-column frame.  All comparisons are
quantitative: equality and containment reduce to principal angles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tolerances import DEFAULT_TOL, DimensionMismatchError, TolerancePolicy, as_matrix


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^ambient_dim held as an orthonormal frame."""

    ambient_dim: int
    frame: np.ndarray = field(repr=False)

    def __post_init__(self):
        f = as_matrix(self.frame, rows=self.ambient_dim)
        object.__setattr__(self, "frame", f)
        if f.shape[1] > self.ambient_dim:
            raise ValueError("frame has more columns than the ambient dimension")
        if f.shape[1]:
            gram = f.conj().T @ f
            if np.abs(gram - np.eye(f.shape[1])).max() > 1e-8:
                raise ValueError("frame columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def coords(self, vectors: np.ndarray) -> np.ndarray:
        """Frame coordinates of ambient vectors (columns)."""
        return self.frame.conj().T @ vectors

    def contains_vector(self, v, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            return True
        r = v - self.frame @ (self.frame.conj().T @ v)
        return np.linalg.norm(r) <= tol.angle_tol * (1.0 + nrm)


def _orth(columns: np.ndarray, tol: TolerancePolicy) -> np.ndarray:
    """Orthonormal basis of the column span, rank cut on singular values."""
    if columns.size == 0:
        return np.zeros((columns.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s.size == 0:
        return np.zeros((columns.shape[0], 0), dtype=np.complex128)
    rank = int(np.sum(s > tol.rank_cut(s[0])))
    return u[:, :rank]


def span(vectors, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """Linear hull of the given ambient vectors (list or column matrix)."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        cols = as_matrix(vectors)
    else:
        vecs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
        if not vecs:
            raise ValueError("span of an empty list needs an explicit ambient dim; use trivial()")
        n = vecs[0].shape[0]
        for v in vecs:
            if v.shape[0] != n:
                raise DimensionMismatchError("vectors of mixed ambient dimension")
        cols = np.column_stack(vecs)
    return Subspace(cols.shape[0], _orth(cols, tol))


def trivial(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))


def full(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, np.eye(ambient_dim, dtype=np.complex128))


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"ambient dims differ: {a.ambient_dim} vs {b.ambient_dim}")


def complement(a: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """Euclidean orthocomplement."""
    n, r = a.ambient_dim, a.dim
    if r == 0:
        return full(n)
    u, _, _ = np.linalg.svd(a.frame, full_matrices=True)
    return Subspace(n, u[:, r:])


def sum_(a: Subspace, b: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    _check_same_ambient(a, b)
    return Subspace(a.ambient_dim, _orth(np.hstack([a.frame, b.frame]), tol))


def intersect(a: Subspace, b: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """A ∩ B via the kernel of the stacked-complement map.

    x lies in the intersection iff both complement projections kill it;
    this avoids the tolerance amplification of the double-complement route.
    """
    _check_same_ambient(a, b)
    ca, cb = complement(a, tol), complement(b, tol)
    stacked = np.vstack([ca.frame.conj().T, cb.frame.conj().T])
    return kernel(stacked, a.ambient_dim, tol)


def kernel(m: np.ndarray, ambient_dim=None, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """Null space of a matrix as a Subspace of its column ambient."""
    m = as_matrix(m) if m.size else np.asarray(m, dtype=np.complex128)
    n = m.shape[1] if m.ndim == 2 else (ambient_dim or 0)
    if ambient_dim is not None and n != ambient_dim:
        raise DimensionMismatchError("kernel ambient mismatch")
    if m.size == 0 or m.shape[0] == 0:
        return full(n)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > tol.rank_cut(s[0]))) if s.size else 0
    return Subspace(n, vh[rank:].conj().T)


def image(m: np.ndarray, a: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """Image M(A) of a subspace under a linear map."""
    m = as_matrix(m, cols=a.ambient_dim)
    return Subspace(m.shape[0], _orth(m @ a.frame, tol))


def preimage(m: np.ndarray, a: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """Preimage {x : Mx in A}; always contains ker M."""
    m = as_matrix(m, rows=a.ambient_dim)
    ca = complement(a, tol)
    return kernel(ca.frame.conj().T @ m, m.shape[1], tol)


def product(a: Subspace, b: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """A x B inside C^(dimA_ambient + dimB_ambient)."""
    n1, n2 = a.ambient_dim, b.ambient_dim
    f = np.zeros((n1 + n2, a.dim + b.dim), dtype=np.complex128)
    f[:n1, : a.dim] = a.frame
    f[n1:, a.dim :] = b.frame
    return Subspace(n1 + n2, f)


def distance(a: Subspace, b: Subspace) -> float:
    """Largest principal angle when dims match, +inf sentinel otherwise.

    Computed from the gap metric ||P_A - P_B||_2 = sin(theta_max), which
    stays accurate for very small angles (unlike arccos of a cross-Gram
    singular value).
    """
    _check_same_ambient(a, b)
    if a.dim != b.dim:
        return np.inf
    if a.dim == 0:
        return 0.0
    gap = np.linalg.norm(a.projector() - b.projector(), ord=2)
    return float(np.arcsin(min(1.0, gap)))


def equal(a: Subspace, b: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    _check_same_ambient(a, b)
    return a.dim == b.dim and distance(a, b) <= tol.angle_tol


def contains(a: Subspace, b: Subspace, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Whether B is a subset of A, via distance(B, A ∩ B)."""
    _check_same_ambient(a, b)
    return distance(b, intersect(a, b, tol)) <= tol.angle_tol
