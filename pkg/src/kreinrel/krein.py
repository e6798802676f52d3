"""Krein/Pontryagin space structures.

A Krein space here is C^n carrying a fundamental symmetry J (Hermitian
involution); the indefinite inner product is [f, g] = <f, J g> with the
Euclidean product conjugate-linear in the first factor.  The doubled space
pairs H^2 with the block symmetry built from -iJ / iJ, under which graphs
of relations acquire their indefinite geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import subspaces as sub
from .subspaces import Subspace
from .tolerances import DEFAULT_TOL, DimensionMismatchError, TolerancePolicy, as_matrix

NEUTRAL_TOL = 1e-9


class NotAFundamentalSymmetryError(ValueError):
    """J fails to be a Hermitian involution."""


@dataclass(frozen=True)
class KreinSpace:
    dim: int
    J: np.ndarray = field(repr=False)
    signature: tuple[int, int]

    @property
    def neg_index(self) -> int:
        # Pontryagin convention: the finite "negative index" is min(p, q).
        return min(self.signature)

    @property
    def is_hilbert(self) -> bool:
        return self.signature[1] == 0

    def same_as(self, other: "KreinSpace", tol: TolerancePolicy = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and np.allclose(self.J, other.J, atol=1e-12)


def make_krein(J) -> KreinSpace:
    """Build a KreinSpace from a fundamental symmetry, validating J=J^H, J^2=I."""
    J = as_matrix(J)
    n = J.shape[0]
    if J.shape[1] != n:
        raise NotAFundamentalSymmetryError("J must be square")
    if not np.allclose(J, J.conj().T, atol=1e-10 * (1 + np.linalg.norm(J))):
        raise NotAFundamentalSymmetryError("J is not Hermitian")
    if not np.allclose(J @ J, np.eye(n), atol=1e-10 * (1 + np.linalg.norm(J)) ** 2):
        raise NotAFundamentalSymmetryError("J is not an involution")
    eig = np.linalg.eigvalsh(J)
    p = int(np.sum(eig > 0))
    q = n - p
    return KreinSpace(n, J, (p, q))


def hilbert_space(dim: int) -> KreinSpace:
    return KreinSpace(dim, np.eye(dim, dtype=np.complex128), (dim, 0))


@dataclass(frozen=True)
class DoubledKrein:
    base: KreinSpace
    J_hat: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.base.dim

    @property
    def krein(self) -> KreinSpace:
        n = self.base.dim
        return KreinSpace(2 * n, self.J_hat, (n, n))


def doubled(space: KreinSpace) -> DoubledKrein:
    """The doubled space (H^2, J_hat) with J_hat = [[0, -iJ], [iJ, 0]]."""
    n = space.dim
    jh = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    jh[:n, n:] = -1j * space.J
    jh[n:, :n] = 1j * space.J
    return DoubledKrein(space, jh)


def boundary_doubled(boundary_dim: int) -> DoubledKrein:
    """The boundary-side doubled space over a Hilbert L (J = identity)."""
    return doubled(hilbert_space(boundary_dim))


def indefinite_inner(space: KreinSpace, f, g) -> complex:
    """[f, g] = <f, J g>, conjugate-linear in the first factor."""
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    g = np.asarray(g, dtype=np.complex128).reshape(-1)
    if f.shape[0] != space.dim or g.shape[0] != space.dim:
        raise DimensionMismatchError("vector does not live in this space")
    return complex(f.conj() @ (space.J @ g))


def indefinite_gram(space: KreinSpace, a: Subspace, b: Subspace) -> np.ndarray:
    """Gram matrix [a_k, b_l] over the two frames."""
    if a.ambient_dim != space.dim or b.ambient_dim != space.dim:
        raise DimensionMismatchError("subspace does not live in this space")
    return a.frame.conj().T @ space.J @ b.frame


def ortho_companion(space: KreinSpace, a: Subspace,
                    tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """The [.,.]-orthogonal companion: Euclidean complement of J(A)."""
    if a.ambient_dim != space.dim:
        raise DimensionMismatchError("subspace does not live in this space")
    return sub.complement(sub.image(space.J, a, tol), tol)


def is_neutral(space: KreinSpace, a: Subspace) -> bool:
    g = indefinite_gram(space, a, a)
    if g.size == 0:
        return True
    return float(np.abs(g).max()) <= NEUTRAL_TOL * (1.0 + np.linalg.norm(a.frame))


def classify(space: KreinSpace, a: Subspace) -> str:
    """Sign class of [.,.] restricted to A.

    Returns one of 'positive', 'negative', 'neutral', 'indefinite',
    'mixed'; 'mixed' covers the semi-definite cases (a one-signed part
    plus a nontrivial isotropic part).
    """
    g = indefinite_gram(space, a, a)
    if a.dim == 0 or is_neutral(space, a):
        return "neutral"
    eig = np.linalg.eigvalsh((g + g.conj().T) / 2.0)
    cut = NEUTRAL_TOL * (1.0 + float(np.abs(eig).max()))
    npos = int(np.sum(eig > cut))
    nneg = int(np.sum(eig < -cut))
    nzero = a.dim - npos - nneg
    if npos and nneg:
        return "indefinite"
    if nzero:
        return "mixed"
    return "positive" if npos else "negative"


def neutrality_rank(space: KreinSpace, a: Subspace) -> dict:
    """Neutrality flags by the finite-dimensional criterion.

    neutral: the Gram vanishes; maximal: neutral of dim min(p, q);
    hyper_maximal: neutral of dim p = q (forces a balanced signature).
    """
    p, q = space.signature
    neutral = is_neutral(space, a)
    return {
        "neutral": neutral,
        "maximal": neutral and a.dim == min(p, q),
        "hyper_maximal": neutral and p == q and a.dim == p,
    }
