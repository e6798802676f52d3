"""Seeded random instances: symmetric relations, boundary triples and
standard unitaries.

All draws go through numpy Generators derived from explicit integer
seeds, so identical seeds reproduce identical objects bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import boundary as bnd
from . import extensions as ext
from . import relations as rel
from . import subspaces as sub
from .krein import KreinSpace, doubled, make_krein
from .relations import LinearRelation
from .tolerances import DEFAULT_TOL, TolerancePolicy


class SamplingExhaustedError(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    dim: int
    signature: tuple[int, int]
    defect: int
    require_simple: bool = False
    require_property_p: bool = False

    def __post_init__(self):
        p, q = self.signature
        if p + q != self.dim:
            raise ValueError("signature must sum to dim")
        if not (0 <= self.defect <= self.dim):
            raise ValueError("defect must lie in 0..dim")


def rng_for(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, *path)))


def random_complex(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    q, r = np.linalg.qr(random_complex(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    m = random_complex(rng, n, n)
    return (m + m.conj().T) / 2.0


def random_signature_symmetry(rng: np.random.Generator, p: int, q: int) -> np.ndarray:
    """Random fundamental symmetry with prescribed signature."""
    u = random_unitary(rng, p + q)
    d = np.diag(np.concatenate([np.ones(p), -np.ones(q)])).astype(np.complex128)
    return u @ d @ u.conj().T


def random_space(seed: int, p: int, q: int) -> KreinSpace:
    return make_krein(random_signature_symmetry(rng_for(seed, 0), p, q))


def hyper_maximal_neutral(rng: np.random.Generator, space: KreinSpace,
                          tol: TolerancePolicy = DEFAULT_TOL) -> sub.Subspace:
    """Graph of a random self-adjoint relation: angular form F+ + F- W."""
    dk = doubled(space)
    eig, vecs = np.linalg.eigh(dk.J_hat)
    n = space.dim
    f_minus, f_plus = vecs[:, :n], vecs[:, n:]
    w = random_unitary(rng, n)
    return sub.span(f_plus + f_minus @ w, tol)


def gen_symmetric(spec: InstanceSpec, space: KreinSpace | None = None,
                  tol: TolerancePolicy = DEFAULT_TOL,
                  max_tries: int = 200) -> LinearRelation:
    """Symmetric relation with prescribed equal defects inside a random
    hyper-maximal neutral subspace of the doubled space."""
    p, q = spec.signature
    if space is None:
        space = random_space(spec.seed, p, q)
    n, d = spec.dim, spec.defect
    if spec.require_property_p and 2 * (n - d) < n:
        # dom T + ran T can reach at most 2 dim T dimensions
        raise SamplingExhaustedError(
            f"property (P) is impossible for defect {d} in dimension {n}")
    grid = bnd.DEFAULT_GRID
    for attempt in range(max_tries):
        rng = rng_for(spec.seed, 1, attempt)
        m = hyper_maximal_neutral(rng, space, tol)
        coeff = random_complex(rng, n, n - d)
        t_frame = m.frame @ np.linalg.qr(coeff)[0]
        t = LinearRelation(space, space, sub.span(t_frame, tol))
        if t.dim != n - d:
            continue
        dplus, dminus = ext.defect_numbers(t, tol)
        if (dplus, dminus) != (d, d):
            continue
        if spec.require_property_p and not ext.has_property_p(t, tol):
            continue
        if spec.require_simple and not ext.simple_check(t, grid, tol):
            continue
        return t
    raise SamplingExhaustedError(f"no admissible instance after {max_tries} tries")


def sample_witness(t: LinearRelation, seed: int,
                   tol: TolerancePolicy = DEFAULT_TOL) -> ext.NWitness:
    """Draw N from the von Neumann parametrization run backwards.

    A random Euclidean unitary between the defect subspaces closes the
    Cayley transform of JT to a unitary; pulling back gives a Hilbert
    self-adjoint extension, then T0 = J T0_hilbert and N = T0 ∩ T-perp.
    """
    rng = rng_for(seed, 2)
    space = t.src
    n = space.dim
    frak_t = rel.hilbertize(t, tol)
    ni = ext.defect_subspace(t, 1j, tol)
    nmi = ext.defect_subspace(t, -1j, tol)
    d = ni.dim
    e, dd = frak_t.blocks()
    if frak_t.dim:
        p_cols = dd + 1j * e
        c_t = (dd - 1j * e) @ np.linalg.pinv(p_cols)
    else:
        c_t = np.zeros((n, n), dtype=np.complex128)
    u_defect = random_unitary(rng, d)
    c_full = c_t + nmi.frame @ u_defect @ ni.frame.conj().T
    frak_t0 = rel.inverse_cayley(c_full, tol)
    e0, d0 = frak_t0.blocks()
    t0 = LinearRelation(space, space, sub.span(np.vstack([e0, space.J @ d0]), tol))
    n_rel = ext.reduce(t, t0, tol)
    return ext.NWitness(n_rel, t, t0)


def gen_triple(t: LinearRelation, seed: int,
               tol: TolerancePolicy = DEFAULT_TOL) -> bnd.BoundaryTriple:
    """Boundary triple from a sampled witness via the defect pairing.

    Gamma1 reads off N-coordinates through a random unitary of the
    boundary space and Gamma0 pairs the J_hat(N)-component against them
    with the indefinite inner product, which makes the Green identity
    exact by construction.
    """
    dplus, dminus = ext.defect_numbers(t, tol)
    if dplus != dminus:
        raise ValueError("unequal defect numbers")
    d = dplus
    if d == 0:
        raise ValueError("self-adjoint relation has a trivial boundary space")
    witness = sample_witness(t, seed, tol)
    rng = rng_for(seed, 3)
    space = t.src
    jhat = doubled(space).J_hat
    ft = t.graph.frame
    fn = witness.N.graph.frame
    fjn = jhat @ fn
    basis = np.hstack([ft, fn, fjn])
    w = random_unitary(rng, d)
    nt = t.dim
    gamma = np.zeros((2 * d, nt + 2 * d), dtype=np.complex128)
    gamma[:d, nt + d :] = -1j * w
    gamma[d:, nt : nt + d] = w
    return bnd.validate_triple(t, gamma, basis, tol)


def gen_standard_unitary(seed: int, src: KreinSpace, tgt: KreinSpace,
                         max_tries: int = 50) -> np.ndarray:
    """Standard unitary via the Krein-space Cayley transform of a random
    J-skew-adjoint matrix, composed with a signature-matching isometry."""
    if src.signature != tgt.signature:
        raise ValueError("signatures must match for a standard unitary to exist")
    n = src.dim
    for attempt in range(max_tries):
        rng = rng_for(seed, 4, attempt)
        s = random_complex(rng, n, n)
        a = src.J @ ((s - s.conj().T) / 2.0)
        if np.linalg.cond(np.eye(n) + a) > 1e8:
            continue
        c = (np.eye(n) - a) @ np.linalg.inv(np.eye(n) + a)
        _, vec_s = np.linalg.eigh(src.J)
        _, vec_t = np.linalg.eigh(tgt.J)
        pi = vec_t @ vec_s.conj().T
        u = pi @ c
        res = np.abs(u.conj().T @ tgt.J @ u - src.J).max()
        if res < 1e-10 * (1 + np.abs(u).max() ** 2):
            return u
    raise SamplingExhaustedError("could not draw a standard unitary")


def planted_similar_triple(triple: bnd.BoundaryTriple, u: np.ndarray,
                           tgt: KreinSpace,
                           tol: TolerancePolicy = DEFAULT_TOL) -> bnd.BoundaryTriple:
    """The triple Gamma' = Gamma U~^{-1} for T' = U T U^{-1}."""
    n_t = tgt.dim
    ut = np.zeros((2 * n_t, 2 * triple.space.dim), dtype=np.complex128)
    ut[:n_t, : triple.space.dim] = u
    ut[n_t:, triple.space.dim :] = u
    t_prime = LinearRelation(tgt, tgt, sub.image(ut, triple.parent.graph, tol))
    basis = ut @ triple.basis
    return bnd.validate_triple(t_prime, triple.gamma, basis, tol)


def scaled_triple(triple: bnd.BoundaryTriple, kappa: float,
                  tol: TolerancePolicy = DEFAULT_TOL) -> bnd.BoundaryTriple:
    """The diag(1/kappa, kappa)-rescaled triple (real kappa keeps Green)."""
    d = triple.boundary_dim
    x = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    x[:d, :d] = np.eye(d) / kappa
    x[d:, d:] = np.eye(d) * kappa
    return bnd.transform(triple, x, tol)
