"""Boundary triples for the adjoint of a symmetric relation.

The boundary map is stored as a matrix acting on coordinates of an
explicit basis of T+, with the first block of rows feeding the abstract
Green identity's primary side.  Weyl values are relations in the
boundary space first and matrices only when single-valued and
everywhere defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import extensions as ext
from . import relations as rel
from . import subspaces as sub
from .krein import KreinSpace, boundary_doubled, doubled, hilbert_space
from .relations import LinearRelation
from .subspaces import Subspace
from .tolerances import DEFAULT_TOL, TolerancePolicy, as_matrix

DEFAULT_GRID = (1j, -1j, 2j, -2j, 1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j,
                0.5 + 1.5j, 0.5 - 1.5j)


class TripleValidationError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryTriple:
    parent: LinearRelation
    tplus: LinearRelation
    boundary_dim: int
    gamma: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)
    basis_pinv: np.ndarray = field(repr=False)
    t0: LinearRelation = field(repr=False)
    t1: LinearRelation = field(repr=False)
    n_rel: LinearRelation = field(repr=False)
    ft: np.ndarray = field(repr=False)
    fn: np.ndarray = field(repr=False)
    fjn: np.ndarray = field(repr=False)
    fjt: np.ndarray = field(repr=False)
    g0inv: np.ndarray = field(repr=False)
    g1inv: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)

    @property
    def space(self) -> KreinSpace:
        return self.parent.src

    @property
    def boundary_space(self) -> KreinSpace:
        return hilbert_space(self.boundary_dim)

    @property
    def gamma0(self) -> np.ndarray:
        return self.gamma[: self.boundary_dim, :]

    @property
    def gamma1(self) -> np.ndarray:
        return self.gamma[self.boundary_dim :, :]

    def coords(self, vectors: np.ndarray) -> np.ndarray:
        """Basis coordinates of columns that lie in T+."""
        x = self.basis_pinv @ vectors
        if np.linalg.norm(self.basis @ x - vectors) > 1e-7 * (1 + np.linalg.norm(vectors)):
            raise ValueError("vectors are not inside the adjoint's graph")
        return x

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        """Boundary values (Gamma0 stacked over Gamma1) of T+ columns."""
        return self.gamma @ self.coords(vectors)


@dataclass(frozen=True)
class WeylValue:
    z: complex
    relation_in_L: LinearRelation
    operator_form: np.ndarray | None


@dataclass(frozen=True)
class InverseBoundaryData:
    g0_inv: np.ndarray
    g1_inv: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class IsometricBoundaryPair:
    boundary_dim: int
    gamma_rel: LinearRelation
    a_star: LinearRelation
    kernel: LinearRelation


def green_residual(space: KreinSpace, basis: np.ndarray, gamma: np.ndarray) -> float:
    """Max-abs defect of the Green identity over the stored basis."""
    jhat = doubled(space).J_hat
    jo = boundary_doubled(gamma.shape[0] // 2).J_hat
    lhs = basis.conj().T @ jhat @ basis
    rhs = gamma.conj().T @ jo @ gamma
    return float(np.abs(lhs - rhs).max()) if lhs.size else 0.0


def validate_triple(t: LinearRelation, gamma, basis=None,
                    tol: TolerancePolicy = DEFAULT_TOL) -> BoundaryTriple:
    """Check a candidate boundary map and cache the induced structure.

    Surjectivity and the Green identity are verified directly; the two
    kernels are recomputed and asserted self-adjoint, disjoint down to T
    and transversal up to T+.
    """
    gamma = as_matrix(gamma)
    if gamma.shape[0] % 2:
        raise TripleValidationError("gamma must have an even number of rows")
    d = gamma.shape[0] // 2
    if not rel.is_symmetric(t, tol):
        raise TripleValidationError("parent relation is not symmetric")
    tplus = rel.adjoint(t, "krein", tol)
    if basis is None:
        basis = tplus.graph.frame
    basis = as_matrix(basis, rows=2 * t.src.dim)
    m = basis.shape[1]
    if gamma.shape[1] != m:
        raise TripleValidationError("gamma columns must match the basis size")
    if np.linalg.matrix_rank(basis) < m or not sub.equal(
            sub.span(basis, tol), tplus.graph, tol):
        raise TripleValidationError("basis does not span the adjoint's graph")
    if np.linalg.matrix_rank(gamma) < 2 * d:
        raise TripleValidationError("boundary map is not surjective")
    res = green_residual(t.src, basis, gamma)
    scale = 1e-10 * (1.0 + np.linalg.norm(gamma, 2)) * (1.0 + np.linalg.norm(basis, 2) ** 2)
    if res > scale:
        raise TripleValidationError(f"Green identity violated: residual {res:.3e}")

    basis_pinv = np.linalg.pinv(basis)
    space = t.src

    def kernel_of(rows: np.ndarray) -> LinearRelation:
        k = sub.kernel(rows, m, tol)
        cols = basis @ k.frame
        return LinearRelation(space, space, sub.span(cols, tol)
                              if cols.size else sub.trivial(2 * space.dim))

    t0 = kernel_of(gamma[:d, :])
    t1 = kernel_of(gamma[d:, :])
    for name, tk in (("ker Gamma0", t0), ("ker Gamma1", t1)):
        if not rel.is_selfadjoint(tk, tol):
            raise TripleValidationError(f"{name} is not self-adjoint")
    if not sub.equal(sub.intersect(t0.graph, t1.graph, tol), t.graph, tol):
        raise TripleValidationError("kernels are not disjoint down to T")
    if not sub.equal(sub.sum_(t0.graph, t1.graph, tol), tplus.graph, tol):
        raise TripleValidationError("kernels are not transversal")

    n_rel = ext.reduce(t, t0, tol)
    jhat = doubled(space).J_hat
    ft = t.graph.frame
    fn = n_rel.graph.frame
    fjn = jhat @ fn
    fjt = jhat @ ft

    a0 = gamma[:d, :] @ (basis_pinv @ fjn)
    a1 = gamma[d:, :] @ (basis_pinv @ fn)
    if (d and (np.linalg.matrix_rank(a0) < d or np.linalg.matrix_rank(a1) < d)):
        raise TripleValidationError("restricted boundary block is singular")
    g0inv = fjn @ np.linalg.inv(a0) if d else np.zeros((2 * space.dim, 0))
    g1inv = fn @ np.linalg.inv(a1) if d else np.zeros((2 * space.dim, 0))
    beta = gamma[d:, :] @ (basis_pinv @ g0inv) if d else np.zeros((0, 0))
    if d and np.linalg.norm(beta - beta.conj().T) > 1e-8 * (1 + np.linalg.norm(beta)):
        raise TripleValidationError("beta came out non-Hermitian")

    return BoundaryTriple(parent=t, tplus=tplus, boundary_dim=d, gamma=gamma,
                          basis=basis, basis_pinv=basis_pinv, t0=t0, t1=t1,
                          n_rel=n_rel, ft=ft, fn=fn, fjn=fjn, fjt=fjt,
                          g0inv=g0inv, g1inv=g1inv, beta=beta)


def inverse_boundary(triple: BoundaryTriple,
                     tol: TolerancePolicy = DEFAULT_TOL) -> InverseBoundaryData:
    return InverseBoundaryData(triple.g0inv, triple.g1inv, triple.beta)


# ---------------------------------------------------------------------------
# Weyl family and gamma-field


def weyl(triple: BoundaryTriple, z: complex,
         tol: TolerancePolicy = DEFAULT_TOL) -> WeylValue:
    """M(z) as a relation in L, with its matrix form when it is one."""
    d = triple.boundary_dim
    nz = rel.graph_eigenspace(triple.tplus, z, tol)
    lspace = triple.boundary_space
    if nz.dim == 0:
        return WeylValue(z, rel.zero_relation(lspace, lspace), None)
    bvals = triple.apply(nz.graph.frame)
    graph = sub.span(bvals, tol)
    relation = LinearRelation(lspace, lspace, graph)
    operator_form = None
    l0, l1 = bvals[:d, :], bvals[d:, :]
    if np.linalg.matrix_rank(l0) == d and rel.is_operator(relation, tol):
        operator_form = l1 @ np.linalg.pinv(l0)
    return WeylValue(z, relation, operator_form)


def gamma_field_hat(triple: BoundaryTriple, z: complex,
                    tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """The full defect-graph solver (Gamma0 restricted to zI)^{-1}: L -> K."""
    d = triple.boundary_dim
    nz = rel.graph_eigenspace(triple.tplus, z, tol)
    frame = nz.graph.frame
    l0 = triple.apply(frame)[:d, :] if nz.dim else np.zeros((d, 0))
    if nz.dim != d or np.linalg.matrix_rank(l0) < d:
        raise rel.NotRegularError(f"gamma-field undefined at z={z}")
    return frame @ np.linalg.inv(l0)


def gamma_field(triple: BoundaryTriple, z: complex,
                tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """gamma(z): L -> H, first component of the defect-graph solver."""
    return gamma_field_hat(triple, z, tol)[: triple.space.dim, :]


# ---------------------------------------------------------------------------
# transforms


def transform(triple: BoundaryTriple, x,
              tol: TolerancePolicy = DEFAULT_TOL) -> BoundaryTriple:
    """New triple with gamma replaced by X @ gamma for boundary-unitary X."""
    d = triple.boundary_dim
    x = as_matrix(x, rows=2 * d, cols=2 * d)
    jo = boundary_doubled(d).J_hat
    if np.linalg.norm(x.conj().T @ jo @ x - jo) > 1e-9 * (1 + np.linalg.norm(x) ** 2):
        raise TripleValidationError("transform matrix is not boundary-unitary")
    return validate_triple(triple.parent, x @ triple.gamma, triple.basis, tol)


def beta_shift(triple: BoundaryTriple, beta=None,
               tol: TolerancePolicy = DEFAULT_TOL) -> BoundaryTriple:
    """The shifted triple (Gamma0, Gamma1 - beta Gamma0); defaults to beta(triple)."""
    d = triple.boundary_dim
    b = triple.beta if beta is None else as_matrix(beta, rows=d, cols=d)
    x = np.eye(2 * d, dtype=np.complex128)
    x[d:, :d] = -b
    return transform(triple, x, tol)


def transpose_triple(triple: BoundaryTriple,
                     tol: TolerancePolicy = DEFAULT_TOL) -> BoundaryTriple:
    d = triple.boundary_dim
    x = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    x[:d, d:] = np.eye(d)
    x[d:, :d] = -np.eye(d)
    return transform(triple, x, tol)


def t_theta(triple: BoundaryTriple, theta: LinearRelation,
            tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """The extension Gamma^{-1}(Theta); self-adjoint iff Theta is."""
    d = triple.boundary_dim
    if theta.src.dim != d or theta.tgt.dim != d:
        raise ValueError("Theta must be a relation in the boundary space")
    coords = sub.preimage(triple.gamma, theta.graph, tol)
    cols = triple.basis @ coords.frame
    space = triple.space
    out = LinearRelation(space, space, sub.span(cols, tol)
                         if cols.size else sub.trivial(2 * space.dim))
    if rel.is_selfadjoint(theta, tol) and not rel.is_selfadjoint(out, tol):
        raise TripleValidationError("self-adjoint Theta produced a non-self-adjoint extension")
    return out


# ---------------------------------------------------------------------------
# isometric boundary pairs


def pair_from_triple(triple: BoundaryTriple, domain: Subspace | None = None,
                     tol: TolerancePolicy = DEFAULT_TOL) -> IsometricBoundaryPair:
    """The boundary map as a relation K -> K_circ, optionally domain-restricted."""
    space = triple.space
    d = triple.boundary_dim
    ksrc = doubled(space).krein
    ktgt = boundary_doubled(d).krein
    cols = np.vstack([triple.basis, triple.gamma])
    graph = sub.span(cols, tol)
    if domain is not None:
        cage = sub.product(domain, sub.full(2 * d), tol)
        graph = sub.intersect(graph, cage, tol)
    gamma_rel = LinearRelation(ksrc, ktgt, graph)
    p = rel.parts(gamma_rel, tol)
    a_star = LinearRelation(space, space, p.dom)
    kern = LinearRelation(space, space, p.ker)
    return IsometricBoundaryPair(d, gamma_rel, a_star, kern)


def pair_isometry_check(pair: IsometricBoundaryPair,
                        tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Flags {isometric, unitary} via the cross-space Krein adjoint."""
    g = pair.gamma_rel
    ginv = rel.inverse(g)
    gplus = rel.adjoint(g, "krein", tol)
    isometric = sub.contains(gplus.graph, ginv.graph, tol)
    unitary = isometric and sub.equal(gplus.graph, ginv.graph, tol)
    return {"isometric": isometric, "unitary": unitary}


def k_shift_equivalence(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                        tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Equivalence of the two shift conditions between triples for one T+.

    Condition (a): some bounded K solves Gamma'_1 = Gamma_1 - K Gamma_0 on
    all of T+.  Condition (b): Gamma'_1 agrees with Gamma_1 on N.  The K
    candidate is beta(A) - Gamma'_1 Gamma_0^{(-1)}.
    """
    if not sub.equal(triple_a.tplus.graph, triple_b.tplus.graph, tol):
        raise ValueError("triples must share the adjoint")
    d = triple_a.boundary_dim
    g1a_on_n = triple_a.apply(triple_a.fn)[d:, :]
    g1b_on_n = triple_b.apply(triple_a.fn)[d:, :]
    cond_b = np.linalg.norm(g1a_on_n - g1b_on_n) <= 1e-8 * (1 + np.linalg.norm(g1a_on_n))
    beta0 = triple_b.apply(triple_a.g0inv)[d:, :]
    k = triple_a.beta - beta0
    lhs = triple_b.apply(triple_a.basis)[d:, :]
    rhs = (triple_a.apply(triple_a.basis)[d:, :]
           - k @ triple_a.apply(triple_a.basis)[:d, :])
    cond_a = np.linalg.norm(lhs - rhs) <= 1e-8 * (1 + np.linalg.norm(lhs))
    return {"exists_k": cond_a, "agrees_on_n": cond_b, "k": k,
            "equivalent": cond_a == cond_b}


# ---------------------------------------------------------------------------
# identity checks over grids


def weyl_symmetry_check(triple: BoundaryTriple, grid=DEFAULT_GRID,
                        tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """M(z)^* = M(conj z) at conjugate pairs; real points are skipped."""
    results, skipped = {}, []
    for z in grid:
        z = complex(z)
        if z.imag == 0:
            skipped.append(z)
            continue
        mz = weyl(triple, z, tol)
        mzbar = weyl(triple, np.conj(z), tol)
        if mz.operator_form is not None and mzbar.operator_form is not None:
            res = float(np.abs(mz.operator_form.conj().T - mzbar.operator_form).max())
        else:
            adj = rel.adjoint(mz.relation_in_L, "hilbert", tol)
            res = sub.distance(adj.graph, mzbar.relation_in_L.graph)
        results[z] = res
    return {"residuals": results, "skipped": skipped,
            "max_residual": max(results.values(), default=0.0)}


def resolvent_identities_check(triple: BoundaryTriple, grid=DEFAULT_GRID,
                               tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Gamma-field difference identity, the Step-3 pairing identity and the
    Krein-Naimark formula, each evaluated where the probes say regular."""
    space = triple.space
    j = space.J
    pts = [complex(z) for z in grid
           if complex(z).imag != 0 and rel.spectral_probe(triple.t0, complex(z), tol)["regular"]]
    report = {"points": pts, "gamma_diff": {}, "pairing": {}, "krein_naimark": {},
              "skipped": [complex(z) for z in grid if complex(z) not in pts]}
    gammas = {z: gamma_field(triple, z, tol) for z in pts}
    weyls = {z: weyl(triple, z, tol).operator_form for z in pts}
    for z in pts:
        if weyls[z] is None:
            continue
        r0 = rel.resolvent_matrix(triple.t0, z, tol)
        for z0 in pts:
            if weyls[z0] is None:
                continue
            lhs = gammas[z] - gammas[z0]
            rhs = (z - z0) * (r0 @ gammas[z0])
            report["gamma_diff"][(z, z0)] = float(np.abs(lhs - rhs).max())
            if np.conj(z) not in pts or weyls[np.conj(z)] is None:
                continue
            pair_lhs = (np.conj(z) - z0) * (gammas[z].conj().T @ j @ gammas[z0])
            pair_rhs = weyls[np.conj(z)] - weyls[z0]
            report["pairing"][(z, z0)] = float(np.abs(pair_lhs - pair_rhs).max())
        mz = weyls[z]
        if (np.linalg.matrix_rank(mz) == triple.boundary_dim
                and rel.spectral_probe(triple.t1, z, tol)["regular"]
                and np.conj(z) in pts):
            r1 = rel.resolvent_matrix(triple.t1, z, tol)
            gzbar_plus = gammas[np.conj(z)].conj().T @ j
            rhs = r0 - gammas[z] @ np.linalg.inv(mz) @ gzbar_plus
            report["krein_naimark"][z] = float(np.abs(r1 - rhs).max())
    for key in ("gamma_diff", "pairing", "krein_naimark"):
        report[f"max_{key}"] = max(report[key].values(), default=0.0)
    return report


def regular_type_sym(t: LinearRelation, z: complex,
                     tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return (rel.spectral_probe(t, z, tol)["regular_type"]
            and rel.spectral_probe(t, np.conj(z), tol)["regular_type"])


def ddTTp_check(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                grid=DEFAULT_GRID, tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Regular-point transfer between triples with matching Weyl families."""
    pts = [complex(z) for z in grid if complex(z).imag != 0]
    weyl_equal = {}
    for z in pts:
        ma = weyl(triple_a, z, tol).relation_in_L
        mb = weyl(triple_b, z, tol).relation_in_L
        weyl_equal[z] = sub.equal(ma.graph, mb.graph, tol)
    omega = [z for z in pts if weyl_equal[z] and weyl_equal.get(np.conj(z), False)]
    report = {"weyl_equal": weyl_equal, "omega": omega, "transfers": {}}
    for i, (ta, tb) in enumerate(((triple_a.t0, triple_b.t0),
                                  (triple_a.t1, triple_b.t1))):
        rho_a = {z for z in omega if rel.spectral_probe(ta, z, tol)["regular"]}
        rho_b = {z for z in omega if rel.spectral_probe(tb, z, tol)["regular"]}
        hat_a = {z for z in omega if regular_type_sym(triple_a.parent, z, tol)}
        hat_b = {z for z in omega if regular_type_sym(triple_b.parent, z, tol)}
        ok = True
        if rho_a and rho_b:
            ok = (rho_a & rho_b == rho_a & hat_b) and (rho_a & rho_b == rho_b & hat_a)
        if hat_a == hat_b and (rho_a or rho_b):
            ok = ok and (bool(rho_a) == bool(rho_b)) and rho_a == rho_b
        report["transfers"][i] = {"rho_a": sorted(rho_a, key=str),
                                  "rho_b": sorted(rho_b, key=str), "ok": ok}
    report["ok"] = all(v["ok"] for v in report["transfers"].values())
    return report
