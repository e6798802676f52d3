"""Solutions V of Gamma' = Gamma V^{-1} and the similarity reconstruction.

The composition relation V0 and its operator part tie two boundary
triples over a shared boundary space together; standard-unitary
solutions are assembled blockwise from a graph isomorphism tau, a free
coupling sigma and a Hermitian parameter Theta, and the reconstruction
recovers the similarity of two triples from matching Weyl families on a
symmetric grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import relations as rel
from . import subspaces as sub
from .boundary import (DEFAULT_GRID, BoundaryTriple, IsometricBoundaryPair,
                       gamma_field, pair_from_triple, weyl)
from .krein import KreinSpace, doubled
from .relations import LinearRelation
from .subspaces import Subspace
from .tolerances import DEFAULT_TOL, TolerancePolicy, as_matrix


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class BlockUnitary:
    """2x2-block operator (A, B; C, D) between doubled Krein spaces."""

    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    src: KreinSpace
    tgt: KreinSpace

    def full_matrix(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.c, self.d]])

    def as_relation(self, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
        return rel.from_operator(self.full_matrix(), doubled(self.src).krein,
                                 doubled(self.tgt).krein, tol)

    def vabcd_residual(self) -> float:
        """Max-abs defect over the six standard-unitary block identities."""
        j, jp = self.src.J, self.tgt.J
        kadj = lambda x: j @ x.conj().T @ jp
        eye = np.eye(self.src.dim)
        eyep = np.eye(self.tgt.dim)
        a, b, c, d = self.a, self.b, self.c, self.d
        residuals = [
            kadj(a) @ d - kadj(c) @ b - eye,
            a @ kadj(d) - b @ kadj(c) - eyep,
            kadj(a) @ c - kadj(c) @ a,
            a @ kadj(b) - b @ kadj(a),
            kadj(b) @ d - kadj(d) @ b,
            c @ kadj(d) - d @ kadj(c),
        ]
        return max(float(np.abs(r).max()) for r in residuals)


def block_unitary_from_matrix(m, src: KreinSpace, tgt: KreinSpace) -> BlockUnitary:
    m = as_matrix(m, rows=2 * tgt.dim, cols=2 * src.dim)
    n, np_ = src.dim, tgt.dim
    return BlockUnitary(m[:np_, :n], m[:np_, n:], m[np_:, :n], m[np_:, n:], src, tgt)


def _as_v_relation(v, triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                   tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    ksrc = doubled(triple_a.space).krein
    ktgt = doubled(triple_b.space).krein
    if isinstance(v, LinearRelation):
        return v
    if isinstance(v, BlockUnitary):
        return v.as_relation(tol)
    return rel.from_operator(v, ksrc, ktgt, tol)


# ---------------------------------------------------------------------------
# V0 and its operator part


def _check_compatible(triple_a: BoundaryTriple, triple_b: BoundaryTriple):
    if triple_a.boundary_dim != triple_b.boundary_dim:
        raise BuildError("triples do not share a boundary space")


def v0(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
       tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """The composition relation of the two boundary maps, K -> K'."""
    _check_compatible(triple_a, triple_b)
    ga, gb = triple_a.gamma, triple_b.gamma
    k = sub.kernel(np.hstack([ga, -gb]), ga.shape[1] + gb.shape[1], tol)
    x = k.frame[: ga.shape[1], :]
    y = k.frame[ga.shape[1] :, :]
    cols = np.vstack([triple_a.basis @ x, triple_b.basis @ y])
    ksrc = doubled(triple_a.space).krein
    ktgt = doubled(triple_b.space).krein
    return LinearRelation(ksrc, ktgt, sub.span(cols, tol))


def v0_operator_part(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                     tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """(V0)_s as a matrix on T+ (zero on the Euclidean complement).

    Computed both from the canonical operator part of V0 and from the
    inverse-boundary formula; the two routes must agree.
    """
    _check_compatible(triple_a, triple_b)
    formula = (triple_b.g0inv @ triple_a.gamma0
               + triple_b.g1inv @ (triple_a.gamma1 - triple_b.beta @ triple_a.gamma0))
    full = formula @ triple_a.basis_pinv

    v0_rel = v0(triple_a, triple_b, tol)
    vs = rel.operator_part(v0_rel, tol)
    e, dd = vs.blocks()
    frame = triple_a.tplus.graph.frame
    canon = (dd @ np.linalg.pinv(e)) @ frame
    diff = np.abs(canon - full @ frame).max() if frame.size else 0.0
    if diff > 1e-8 * (1.0 + np.abs(full).max()):
        raise BuildError(f"operator-part routes disagree: {diff:.3e}")
    return full


def sigma_frames(triple: BoundaryTriple) -> np.ndarray:
    return np.hstack([triple.fn, triple.fjn])


def sigma_unitary_check(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                        tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Gram preservation of (V0)_s between the two Sigma subspaces, plus
    the displayed inverse composing to the identity."""
    vs = v0_operator_part(triple_a, triple_b, tol)
    sa = sigma_frames(triple_a)
    ja = doubled(triple_a.space).J_hat
    jb = doubled(triple_b.space).J_hat
    img = vs @ sa
    gram_res = float(np.abs(img.conj().T @ jb @ img - sa.conj().T @ ja @ sa).max()) \
        if sa.size else 0.0
    inv_formula = (triple_a.g0inv @ triple_b.gamma0
                   + triple_a.g1inv @ (triple_b.gamma1 - triple_a.beta @ triple_b.gamma0))
    inv_full = inv_formula @ triple_b.basis_pinv
    roundtrip = float(np.abs(inv_full @ img - sa).max()) if sa.size else 0.0
    return {"gram_residual": gram_res, "inverse_residual": roundtrip,
            "ok": gram_res <= 1e-9 * (1 + np.abs(sa).max())
                  and roundtrip <= 1e-8 * (1 + np.abs(sa).max())}


def w_maps(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
           tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """The two graph homeomorphisms N -> N' in frame coordinates."""
    _check_compatible(triple_a, triple_b)
    d = triple_a.boundary_dim
    ja = doubled(triple_a.space).J_hat
    jb = doubled(triple_b.space).J_hat
    bv0 = triple_a.apply(triple_a.fjn)[:d, :]
    w0 = triple_b.fn.conj().T @ (jb @ (triple_b.g0inv @ bv0))
    bv1 = triple_a.apply(triple_a.fn)[d:, :]
    w1 = triple_b.fn.conj().T @ (triple_b.g1inv @ bv1)
    inv_res = float(np.abs(w1 - np.linalg.inv(w0.conj().T)).max()) if d else 0.0
    llp_lhs = triple_a.g0inv.conj().T @ ja @ triple_a.g1inv
    llp_rhs = triple_b.g0inv.conj().T @ jb @ triple_b.g1inv
    llp_res = float(np.abs(llp_lhs - llp_rhs).max()) if d else 0.0
    llp_scale = 1.0 + (float(np.abs(llp_lhs).max()) if d else 0.0)
    return {"w0": w0, "w1": w1, "inverse_residual": inv_res, "llp_residual": llp_res,
            "ok": inv_res <= 1e-8 * (1 + np.abs(w0).max())
                  and llp_res <= 1e-9 * llp_scale}


# ---------------------------------------------------------------------------
# membership


def gamma_relation(triple: BoundaryTriple, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    return pair_from_triple(triple, None, tol).gamma_rel


def membership_check(v, triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                     tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Whether Gamma' = Gamma V^{-1} holds, as a relation identity.

    For operator inputs whose domain covers ker Gamma the displayed
    range criterion is evaluated as well and the two routes compared.
    """
    v_rel = _as_v_relation(v, triple_a, triple_b, tol)
    composed = rel.compose(gamma_relation(triple_a, tol), rel.inverse(v_rel), tol)
    target = gamma_relation(triple_b, tol)
    member = sub.equal(composed.graph, target.graph, tol)
    report = {"member": member, "lemma_e": None, "routes_agree": None}
    if not isinstance(v, LinearRelation):
        vm = v.full_matrix() if isinstance(v, BlockUnitary) else as_matrix(v)
        vs_full = v0_operator_part(triple_a, triple_b, tol)
        frame = triple_a.tplus.graph.frame
        diff_cols = (vs_full - vm) @ frame
        ran_diff = sub.span(diff_cols, tol) if diff_cols.size else sub.trivial(vm.shape[0])
        vs_image = sub.image(vm, triple_a.parent.graph, tol)
        lemma_e = (sub.contains(triple_b.parent.graph, ran_diff, tol)
                   and sub.equal(vs_image, triple_b.parent.graph, tol))
        report["lemma_e"] = lemma_e
        report["routes_agree"] = lemma_e == member
    return report


# ---------------------------------------------------------------------------
# constructions of Theorem l


def build_V_from_tau(triple_a: BoundaryTriple, triple_b: BoundaryTriple, tau,
                     tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """Operator (V0)_s + tau P_T with domain T+ and free entries zero."""
    _check_compatible(triple_a, triple_b)
    dt_a = triple_a.parent.dim
    dt_b = triple_b.parent.dim
    tau = as_matrix(tau, rows=dt_b, cols=dt_a) if dt_a and dt_b else \
        np.zeros((dt_b, dt_a), dtype=np.complex128)
    if np.linalg.matrix_rank(tau) < dt_b:
        raise BuildError("tau is not surjective onto T'")
    vs_full = v0_operator_part(triple_a, triple_b, tol)
    m = vs_full + triple_b.ft @ tau @ triple_a.ft.conj().T
    frame = triple_a.tplus.graph.frame
    cols = np.vstack([frame, m @ frame])
    return LinearRelation(doubled(triple_a.space).krein,
                          doubled(triple_b.space).krein, sub.span(cols, tol))


def build_standard_V(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                     tau, theta=None, sigma=None, coupling=None,
                     tol: TolerancePolicy = DEFAULT_TOL) -> BlockUnitary:
    """Standard unitary solution from (tau, Theta, sigma) block data.

    tau: invertible dim T' x dim T coordinate matrix (graph frames);
    Theta: Hermitian matrix over the J'(T') frame; sigma: coupling
    N -> T' in frame coordinates, zero when omitted; coupling: the
    free J'(T') x J'(N') block of the Hermitian kernel parameter (its
    image stays inside T', so membership survives any choice).
    """
    _check_compatible(triple_a, triple_b)
    d = triple_a.boundary_dim
    dt_a, dt_b = triple_a.parent.dim, triple_b.parent.dim
    if dt_a != dt_b:
        raise BuildError("no homeomorphism between graphs of different dimension")
    dt = dt_a
    tau = as_matrix(tau, rows=dt, cols=dt) if dt else np.zeros((0, 0), np.complex128)
    if dt and abs(np.linalg.det(tau)) < 1e-12:
        raise BuildError("tau is not a homeomorphism")
    theta = (np.zeros((dt, dt), np.complex128) if theta is None
             else as_matrix(theta, rows=dt, cols=dt))
    if dt and np.linalg.norm(theta - theta.conj().T) > 1e-10 * (1 + np.linalg.norm(theta)):
        raise BuildError("Theta is not self-adjoint")
    sigma = (np.zeros((dt, d), np.complex128) if sigma is None
             else as_matrix(sigma, rows=dt, cols=d))
    coupling = (np.zeros((dt, d), np.complex128) if coupling is None
                else as_matrix(coupling, rows=dt, cols=d))

    wm = w_maps(triple_a, triple_b, tol)
    w0 = wm["w0"]
    e0 = _e0_coords(triple_a, triple_b)
    e0 = (e0 + e0.conj().T) / 2.0

    n = triple_a.space.dim
    b_coords = np.zeros((n, n), dtype=np.complex128)
    b_coords[:dt, :dt] = tau.conj().T
    b_coords[dt:, :dt] = sigma.conj().T
    b_coords[dt:, dt:] = np.linalg.inv(w0) if d else w0
    if abs(np.linalg.det(b_coords)) < 1e-12:
        raise BuildError("assembled B block is singular")
    e_coords = np.zeros((n, n), dtype=np.complex128)
    e_coords[:dt, :dt] = theta
    e_coords[:dt, dt:] = coupling
    e_coords[dt:, :dt] = coupling.conj().T
    e_coords[dt:, dt:] = e0

    binv = np.linalg.inv(b_coords)
    v_coords = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    v_coords[:n, :n] = binv
    v_coords[n:, :n] = 1j * (e_coords @ binv)
    v_coords[n:, n:] = b_coords.conj().T

    fa = np.hstack([triple_a.fjt, triple_a.fjn, triple_a.ft, triple_a.fn])
    fb = np.hstack([triple_b.fjt, triple_b.fjn, triple_b.ft, triple_b.fn])
    v_full = fb @ v_coords @ fa.conj().T
    out = block_unitary_from_matrix(v_full, triple_a.space, triple_b.space)
    res = out.vabcd_residual()
    if res > 1e-9 * (1 + np.abs(v_full).max() ** 2):
        raise BuildError(f"block identities violated: residual {res:.3e}")
    check = membership_check(out, triple_a, triple_b, tol)
    if not check["member"]:
        raise BuildError("constructed V failed the membership identity")
    return out


def _e0_coords(triple_a: BoundaryTriple, triple_b: BoundaryTriple) -> np.ndarray:
    """Coordinates of the symmetric kernel operator on J'(N')."""
    d = triple_a.boundary_dim
    if d == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    a0_b = triple_b.apply(triple_b.fjn)[:d, :]
    delta = triple_a.beta - triple_b.beta
    return -1j * (triple_b.fn.conj().T @ (triple_b.g1inv @ (delta @ a0_b)))


# ---------------------------------------------------------------------------
# Weyl-equality criterion (pencil route)


def pencil(v: BlockUnitary, z: complex) -> np.ndarray:
    """Quadratic pencil z^2 B + z(A - D) - C."""
    return z * z * v.b + z * (v.a - v.d) - v.c


@dataclass(frozen=True)
class CriterionResult:
    criterion: bool
    direct: bool
    hypotheses_ok: bool
    diagnostics: dict

    def __bool__(self) -> bool:
        return self.criterion


def _pair_weyl_relation(pair: IsometricBoundaryPair, z: complex,
                        tol: TolerancePolicy) -> Subspace:
    """Graph of Gamma(zI) in the boundary doubled space."""
    g = pair.gamma_rel
    n2 = g.src.dim // 2
    zgraph = rel.z_relation(KreinSpace(n2, np.eye(n2, dtype=np.complex128), (n2, 0)), z, tol)
    cage = sub.product(zgraph.graph, sub.full(g.tgt.dim), tol)
    hit = sub.intersect(g.graph, cage, tol)
    cols = hit.frame[g.src.dim :, :]
    return sub.span(cols, tol) if cols.size else sub.trivial(g.tgt.dim)


def _coerce_pair(obj, tol: TolerancePolicy) -> IsometricBoundaryPair:
    if isinstance(obj, BoundaryTriple):
        return pair_from_triple(obj, None, tol)
    return obj


def weyl_equality_criterion(pair_a, pair_b, v, z: complex,
                            tol: TolerancePolicy = DEFAULT_TOL) -> CriterionResult:
    """Defect-inclusion criterion for Weyl-family equality at z.

    Evaluates the containment of the defect subspace of dom Gamma in the
    kernel-side eigenspace of S + V^{-1}(zI), and independently compares
    the two Weyl values as relations; the two answers must agree when
    the sufficiency hypotheses hold.
    """
    pa = _coerce_pair(pair_a, tol)
    pb = _coerce_pair(pair_b, tol)
    if isinstance(v, BlockUnitary):
        v_rel = v.as_relation(tol)
    elif isinstance(v, LinearRelation):
        v_rel = v
    else:
        raise BuildError("V must be a BlockUnitary or a LinearRelation")
    z = complex(z)

    na2 = v_rel.src.dim
    nb = v_rel.tgt.dim // 2
    z_graph_b = rel.z_relation(KreinSpace(nb, np.eye(nb, dtype=np.complex128), (nb, 0)),
                               z, tol).graph
    cage = sub.product(sub.full(na2), z_graph_b, tol)
    hit = sub.intersect(v_rel.graph, cage, tol)
    vinv_z = sub.span(hit.frame[:na2, :], tol) if hit.dim else sub.trivial(na2)

    s_graph = pa.kernel.graph
    rhs_rel = LinearRelation(pa.a_star.src, pa.a_star.tgt, sub.sum_(s_graph, vinv_z, tol))
    lhs_eig = rel.eigenspace(pa.a_star, z, tol)
    rhs_eig = rel.eigenspace(rhs_rel, z, tol)
    criterion = sub.contains(rhs_eig, lhs_eig, tol)

    ma = _pair_weyl_relation(pa, z, tol)
    mb = _pair_weyl_relation(pb, z, tol)
    direct = sub.equal(ma, mb, tol)

    s_cap = sub.intersect(s_graph, vinv_z, tol).dim == 0
    s_eig = rel.eigenspace(pa.kernel, z, tol).dim == 0
    sp_eig = rel.eigenspace(pb.kernel, z, tol).dim == 0
    hypotheses_ok = s_cap and s_eig and sp_eig
    return CriterionResult(criterion, direct, hypotheses_ok,
                           {"s_cap_vinv_trivial": s_cap,
                            "z_not_eig_S": s_eig, "z_not_eig_Sprime": sp_eig,
                            "agree": criterion == direct})


# ---------------------------------------------------------------------------
# similarity reconstruction (gamma-field route)


def _utilde(u: np.ndarray) -> np.ndarray:
    n_t, n_s = u.shape
    out = np.zeros((2 * n_t, 2 * n_s), dtype=np.complex128)
    out[:n_t, :n_s] = u
    out[n_t:, n_s:] = u
    return out


def _standard_unitary_residual(u: np.ndarray, src: KreinSpace, tgt: KreinSpace) -> float:
    return float(np.abs(u.conj().T @ tgt.J @ u - src.J).max())


def reconstruct_similarity(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                           grid=DEFAULT_GRID, tol: TolerancePolicy = DEFAULT_TOL,
                           unitary_tol: float = 1e-7) -> dict:
    """Recover a standard unitary realizing the similarity, or a witness.

    Returns a dict with status 'unitary' (carrying U_total, the extracted
    diagonal correction K and residuals), 'witness' (a grid point with
    distinct Weyl values) or 'hypothesis-violation'.
    """
    _check_compatible(triple_a, triple_b)
    pts = [complex(z) for z in grid if complex(z).imag != 0]
    omega = [z for z in pts
             if rel.spectral_probe(triple_a.t0, z, tol)["regular"]
             and rel.spectral_probe(triple_b.t0, z, tol)["regular"]]
    if not omega:
        return {"status": "hypothesis-violation",
                "reason": "no common regular grid point for the distinguished extensions"}

    for z in pts:
        ma = weyl(triple_a, z, tol)
        mb = weyl(triple_b, z, tol)
        if ma.operator_form is not None and mb.operator_form is not None:
            disc = float(np.abs(ma.operator_form - mb.operator_form).max())
        else:
            disc = sub.distance(ma.relation_in_L.graph, mb.relation_in_L.graph)
            disc = float(disc) if np.isfinite(disc) else np.pi / 2
        if disc > 1e-6:
            return {"status": "witness", "z": z, "discrepancy": disc}

    na, nb = triple_a.space.dim, triple_b.space.dim
    span_a = sub.span(np.hstack([rel.eigenspace(triple_a.tplus, z, tol).frame
                                 for z in omega]), tol)
    span_b = sub.span(np.hstack([rel.eigenspace(triple_b.tplus, z, tol).frame
                                 for z in omega]), tol)
    if span_a.dim < na or span_b.dim < nb:
        return {"status": "hypothesis-violation",
                "reason": "defect subspaces over the grid are not minimal"}

    g_cols = np.hstack([gamma_field(triple_a, z, tol) for z in omega])
    gp_cols = np.hstack([gamma_field(triple_b, z, tol) for z in omega])
    u = gp_cols @ np.linalg.pinv(g_cols)
    solve_res = float(np.abs(u @ g_cols - gp_cols).max())
    if solve_res > 1e-7 * (1 + np.abs(gp_cols).max()):
        return {"status": "hypothesis-violation",
                "reason": f"gamma-field system is inconsistent ({solve_res:.3e})"}
    unit_res = _standard_unitary_residual(u, triple_a.space, triple_b.space)
    if unit_res > 1e-7 * (1 + np.abs(u).max() ** 2):
        return {"status": "hypothesis-violation",
                "reason": f"assembled map is not standard unitary ({unit_res:.3e})"}
    ut = _utilde(u)
    if not sub.equal(sub.image(ut, triple_a.parent.graph, tol),
                     triple_b.parent.graph, tol):
        return {"status": "hypothesis-violation",
                "reason": "assembled map does not carry T onto T'"}

    # Theorem-l extraction: read (tau, sigma, Theta) off U-tilde, build the
    # standard unitary V they parametrize and peel off W = U~^{-1} V.
    dt = triple_a.parent.dim
    tau_c = triple_b.ft.conj().T @ (ut @ triple_a.ft)
    sigma_c = triple_b.ft.conj().T @ (ut @ triple_a.fn)
    xa = np.hstack([triple_a.fjt, triple_a.fjn])
    xb = np.hstack([triple_b.fjt, triple_b.fjn])
    yb = np.hstack([triple_b.ft, triple_b.fn])
    v11 = xb.conj().T @ (ut @ xa)
    v21 = yb.conj().T @ (ut @ xa)
    d = triple_a.boundary_dim
    theta_c = np.zeros((dt, dt), dtype=np.complex128)
    coupling_c = np.zeros((dt, d), dtype=np.complex128)
    if abs(np.linalg.det(v11)) > 1e-12:
        e_cand = -1j * (v21 @ np.linalg.inv(v11))
        e_cand = (e_cand + e_cand.conj().T) / 2.0
        theta_c = e_cand[:dt, :dt]
        coupling_c = e_cand[:dt, dt:]
    v = build_standard_V(triple_a, triple_b, tau_c, theta_c, sigma_c, coupling_c, tol)

    u_inv = triple_a.space.J @ u.conj().T @ triple_b.space.J
    w = _utilde(u_inv) @ v.full_matrix()
    w_blocks = block_unitary_from_matrix(w, triple_a.space, triple_a.space)
    off_diag = max(float(np.abs(w_blocks.b).max()) if w_blocks.b.size else 0.0,
                   float(np.abs(w_blocks.c).max()) if w_blocks.c.size else 0.0)
    diag_gap = float(np.abs(w_blocks.a - w_blocks.d).max()) if w_blocks.a.size else 0.0
    k = w_blocks.a
    u_total = u @ k
    ut_total = _utilde(u_total)
    composed = rel.compose(gamma_relation(triple_a, tol),
                           rel.from_operator(np.linalg.inv(ut_total),
                                             doubled(triple_b.space).krein,
                                             doubled(triple_a.space).krein, tol), tol)
    final_dist = sub.distance(composed.graph, gamma_relation(triple_b, tol).graph)
    result = {
        "status": "unitary",
        "U": u, "K": k, "U_total": u_total, "V": v,
        "w_offdiag": off_diag, "w_diag_gap": diag_gap,
        "gamma_residual": final_dist,
        "unitary_residual": _standard_unitary_residual(
            u_total, triple_a.space, triple_b.space),
    }
    if not np.isfinite(final_dist) or final_dist > unitary_tol:
        result["status"] = "hypothesis-violation"
        result["reason"] = f"final boundary identity off by {final_dist:.3e}"
    return result


def w_invariance_audit(triple_a: BoundaryTriple, triple_b: BoundaryTriple,
                       u: np.ndarray, vs, grid=DEFAULT_GRID,
                       tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Invariance W(T) = T and W(defect graphs) = same, for each supplied V."""
    u_inv = triple_a.space.J @ np.asarray(u).conj().T @ triple_b.space.J
    ut_inv = _utilde(u_inv)
    ksrc = doubled(triple_a.space).krein
    reports = []
    pts = [complex(z) for z in grid if complex(z).imag != 0
           and rel.eigenspace(triple_a.parent, complex(z), tol).dim == 0]
    for v in vs:
        v_rel = _as_v_relation(v, triple_a, triple_b, tol)
        w_rel = rel.compose(rel.from_operator(ut_inv, v_rel.tgt, ksrc, tol), v_rel, tol)
        t_img = rel.parts(rel.restrict(w_rel, _as_sub_of_k(triple_a.parent.graph), tol), tol).ran
        entry = {"t_invariant": sub.equal(t_img, triple_a.parent.graph, tol),
                 "defect_invariant": {}}
        for z in pts:
            nz = rel.graph_eigenspace(triple_a.tplus, z, tol).graph
            img = rel.parts(rel.restrict(w_rel, nz, tol), tol).ran
            entry["defect_invariant"][z] = sub.equal(img, nz, tol)
        entry["ok"] = entry["t_invariant"] and all(entry["defect_invariant"].values())
        reports.append(entry)
    return {"per_v": reports, "ok": all(e["ok"] for e in reports)}


def _as_sub_of_k(graph: Subspace) -> Subspace:
    return graph
