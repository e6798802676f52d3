"""Self-adjoint extension theory through neutral complements.

A closed symmetric relation T in a Krein space is extended by picking a
neutral relation N inside T+ ∩ T-perp whose orthogonal sum with T is a
hyper-maximal neutral subspace of the doubled space; extensions and
their witnesses convert back and forth losslessly (the 1-1
correspondence), and the audit functions re-derive every side condition
independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import relations as rel
from . import subspaces as sub
from .krein import KreinSpace, doubled, hilbert_space, neutrality_rank
from .relations import LinearRelation
from .subspaces import Subspace
from .tolerances import DEFAULT_TOL, TolerancePolicy


class NClassRejection(ValueError):
    """Candidate N failed a membership condition; .reason names it."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class NWitness:
    N: LinearRelation
    parent: LinearRelation
    t0: LinearRelation


@dataclass(frozen=True)
class SigmaDecomposition:
    sigma: Subspace
    n_part: Subspace
    jn_part: Subspace
    m_hat: LinearRelation
    m_space: Subspace
    defect_plus_frame: np.ndarray = field(repr=False)
    defect_minus_frame: np.ndarray = field(repr=False)


def hilbert_conjugate(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """The symmetric companion JT living in the Euclidean space."""
    return rel.hilbertize(t, tol)


def defect_subspace(t: LinearRelation, z: complex,
                    tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """ker(JT* - z) computed from the Krein adjoint of T."""
    tstar = rel.hilbertize(rel.adjoint(t, "krein", tol), tol)
    return rel.eigenspace(tstar, z, tol)


def defect_numbers(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[int, int]:
    if not rel.is_symmetric(t, tol):
        raise ValueError("defect numbers are defined for symmetric relations")
    d_plus = defect_subspace(t, 1j, tol).dim
    d_minus = defect_subspace(t, -1j, tol).dim
    return d_plus, d_minus


def graph_complement(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """Euclidean complement of graph(T) in the doubled space."""
    return sub.complement(t.graph, tol)


def n_class_check(t: LinearRelation, n: LinearRelation,
                  tol: TolerancePolicy = DEFAULT_TOL) -> NWitness:
    """Verify N-class membership and return the witness bundling T0.

    Checks (a) N ⊆ T+ ∩ T-perp, (b) ran(JN ± i) equals the respective
    defect subspace, and cross-checks hyper-maximal neutrality of the
    orthogonal sum in the doubled space.
    """
    if not t.src.same_as(n.src) or not t.tgt.same_as(n.tgt):
        raise NClassRejection("host mismatch")
    tplus = rel.adjoint(t, "krein", tol)
    if not sub.contains(tplus.graph, n.graph, tol):
        raise NClassRejection("N not inside the adjoint")
    if not sub.contains(graph_complement(t, tol), n.graph, tol):
        raise NClassRejection("N not orthogonal to T")
    frak_n = rel.hilbertize(n, tol)
    for z in (1j, -1j):
        e, d = frak_n.blocks()
        ran_shifted = sub.span(d + z * e, tol) if frak_n.dim else sub.trivial(t.src.dim)
        if not sub.equal(ran_shifted, defect_subspace(t, z, tol), tol):
            raise NClassRejection(f"range condition fails at z={z}")
    t0, orthogonal = rel.cw_sum(t, n, tol)
    if not orthogonal:
        raise NClassRejection("T and N are not orthogonal")
    flags = neutrality_rank(doubled(t.src).krein, t0.graph)
    if not flags["hyper_maximal"]:
        raise NClassRejection("T ⊕ N is not hyper-maximal neutral")
    if not rel.is_selfadjoint(t0, tol):
        raise NClassRejection("T ⊕ N is not self-adjoint")
    return NWitness(n, t, t0)


def extend(t: LinearRelation, n: LinearRelation,
           tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    return n_class_check(t, n, tol).t0


def reduce(t: LinearRelation, t0: LinearRelation,
           tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """N = T0 ∩ T-perp for a canonical self-adjoint extension T0."""
    if not rel.is_selfadjoint(t0, tol):
        raise ValueError("reduce needs a self-adjoint extension")
    if not sub.contains(t0.graph, t.graph, tol):
        raise ValueError("T0 does not extend T")
    n_graph = sub.intersect(t0.graph, graph_complement(t, tol), tol)
    n = LinearRelation(t.src, t.tgt, n_graph)
    n_class_check(t, n, tol)
    return n


def sigma_decompose(t: LinearRelation, t0: LinearRelation,
                    tol: TolerancePolicy = DEFAULT_TOL) -> SigmaDecomposition:
    """Σ = T+ ∩ T-perp with its N ⊕ J_hat(N) split and the defect pairing."""
    n = reduce(t, t0, tol)
    tplus = rel.adjoint(t, "krein", tol)
    sigma = sub.intersect(tplus.graph, graph_complement(t, tol), tol)
    jhat = doubled(t.src).J_hat
    jn = sub.image(jhat, n.graph, tol)
    hil = hilbert_space(t.src.dim)
    tstar = rel.hilbertize(tplus, tol)
    mhat_i = rel.graph_eigenspace(tstar, 1j, tol)
    mhat_mi = rel.graph_eigenspace(tstar, -1j, tol)
    m_hat, _ = rel.cw_sum(mhat_i, mhat_mi, tol)
    m_space = rel.parts(m_hat, tol).dom
    return SigmaDecomposition(
        sigma=sigma,
        n_part=n.graph,
        jn_part=jn,
        m_hat=m_hat,
        m_space=m_space,
        defect_plus_frame=defect_subspace(t, 1j, tol).frame,
        defect_minus_frame=defect_subspace(t, -1j, tol).frame,
    )


def dom_n_formulas(t: LinearRelation, t0: LinearRelation,
                   tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """The three equivalent descriptions of dom N, computed independently."""
    frak_t0 = rel.hilbertize(t0, tol)
    ni = defect_subspace(t, 1j, tol)
    nmi = defect_subspace(t, -1j, tol)

    def preimage_of(shift_z: complex, target: Subspace) -> Subspace:
        shifted = rel.shift(frak_t0, -shift_z)  # T0 + shift_z I
        cage = sub.product(sub.full(t.src.dim), target, tol)
        return rel.parts(
            LinearRelation(frak_t0.src, frak_t0.tgt,
                           sub.intersect(shifted.graph, cage, tol)), tol).dom

    via_plus = preimage_of(1j, ni)
    via_minus = preimage_of(-1j, nmi)

    c_full_graph = _cayley_graph(frak_t0)
    c_n = sub.intersect(c_full_graph, sub.product(ni, sub.full(t.src.dim), tol), tol)
    x, y = c_n.frame[: t.src.dim, :], c_n.frame[t.src.dim :, :]
    via_cayley = sub.span(y - x, tol) if c_n.dim else sub.trivial(t.src.dim)
    return {"resolvent_plus": via_plus, "resolvent_minus": via_minus,
            "cayley": via_cayley}


def _cayley_graph(frak_t0: LinearRelation) -> Subspace:
    e, d = frak_t0.blocks()
    return sub.span(np.vstack([d + 1j * e, d - 1j * e]))


def prop_n_audit(t: LinearRelation, n: LinearRelation,
                 tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Re-derive every claim attached to a witness pair (T, N)."""
    witness = n_class_check(t, n, tol)
    t0 = witness.t0
    dim_h = t.src.dim
    d_plus, d_minus = defect_numbers(t, tol)
    n_plus, n_minus = defect_numbers(n, tol)
    dec = sigma_decompose(t, t0, tol)
    formulas = dom_n_formulas(t, t0, tol)
    dom_n = rel.parts(n, tol).dom
    pair_dists = {
        "plus_vs_minus": sub.distance(formulas["resolvent_plus"], formulas["resolvent_minus"]),
        "plus_vs_cayley": sub.distance(formulas["resolvent_plus"], formulas["cayley"]),
        "dom_vs_plus": sub.distance(dom_n, formulas["resolvent_plus"]),
    }
    t_sum_sigma, orth = rel.cw_sum(
        t, LinearRelation(t.src, t.tgt, dec.sigma), tol)
    tplus = rel.adjoint(t, "krein", tol)
    jhat = doubled(t.src).J_hat
    j_base = t.src.J
    # Σ = J M_hat: post-compose the relation M_hat with the base symmetry.
    j_mhat = sub.span(np.vstack([
        dec.m_hat.graph.frame[: dim_h, :],
        j_base @ dec.m_hat.graph.frame[dim_h :, :]]), tol) \
        if dec.m_hat.dim else sub.trivial(2 * dim_h)
    report = {
        "defects": (d_plus, d_minus),
        "n_defects": (n_plus, n_minus),
        "counts_ok": d_plus == d_minus and n_plus == n_minus
                     and d_plus + n_plus == dim_h
                     and n.dim == d_plus and t.dim == n_plus,
        "adjoint_splits": sub.equal(t_sum_sigma.graph, tplus.graph, tol) and orth,
        "sigma_split": sub.equal(dec.sigma, sub.sum_(dec.n_part, dec.jn_part, tol), tol),
        "sigma_is_j_mhat": sub.equal(dec.sigma, j_mhat, tol),
        "dom_formula_distances": pair_dists,
        "dom_formulas_ok": all(v <= tol.angle_tol for v in pair_dists.values()),
    }
    report.update(_dom_n_neutrality(dec, dom_n, tol))
    report["ok"] = (report["counts_ok"] and report["adjoint_splits"]
                    and report["sigma_split"] and report["sigma_is_j_mhat"]
                    and report["dom_formulas_ok"]
                    and report["dom_n_hyper_maximal"] is not False)
    return report


def _dom_n_neutrality(dec: SigmaDecomposition, dom_n: Subspace,
                      tol: TolerancePolicy) -> dict:
    """Hyper-maximal neutrality of dom N in the defect-pair metric.

    The metric lives on abstract pairs (u, v) in N_i x N_-i with
    fundamental symmetry diag(1, -1); it transfers to M = N_i + N_-i only
    when the two defect subspaces are disjoint, so degenerate instances
    are reported as skipped (None) rather than judged.
    """
    fp, fm = dec.defect_plus_frame, dec.defect_minus_frame
    d1, d2 = fp.shape[1], fm.shape[1]
    phi = np.hstack([fp, fm]) if d1 + d2 else np.zeros((fp.shape[0], 0))
    if d1 + d2 == 0:
        return {"dom_n_hyper_maximal": dom_n.dim == 0, "m_degenerate": False}
    if np.linalg.matrix_rank(phi) < d1 + d2:
        return {"dom_n_hyper_maximal": None, "m_degenerate": True}
    lift = np.linalg.pinv(phi) @ dom_n.frame
    s = np.diag(np.concatenate([np.ones(d1), -np.ones(d2)])).astype(np.complex128)
    pair_space = KreinSpace(d1 + d2, s, (d1, d2))
    lifted = sub.span(lift, tol) if lift.size else sub.trivial(d1 + d2)
    flags = neutrality_rank(pair_space, lifted)
    return {"dom_n_hyper_maximal": bool(flags["hyper_maximal"]), "m_degenerate": False}


# ---------------------------------------------------------------------------
# spectral-set membership probes


def delta_membership(t: LinearRelation, z: complex,
                     tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """z in delta(T): non-real, of regular type for T together with conj(z)."""
    if z.imag == 0:
        return False
    return (rel.spectral_probe(t, z, tol)["regular_type"]
            and rel.spectral_probe(t, np.conj(z), tol)["regular_type"])


def O_membership(g: LinearRelation, h: LinearRelation, z: complex,
                 tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """ran(G - z) ∩ ran(H - z) trivial."""
    eg, dg = g.blocks()
    eh, dh = h.blocks()
    rg = sub.span(dg - z * eg, tol) if g.dim else sub.trivial(g.tgt.dim)
    rh = sub.span(dh - z * eh, tol) if h.dim else sub.trivial(h.tgt.dim)
    return sub.intersect(rg, rh, tol).dim == 0


def Os_membership(t: LinearRelation, n: LinearRelation, z: complex,
                  tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """z in delta(T) with trivial range intersections at z and conj(z)."""
    if not delta_membership(t, z, tol):
        return False
    return (O_membership(t, n, z, tol)
            and O_membership(t, n, np.conj(z), tol))


def delta0_estimate(t: LinearRelation, witnesses, grid,
                    tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Sampled over-approximation of Delta_0(T) on the grid.

    The true set intersects over all of the (uncountable) N-class; only
    the supplied witnesses are consulted, hence the explicit marker.
    """
    points = []
    for z in grid:
        z = complex(z)
        ok = True
        for w in witnesses:
            if not Os_membership(t, w.N, z, tol):
                ok = False
                break
            if (rel.eigenspace(w.N, z, tol).dim > 0
                    or rel.eigenspace(w.N, np.conj(z), tol).dim > 0):
                ok = False
                break
        if ok:
            points.append(z)
    return {"points": points, "approximate": True, "witnesses": len(list(witnesses))}


def simple_check(t: LinearRelation, grid,
                 tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Grid-sampled simplicity: no non-real eigenvalues seen and the
    defect subspaces over the grid span the whole space."""
    tplus = rel.adjoint(t, "krein", tol)
    frames = []
    for z in grid:
        z = complex(z)
        if z.imag == 0:
            continue
        if rel.eigenspace(t, z, tol).dim > 0:
            return False
        frames.append(rel.eigenspace(tplus, z, tol).frame)
    if not frames:
        return False
    total = sub.span(np.hstack(frames), tol)
    return total.dim == t.src.dim


def has_property_p(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    p = rel.parts(t, tol)
    return sub.sum_(p.dom, p.ran, tol).dim == t.src.dim


def theorem_ex_check(t: LinearRelation, witnesses, grid,
                     tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Sampled resolvent-set inclusion rho(T0) ⊇ delta(T) per witness.

    The dense-domain hypothesis degenerates in finite dimension, so the
    operative hypothesis recorded here is property (P).
    """
    report = {
        "property_p": has_property_p(t, tol),
        "densely_defined": rel.parts(t, tol).dom.dim == t.src.dim,
        "violations": [],
    }
    delta_grid = [complex(z) for z in grid if delta_membership(t, complex(z), tol)]
    for idx, w in enumerate(witnesses):
        for z in delta_grid:
            if not rel.spectral_probe(w.t0, z, tol)["regular"]:
                report["violations"].append({"witness": idx, "z": z})
    report["ok"] = not report["violations"]
    return report


def lemma_os_check(t: LinearRelation, witness: NWitness, grid,
                   tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Pointwise identity C_* ∩ rho(T0) = O_s(T, N) ∩ delta(N)."""
    mismatches = []
    for z in grid:
        z = complex(z)
        if z.imag == 0:
            continue
        lhs = rel.spectral_probe(witness.t0, z, tol)["regular"]
        rhs = (Os_membership(t, witness.N, z, tol)
               and delta_membership(witness.N, z, tol))
        if lhs != rhs:
            mismatches.append({"z": z, "lhs": lhs, "rhs": rhs})
    return {"ok": not mismatches, "mismatches": mismatches}


def lemma_exn_check(t: LinearRelation, n: LinearRelation, grid,
                    tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """N should be an operator with empty point spectrum.

    Grid points are scanned directly; at ±i the eigenspace formula in
    terms of the halves of the defect subspaces is evaluated as well.
    """
    report = {"is_operator": rel.is_operator(n, tol), "eigenvalues": [],
              "pm_i_trivial": None}
    for z in grid:
        z = complex(z)
        if rel.eigenspace(n, z, tol).dim > 0:
            report["eigenvalues"].append(z)
    ni = defect_subspace(t, 1j, tol)
    nmi = defect_subspace(t, -1j, tol)
    h_plus = sub.kernel(t.src.J - np.eye(t.src.dim), t.src.dim, tol)
    h_minus = sub.kernel(t.src.J + np.eye(t.src.dim), t.src.dim, tol)
    dom_n = rel.parts(n, tol).dom
    n_i = sub.intersect(dom_n, sub.sum_(sub.intersect(h_plus, ni, tol),
                                        sub.intersect(h_minus, nmi, tol), tol), tol)
    n_mi = sub.intersect(dom_n, sub.sum_(sub.intersect(h_plus, nmi, tol),
                                         sub.intersect(h_minus, ni, tol), tol), tol)
    report["pm_i_trivial"] = n_i.dim == 0 and n_mi.dim == 0
    report["ok"] = (report["is_operator"] and not report["eigenvalues"]
                    and report["pm_i_trivial"])
    return report
