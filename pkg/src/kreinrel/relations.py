"""The algebra of linear relations (multivalued operators) as graphs.

A relation from (H1, J1) to (H2, J2) is a subspace of C^(n1+n2) with the
first block holding domain components.  Everything is eager: sums,
compositions, adjoints and resolvents all normalize back to orthonormal
graph frames, so tolerances stay local to each operation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import subspaces as sub
from .krein import KreinSpace, hilbert_space
from .subspaces import Subspace
from .tolerances import DEFAULT_TOL, DimensionMismatchError, TolerancePolicy, as_matrix


class HostMismatchError(ValueError):
    """Relations live in incompatible Krein spaces."""


class NotRegularError(ValueError):
    """Resolvent-type matrix requested at a non-regular point."""


@dataclass(frozen=True)
class LinearRelation:
    src: KreinSpace
    tgt: KreinSpace
    graph: Subspace = field(repr=False)

    def __post_init__(self):
        if self.graph.ambient_dim != self.src.dim + self.tgt.dim:
            raise DimensionMismatchError("graph ambient must be src.dim + tgt.dim")

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def is_endo(self) -> bool:
        return self.src.dim == self.tgt.dim and np.allclose(self.src.J, self.tgt.J)

    def blocks(self) -> tuple[np.ndarray, np.ndarray]:
        """Domain-side and range-side blocks of the graph frame."""
        f = self.graph.frame
        return f[: self.src.dim, :], f[self.src.dim :, :]


@dataclass(frozen=True)
class RelationParts:
    dom: Subspace
    ran: Subspace
    ker: Subspace
    mul: Subspace


def _same_hosts(a: LinearRelation, b: LinearRelation):
    if not (a.src.same_as(b.src) and a.tgt.same_as(b.tgt)):
        raise HostMismatchError("relations have different host spaces")


def relation(src: KreinSpace, tgt: KreinSpace, vectors,
             tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """Relation from a list of graph vectors (dom block stacked over ran block)."""
    if isinstance(vectors, Subspace):
        return LinearRelation(src, tgt, vectors)
    return LinearRelation(src, tgt, sub.span(vectors, tol))


def zero_relation(src: KreinSpace, tgt: KreinSpace) -> LinearRelation:
    return LinearRelation(src, tgt, sub.trivial(src.dim + tgt.dim))


def identity_relation(space: KreinSpace) -> LinearRelation:
    n = space.dim
    f = np.vstack([np.eye(n), np.eye(n)]).astype(np.complex128) / np.sqrt(2.0)
    return LinearRelation(space, space, Subspace(2 * n, f))


def z_relation(space: KreinSpace, z: complex, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """The relation zI = {(f, z f)}."""
    n = space.dim
    cols = np.vstack([np.eye(n), z * np.eye(n)]).astype(np.complex128)
    return LinearRelation(space, space, sub.span(cols, tol))


def from_operator(m, src: KreinSpace, tgt: KreinSpace,
                  tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    m = as_matrix(m, rows=tgt.dim, cols=src.dim)
    cols = np.vstack([np.eye(src.dim, dtype=np.complex128), m])
    return LinearRelation(src, tgt, sub.span(cols, tol))


def parts(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> RelationParts:
    e, d = t.blocks()
    dom = sub.span(e, tol) if e.size else sub.trivial(t.src.dim)
    ran = sub.span(d, tol) if d.size else sub.trivial(t.tgt.dim)
    ker = sub.span(e @ sub.kernel(d, tol=tol).frame, tol) if t.dim else sub.trivial(t.src.dim)
    mul = sub.span(d @ sub.kernel(e, tol=tol).frame, tol) if t.dim else sub.trivial(t.tgt.dim)
    return RelationParts(dom, ran, ker, mul)


def is_operator(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return parts(t, tol).mul.dim == 0


def to_matrix(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Materialize an everywhere-defined single-valued relation as a matrix."""
    p = parts(t, tol)
    if p.mul.dim != 0 or p.dom.dim != t.src.dim:
        raise NotRegularError("relation is not an everywhere defined operator")
    e, d = t.blocks()
    m = d @ np.linalg.pinv(e)
    if np.linalg.norm(m @ e - d) > 1e-8 * (1.0 + np.linalg.norm(d)):
        raise NotRegularError("matrix extraction failed the consistency check")
    return m


def inverse(t: LinearRelation) -> LinearRelation:
    e, d = t.blocks()
    return LinearRelation(t.tgt, t.src, Subspace(t.graph.ambient_dim, np.vstack([d, e])))


def restrict(t: LinearRelation, dom: Subspace,
             tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """Domain restriction T ∩ (L x H)."""
    if dom.ambient_dim != t.src.dim:
        raise DimensionMismatchError("restriction subspace lives in the wrong space")
    cage = sub.product(dom, sub.full(t.tgt.dim), tol)
    return LinearRelation(t.src, t.tgt, sub.intersect(t.graph, cage, tol))


def compose(outer: LinearRelation, inner: LinearRelation,
            tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """outer ∘ inner: pairs (x, z) with (x, y) in inner, (y, z) in outer."""
    if not inner.tgt.same_as(outer.src):
        raise HostMismatchError("inner space of the composition does not match")
    ei, di = inner.blocks()
    eo, do = outer.blocks()
    match = np.hstack([di, -eo]) if (inner.dim or outer.dim) else np.zeros((inner.tgt.dim, 0))
    k = sub.kernel(match, inner.dim + outer.dim, tol)
    x = k.frame[: inner.dim, :]
    y = k.frame[inner.dim :, :]
    cols = np.vstack([ei @ x, do @ y])
    return LinearRelation(inner.src, outer.tgt, sub.span(cols, tol)
                          if cols.size else sub.trivial(inner.src.dim + outer.tgt.dim))


def shift(t: LinearRelation, z: complex,
          tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """T - zI on an endorelation."""
    if t.src.dim != t.tgt.dim:
        raise HostMismatchError("shift needs an endorelation")
    e, d = t.blocks()
    cols = np.vstack([e, d - z * e])
    return LinearRelation(t.src, t.tgt, sub.span(cols, tol)
                          if cols.size else sub.trivial(t.graph.ambient_dim))


def cw_sum(a: LinearRelation, b: LinearRelation,
           tol: TolerancePolicy = DEFAULT_TOL) -> tuple[LinearRelation, bool]:
    """Componentwise sum; the flag reports Euclidean orthogonality of the graphs."""
    _same_hosts(a, b)
    total = LinearRelation(a.src, a.tgt, sub.sum_(a.graph, b.graph, tol))
    g = a.graph.frame.conj().T @ b.graph.frame
    orthogonal = g.size == 0 or float(np.abs(g).max()) <= tol.angle_tol
    return total, orthogonal


def op_sum(a: LinearRelation, b: LinearRelation,
           tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """Operatorwise sum {(f, f' + g') : (f, f') in A, (f, g') in B}."""
    _same_hosts(a, b)
    ea, da = a.blocks()
    eb, db = b.blocks()
    k = sub.kernel(np.hstack([ea, -eb]), a.dim + b.dim, tol)
    x, y = k.frame[: a.dim, :], k.frame[a.dim :, :]
    cols = np.vstack([ea @ x, da @ x + db @ y])
    return LinearRelation(a.src, a.tgt, sub.span(cols, tol)
                          if cols.size else sub.trivial(a.graph.ambient_dim))


def operator_part(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """T ∩ (H x mul(T)^perp), so that T = operator_part ⊕ ({0} x mul T)."""
    mul = parts(t, tol).mul
    cage = sub.product(sub.full(t.src.dim), sub.complement(mul, tol), tol)
    return LinearRelation(t.src, t.tgt, sub.intersect(t.graph, cage, tol))


def mul_part_relation(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    mul = parts(t, tol).mul
    return LinearRelation(t.src, t.tgt, sub.product(sub.trivial(t.src.dim), mul, tol))


# ---------------------------------------------------------------------------
# adjoints


def _flip_map(n_src: int, n_tgt: int) -> np.ndarray:
    """(a, b) -> (b, -a) from C^(n_src+n_tgt) to C^(n_tgt+n_src)."""
    m = np.zeros((n_tgt + n_src, n_src + n_tgt), dtype=np.complex128)
    m[: n_tgt, n_src :] = np.eye(n_tgt)
    m[n_tgt :, : n_src] = -np.eye(n_src)
    return m


def adjoint(t: LinearRelation, metric: str = "krein",
            tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """Hilbert adjoint T* or Krein adjoint T+ = J1 T* J2.

    The Hilbert adjoint of R: H1 -> H2 is the image of the Euclidean
    graph complement under (a, b) -> (b, -a); for the Krein variant the
    host symmetries are applied on both sides, which for endorelations
    reproduces the indefinite-orthogonal companion of the graph.
    """
    if metric not in ("krein", "hilbert"):
        raise ValueError("metric must be 'krein' or 'hilbert'")
    comp = sub.complement(t.graph, tol)
    star = sub.image(_flip_map(t.src.dim, t.tgt.dim), comp, tol)
    if metric == "hilbert":
        return LinearRelation(hilbert_space(t.tgt.dim), hilbert_space(t.src.dim), star)
    n2, n1 = t.tgt.dim, t.src.dim
    d = np.zeros((n2 + n1, n2 + n1), dtype=np.complex128)
    d[:n2, :n2] = t.tgt.J
    d[n2:, n2:] = t.src.J
    return LinearRelation(t.tgt, t.src, sub.image(d, star, tol))


def is_symmetric(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    if not t.is_endo:
        return False
    return sub.contains(adjoint(t, "krein", tol).graph, t.graph, tol)


def is_selfadjoint(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    if not t.is_endo:
        return False
    return sub.equal(adjoint(t, "krein", tol).graph, t.graph, tol)


# ---------------------------------------------------------------------------
# spectra


def eigenspace(t: LinearRelation, z: complex,
               tol: TolerancePolicy = DEFAULT_TOL) -> Subspace:
    """ker(T - zI) = {f : (f, zf) in T}."""
    e, d = t.blocks()
    if t.dim == 0:
        return sub.trivial(t.src.dim)
    k = sub.kernel(d - z * e, t.dim, tol)
    cols = e @ k.frame
    return sub.span(cols, tol) if cols.size else sub.trivial(t.src.dim)


def graph_eigenspace(t: LinearRelation, z: complex,
                     tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """The graph zI ∩ T over the eigenspace at z."""
    ns = eigenspace(t, z, tol)
    cols = np.vstack([ns.frame, z * ns.frame])
    return LinearRelation(t.src, t.tgt, sub.span(cols, tol)
                          if cols.size else sub.trivial(t.graph.ambient_dim))


def spectral_probe(t: LinearRelation, z: complex,
                   tol: TolerancePolicy = DEFAULT_TOL) -> dict:
    """Point classification; ranges are closed in finite dimension."""
    eig = eigenspace(t, z, tol).dim > 0
    e, d = t.blocks()
    ran_dim = sub.span(d - z * e, tol).dim if t.dim else 0
    regular_type = not eig
    regular = regular_type and ran_dim == t.src.dim
    return {"eigenvalue": eig, "regular_type": regular_type, "regular": regular}


def resolvent_matrix(t: LinearRelation, z: complex,
                     tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """(T - z)^{-1} materialized as a matrix; requires z regular."""
    if not spectral_probe(t, z, tol)["regular"]:
        raise NotRegularError(f"z={z} is not a regular point")
    e, d = t.blocks()
    x1 = d - z * e
    r = e @ np.linalg.pinv(x1)
    if np.linalg.norm(r @ x1 - e) > 1e-8 * (1.0 + np.linalg.norm(e)):
        raise NotRegularError("resolvent extraction failed the consistency check")
    return r


# ---------------------------------------------------------------------------
# Cayley transforms and the angular operator


def post_compose(t: LinearRelation, m, tgt: KreinSpace | None = None,
                 tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """The relation {(f, M f') : (f, f') in T}; used for passing to JT."""
    m = as_matrix(m, cols=t.tgt.dim)
    e, d = t.blocks()
    cols = np.vstack([e, m @ d])
    new_tgt = tgt if tgt is not None else t.tgt
    return LinearRelation(t.src, new_tgt, sub.span(cols, tol)
                          if cols.size else sub.trivial(t.src.dim + new_tgt.dim))


def hilbertize(t: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """JT as a relation in the Euclidean Hilbert space over the same carrier."""
    h = hilbert_space(t.src.dim)
    e, d = t.blocks()
    cols = np.vstack([e, t.src.J @ d])
    return LinearRelation(h, h, sub.span(cols, tol)
                          if cols.size else sub.trivial(2 * h.dim))


def cayley(t0: LinearRelation, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Unitary Cayley transform {(f' + if, f' - if)} of a Hilbert self-adjoint T0."""
    if not t0.src.is_hilbert or not is_selfadjoint(t0, tol):
        raise ValueError("Cayley transform needs a Hilbert-metric self-adjoint relation")
    e, d = t0.blocks()
    top = d + 1j * e
    bottom = d - 1j * e
    if t0.dim != t0.src.dim or np.linalg.matrix_rank(top) < t0.src.dim:
        raise NotRegularError("graph does not parametrize a unitary")
    return bottom @ np.linalg.inv(top)


def inverse_cayley(c, tol: TolerancePolicy = DEFAULT_TOL) -> LinearRelation:
    """Relation {((g - Cg)/2i, (g + Cg)/2) : g}; self-adjoint for unitary C."""
    c = as_matrix(c)
    n = c.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    cols = np.vstack([(eye - c) / 2j, (eye + c) / 2.0])
    h = hilbert_space(n)
    return LinearRelation(h, h, sub.span(cols, tol))


def vz_operator(t0: LinearRelation, z: complex,
                tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """V_z = I + 2z (T0 - z)^{-1} for a Hilbert self-adjoint relation."""
    if z.imag == 0:
        raise NotRegularError("V_z is defined off the real axis")
    return np.eye(t0.src.dim, dtype=np.complex128) + 2 * z * resolvent_matrix(t0, z, tol)


def kplus_frame(space: KreinSpace) -> np.ndarray:
    """Canonical orthonormal frame of the positive component of (H^2, J_hat)."""
    n = space.dim
    return np.vstack([np.eye(n), 1j * space.J]).astype(np.complex128) / np.sqrt(2.0)


def kminus_frame(space: KreinSpace) -> np.ndarray:
    n = space.dim
    return np.vstack([np.eye(n), -1j * space.J]).astype(np.complex128) / np.sqrt(2.0)


def angular_operator(t0: LinearRelation, t: LinearRelation,
                     tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Angular operator of graph(T0) against the canonical K+/K- frames.

    Returned as the coordinate matrix K with graph(T0) spanned by
    kplus_frame + kminus_frame @ K; it equals minus the Cayley transform
    of JT0 and is a Euclidean isometry K+ -> K-.
    """
    if not is_selfadjoint(t0, tol):
        raise ValueError("angular operator needs a self-adjoint relation")
    c = cayley(hilbertize(t0, tol), tol)
    return -c
