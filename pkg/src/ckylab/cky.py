"""Solvers and diagnostics for conformal Killing-Yano forms.

A p-form eta is conformal Killing-Yano (CKY) when for every direction x

    nabla_x eta = 1/(p+1) i_x (d eta) - 1/(n-p+1) x_flat ^ (d* eta),

Killing-Yano (KY) when in addition d* eta = 0, *-KY when in addition
d eta = 0, and parallel when nabla eta = 0.  All four conditions are
linear in the components of eta, so each space is the nullspace of an
assembled matrix.

For 2-forms there is an equivalent symmetrized formulation in terms of
the associated endomorphism T (omega(u, v) = <T u, v>):

    <(nabla_x T)y, z> + <(nabla_y T)x, z>
        = 2<x,y> theta(z) - <y,z> theta(x) - <x,z> theta(y),

with theta determined by a metric trace of nabla T.  Both assemblies
are implemented; their nullspaces must agree and tests enforce that.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .connection import Connection, levi_civita
from .forms import (PForm, covariant_matrix, endo_of_form, exterior_derivative_matrix,
                    codifferential_matrix, flat, form_gram, form_of_endo,
                    interior_matrix, multi_indices, wedge_matrix, zero_form)
from .liealg import MetricLieAlgebra, Subspace, bracket, derived_algebra, center

KINDS = ("cky", "ky", "star-ky", "parallel")
# tolerated spellings on the way in
_KIND_ALIASES = {"star_ky": "star-ky", "starky": "star-ky", "*ky": "star-ky"}


def normalize_kind(kind: str) -> str:
    kind = str(kind).strip().lower()
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def assemble_system(algebra: MetricLieAlgebra, p: int, kind: str = "cky",
                    conn: Connection | None = None) -> np.ndarray:
    """Stacked linear conditions on p-form components for the given kind."""
    kind = normalize_kind(kind)
    n = algebra.dim
    if not 1 <= p <= n - 1:
        raise ValueError(f"form degree must be in 1..{n - 1}, got {p}")
    if conn is None:
        conn = levi_civita(algebra)
    d_mat = exterior_derivative_matrix(algebra, p)
    cod_mat = codifferential_matrix(algebra, p, conn.nabla)
    blocks = []
    for i in range(n):
        e_i = np.zeros(n)
        e_i[i] = 1.0
        row = covariant_matrix(conn.nabla[i], n, p)
        if kind != "parallel":
            row = row - interior_matrix(e_i, n, p + 1) @ d_mat / (p + 1)
            row = row + wedge_matrix(flat(algebra, e_i), p - 1) @ cod_mat / (n - p + 1)
        blocks.append(row)
    if kind == "ky":
        blocks.append(cod_mat)
    elif kind == "star-ky":
        blocks.append(d_mat)
    return np.vstack(blocks)


def assemble_cky_system(algebra: MetricLieAlgebra, p: int,
                        formulation: str = "general",
                        conn: Connection | None = None) -> np.ndarray:
    """CKY condition matrix in either of its two equivalent shapes.

    ``general`` stacks the per-direction conditions on raw p-form
    components for any degree 1 <= p <= n-1; ``symmetrized`` produces
    the trace-eliminated system, which only exists for p = 2.  The two
    must have the same nullspace for p = 2 and tests compare them by
    principal angle.
    """
    if formulation == "general":
        return assemble_system(algebra, p, "cky", conn=conn)
    if formulation == "symmetrized":
        if p != 2:
            raise ValueError(f"the symmetrized formulation needs p = 2, got p = {p}")
        return assemble_symmetrized_system(algebra, conn=conn)
    raise ValueError(f"formulation must be 'general' or 'symmetrized', "
                     f"got {formulation!r}")


def assemble_symmetrized_system(algebra: MetricLieAlgebra,
                                conn: Connection | None = None) -> np.ndarray:
    """Symmetrized 2-form conditions, one row per (i <= j, k) triple.

    theta is eliminated through theta(e_k) = 1/(n-1) sum_{a,b}
    ginv[a,b] <(nabla_a T) e_b, e_k>, so the system acts on the ten
    (for n = 5) 2-form components alone.
    """
    n = algebra.dim
    if conn is None:
        conn = levi_civita(algebra)
    G, ginv = algebra.gram, algebra.gram_inv
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    num_comp = len(multi_indices(n, 2))
    mat = np.empty((len(pairs) * n, num_comp))
    for col in range(num_comp):
        unit = zero_form(n, 2)
        unit.comp[col] = 1.0
        T = endo_of_form(algebra, unit)
        grads = np.array([conn.nabla[a] @ T - T @ conn.nabla[a] for a in range(n)])
        theta = np.einsum("acb,ck,ab->k", grads, G, ginv) / (n - 1)
        # ggrads[a][k, b] = <(nabla_a T) e_b, e_k>
        ggrads = np.einsum("kc,acb->akb", G, grads)
        rows = np.empty(len(pairs) * n)
        r = 0
        for i, j in pairs:
            for k in range(n):
                rows[r] = (ggrads[i][k, j] + ggrads[j][k, i]
                           - 2.0 * G[i, j] * theta[k]
                           + G[j, k] * theta[i] + G[i, k] * theta[j])
                r += 1
        mat[:, col] = rows
    return mat


@dataclass
class SolutionSpace:
    """Canonical basis of a solution space plus solver diagnostics."""

    algebra: MetricLieAlgebra
    degree: int
    kind: str
    basis: np.ndarray           # components x dimension, orthonormal in the form metric
    system_rank: int
    sv_gap: float

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def forms(self) -> list:
        n = self.algebra.dim
        return [PForm(n, self.degree, self.basis[:, k]) for k in range(self.dimension)]

    def contains(self, form: PForm, tol: float = 1e-9) -> bool:
        inner = form_gram(self.algebra, self.degree)
        res = numerics.projection_residual(form.comp, self.basis, inner=inner)
        return res <= tol

    def match_residual(self, form: PForm) -> float:
        """Relative distance from the span, in the form metric."""
        inner = form_gram(self.algebra, self.degree)
        return numerics.projection_residual(form.comp, self.basis, inner=inner)


def solve_form_space(algebra: MetricLieAlgebra, p: int, kind: str = "cky",
                     conn: Connection | None = None) -> SolutionSpace:
    """Nullspace of the assembled system, with a deterministic basis.

    The basis is orthonormal for the induced metric on p-forms and does
    not depend on SVD sign conventions, so equal inputs give bitwise
    comparable outputs across runs.
    """
    kind = normalize_kind(kind)
    mat = assemble_system(algebra, p, kind, conn=conn)
    inner = form_gram(algebra, p)
    basis, rank, gap = numerics.canonical_nullspace(mat, inner=inner,
                                                    rank_rel=algebra.tol.rank_rel)
    return SolutionSpace(algebra=algebra, degree=p, kind=kind, basis=basis,
                         system_rank=rank, sv_gap=gap)


def cky_residual(algebra: MetricLieAlgebra, form: PForm, kind: str = "cky",
                 conn: Connection | None = None, relative: bool = True) -> float:
    """Max-norm violation of the chosen condition by a concrete form."""
    mat = assemble_system(algebra, form.degree, kind, conn=conn)
    raw = float(np.max(np.abs(mat @ form.comp))) if mat.size else 0.0
    if not relative:
        return raw
    scale = float(np.max(np.abs(mat)) * max(np.max(np.abs(form.comp)), 0.0)) if mat.size else 0.0
    return raw / scale if scale > 0 else raw


def symmetrized_residual(algebra: MetricLieAlgebra, endo: np.ndarray,
                         conn: Connection | None = None,
                         theta: np.ndarray | None = None,
                         relative: bool = True) -> float:
    """Violation of the symmetrized 2-form condition by an endomorphism.

    When ``theta`` (components of the associated 1-form) is omitted it
    is computed by the metric trace, which does not require ``endo`` to
    be skew.
    """
    n = algebra.dim
    if conn is None:
        conn = levi_civita(algebra)
    T = np.asarray(endo, dtype=float)
    G, ginv = algebra.gram, algebra.gram_inv
    grads = np.array([conn.nabla[a] @ T - T @ conn.nabla[a] for a in range(n)])
    if theta is None:
        theta = np.einsum("acb,ck,ab->k", grads, G, ginv) / (n - 1)
    ggrads = np.einsum("kc,acb->akb", G, grads)
    worst = 0.0
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                val = (ggrads[i][k, j] + ggrads[j][k, i]
                       - 2.0 * G[i, j] * theta[k]
                       + G[j, k] * theta[i] + G[i, k] * theta[j])
                worst = max(worst, abs(val))
    if not relative:
        return worst
    scale = float(np.max(np.abs(ggrads))) + float(np.max(np.abs(G)) * np.max(np.abs(theta), initial=0.0))
    return worst / scale if scale > 0 else worst


@dataclass
class CKYClassification:
    """Associated 1-form data of a CKY 2-form and the strictness checks."""

    theta: PForm
    xi: np.ndarray
    xi_norm: float
    is_strict: bool
    closed: bool
    coclosed: bool
    parallel: bool
    xi_in_center: bool
    xi_perp_center: bool
    endo: np.ndarray
    t_xi_max: float             # max |T xi|, should vanish
    rank_xi_perp: int | None    # rank of T on xi-perp, n-1 when strict
    derived_pairing: float      # max |<xi, d>| over a derived-algebra basis


def associated_theta(algebra: MetricLieAlgebra, endo: np.ndarray,
                     conn: Connection | None = None) -> np.ndarray:
    """Components of theta = -1/(n-1) d* omega, computed as a metric trace."""
    n = algebra.dim
    if conn is None:
        conn = levi_civita(algebra)
    T = np.asarray(endo, dtype=float)
    grads = np.array([conn.nabla[a] @ T - T @ conn.nabla[a] for a in range(n)])
    return np.einsum("acb,ck,ab->k", grads, algebra.gram, algebra.gram_inv) / (n - 1)


def extract_associated_vector(algebra: MetricLieAlgebra, form: PForm,
                              conn: Connection | None = None) -> CKYClassification:
    """Extract theta, xi and the strictness diagnostics of a CKY 2-form.

    The form must actually satisfy the CKY condition (relative residual
    within tolerance); the zero form is accepted and classified as a
    non-strict parallel form.
    """
    if form.degree != 2:
        raise ValueError("classification applies to 2-forms")
    n = algebra.dim
    if conn is None:
        conn = levi_civita(algebra)
    rel = cky_residual(algebra, form, "cky", conn=conn)
    if form.max_abs() > 0.0 and rel > algebra.tol.residual:
        raise ValueError(f"form is not CKY (relative residual {rel:.3e})")

    T = endo_of_form(algebra, form)
    theta_comp = associated_theta(algebra, T, conn)
    xi = algebra.gram_inv @ theta_comp
    xi_norm = float(np.sqrt(max(theta_comp @ algebra.gram_inv @ theta_comp, 0.0)))
    scale = max(float(np.max(np.abs(T))), 1.0)
    strict = xi_norm > algebra.tol.residual * scale
    t_xi_max = float(np.max(np.abs(T @ xi))) if n else 0.0
    rank_xi_perp = None
    if strict:
        perp, _, _ = numerics.canonical_nullspace(
            (algebra.gram @ xi)[None, :], inner=algebra.gram,
            rank_rel=algebra.tol.rank_rel)
        rank_xi_perp, _ = numerics.svd_rank(T @ perp, algebra.tol.rank_rel)
    der = derived_algebra(algebra)
    pairing = float(np.max(np.abs(theta_comp @ der.basis))) if der.dimension else 0.0

    gate = algebra.tol.residual
    closed = cky_residual(algebra, form, "star-ky", conn=conn) <= gate
    coclosed = cky_residual(algebra, form, "ky", conn=conn) <= gate
    par = cky_residual(algebra, form, "parallel", conn=conn) <= gate
    cen = center(algebra)
    in_res = numerics.projection_residual(xi, cen.basis, inner=algebra.gram) \
        if cen.dimension else (0.0 if xi_norm == 0.0 else 1.0)
    perp_res = (float(np.max(np.abs(cen.basis.T @ algebra.gram @ xi)))
                / max(xi_norm, 1.0)) if cen.dimension else 0.0
    return CKYClassification(theta=PForm(n, 1, theta_comp), xi=xi, xi_norm=xi_norm,
                             is_strict=strict, closed=closed, coclosed=coclosed,
                             parallel=par, xi_in_center=in_res <= gate,
                             xi_perp_center=perp_res <= gate,
                             endo=T, t_xi_max=t_xi_max,
                             rank_xi_perp=rank_xi_perp, derived_pairing=pairing)


# ---------------------------------------------------------------------------
# structural identities on algebras with center of dimension >= 2
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    """Residuals of the center-decomposition identities of a CKY tensor.

    Each entry is the worst violation over G-orthonormal bases of the
    center, its orthogonal complement, and the part of the complement
    orthogonal to xi.  Precondition failures on the tensor itself (xi
    not normalizable, T xi != 0, T not skew) are reported as flags
    rather than exceptions so defective inputs can still be examined.
    """

    residuals: dict
    flags: dict
    dim_center: int
    strict: bool
    xi: np.ndarray
    max_residual: float = field(init=False)

    def __post_init__(self):
        self.max_residual = max(self.residuals.values(), default=0.0)

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol and all(self.flags.values())


def _g_orthonormal(algebra: MetricLieAlgebra, cols: np.ndarray) -> list:
    if cols.size == 0 or cols.shape[1] == 0:
        return []
    basis = numerics.orthonormalize(np.asarray(cols, dtype=float),
                                    inner=algebra.gram)
    return list(numerics.fix_signs(basis).T) if basis.size else []


def _g_complement(algebra: MetricLieAlgebra, cols: np.ndarray) -> np.ndarray:
    """G-orthogonal complement of the column span."""
    if cols.size == 0 or cols.shape[1] == 0:
        return np.eye(algebra.dim)
    comp, _, _ = numerics.canonical_nullspace(cols.T @ algebra.gram,
                                              inner=algebra.gram,
                                              rank_rel=algebra.tol.rank_rel)
    return comp


def structural_identity_report(algebra: MetricLieAlgebra, form_or_endo,
                               xi: np.ndarray | None = None,
                               conn: Connection | None = None) -> IdentityReport:
    """Check the bracket identities forced on a strict CKY tensor.

    Accepts a 2-form or an endomorphism matrix.  When ``xi`` is omitted
    it is derived from the tensor and the pair is rescaled to make xi
    unitary when possible; an explicit ``xi`` is taken as claimed, and
    the ``xi_unit`` / ``xi_perp_center`` flags record whether it is a
    unit vector orthogonal to the center.  Precondition failures are
    reported as flags rather than exceptions so defective inputs can
    still be examined; only an undersized center raises.
    """
    n = algebra.dim
    if conn is None:
        conn = levi_civita(algebra)
    G = algebra.gram
    if isinstance(form_or_endo, PForm):
        T = endo_of_form(algebra, form_or_endo)
        skew_ok = True
    else:
        T = np.asarray(form_or_endo, dtype=float)
        gt = G @ T
        skew_ok = bool(np.max(np.abs(gt + gt.T)) <= 1e-9 * max(1.0, np.max(np.abs(gt))))

    cen = center(algebra)
    if cen.dimension < 2:
        raise ValueError(f"identity report needs a center of dimension >= 2, "
                         f"got {cen.dimension}")

    tscale = max(float(np.max(np.abs(T))), 1.0)
    if xi is None:
        theta = associated_theta(algebra, T, conn)
        xi = algebra.gram_inv @ theta
        xi_norm = float(np.sqrt(max(theta @ algebra.gram_inv @ theta, 0.0)))
        strict = xi_norm > algebra.tol.residual * tscale
        if strict:
            T = T / xi_norm
            theta = theta / xi_norm
            xi = xi / xi_norm
        unit_ok = strict
    else:
        xi = np.asarray(xi, dtype=float)
        theta = G @ xi
        xi_norm = float(np.sqrt(max(xi @ G @ xi, 0.0)))
        strict = xi_norm > algebra.tol.residual * tscale
        unit_ok = bool(abs(xi_norm - 1.0) <= algebra.tol.residual)
    t_xi_ok = bool(np.max(np.abs(T @ xi)) <= algebra.tol.residual
                   * max(float(np.max(np.abs(T))), 1.0))
    perp_ok = bool(cen.dimension == 0 or
                   np.max(np.abs(cen.basis.T @ G @ xi)) <= algebra.tol.residual
                   * max(xi_norm, 1.0))
    flags = {"skew": skew_ok, "xi_unit": unit_ok, "t_xi": t_xi_ok,
             "xi_perp_center": perp_ok}

    zs = _g_orthonormal(algebra, cen.basis)
    xs = _g_orthonormal(algebra, _g_complement(algebra, cen.basis))
    both = np.column_stack([cen.basis, xi[:, None]]) if xi_norm > 0 else cen.basis
    ws = _g_orthonormal(algebra, _g_complement(algebra, both))

    def ip(u, v):
        return float(u @ G @ v)

    def br(u, v):
        return bracket(algebra, u, v)

    def th(u):
        return float(theta @ u)

    res = {key: 0.0 for key in (
        "center_pairing", "center_orthogonal", "center_diagonal",
        "mixed_sym", "mixed_skew", "xi_perp_first", "xi_perp_second",
        "xi_t_xi", "ky_on_complement")}

    def bump(key, val):
        res[key] = max(res[key], abs(val))

    for z1 in zs:
        for z2 in zs:
            for x in xs:
                bump("center_pairing", ip(br(x, T @ z1), z2) - 2.0 * ip(z1, z2) * th(x))
                if z1 is not z2:
                    bump("center_orthogonal", ip(br(T @ z1, x), z2))
        for x in xs:
            bump("center_diagonal", ip(br(T @ z1, x), z1) + 2.0 * ip(z1, z1) * th(x))

    for z in zs:
        for x in xs:
            for y in xs:
                bump("mixed_sym",
                     ip(br(x, T @ y), z) + 2.0 * ip(br(T @ z, x), y)
                     + 2.0 * ip(br(T @ z, y), x) + ip(br(y, T @ x), z))
                bump("mixed_skew",
                     -ip(br(T @ z, x), y) - ip(br(T @ z, y), x)
                     + ip(br(y, x), T @ z) + 2.0 * ip(br(T @ y, x), z)
                     - ip(br(T @ x, y), z))

    for x in ws:
        bump("xi_t_xi", ip(br(xi, T @ x), xi))
        for y in ws:
            bump("xi_perp_first",
                 ip(br(xi, T @ x), y) - ip(br(T @ x, y), xi) + ip(br(y, xi), T @ x)
                 + 2.0 * ip(br(T @ y, xi), x) + 2.0 * ip(br(T @ y, x), xi)
                 + 2.0 * ip(x, y))
            bump("xi_perp_second",
                 ip(br(x, T @ y), xi) - ip(br(T @ y, xi), x) + ip(br(xi, x), T @ y)
                 + ip(br(y, T @ x), xi) - ip(br(T @ x, xi), y) + ip(br(xi, y), T @ x)
                 - 4.0 * ip(x, y))

    nab = [conn.nabla_of(w) for w in ws]
    for a, x in enumerate(ws):
        dx = nab[a] @ T - T @ nab[a]
        for b, y in enumerate(ws):
            dy = nab[b] @ T - T @ nab[b]
            for z in ws:
                bump("ky_on_complement", ip(dx @ y, z) + ip(dy @ x, z))

    return IdentityReport(residuals=res, flags=flags, dim_center=cen.dimension,
                          strict=strict, xi=xi)
