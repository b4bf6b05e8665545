"""Exact-rational mirror of the float pipeline.

Everything here recomputes the chain

    structure constants -> connection -> d, d* -> solution system -> rank

over ``fractions.Fraction``, with Gauss elimination in place of the
SVD, sharing nothing with the float path except index combinatorics.
It exists as an independent oracle: on rational inputs the float
solver's dimensions must agree with the exact ranks computed here, and
the central-extension pipeline must reproduce printed bracket tables
with literally zero residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import catalog
from .forms import multi_indices, _index_lookup, _sorted_with_sign
from .liealg import MetricLieAlgebra, build_structure

Q = Fraction


# ---------------------------------------------------------------------------
# dense exact linear algebra on nested lists
# ---------------------------------------------------------------------------


def qmat(rows) -> list:
    return [[Q(v) for v in row] for row in rows]


def zeros(m: int, n: int) -> list:
    return [[Q(0)] * n for _ in range(m)]


def identity(n: int) -> list:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


def transpose(A: list) -> list:
    return [list(col) for col in zip(*A)]


def mat_mul(A: list, B: list) -> list:
    bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in A]


def mat_vec(A: list, v: list) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def mat_sub(A: list, B: list) -> list:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def max_abs(A: list) -> Fraction:
    worst = Q(0)
    for row in A:
        for v in row:
            if abs(v) > worst:
                worst = abs(v)
    return worst


def rref(mat: list) -> tuple:
    """Reduced row echelon form and pivot column list, exactly."""
    A = [list(row) for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if A[i][c] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [v - f * w for v, w in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank_exact(mat: list) -> int:
    if not mat:
        return 0
    return len(rref(mat)[1])


def nullspace_exact(mat: list) -> list:
    """Basis vectors (lists of Fractions) of the exact nullspace."""
    if not mat:
        return []
    n = len(mat[0])
    A, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Q(0)] * n
        vec[fc] = Q(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -A[r][fc]
        basis.append(vec)
    return basis


def mat_inverse(A: list) -> list:
    n = len(A)
    aug = [list(row) + list(idr) for row, idr in zip(A, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# exact metric Lie algebra and connection
# ---------------------------------------------------------------------------


@dataclass
class RationalAlgebra:
    """Structure tensor and Gram matrix with Fraction entries."""

    structure: list     # c[i][j][k]
    gram: list

    @property
    def dim(self) -> int:
        return len(self.gram)

    def gram_inv(self) -> list:
        return mat_inverse(self.gram)

    def to_float(self) -> MetricLieAlgebra:
        n = self.dim
        c = np.array([[[float(self.structure[i][j][k]) for k in range(n)]
                       for j in range(n)] for i in range(n)])
        return MetricLieAlgebra(c, np.array([[float(v) for v in row]
                                             for row in self.gram]))


def structure_from_brackets(n: int, brackets: dict) -> list:
    c = [[[Q(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), coeffs in brackets.items():
        for k, v in coeffs.items():
            c[i][j][k] += Q(v)
            c[j][i][k] -= Q(v)
    return c


def jacobi_max(alg: RationalAlgebra) -> Fraction:
    n = alg.dim
    c = alg.structure
    worst = Q(0)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    tot = sum(c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l]
                              + c[k][i][m] * c[m][j][l] for m in range(n))
                    if abs(tot) > worst:
                        worst = abs(tot)
    return worst


def levi_civita_exact(alg: RationalAlgebra) -> list:
    """nabla[i][a][j]: coordinate a of nabla_{e_i} e_j, by the Koszul formula."""
    n = alg.dim
    c, G = alg.structure, alg.gram
    ginv = alg.gram_inv()
    cg = [[[sum(c[i][j][m] * G[m][k] for m in range(n)) for k in range(n)]
           for j in range(n)] for i in range(n)]
    half = Q(1, 2)
    nabla = [[[Q(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for a in range(n):
                nabla[i][a][j] = half * sum(
                    ginv[a][b] * (cg[i][j][b] - cg[j][b][i] + cg[b][i][j])
                    for b in range(n))
    return nabla


def rational_family(family_id: str, params: dict) -> tuple:
    """(RationalAlgebra, reference 2-form components or None), exactly.

    Raises on the two families whose data requires square roots.
    """
    if family_id in ("su2xR2", "sl2xR2"):
        raise ValueError(f"family {family_id} has irrational data")
    spec = catalog.FamilySpec(family_id, dict(params))
    qparams = {k: Q(v) for k, v in spec.params.items()}
    br, metric, omega = catalog.family_data(spec.family_id, qparams)
    alg = RationalAlgebra(structure_from_brackets(5, br), qmat(metric))
    ref = None
    if omega is not None:
        lookup = _index_lookup(5, 2)
        ref = [Q(0)] * len(lookup)
        for ij, v in omega.items():
            ref[lookup[ij]] = Q(v)
    return alg, ref


# ---------------------------------------------------------------------------
# exact exterior calculus operators
# ---------------------------------------------------------------------------


def derivation_matrix_exact(endo: list, n: int, p: int) -> list:
    rows = multi_indices(n, p)
    lookup = _index_lookup(n, p)
    mat = zeros(len(rows), len(rows))
    for rpos, J in enumerate(rows):
        for a in range(p):
            for m in range(n):
                if endo[m][J[a]] == 0:
                    continue
                key, sign = _sorted_with_sign(J[:a] + (m,) + J[a + 1:])
                if sign:
                    mat[rpos][lookup[key]] += sign * endo[m][J[a]]
    return mat


def covariant_matrix_exact(nabla_i: list, n: int, p: int) -> list:
    return [[-v for v in row] for row in derivation_matrix_exact(nabla_i, n, p)]


def interior_matrix_exact(vec: list, n: int, p: int) -> list:
    rows = multi_indices(n, p - 1)
    lookup = _index_lookup(n, p)
    mat = zeros(len(rows), len(multi_indices(n, p)))
    for rpos, rest in enumerate(rows):
        for i in range(n):
            if vec[i] == 0 or i in rest:
                continue
            slot = sum(1 for r in rest if r < i)
            key = tuple(sorted(rest + (i,)))
            mat[rpos][lookup[key]] += (-1) ** slot * vec[i]
    return mat


def wedge_matrix_exact(left: list, q: int, n: int, p: int) -> list:
    """Matrix of eta -> alpha ^ eta for a q-form alpha given by components."""
    from itertools import combinations
    la, lb = _index_lookup(n, q), _index_lookup(n, p)
    out_idx = multi_indices(n, p + q)
    mat = zeros(len(out_idx), len(multi_indices(n, p)))
    if p + q > n:
        return mat
    for rpos, key in enumerate(out_idx):
        for positions in combinations(range(p + q), q):
            ia = tuple(key[t] for t in positions)
            ib = tuple(key[t] for t in range(p + q) if t not in positions)
            if left[la[ia]] == 0:
                continue
            sign = 1
            for rank, t in enumerate(positions):
                sign *= (-1) ** (t - rank)
            mat[rpos][lb[ib]] += sign * left[la[ia]]
    return mat


def exterior_derivative_matrix_exact(alg: RationalAlgebra, p: int) -> list:
    n = alg.dim
    rows = multi_indices(n, p + 1)
    cols = _index_lookup(n, p)
    mat = zeros(len(rows), len(multi_indices(n, p)))
    if p < 0 or p >= n:
        return mat
    c = alg.structure
    for rpos, K in enumerate(rows):
        for a in range(p + 1):
            for b in range(a + 1, p + 1):
                rest = K[:a] + K[a + 1:b] + K[b + 1:]
                for m in range(n):
                    if c[K[a]][K[b]][m] == 0:
                        continue
                    key, sign = _sorted_with_sign((m,) + rest)
                    if sign:
                        mat[rpos][cols[key]] += ((-1) ** (a + b)
                                                 * c[K[a]][K[b]][m] * sign)
    return mat


def codifferential_matrix_exact(alg: RationalAlgebra, p: int, nabla: list) -> list:
    n = alg.dim
    rows = multi_indices(n, p - 1)
    ncols = len(multi_indices(n, p))
    out = zeros(len(rows), ncols)
    if p <= 0:
        return out
    ginv = alg.gram_inv()
    lookup = _index_lookup(n, p)
    for a in range(n):
        nab = covariant_matrix_exact(nabla[a], n, p)
        contract = zeros(len(rows), ncols)
        for rpos, rest in enumerate(rows):
            for b in range(n):
                if ginv[a][b] == 0 or b in rest:
                    continue
                slot = sum(1 for r in rest if r < b)
                key = tuple(sorted(rest + (b,)))
                contract[rpos][lookup[key]] += (-1) ** slot * ginv[a][b]
        out = mat_sub(out, mat_mul(contract, nab))
    return out


def assemble_system_exact(alg: RationalAlgebra, p: int, kind: str = "cky") -> list:
    """Exact mirror of the float solution system for any of the four kinds."""
    n = alg.dim
    nabla = levi_civita_exact(alg)
    d_mat = exterior_derivative_matrix_exact(alg, p)
    cod_mat = codifferential_matrix_exact(alg, p, nabla)
    blocks = []
    for i in range(n):
        row = covariant_matrix_exact(nabla[i], n, p)
        if kind != "parallel":
            int_d = mat_mul(interior_matrix_exact(
                [Q(1) if a == i else Q(0) for a in range(n)], n, p + 1), d_mat)
            flat_i = [alg.gram[a][i] for a in range(len(alg.gram))]
            wedge_cod = mat_mul(wedge_matrix_exact(flat_i, 1, n, p - 1), cod_mat)
            pp, qq = Q(1, p + 1), Q(1, n - p + 1)
            row = [[rv - pp * iv + qq * wv for rv, iv, wv in zip(rr, ir, wr)]
                   for rr, ir, wr in zip(row, int_d, wedge_cod)]
        blocks.extend(row)
    if kind == "ky":
        blocks.extend(cod_mat)
    elif kind == "star-ky":
        blocks.extend(d_mat)
    return blocks


def solution_dimension_exact(alg: RationalAlgebra, p: int,
                             kind: str = "cky") -> int:
    """Exact dimension of the solution space for one kind and degree."""
    mat = assemble_system_exact(alg, p, kind)
    return len(multi_indices(alg.dim, p)) - rank_exact(mat)


# ---------------------------------------------------------------------------
# exact central extension pipeline
# ---------------------------------------------------------------------------


def central_extension_exact(h_structure: list, h_gram: list, S: list,
                            xi_norm=Q(1)) -> tuple:
    """(structure, gram, omega matrix) of the extension, all Fractions.

    Same preconditions as the float pipeline but enforced exactly: S
    metric-skew, invertible and parallel, the induced 2-cocycle closed.
    """
    m = len(h_gram)
    if m != 4:
        raise ValueError(f"the extended algebra must be 4-dimensional, got dim {m}")
    h = RationalAlgebra(h_structure, h_gram)
    gs = mat_mul(h.gram, S)
    if any(gs[i][j] + gs[j][i] != 0 for i in range(m) for j in range(m)):
        raise ValueError("S is not skew for the metric")
    s_inv = mat_inverse(S)  # raises when singular
    nabla = levi_civita_exact(h)
    for i in range(m):
        comm = mat_sub(mat_mul(nabla[i], S), mat_mul(S, nabla[i]))
        if max_abs(comm) != 0:
            raise ValueError("S is not parallel")

    mu = [[-2 * sum(s_inv[k][i] * h_gram[k][j] for k in range(m))
           for j in range(m)] for i in range(m)]
    lookup = _index_lookup(m, 2)
    mu_comp = [Q(0)] * len(lookup)
    for (i, j), pos in lookup.items():
        mu_comp[pos] = mu[i][j]
    dmat = exterior_derivative_matrix_exact(h, 2)
    if any(v != 0 for v in mat_vec(dmat, mu_comp)):
        raise ValueError("mu is not closed")

    n = m + 1
    structure = [[[Q(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                structure[i][j][k] = h_structure[i][j][k]
            structure[i][j][m] = mu[i][j]
    gram = [[Q(0)] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            gram[i][j] = h_gram[i][j]
    gram[m][m] = Q(xi_norm) ** 2
    # omega(e_i, e_j) = <S e_i, e_j> on h, zero against xi
    W = [[Q(0)] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            W[i][j] = sum(S[k][i] * h_gram[k][j] for k in range(m))
    return structure, gram, W


def extension_from_ingredients(family_id: str, params: dict) -> tuple:
    """Exact extension from the stored 4-dimensional data of a family.

    Returns (structure, gram, omega matrix, relabel matrix), with the
    relabel columns expressing the catalog basis in extension
    coordinates.
    """
    spec = catalog.FamilySpec(family_id, dict(params))
    qparams = {k: Q(v) for k, v in spec.params.items()}
    hbr, hmetric, srows, relabel = catalog.table1_data(spec.family_id, qparams)
    h_structure = structure_from_brackets(4, hbr)
    structure, gram, W = central_extension_exact(h_structure, qmat(hmetric),
                                                 qmat(srows))
    return structure, gram, W, qmat(relabel)


def push_structure(structure: list, phi: list) -> list:
    """Structure constants in the basis given by the columns of phi."""
    n = len(phi)
    phi_inv = mat_inverse(phi)
    out = [[[Q(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            img = [Q(0)] * n
            for a in range(n):
                if phi[a][i] == 0:
                    continue
                for b in range(n):
                    if phi[b][j] == 0:
                        continue
                    for mth in range(n):
                        img[mth] += phi[a][i] * phi[b][j] * structure[a][b][mth]
            coords = mat_vec(phi_inv, img)
            for k in range(n):
                out[i][j][k] = coords[k]
    return out


def relabeled_extension(family_id: str, params: dict) -> tuple:
    """Exact (structure, gram, omega matrix) in the catalog basis."""
    structure, gram, W, phi = extension_from_ingredients(family_id, params)
    phit = transpose(phi)
    return (push_structure(structure, phi),
            mat_mul(phit, mat_mul(gram, phi)),
            mat_mul(phit, mat_mul(W, phi)))


def family_tensors_exact(family_id: str, params: dict) -> tuple:
    """Exact (structure, gram, omega matrix) straight from the catalog data."""
    alg, ref = rational_family(family_id, params)
    W = [[Q(0)] * 5 for _ in range(5)]
    if ref is not None:
        for pos, (i, j) in enumerate(multi_indices(5, 2)):
            W[i][j] = ref[pos]
            W[j][i] = -ref[pos]
    return alg.structure, alg.gram, W
