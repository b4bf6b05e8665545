"""Exterior algebra over a metric Lie algebra.

A p-form is stored as the vector of its components over increasing
multi-indices in lexicographic order, so a 2-form on a 5-dimensional
algebra has C(5,2) = 10 components ordered (0,1), (0,2), ..., (3,4).
All operators below (wedge, interior product, exterior derivative,
covariant derivative, Hodge star, codifferential) are linear in those
components, and each has a matrix builder so solvers can assemble
linear systems directly.

The exterior derivative is the Chevalley-Eilenberg differential of the
algebra acting on left-invariant forms.  The codifferential comes in
two independently coded routes (a trace over covariant derivatives and
a Hodge-star conjugation) that are checked against each other in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .liealg import MetricLieAlgebra


@lru_cache(maxsize=None)
def multi_indices(n: int, p: int) -> tuple:
    """Increasing p-tuples from range(n) in lexicographic order."""
    if p < 0 or p > n:
        return ()
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def _index_lookup(n: int, p: int) -> dict:
    return {idx: pos for pos, idx in enumerate(multi_indices(n, p))}


def _sorted_with_sign(indices) -> tuple:
    """(sorted tuple, permutation sign), or (None, 0) on a repeated index."""
    indices = list(indices)
    sign = 1
    # insertion sort, counting swaps
    for a in range(1, len(indices)):
        b = a
        while b > 0 and indices[b - 1] > indices[b]:
            indices[b - 1], indices[b] = indices[b], indices[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(indices)):
        if indices[a - 1] == indices[a]:
            return None, 0
    return tuple(indices), sign


@dataclass
class PForm:
    """Left-invariant p-form: degree plus component vector."""

    n: int
    degree: int
    comp: np.ndarray

    def __post_init__(self):
        self.comp = np.asarray(self.comp, dtype=float)
        want = len(multi_indices(self.n, self.degree))
        if self.comp.shape != (want,):
            raise ValueError(
                f"degree {self.degree} form on dim {self.n} needs {want} components, "
                f"got shape {self.comp.shape}")

    def __add__(self, other: "PForm") -> "PForm":
        self._check(other)
        return PForm(self.n, self.degree, self.comp + other.comp)

    def __sub__(self, other: "PForm") -> "PForm":
        self._check(other)
        return PForm(self.n, self.degree, self.comp - other.comp)

    def __mul__(self, scalar: float) -> "PForm":
        return PForm(self.n, self.degree, self.comp * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "PForm":
        return PForm(self.n, self.degree, -self.comp)

    def _check(self, other: "PForm"):
        if (self.n, self.degree) != (other.n, other.degree):
            raise ValueError("forms live on different spaces")

    def __getitem__(self, indices) -> float:
        """Component at any index tuple, with antisymmetry signs applied."""
        key, sign = _sorted_with_sign(tuple(indices))
        if sign == 0:
            return 0.0
        pos = _index_lookup(self.n, self.degree).get(key)
        if pos is None:
            raise KeyError(f"indices {indices} out of range")
        return sign * float(self.comp[pos])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.comp))) if self.comp.size else 0.0


def zero_form(n: int, p: int) -> PForm:
    return PForm(n, p, np.zeros(len(multi_indices(n, p))))


def form_from_terms(n: int, p: int, terms: dict) -> PForm:
    """Build from {index tuple: coefficient}; tuples may be unordered."""
    comp = np.zeros(len(multi_indices(n, p)))
    lookup = _index_lookup(n, p)
    for indices, coeff in terms.items():
        key, sign = _sorted_with_sign(tuple(indices))
        if sign == 0:
            raise ValueError(f"repeated index in {indices}")
        if key not in lookup:
            raise ValueError(f"indices {indices} not valid for (n={n}, p={p})")
        comp[lookup[key]] += sign * coeff
    return PForm(n, p, comp)


def evaluate(form: PForm, *vectors) -> float:
    """eta(v_1, ..., v_p) via minors of the column matrix of the arguments."""
    if len(vectors) != form.degree:
        raise ValueError(f"degree {form.degree} form takes {form.degree} arguments")
    if form.degree == 0:
        return float(form.comp[0])
    mat = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    total = 0.0
    for pos, idx in enumerate(multi_indices(form.n, form.degree)):
        if form.comp[pos] != 0.0:
            total += form.comp[pos] * np.linalg.det(mat[idx, :])
    return float(total)


def wedge(a: PForm, b: PForm) -> PForm:
    """Exterior product; degrees add, result is zero when they exceed n."""
    if a.n != b.n:
        raise ValueError("forms live on different spaces")
    n, p, q = a.n, a.degree, b.degree
    out = zero_form(n, p + q)
    if p + q > n:
        return out
    lookup = _index_lookup(n, p + q)
    la, lb = _index_lookup(n, p), _index_lookup(n, q)
    for key in multi_indices(n, p + q):
        acc = 0.0
        for positions in combinations(range(p + q), p):
            ia = tuple(key[t] for t in positions)
            ib = tuple(key[t] for t in range(p + q) if t not in positions)
            # sign of the shuffle (ia, ib) inside key
            sign = 1
            for rank, t in enumerate(positions):
                sign *= (-1) ** (t - rank)
            acc += sign * a.comp[la[ia]] * b.comp[lb[ib]]
        out.comp[lookup[key]] = acc
    return out


def interior(vector, form: PForm) -> PForm:
    """Contraction in the first slot: (i_v eta)(u...) = eta(v, u...)."""
    if form.degree == 0:
        raise ValueError("cannot contract a 0-form")
    v = np.asarray(vector, dtype=float)
    n, p = form.n, form.degree
    out = zero_form(n, p - 1)
    lookup = _index_lookup(n, p)
    for pos, rest in enumerate(multi_indices(n, p - 1)):
        acc = 0.0
        for i in range(n):
            if v[i] == 0.0 or i in rest:
                continue
            slot = sum(1 for r in rest if r < i)
            key = tuple(sorted(rest + (i,)))
            acc += (-1) ** slot * v[i] * form.comp[lookup[key]]
        out.comp[pos] = acc
    return out


def flat(algebra: MetricLieAlgebra, vector) -> PForm:
    """Metric dual 1-form of a vector."""
    return PForm(algebra.dim, 1, algebra.gram @ np.asarray(vector, dtype=float))


def sharp(algebra: MetricLieAlgebra, form: PForm) -> np.ndarray:
    """Metric dual vector of a 1-form."""
    if form.degree != 1:
        raise ValueError("sharp takes a 1-form")
    return algebra.gram_inv @ form.comp


# ---------------------------------------------------------------------------
# operator matrices
# ---------------------------------------------------------------------------


def derivation_matrix(endo: np.ndarray, n: int, p: int) -> np.ndarray:
    """Matrix of eta -> sum_a eta(u_1, ..., A u_a, ..., u_p) on components."""
    endo = np.asarray(endo, dtype=float)
    rows = multi_indices(n, p)
    lookup = _index_lookup(n, p)
    mat = np.zeros((len(rows), len(rows)))
    for rpos, J in enumerate(rows):
        for a in range(p):
            for m in range(n):
                if endo[m, J[a]] == 0.0:
                    continue
                key, sign = _sorted_with_sign(J[:a] + (m,) + J[a + 1:])
                if sign:
                    mat[rpos, lookup[key]] += sign * endo[m, J[a]]
    return mat


def covariant_matrix(nabla_i: np.ndarray, n: int, p: int) -> np.ndarray:
    """Matrix of the covariant derivative along one direction.

    ``nabla_i`` is the endomorphism u -> nabla_{e_i} u; for forms with
    constant components the derivative is minus the induced derivation.
    """
    return -derivation_matrix(nabla_i, n, p)


def interior_matrix(vector, n: int, p: int) -> np.ndarray:
    """Matrix of i_v: p-components -> (p-1)-components."""
    cols = []
    for pos in range(len(multi_indices(n, p))):
        unit = zero_form(n, p)
        unit.comp[pos] = 1.0
        cols.append(interior(vector, unit).comp)
    if not cols:
        return np.zeros((len(multi_indices(n, p - 1)), 0))
    return np.column_stack(cols)


def wedge_matrix(left: PForm, p: int) -> np.ndarray:
    """Matrix of eta -> left ^ eta on p-components."""
    n = left.n
    cols = []
    for pos in range(len(multi_indices(n, p))):
        unit = zero_form(n, p)
        unit.comp[pos] = 1.0
        cols.append(wedge(left, unit).comp)
    if not cols:
        return np.zeros((len(multi_indices(n, left.degree + p)), 0))
    return np.column_stack(cols)


def exterior_derivative_matrix(algebra: MetricLieAlgebra, p: int) -> np.ndarray:
    """Matrix of d: p-components -> (p+1)-components (structure-constant differential)."""
    n = algebra.dim
    rows = multi_indices(n, p + 1)
    cols = _index_lookup(n, p)
    mat = np.zeros((len(rows), len(multi_indices(n, p))))
    if p < 0 or p >= n:
        return mat
    c = algebra.structure
    for rpos, K in enumerate(rows):
        for a in range(p + 1):
            for b in range(a + 1, p + 1):
                coeffs = c[K[a], K[b]]
                rest = K[:a] + K[a + 1:b] + K[b + 1:]
                for m in np.nonzero(coeffs)[0]:
                    key, sign = _sorted_with_sign((m,) + rest)
                    if sign:
                        mat[rpos, cols[key]] += (-1) ** (a + b) * coeffs[m] * sign
    return mat


def exterior_derivative(algebra: MetricLieAlgebra, form: PForm) -> PForm:
    mat = exterior_derivative_matrix(algebra, form.degree)
    return PForm(algebra.dim, form.degree + 1, mat @ form.comp)


def codifferential_matrix(algebra: MetricLieAlgebra, p: int,
                          nabla: np.ndarray) -> np.ndarray:
    """Matrix of d*: p-components -> (p-1)-components, as a metric trace.

    d* eta = -sum_a i_{(e^a)#} (nabla_{e_a} eta), with ``nabla`` the
    (n, n, n) stack of directional derivative endomorphisms.
    """
    n = algebra.dim
    rows = multi_indices(n, p - 1)
    out = np.zeros((len(rows), len(multi_indices(n, p))))
    if p <= 0:
        return out
    ginv = algebra.gram_inv
    lookup = _index_lookup(n, p)
    for a in range(n):
        nab = covariant_matrix(nabla[a], n, p)
        # contraction with (e^a)# = sum_b ginv[a, b] e_b, applied to nab @ eta
        contract = np.zeros((len(rows), len(multi_indices(n, p))))
        for rpos, rest in enumerate(rows):
            for b in range(n):
                if ginv[a, b] == 0.0 or b in rest:
                    continue
                slot = sum(1 for r in rest if r < b)
                key = tuple(sorted(rest + (b,)))
                contract[rpos, lookup[key]] += (-1) ** slot * ginv[a, b]
        out -= contract @ nab
    return out


def compound_matrix(mat: np.ndarray, p: int) -> np.ndarray:
    """p-th compound: minors det(mat[I, J]) over increasing index tuples."""
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0]
    idx = multi_indices(n, p)
    if p == 0:
        return np.ones((1, 1))
    out = np.empty((len(idx), len(idx)))
    for rpos, I in enumerate(idx):
        sub = mat[np.ix_(I, range(n))]
        for cpos, J in enumerate(idx):
            out[rpos, cpos] = np.linalg.det(sub[:, J])
    return out


def form_gram(algebra: MetricLieAlgebra, p: int) -> np.ndarray:
    """Gram matrix of the induced inner product on p-form components."""
    return compound_matrix(algebra.gram_inv, p)


def form_inner(algebra: MetricLieAlgebra, a: PForm, b: PForm) -> float:
    a._check(b)
    return float(a.comp @ form_gram(algebra, a.degree) @ b.comp)


def form_norm(algebra: MetricLieAlgebra, a: PForm) -> float:
    return float(np.sqrt(max(form_inner(algebra, a, a), 0.0)))


def volume_form(algebra: MetricLieAlgebra) -> PForm:
    """Riemannian volume form for the standard orientation of the basis."""
    n = algebra.dim
    comp = np.zeros(1)
    comp[0] = np.sqrt(np.linalg.det(algebra.gram))
    return PForm(n, n, comp)


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _frame_star(n: int, p: int) -> np.ndarray:
    """Hodge star on components in an orthonormal oriented frame."""
    src = multi_indices(n, p)
    dst = _index_lookup(n, n - p)
    mat = np.zeros((len(multi_indices(n, n - p)), len(src)))
    for cpos, I in enumerate(src):
        comp_idx = tuple(i for i in range(n) if i not in I)
        mat[dst[comp_idx], cpos] = _perm_sign(I + comp_idx)
    return mat


def hodge_star_matrix(algebra: MetricLieAlgebra, p: int) -> np.ndarray:
    """Matrix of *: p-components -> (n-p)-components.

    Components are moved to a G-orthonormal frame (an orientation
    preserving change since G^(-1/2) has positive determinant), starred
    there, and moved back.
    """
    n = algebra.dim
    to_frame = compound_matrix(algebra.frame, p).T
    from_frame = compound_matrix(algebra.frame_inv, n - p).T
    return from_frame @ _frame_star(n, p) @ to_frame


def hodge_star(algebra: MetricLieAlgebra, form: PForm) -> PForm:
    mat = hodge_star_matrix(algebra, form.degree)
    return PForm(algebra.dim, algebra.dim - form.degree, mat @ form.comp)


def codifferential_matrix_star(algebra: MetricLieAlgebra, p: int) -> np.ndarray:
    """Codifferential assembled as a Hodge-star conjugation of d.

    On p-forms in dimension n the sign is (-1)^(n(p+1)+1), so this
    route is sign-correct in every (n, p), and it needs no connection.
    """
    n = algebra.dim
    if p <= 0:
        return np.zeros((len(multi_indices(n, p - 1)), len(multi_indices(n, p))))
    sign = (-1) ** (n * (p + 1) + 1)
    star_p = hodge_star_matrix(algebra, p)
    d_mid = exterior_derivative_matrix(algebra, n - p)
    star_back = hodge_star_matrix(algebra, n - p + 1)
    return sign * (star_back @ d_mid @ star_p)


def codifferential(algebra: MetricLieAlgebra, form: PForm,
                   nabla: np.ndarray | None = None) -> PForm:
    """d* of a form; uses the trace route when a connection is supplied."""
    if nabla is not None:
        mat = codifferential_matrix(algebra, form.degree, nabla)
    else:
        mat = codifferential_matrix_star(algebra, form.degree)
    return PForm(algebra.dim, form.degree - 1, mat @ form.comp)


# ---------------------------------------------------------------------------
# 2-form / endomorphism dictionary: omega(u, v) = <T u, v>
# ---------------------------------------------------------------------------


def skew_matrix_of_form(form: PForm) -> np.ndarray:
    """Antisymmetric matrix W with W[i, j] = omega(e_i, e_j)."""
    if form.degree != 2:
        raise ValueError("expected a 2-form")
    n = form.n
    W = np.zeros((n, n))
    for pos, (i, j) in enumerate(multi_indices(n, 2)):
        W[i, j] = form.comp[pos]
        W[j, i] = -form.comp[pos]
    return W


def form_of_skew_matrix(W: np.ndarray) -> PForm:
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    comp = np.array([W[i, j] for i, j in multi_indices(n, 2)])
    return PForm(n, 2, comp)


def endo_of_form(algebra: MetricLieAlgebra, form: PForm) -> np.ndarray:
    """T with omega(u, v) = <T u, v>; G-skew by construction."""
    return -algebra.gram_inv @ skew_matrix_of_form(form)


def form_of_endo(algebra: MetricLieAlgebra, endo: np.ndarray) -> PForm:
    """Inverse of ``endo_of_form`` for G-skew endomorphisms."""
    W = np.asarray(endo, dtype=float).T @ algebra.gram
    skew_defect = np.max(np.abs(W + W.T))
    if skew_defect > 1e-9 * max(1.0, np.max(np.abs(W))):
        raise ValueError("endomorphism is not skew for the metric")
    return form_of_skew_matrix(0.5 * (W - W.T))


# ---------------------------------------------------------------------------
# JSON interchange: {"degree": p, "terms": [{"indices": [...], "coeff": x}]}
# with 0-based strictly increasing indices
# ---------------------------------------------------------------------------


def form_from_dict(data: dict, n: int) -> PForm:
    try:
        p = int(data["degree"])
        raw = data.get("terms", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed form dict: {exc}") from exc
    terms = {}
    for entry in raw:
        try:
            idx = tuple(int(i) for i in entry["indices"])
            coeff = float(entry["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed form term {entry!r}: {exc}") from exc
        if len(idx) != p:
            raise ValueError(f"term {entry!r} does not have {p} indices")
        if any(i < 0 or i >= n for i in idx):
            raise ValueError(f"term indices {idx} out of range for dim {n}")
        terms[idx] = terms.get(idx, 0.0) + coeff
    return form_from_terms(n, p, terms)


def form_to_dict(form: PForm, zero_tol: float = 0.0) -> dict:
    terms = []
    for pos, idx in enumerate(multi_indices(form.n, form.degree)):
        val = float(form.comp[pos])
        if abs(val) > zero_tol:
            terms.append({"indices": list(idx), "coeff": val})
    return {"degree": form.degree, "terms": terms}
