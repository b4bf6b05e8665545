"""Metric Lie algebras given by structure constants and a Gram matrix.

Conventions used everywhere in this package:

* vectors are coordinate arrays over the chosen basis (e_1, ..., e_n),
* endomorphisms are n x n matrices acting on coordinates,
* ``structure[i, j, k]`` is the e_k coefficient of [e_i, e_j],
* ``gram[i, j] = <e_i, e_j>`` is symmetric positive definite.

Labels are decorative: every computation works on indices, and two
algebras with identical tensors but different labels behave identically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import numerics


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used by validation and rank decisions."""

    jacobi: float = 1e-10       # max allowed Jacobi residual for a valid algebra
    rank_rel: float = 1e-10     # relative singular value cutoff
    residual: float = 1e-9      # generic linear-condition residual

    @classmethod
    def from_env(cls) -> "ToleranceConfig":
        """Default config, with CKYLAB_TOL overriding the residual field."""
        raw = os.environ.get("CKYLAB_TOL")
        if raw is None:
            return cls()
        try:
            return cls(residual=float(raw))
        except ValueError as exc:
            raise ValueError(f"CKYLAB_TOL is not a float: {raw!r}") from exc

    def replace(self, **kw) -> "ToleranceConfig":
        return replace(self, **kw)


@dataclass
class Subspace:
    """Orthonormal column basis of a subspace plus rank diagnostics."""

    basis: np.ndarray           # n x k, orthonormal columns
    sv_gap: float = np.inf      # smallest kept / largest dropped singular value

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def contains(self, vec: np.ndarray, tol: float = 1e-9) -> bool:
        return numerics.projection_residual(vec, self.basis) <= tol

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T


class MetricLieAlgebra:
    """Finite-dimensional Lie algebra with an inner product.

    Construction validates antisymmetry of the structure tensor and
    positive definiteness of the Gram matrix.  The Jacobi identity is a
    reported diagnostic (``jacobi_residual``), not a construction error,
    so that defective tensors can still be inspected.
    """

    def __init__(self, structure, gram, basis_labels=None,
                 tol: ToleranceConfig | None = None):
        structure = np.asarray(structure, dtype=float)
        gram = np.asarray(gram, dtype=float)
        if structure.ndim != 3 or len(set(structure.shape)) != 1:
            raise ValueError("structure tensor must have shape (n, n, n)")
        n = structure.shape[0]
        if gram.shape != (n, n):
            raise ValueError("Gram matrix shape does not match the algebra dimension")
        anti = np.max(np.abs(structure + structure.transpose(1, 0, 2)))
        if anti > 1e-12 * max(1.0, np.max(np.abs(structure))):
            raise ValueError("structure tensor is not antisymmetric in its first two slots")
        if np.max(np.abs(gram - gram.T)) > 1e-12 * max(1.0, np.max(np.abs(gram))):
            raise ValueError("Gram matrix is not symmetric")
        if np.min(np.linalg.eigvalsh(0.5 * (gram + gram.T))) <= 0:
            raise ValueError("Gram matrix is not positive definite")
        if basis_labels is None:
            basis_labels = tuple(f"e{i+1}" for i in range(n))
        basis_labels = tuple(str(s) for s in basis_labels)
        if len(basis_labels) != n:
            raise ValueError("need one label per basis vector")
        self.structure = structure
        self.gram = gram
        self.basis_labels = basis_labels
        self.tol = tol or ToleranceConfig()

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @cached_property
    def gram_inv(self) -> np.ndarray:
        return np.linalg.inv(self.gram)

    @cached_property
    def frame(self) -> np.ndarray:
        """Columns form a G-orthonormal frame (G^(-1/2), orientation preserving)."""
        inv_half, _ = numerics.spd_sqrt_pair(self.gram)
        return inv_half

    @cached_property
    def frame_inv(self) -> np.ndarray:
        _, half = numerics.spd_sqrt_pair(self.gram)
        return half

    def label_index(self, key) -> int:
        """Resolve a basis label or integer index to an index."""
        if isinstance(key, (int, np.integer)):
            idx = int(key)
        elif isinstance(key, str) and key in self.basis_labels:
            idx = self.basis_labels.index(key)
        else:
            try:
                idx = int(key)
            except (TypeError, ValueError):
                raise KeyError(f"unknown basis label {key!r}")
        if not 0 <= idx < self.dim:
            raise KeyError(f"basis index {idx} out of range for dim {self.dim}")
        return idx

    def basis_vector(self, key) -> np.ndarray:
        v = np.zeros(self.dim)
        v[self.label_index(key)] = 1.0
        return v

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    def __repr__(self):
        return f"MetricLieAlgebra(dim={self.dim}, labels={self.basis_labels})"


@dataclass
class _BracketTable:
    """Helper for building structure tensors entry by entry."""

    dim: int
    entries: dict = field(default_factory=dict)

    def set(self, i: int, j: int, coeffs: dict):
        self.entries[(i, j)] = dict(coeffs)

    def tensor(self) -> np.ndarray:
        c = np.zeros((self.dim, self.dim, self.dim))
        for (i, j), coeffs in self.entries.items():
            for k, val in coeffs.items():
                c[i, j, k] += val
                c[j, i, k] -= val
        return c


def build_structure(dim: int, brackets: dict) -> np.ndarray:
    """Structure tensor from {(i, j): {k: coeff}} with i < j entries."""
    table = _BracketTable(dim)
    for (i, j), coeffs in brackets.items():
        table.set(i, j, coeffs)
    return table.tensor()


def bracket(algebra: MetricLieAlgebra, x, y) -> np.ndarray:
    """[x, y] in coordinates."""
    return np.einsum("ijk,i,j->k", algebra.structure, np.asarray(x, dtype=float),
                     np.asarray(y, dtype=float))


def ad_matrix(algebra: MetricLieAlgebra, x) -> np.ndarray:
    """Matrix of ad_x = [x, .]."""
    return np.einsum("ijk,i->kj", algebra.structure, np.asarray(x, dtype=float))


def jacobi_residual(algebra: MetricLieAlgebra) -> float:
    """Max norm of the cyclic sum [[x,y],z] + [[y,z],x] + [[z,x],y] over basis triples."""
    c = algebra.structure
    dbl = np.einsum("ijm,mkl->ijkl", c, c)  # [[e_i,e_j],e_k] coefficients
    cyc = dbl + dbl.transpose(1, 2, 0, 3) + dbl.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc)))


def center(algebra: MetricLieAlgebra) -> Subspace:
    """Vectors commuting with the whole algebra (SVD nullspace of stacked ad rows)."""
    n = algebra.dim
    # v central iff sum_i v_i c[i, j, k] = 0 for all (j, k)
    mat = algebra.structure.reshape(n, n * n).T
    basis, _, gap = numerics.nullspace(mat, algebra.tol.rank_rel)
    basis = numerics.fix_signs(basis)
    return Subspace(basis=basis, sv_gap=gap)


def derived_algebra(algebra: MetricLieAlgebra) -> Subspace:
    """Span of all brackets [e_i, e_j]."""
    n = algebra.dim
    cols = [algebra.structure[i, j] for i in range(n) for j in range(i + 1, n)]
    mat = np.column_stack(cols) if cols else np.zeros((n, 0))
    basis, _, gap = numerics.column_space(mat, algebra.tol.rank_rel)
    basis = numerics.fix_signs(basis)
    return Subspace(basis=basis, sv_gap=gap)


def is_unimodular(algebra: MetricLieAlgebra, tol: float | None = None) -> bool:
    """True when every ad_{e_i} is traceless."""
    if tol is None:
        tol = algebra.tol.residual
    traces = np.einsum("ijj->i", algebra.structure)
    return bool(np.max(np.abs(traces)) <= tol)


def ad_traces(algebra: MetricLieAlgebra) -> np.ndarray:
    """trace(ad_{e_i}) for each basis vector."""
    return np.einsum("ijj->i", algebra.structure)


# ---------------------------------------------------------------------------
# JSON interchange format
#
# {"dim": n, "basis": [labels], "metric": n x n array,
#  "brackets": [{"i": int, "j": int, "coeffs": {label-or-index: value}}]}
#
# Indices are 0-based.  Pairs omitted from "brackets" are zero, the (j, i)
# entry is filled in by antisymmetry, and supplying both orientations with
# inconsistent values is an error.
# ---------------------------------------------------------------------------


def algebra_from_dict(data: dict, tol: ToleranceConfig | None = None) -> MetricLieAlgebra:
    """Parse the JSON algebra format; raises ValueError on malformed input."""
    try:
        n = int(data["dim"])
        metric = np.asarray(data["metric"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed algebra dict: {exc}") from exc
    labels = tuple(data.get("basis") or (f"e{i+1}" for i in range(n)))
    if len(labels) != n or len(set(labels)) != n:
        raise ValueError("basis labels must be unique and match dim")

    def resolve(key) -> int:
        if isinstance(key, str) and key in labels:
            return labels.index(key)
        try:
            idx = int(key)
        except (TypeError, ValueError):
            raise ValueError(f"unknown basis key {key!r}")
        if not 0 <= idx < n:
            raise ValueError(f"basis index {idx} out of range")
        return idx

    seen: dict[tuple[int, int], dict[int, float]] = {}
    for entry in data.get("brackets", []):
        try:
            i = resolve(entry["i"])
            j = resolve(entry["j"])
            coeffs = {resolve(k): float(v) for k, v in entry["coeffs"].items()}
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed bracket entry {entry!r}: {exc}") from exc
        if i == j:
            if any(abs(v) > 0 for v in coeffs.values()):
                raise ValueError(f"nonzero bracket [{i},{i}]")
            continue
        key, vals = ((i, j), coeffs) if i < j else ((j, i), {k: -v for k, v in coeffs.items()})
        if key in seen:
            prev = seen[key]
            allk = set(prev) | set(vals)
            if any(not np.isclose(prev.get(k, 0.0), vals.get(k, 0.0), rtol=1e-12, atol=0)
                   for k in allk):
                raise ValueError(f"inconsistent bracket entries for pair {key}")
        else:
            seen[key] = vals

    structure = build_structure(n, seen)
    return MetricLieAlgebra(structure, metric, basis_labels=labels, tol=tol)


def algebra_to_dict(algebra: MetricLieAlgebra) -> dict:
    """Serialize to the JSON algebra format (label-keyed coefficients)."""
    n = algebra.dim
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            row = algebra.structure[i, j]
            coeffs = {algebra.basis_labels[k]: float(row[k])
                      for k in range(n) if row[k] != 0.0}
            if coeffs:
                brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {
        "dim": n,
        "basis": list(algebra.basis_labels),
        "brackets": brackets,
        "metric": [[float(v) for v in row] for row in algebra.gram],
    }
