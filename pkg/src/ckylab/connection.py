"""Levi-Civita connection, curvature, and holonomy on a metric Lie algebra.

The connection is stored as the stack ``nabla`` of shape (n, n, n) with
``nabla[i][:, j]`` the coordinates of the derivative of e_j along e_i.
For left-invariant vector fields that single array determines everything:
derivatives of arbitrary directions are linear in the first slot, and
derivatives of tensors are commutators with the directional endomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .liealg import MetricLieAlgebra, bracket


@dataclass
class Connection:
    """Directional derivative endomorphisms of a connection."""

    algebra: MetricLieAlgebra
    nabla: np.ndarray                   # (n, n, n), nabla[i] acts on coordinates

    def nabla_of(self, x) -> np.ndarray:
        """Endomorphism u -> nabla_x u for an arbitrary direction x."""
        return np.einsum("i,iab->ab", np.asarray(x, dtype=float), self.nabla)

    def derivative_of_endo(self, x, endo: np.ndarray) -> np.ndarray:
        """(nabla_x T) for a (1,1)-tensor with constant coefficients."""
        nx = self.nabla_of(x)
        return nx @ endo - endo @ nx


def levi_civita(algebra: MetricLieAlgebra) -> Connection:
    """Torsion-free metric connection from the Koszul formula.

    2 <nabla_{e_i} e_j, e_k> = <[e_i,e_j],e_k> - <[e_j,e_k],e_i> + <[e_k,e_i],e_j>
    """
    c, G = algebra.structure, algebra.gram
    cg = np.einsum("ijm,mk->ijk", c, G)         # <[e_i, e_j], e_k>
    # A.transpose(2,0,1)[i,j,k] = A[j,k,i]; A.transpose(1,2,0)[i,j,k] = A[k,i,j]
    kosz = cg - cg.transpose(2, 0, 1) + cg.transpose(1, 2, 0)
    nabla = 0.5 * np.einsum("ab,ijb->iaj", algebra.gram_inv, kosz)
    return Connection(algebra=algebra, nabla=nabla)


def torsion_residual(conn: Connection) -> float:
    """Max norm of nabla_i e_j - nabla_j e_i - [e_i, e_j] over basis pairs."""
    nabla, c = conn.nabla, conn.algebra.structure
    tors = np.einsum("iaj->ija", nabla) - np.einsum("jai->ija", nabla)
    return float(np.max(np.abs(tors - c)))


def metric_compatibility_residual(conn: Connection) -> float:
    """Max deviation of G nabla_i from antisymmetry over directions."""
    gn = np.einsum("ab,ibc->iac", conn.algebra.gram, conn.nabla)
    return float(np.max(np.abs(gn + gn.transpose(0, 2, 1))))


def curvature(conn: Connection, x, y) -> np.ndarray:
    """Curvature endomorphism R(x, y) = nabla_[x,y] - [nabla_x, nabla_y]."""
    nx, ny = conn.nabla_of(x), conn.nabla_of(y)
    nbr = conn.nabla_of(bracket(conn.algebra, x, y))
    return nbr - (nx @ ny - ny @ nx)


def curvature_operators(conn: Connection) -> list:
    """R(e_i, e_j) for all i < j."""
    n = conn.algebra.dim
    ops = []
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = 1.0
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = 1.0
            ops.append(curvature(conn, ei, ej))
    return ops


@dataclass
class HolonomyReport:
    """Span of curvature operators closed under covariant differentiation."""

    dimension: int
    converged: bool
    iterations: int
    basis: list                 # matrices spanning the holonomy algebra
    sv_gap: float
    ceiling: int                # dim so(n) = n(n-1)/2


def holonomy_algebra(algebra: MetricLieAlgebra,
                     conn: Connection | None = None,
                     max_iter: int = 20) -> HolonomyReport:
    """Iteratively close the curvature span under nabla-action and commutators.

    Vectors are flattened endomorphisms; the span is maintained with an
    SVD at the configured relative rank threshold.  Iteration stops when
    the dimension stabilizes or hits the skew-endomorphism ceiling.
    """
    if conn is None:
        conn = levi_civita(algebra)
    n = algebra.dim
    ceiling = n * (n - 1) // 2
    rank_rel = algebra.tol.rank_rel

    seeds = [op for op in curvature_operators(conn) if np.max(np.abs(op)) > 0]
    if not seeds:
        return HolonomyReport(dimension=0, converged=True, iterations=0,
                              basis=[], sv_gap=np.inf, ceiling=ceiling)

    def span_of(mats):
        stack = np.array([m.ravel() for m in mats])
        u, s, vh = np.linalg.svd(stack, full_matrices=False)
        rank = int(np.sum(s > rank_rel * s[0])) if s.size else 0
        gap = numerics._gap(s, rank)
        return [vh[r].reshape(n, n) for r in range(rank)], rank, gap

    basis, dim, gap = span_of(seeds)
    converged = dim == ceiling
    iters = 0
    while not converged and iters < max_iter:
        iters += 1
        new = []
        for mat in basis:
            for k in range(n):
                nk = conn.nabla[k]
                new.append(nk @ mat - mat @ nk)
        for a in range(len(basis)):
            for b in range(a + 1, len(basis)):
                new.append(basis[a] @ basis[b] - basis[b] @ basis[a])
        basis2, dim2, gap2 = span_of(basis + new)
        if dim2 == dim:
            converged = True
            gap = gap2
            break
        basis, dim, gap = basis2, dim2, gap2
        if dim >= ceiling:
            converged = True
            break
    return HolonomyReport(dimension=dim, converged=converged, iterations=iters,
                          basis=basis, sv_gap=float(gap), ceiling=ceiling)
