"""Shared builders for the test suite."""

import numpy as np

from ckylab import MetricLieAlgebra, build_structure
from ckylab.numerics import max_principal_angle_sin


def random_spd(rng: np.random.Generator, n: int, spread: float = 1.0) -> np.ndarray:
    """Well-conditioned random SPD matrix (eigenvalues in [1, 1+spread] roughly)."""
    A = rng.normal(size=(n, n))
    q, _ = np.linalg.qr(A)
    vals = 1.0 + spread * rng.random(n)
    return q @ np.diag(vals) @ q.T


# small catalog of bracket tables that satisfy Jacobi for any coefficients drawn;
# paired with a random metric they give fresh metric Lie algebras cheaply.
STRUCTURES = {
    # heisenberg-type: [e0,e1]=a e4, [e2,e3]=b e4
    "heis5": lambda a, b: build_structure(5, {(0, 1): {4: a}, (2, 3): {4: b}}),
    # two-step with 2-dim center: [e3,e4]=a e0, [e0,e3]=b e1, [e0,e4]=c e2
    "twostep5": lambda a, b: build_structure(
        5, {(3, 4): {0: a}, (0, 3): {1: b}, (0, 4): {2: a * b}}),
    # almost-abelian: ad(e0) acts diagonally on e1..e4
    "almab5": lambda a, b: build_structure(
        5, {(0, 1): {1: a}, (0, 2): {2: b}, (0, 3): {3: -a}, (0, 4): {4: 2.0}}),
    "abelian5": lambda a, b: build_structure(5, {}),
}


def random_algebra(rng: np.random.Generator, kind: str | None = None,
                   diag_metric: bool = False) -> MetricLieAlgebra:
    key = kind or list(STRUCTURES)[rng.integers(len(STRUCTURES))]
    a = float(rng.uniform(0.5, 2.0)) * (1 if rng.random() < 0.5 else -1)
    b = float(rng.uniform(0.5, 2.0))
    c = STRUCTURES[key](a, b)
    if diag_metric:
        G = np.diag(1.0 + rng.random(5))
    else:
        G = random_spd(rng, 5)
    return MetricLieAlgebra(c, G)


def span_residual(inner_cols: np.ndarray, outer_cols: np.ndarray) -> float:
    """sin of the largest angle from span(inner) into span(outer); 0 if contained."""
    if inner_cols.shape[1] == 0:
        return 0.0
    # project inner onto outer and measure the worst defect
    q_out, _ = np.linalg.qr(outer_cols) if outer_cols.shape[1] else (outer_cols, None)
    resid = inner_cols - q_out @ (q_out.T @ inner_cols) if outer_cols.shape[1] else inner_cols
    denom = np.linalg.norm(inner_cols, axis=0)
    denom[denom == 0] = 1.0
    return float(np.max(np.linalg.norm(resid, axis=0) / denom))


def same_span(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    if a.shape[1] != b.shape[1]:
        return False
    if a.shape[1] == 0:
        return True
    return max_principal_angle_sin(a, b) <= tol
