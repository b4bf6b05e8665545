"""Rank-revealing linear algebra helpers shared across the package.

All rank decisions use a relative singular value threshold (rank_rel times
the largest singular value) and report the gap between the smallest kept
and largest dropped singular value, so a borderline rank decision is
visible in the output instead of silent.
"""

from __future__ import annotations

import numpy as np


def svd_rank(mat: np.ndarray, rank_rel: float) -> tuple[int, float]:
    """Numerical rank and kept/dropped singular value gap ratio."""
    if mat.size == 0:
        return 0, np.inf
    s = np.linalg.svd(mat, compute_uv=False)
    smax = s[0]
    if smax == 0.0:
        return 0, np.inf
    rank = int(np.sum(s > rank_rel * smax))
    return rank, _gap(s, rank)


def _gap(s: np.ndarray, rank: int) -> float:
    # ratio of smallest kept to largest dropped singular value
    if rank == 0 or rank >= len(s):
        dropped = 0.0
    else:
        dropped = s[rank]
    if rank == 0:
        return np.inf
    return s[rank - 1] / dropped if dropped > 0.0 else np.inf


def nullspace(mat: np.ndarray, rank_rel: float) -> tuple[np.ndarray, int, float]:
    """Orthonormal nullspace basis (columns), system rank, sv gap."""
    m, n = mat.shape
    if mat.size == 0 or not np.any(mat):
        return np.eye(n), 0, np.inf
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    smax = s[0]
    rank = int(np.sum(s > rank_rel * smax)) if smax > 0 else 0
    return vh[rank:].T.copy(), rank, _gap(s, rank)


def column_space(mat: np.ndarray, rank_rel: float) -> tuple[np.ndarray, int, float]:
    """Orthonormal basis of the column span (columns), rank, sv gap."""
    m, n = mat.shape
    if mat.size == 0 or not np.any(mat):
        return np.zeros((m, 0)), 0, np.inf
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    smax = s[0]
    rank = int(np.sum(s > rank_rel * smax)) if smax > 0 else 0
    return u[:, :rank].copy(), rank, _gap(s, rank)


def orthonormalize(vectors: np.ndarray, inner: np.ndarray | None = None,
                   drop_rel: float = 1e-10) -> np.ndarray:
    """Gram-Schmidt over the columns, in the inner product given by `inner`.

    Deterministic: processes columns left to right, drops near-dependent
    candidates relative to the largest incoming norm.
    """
    n, k = vectors.shape
    ip = (lambda a, b: a @ b) if inner is None else (lambda a, b: a @ inner @ b)
    out: list[np.ndarray] = []
    scale = 0.0
    for j in range(k):
        v = vectors[:, j].astype(float).copy()
        scale = max(scale, np.sqrt(max(ip(v, v), 0.0)))
        for u in out:
            v -= ip(u, v) * u
        nrm = np.sqrt(max(ip(v, v), 0.0))
        if scale > 0 and nrm > drop_rel * scale:
            out.append(v / nrm)
    if not out:
        return np.zeros((n, 0))
    return np.column_stack(out)


def fix_signs(basis: np.ndarray) -> np.ndarray:
    """Flip each column so its first significant entry is positive."""
    out = basis.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        big = np.max(np.abs(col))
        if big == 0.0:
            continue
        lead = col[np.abs(col) > 1e-12 * big][0]
        if lead < 0:
            out[:, j] = -col
    return out


def canonical_nullspace(mat: np.ndarray, inner: np.ndarray | None,
                        rank_rel: float) -> tuple[np.ndarray, int, float]:
    """Nullspace basis that does not depend on SVD vector choices.

    The nullspace projector is canonical; projecting the coordinate axes
    in index order and orthonormalizing (in `inner`) gives a reproducible
    basis, then each vector's leading coefficient is made positive.
    """
    raw, rank, gap = nullspace(mat, rank_rel)
    if raw.shape[1] == 0:
        return raw, rank, gap
    proj = raw @ raw.T
    candidates = proj  # column i is the projection of axis e_i
    basis = orthonormalize(candidates, inner=inner)
    # the projector has the full nullspace as its column span
    assert basis.shape[1] == raw.shape[1], "projection lost rank"
    return fix_signs(basis), rank, gap


def max_principal_angle_sin(U: np.ndarray, V: np.ndarray) -> float:
    """sin of the largest principal angle from span(V) into span(U)."""
    if U.shape[1] == 0 and V.shape[1] == 0:
        return 0.0
    if U.shape[1] == 0 or V.shape[1] == 0:
        return 1.0
    qu, _ = np.linalg.qr(U)
    qv, _ = np.linalg.qr(V)
    resid = qv - qu @ (qu.T @ qv)
    return float(np.linalg.norm(resid, 2))


def projection_residual(vec: np.ndarray, basis: np.ndarray,
                        inner: np.ndarray | None = None) -> float:
    """Relative distance from vec to span(basis), in the given inner product."""
    ip = (lambda a, b: a @ b) if inner is None else (lambda a, b: a @ inner @ b)
    nrm = np.sqrt(max(ip(vec, vec), 0.0))
    if nrm == 0.0:
        return 0.0
    onb = orthonormalize(basis, inner=inner)
    rem = vec.astype(float).copy()
    for j in range(onb.shape[1]):
        u = onb[:, j]
        rem -= ip(u, rem) * u
    return float(np.sqrt(max(ip(rem, rem), 0.0)) / nrm)


def spd_sqrt_pair(gram: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(G^(-1/2), G^(1/2)) for symmetric positive definite G."""
    w, q = np.linalg.eigh(gram)
    if np.min(w) <= 0:
        raise ValueError("matrix is not positive definite")
    inv_half = q @ np.diag(1.0 / np.sqrt(w)) @ q.T
    half = q @ np.diag(np.sqrt(w)) @ q.T
    return inv_half, half
