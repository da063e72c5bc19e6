"""Small dense kernels shared by every certification path.

One tolerance policy for the whole toolkit, numerical rank with an
orthonormal null-space basis, least-squares multiplier solves, and the
inertia of a symmetric matrix restricted to a subspace.  Rank goes through
the SVD with a relative cutoff so that "linearly independent" verdicts are
reproducible across platforms; matrices are desk scale, so the explicitly
projected eigensolve wins over anything cleverer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "rank_and_nullbasis",
    "solve_multipliers",
    "restricted_inertia",
]


@dataclass(frozen=True)
class Tolerances:
    """Tolerance policy.

    tol_feas   absolute feasibility tolerance
    tol_act    activity-detection tolerance
    tol_rank   relative singular-value cutoff for rank decisions
    tol_strict strict-inequality margin for multipliers and eigenvalues
    """

    tol_feas: float = 1e-9
    tol_act: float = 1e-8
    tol_rank: float = 1e-10
    tol_strict: float = 1e-8

    def __post_init__(self):
        for name in ("tol_feas", "tol_act", "tol_rank", "tol_strict"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.tol_rank >= self.tol_strict:
            raise ValueError("tol_rank must be smaller than tol_strict")


def rank_and_nullbasis(A, tol: Tolerances) -> tuple[int, np.ndarray]:
    """Numerical rank of A (m x k) and an orthonormal basis of its null space.

    Rank counts singular values above tol_rank * sigma_max (zero or empty
    matrices have rank 0).  The returned N is k x (k - rank) with exactly
    orthonormal columns from the SVD.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, k = A.shape
    if m == 0 or k == 0:
        return 0, np.eye(k)
    _, sing, vt = np.linalg.svd(A, full_matrices=True)
    smax = sing[0] if sing.size else 0.0
    rank = 0 if smax == 0.0 else int(np.sum(sing > tol.tol_rank * smax))
    return rank, vt[rank:].T.copy()


def solve_multipliers(G, target, tol: Tolerances) -> tuple[np.ndarray, float]:
    """Least-squares solve of G coeffs = target for multiplier columns G.

    Returns (coeffs, residual_norm).  The caller reads residual_norm against
    tol_feas * (1 + ||target||) as "stationarity equation holds"; coeffs are
    unique only when G has full column rank, otherwise this is the
    minimum-norm solution.
    """
    G = np.atleast_2d(np.asarray(G, dtype=float))
    target = np.asarray(target, dtype=float)
    d, k = G.shape
    if k == 0:
        return np.zeros(0), float(np.linalg.norm(target))
    coeffs = np.linalg.lstsq(G, target, rcond=tol.tol_rank)[0]
    residual = float(np.linalg.norm(G @ coeffs - target))
    return coeffs, residual


def restricted_inertia(H, N, tol: Tolerances) -> tuple[int, int, int]:
    """Eigenvalue signs of N' H N for symmetric H and orthonormal columns N.

    Returns (neg, zero, pos) with the zero band [-tol_strict, tol_strict];
    eigenvalues inside the band count as zero, never as pos or neg, so
    near-singular restrictions surface as degeneracy instead of being
    silently classified.
    """
    N = np.atleast_2d(np.asarray(N, dtype=float))
    if N.ndim == 2 and N.shape[1] == 0:
        return 0, 0, 0
    H = np.asarray(H, dtype=float)
    M = N.T @ H @ N
    M = 0.5 * (M + M.T)
    eig = np.linalg.eigvalsh(M)
    neg = int(np.sum(eig < -tol.tol_strict))
    pos = int(np.sum(eig > tol.tol_strict))
    return neg, len(eig) - neg - pos, pos
