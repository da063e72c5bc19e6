"""Cardinality-constrained side: activity sets, CC-LICQ, M-stationarity.

A problem is  min f(x)  s.t.  h(x) = 0, g(x) >= 0, ||x||_0 <= s  where the
zero "norm" counts nonzero entries.  Certification at a point solves the
multiplier system over the active gradients plus the coordinate directions
of vanishing entries, then checks the four nondegeneracy conditions
NDM1..NDM4 and reports the M-index as quadratic index + sparsity index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exprcore import Expr, eval2
from .numkern import Tolerances, rank_and_nullbasis, restricted_inertia, solve_multipliers

__all__ = [
    "Problem",
    "CcopActivity",
    "MCertificate",
    "check_feasible",
    "check_cc_licq",
    "certify_m",
]


@dataclass(frozen=True)
class Problem:
    """Objective, equality/inequality constraints, dimension and sparsity budget."""

    n: int
    s: int
    f: Expr
    h: tuple[Expr, ...] = ()
    g: tuple[Expr, ...] = ()

    def __post_init__(self):
        if not 0 <= self.s <= self.n - 1:
            raise ValueError(f"sparsity budget s={self.s} outside 0..{self.n - 1}")
        for e in (self.f, *self.h, *self.g):
            if e.n != self.n:
                raise ValueError("expression dimension does not match problem dimension")


@dataclass(frozen=True)
class CcopActivity:
    """Active inequalities Q0, vanishing coordinates I0 (both 1-based), ||x||_0."""

    Q0: tuple[int, ...]
    I0: tuple[int, ...]
    x_norm0: int


@dataclass
class MCertificate:
    """Verdict of M-stationarity certification at one point.

    Multiplier dicts are keyed by 1-based constraint/coordinate indices.
    m_index is set only when the point is stationary and NDM1..NDM4 all hold.
    """

    feasible: bool
    stationary: bool
    activity: CcopActivity
    lam: dict[int, float] = field(default_factory=dict)
    mu: dict[int, float] = field(default_factory=dict)
    gamma: dict[int, float] = field(default_factory=dict)
    residual: float = float("nan")
    ndm: tuple[bool, bool, bool, bool] = (False, False, False, False)
    quadratic_index: int | None = None
    sparsity_index: int | None = None
    m_index: int | None = None
    degenerate_reason: str | None = None
    non_unique: bool = False

    @property
    def nondegenerate(self) -> bool:
        return self.stationary and all(self.ndm)


def _activity(pr: Problem, x: np.ndarray, tol: Tolerances, gvals: list[float]) -> CcopActivity:
    Q0 = tuple(q + 1 for q, v in enumerate(gvals) if abs(v) <= tol.tol_act)
    I0 = tuple(i + 1 for i in range(pr.n) if abs(x[i]) <= tol.tol_act)
    return CcopActivity(Q0, I0, pr.n - len(I0))


def check_feasible(pr: Problem, x, tol: Tolerances = Tolerances()) -> tuple[bool, CcopActivity]:
    """Feasibility of x for the sparse problem, plus its activity sets."""
    x = np.asarray(x, dtype=float)
    if x.shape != (pr.n,):
        raise ValueError(f"point has shape {x.shape}, expected ({pr.n},)")
    hvals = [eval2(e, x).value for e in pr.h]
    gvals = [eval2(e, x).value for e in pr.g]
    act = _activity(pr, x, tol, gvals)
    ok = (
        all(abs(v) <= tol.tol_feas for v in hvals)
        and all(v >= -tol.tol_feas for v in gvals)
        and act.x_norm0 <= pr.s
    )
    return ok, act


def _active_rows(pr: Problem, act: CcopActivity, hjets, gjets) -> np.ndarray:
    """Rows of the CC-LICQ matrix: grad h_p, grad g_q (q in Q0), e_i (i in I0)."""
    rows = [j.gradient for j in hjets]
    rows += [gjets[q - 1].gradient for q in act.Q0]
    for i in act.I0:
        e = np.zeros(pr.n)
        e[i - 1] = 1.0
        rows.append(e)
    return np.array(rows, dtype=float).reshape(len(rows), pr.n)


def check_cc_licq(pr: Problem, x, tol: Tolerances = Tolerances()) -> bool:
    """Linear independence of active gradients and vanishing-coordinate directions."""
    x = np.asarray(x, dtype=float)
    gvals = [eval2(e, x).value for e in pr.g]
    act = _activity(pr, x, tol, gvals)
    hjets = [eval2(e, x) for e in pr.h]
    gjets = [eval2(e, x) for e in pr.g]
    rows = _active_rows(pr, act, hjets, gjets)
    rank, _ = rank_and_nullbasis(rows, tol)
    return rank == rows.shape[0]


def certify_m(pr: Problem, x, tol: Tolerances = Tolerances()) -> MCertificate:
    """Certify M-stationarity, nondegeneracy NDM1..NDM4 and the M-index at x.

    Infeasible or non-stationary points yield a full diagnostic certificate
    rather than an error; degenerate_reason names the first failed condition.
    """
    x = np.asarray(x, dtype=float)
    feasible, act = check_feasible(pr, x, tol)

    jf = eval2(pr.f, x)
    hjets = [eval2(e, x) for e in pr.h]
    gjets = [eval2(e, x) for e in pr.g]

    rows = _active_rows(pr, act, hjets, gjets)
    coeffs, residual = solve_multipliers(rows.T, jf.gradient, tol)

    nh = len(pr.h)
    nq = len(act.Q0)
    lam = {p + 1: float(coeffs[p]) for p in range(nh)}
    mu = {q: float(coeffs[nh + j]) for j, q in enumerate(act.Q0)}
    gamma = {i: float(coeffs[nh + nq + j]) for j, i in enumerate(act.I0)}

    rank, nullbasis = rank_and_nullbasis(rows, tol)
    licq = rank == rows.shape[0]

    grad_scale = 1.0 + float(np.linalg.norm(jf.gradient))
    stationary = (
        feasible
        and residual <= tol.tol_feas * grad_scale
        and all(v >= -tol.tol_strict for v in mu.values())
    )

    hess_L = jf.hessian.copy()
    for p in range(nh):
        hess_L -= lam[p + 1] * hjets[p].hessian
    for q in act.Q0:
        hess_L -= mu[q] * gjets[q - 1].hessian
    neg, zero, _ = restricted_inertia(hess_L, nullbasis, tol)

    ndm1 = licq
    ndm2 = all(v > tol.tol_strict for v in mu.values())
    ndm3 = act.x_norm0 == pr.s or all(abs(v) > tol.tol_strict for v in gamma.values())
    ndm4 = zero == 0
    ndm = (ndm1, ndm2, ndm3, ndm4)

    qi = neg
    si = pr.s - act.x_norm0

    reason = None
    if not feasible:
        reason = "infeasible"
    elif not stationary:
        reason = f"not stationary (residual={residual:.3e})"
    else:
        for flag, name in zip(ndm, ("NDM1", "NDM2", "NDM3", "NDM4")):
            if not flag:
                reason = name
                break

    return MCertificate(
        feasible=feasible,
        stationary=stationary,
        activity=act,
        lam=lam,
        mu=mu,
        gamma=gamma,
        residual=residual,
        ndm=ndm,
        quadratic_index=qi,
        sparsity_index=si,
        m_index=qi + si if (stationary and all(ndm)) else None,
        degenerate_reason=reason,
        non_unique=not licq,
    )
