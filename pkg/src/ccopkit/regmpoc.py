"""Regularized continuous reformulation with orthogonality-type constraints.

The lifted problem in (x, y) is

    min f(x) + c'y   s.t.  h(x) = 0, g(x) >= 0,
                           sum_i y_i >= n - s,  x_i y_i = 0,
                           0 <= y_i <= 1 + eps,

with regularization vector c and bound relaxation eps > 0.  The parameter
assumption requires positive pairwise-distinct c and eps <= 1/(n-s); the
degenerate choice c = 0, eps = 0 recovers the plain continuous reformulation
and is reachable only through an explicit override.

Certification solves the T-stationarity multiplier system over the 2n-dim
constraint directions, checks the sign and disjunction conditions, the five
nondegeneracy conditions NDT1..NDT5, and reports the T-index as quadratic
index + biactive index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ccop import Problem
from .exprcore import eval2
from .numkern import Tolerances, rank_and_nullbasis, restricted_inertia, solve_multipliers

__all__ = [
    "RegularizedProblem",
    "MpocActivity",
    "TCertificate",
    "AssumptionError",
    "make_regularized",
    "check_feasible_r",
    "check_mpoc_licq",
    "certify_t",
    "check_y_structure",
]


class AssumptionError(ValueError):
    """Certification requested on parameters violating the (c, eps) assumption."""


@dataclass(frozen=True, eq=False)
class RegularizedProblem:
    base: Problem
    c: np.ndarray
    eps: float
    assumption1_ok: bool
    override: bool = False

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def s(self) -> int:
        return self.base.s


def make_regularized(
    pr: Problem, c, eps: float, override: bool = False, tol: Tolerances = Tolerances()
) -> RegularizedProblem:
    """Attach regularization parameters to a problem.

    Construction never fails on bad parameters; it records whether the
    assumption (c positive and pairwise distinct, 0 < eps <= 1/(n-s)) holds.
    Downstream certification refuses assumption1_ok=False unless `override`
    is set, which is how the unregularized reformulation is reproduced.
    """
    c = np.asarray(c, dtype=float).copy()
    if c.shape != (pr.n,):
        raise ValueError(f"c has shape {c.shape}, expected ({pr.n},)")
    gaps = [abs(a - b) for i, a in enumerate(c) for b in c[i + 1 :]]
    ok = (
        bool(np.all(c > 0.0))
        and all(gap > tol.tol_strict for gap in gaps)
        and 0.0 < eps <= 1.0 / (pr.n - pr.s)
    )
    c.flags.writeable = False
    return RegularizedProblem(pr, c, float(eps), ok, override)


@dataclass(frozen=True)
class MpocActivity:
    """Orthogonality activity pattern at (x, y), all index sets 1-based.

    a00: x_i = 0 and y_i = 0 (biactive), a01: x_i = 0 and y_i > 0,
    a10: x_i != 0 and y_i = 0; Ecal holds the y-components at the upper
    bound 1 + eps; sum_active marks sum(y) = n - s; Q0 is inherited from
    the base inequalities.
    """

    a00: tuple[int, ...]
    a01: tuple[int, ...]
    a10: tuple[int, ...]
    Ecal: tuple[int, ...]
    sum_active: bool
    Q0: tuple[int, ...]


@dataclass
class TCertificate:
    """Verdict of T-stationarity certification at one lifted point.

    Multiplier dicts are keyed by 1-based indices (mu1 over Q0, mu2 over
    Ecal, sigma1 over a01, sigma2 over a10, rho1/rho2 over a00); mu3 is the
    multiplier of the summation constraint, structurally 0 when inactive.
    eq8_branches records, per biactive index, which branch of the
    disjunction (rho1 = 0 | rho2 <= 0) holds.  t_index is set only when the
    point is stationary and NDT1..NDT4 all hold; NDT5 is reported separately.
    """

    feasible: bool
    stationary: bool
    activity: MpocActivity
    lam: dict[int, float] = field(default_factory=dict)
    mu1: dict[int, float] = field(default_factory=dict)
    mu2: dict[int, float] = field(default_factory=dict)
    mu3: float = 0.0
    sigma1: dict[int, float] = field(default_factory=dict)
    sigma2: dict[int, float] = field(default_factory=dict)
    rho1: dict[int, float] = field(default_factory=dict)
    rho2: dict[int, float] = field(default_factory=dict)
    residual: float = float("nan")
    ndt: tuple[bool, bool, bool, bool, bool] = (False,) * 5
    eq8_branches: dict[int, tuple[bool, bool]] = field(default_factory=dict)
    quadratic_index: int | None = None
    biactive_index: int | None = None
    t_index: int | None = None
    degenerate_reason: str | None = None
    non_unique: bool = False

    @property
    def nondegenerate(self) -> bool:
        """NDT1..NDT4; the additional condition NDT5 is tracked on its own."""
        return self.stationary and all(self.ndt[:4])


def _activity_r(rp: RegularizedProblem, x, y, tol: Tolerances, gvals) -> MpocActivity:
    n = rp.n
    x0 = np.abs(x) <= tol.tol_act
    y0 = np.abs(y) <= tol.tol_act
    yup = np.abs(y - (1.0 + rp.eps)) <= tol.tol_act
    a00 = tuple(i + 1 for i in range(n) if x0[i] and y0[i])
    a01 = tuple(i + 1 for i in range(n) if x0[i] and not y0[i])
    a10 = tuple(i + 1 for i in range(n) if not x0[i] and y0[i])
    ecal = tuple(i + 1 for i in range(n) if x0[i] and yup[i])
    sum_active = abs(float(np.sum(y)) - (n - rp.s)) <= tol.tol_act
    q0 = tuple(q + 1 for q, v in enumerate(gvals) if abs(v) <= tol.tol_act)
    return MpocActivity(a00, a01, a10, ecal, sum_active, q0)


def check_feasible_r(
    rp: RegularizedProblem, x, y, tol: Tolerances = Tolerances()
) -> tuple[bool, MpocActivity]:
    """Feasibility of (x, y) for the lifted problem, plus its activity pattern."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = rp.n
    if x.shape != (n,) or y.shape != (n,):
        raise ValueError(f"points have shapes {x.shape}/{y.shape}, expected ({n},)")
    hvals = [eval2(e, x).value for e in rp.base.h]
    gvals = [eval2(e, x).value for e in rp.base.g]
    act = _activity_r(rp, x, y, tol, gvals)
    ok = (
        all(abs(v) <= tol.tol_feas for v in hvals)
        and all(v >= -tol.tol_feas for v in gvals)
        and float(np.sum(y)) >= (n - rp.s) - tol.tol_feas
        and bool(np.all(np.abs(x * y) <= tol.tol_feas))
        and bool(np.all(y >= -tol.tol_feas))
        and bool(np.all(y <= 1.0 + rp.eps + tol.tol_feas))
    )
    return ok, act


def _e2n(n: int, i: int, block: int) -> np.ndarray:
    """Coordinate vector in R^(2n): block 0 is the x-part, block 1 the y-part."""
    v = np.zeros(2 * n)
    v[block * n + i - 1] = 1.0
    return v


def _stationarity_columns(
    rp: RegularizedProblem, act: MpocActivity, hjets, gjets
) -> tuple[np.ndarray, list[tuple[str, int]]]:
    """Multiplier columns of the T-stationarity system, with labels.

    The same vectors (up to the sign of the mu2 block, which is irrelevant
    for rank and null space) constitute the MPOC-LICQ family and cut out the
    tangent space, so one assembly serves the solve, the CQ test and the
    restricted Hessian.
    """
    n = rp.n
    cols: list[np.ndarray] = []
    labels: list[tuple[str, int]] = []
    for p, j in enumerate(hjets, start=1):
        cols.append(np.concatenate([j.gradient, np.zeros(n)]))
        labels.append(("lam", p))
    for q in act.Q0:
        cols.append(np.concatenate([gjets[q - 1].gradient, np.zeros(n)]))
        labels.append(("mu1", q))
    for i in act.Ecal:
        cols.append(-_e2n(n, i, 1))
        labels.append(("mu2", i))
    if act.sum_active:
        cols.append(np.concatenate([np.zeros(n), np.ones(n)]))
        labels.append(("mu3", 0))
    for i in act.a01:
        cols.append(_e2n(n, i, 0))
        labels.append(("sigma1", i))
    for i in act.a10:
        cols.append(_e2n(n, i, 1))
        labels.append(("sigma2", i))
    for i in act.a00:
        cols.append(_e2n(n, i, 0))
        labels.append(("rho1", i))
    for i in act.a00:
        cols.append(_e2n(n, i, 1))
        labels.append(("rho2", i))
    V = np.array(cols, dtype=float).reshape(len(cols), 2 * n).T
    return V, labels


def check_mpoc_licq(rp: RegularizedProblem, x, y, tol: Tolerances = Tolerances()) -> bool:
    """Linear independence of the MPOC constraint directions at (x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gvals = [eval2(e, x).value for e in rp.base.g]
    act = _activity_r(rp, x, y, tol, gvals)
    hjets = [eval2(e, x) for e in rp.base.h]
    gjets = [eval2(e, x) for e in rp.base.g]
    V, _ = _stationarity_columns(rp, act, hjets, gjets)
    rank, _ = rank_and_nullbasis(V.T, tol)
    return rank == V.shape[1]


def certify_t(rp: RegularizedProblem, x, y, tol: Tolerances = Tolerances()) -> TCertificate:
    """Certify T-stationarity, NDT1..NDT5 and the T-index at the lifted point.

    Raises AssumptionError when the (c, eps) assumption fails and the
    problem was not constructed with override.  When the constraint
    directions are dependent (NDT1 false) the reported multipliers are the
    minimum-norm solution, flagged non_unique.
    """
    if not rp.assumption1_ok and not rp.override:
        raise AssumptionError(
            "regularization parameters violate the positivity/distinctness/eps bound "
            "assumption; construct with override=True to certify anyway"
        )
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = rp.n
    feasible, act = check_feasible_r(rp, x, y, tol)

    jf = eval2(rp.base.f, x)
    hjets = [eval2(e, x) for e in rp.base.h]
    gjets = [eval2(e, x) for e in rp.base.g]

    V, labels = _stationarity_columns(rp, act, hjets, gjets)
    target = np.concatenate([jf.gradient, rp.c])
    coeffs, residual = solve_multipliers(V, target, tol)

    groups: dict[str, dict[int, float]] = {
        "lam": {}, "mu1": {}, "mu2": {}, "sigma1": {}, "sigma2": {}, "rho1": {}, "rho2": {}
    }
    mu3 = 0.0
    for (kind, idx), val in zip(labels, coeffs):
        if kind == "mu3":
            mu3 = float(val)
        else:
            groups[kind][idx] = float(val)

    rank, nullbasis = rank_and_nullbasis(V.T, tol)
    licq = rank == V.shape[1]

    ts = tol.tol_strict
    eq7 = (
        all(v >= -ts for v in groups["mu1"].values())
        and all(v >= -ts for v in groups["mu2"].values())
        and (mu3 >= -ts if act.sum_active else True)
    )
    eq8_branches = {
        i: (abs(groups["rho1"][i]) <= ts, groups["rho2"][i] <= ts) for i in act.a00
    }
    eq8 = all(b1 or b2 for b1, b2 in eq8_branches.values())

    scale = 1.0 + float(np.linalg.norm(target))
    stationary = feasible and residual <= tol.tol_feas * scale and eq7 and eq8

    # Hessian of the working Lagrangian: every y-term and every orthogonality
    # branch term is linear, so only the x-block survives.
    hess = np.zeros((2 * n, 2 * n))
    hess[:n, :n] = jf.hessian
    for p, j in enumerate(hjets, start=1):
        hess[:n, :n] -= groups["lam"][p] * j.hessian
    for q in act.Q0:
        hess[:n, :n] -= groups["mu1"][q] * gjets[q - 1].hessian
    neg, zero, _ = restricted_inertia(hess, nullbasis, tol)

    ndt1 = licq
    ndt2 = (
        all(v > ts for v in groups["mu1"].values())
        and all(v > ts for v in groups["mu2"].values())
        and (mu3 > ts if act.sum_active else True)
    )
    ndt3 = all(
        abs(groups["rho1"][i]) > ts and groups["rho2"][i] < -ts for i in act.a00
    )
    ndt4 = zero == 0
    ndt5 = len(act.a00) == 0 or all(abs(v) > ts for v in groups["sigma1"].values())
    ndt = (ndt1, ndt2, ndt3, ndt4, ndt5)

    qi = neg
    bi = len(act.a00)

    reason = None
    if not feasible:
        reason = "infeasible"
    elif not stationary:
        reason = f"not stationary (residual={residual:.3e})"
    else:
        for flag, name in zip(ndt, ("NDT1", "NDT2", "NDT3", "NDT4", "NDT5")):
            if not flag:
                reason = name
                break

    return TCertificate(
        feasible=feasible,
        stationary=stationary,
        activity=act,
        lam=groups["lam"],
        mu1=groups["mu1"],
        mu2=groups["mu2"],
        mu3=mu3,
        sigma1=groups["sigma1"],
        sigma2=groups["sigma2"],
        rho1=groups["rho1"],
        rho2=groups["rho2"],
        residual=residual,
        ndt=ndt,
        eq8_branches=eq8_branches,
        quadratic_index=qi,
        biactive_index=bi,
        t_index=qi + bi if (stationary and all(ndt[:4])) else None,
        degenerate_reason=reason,
        non_unique=not licq,
    )


def check_y_structure(rp: RegularizedProblem, y, tol: Tolerances = Tolerances()) -> bool:
    """Structure every T-stationary y must have under the parameter assumption:

    n-s-1 components at 1+eps, one component at 1-(n-s-1)*eps, s components
    at zero, and the component sum exactly n-s.
    """
    y = np.asarray(y, dtype=float)
    n, s = rp.n, rp.s
    if y.shape != (n,):
        raise ValueError(f"point has shape {y.shape}, expected ({n},)")
    expected = np.sort(
        np.array([0.0] * s + [1.0 - (n - s - 1) * rp.eps] + [1.0 + rp.eps] * (n - s - 1))
    )
    got = np.sort(y)
    return bool(np.all(np.abs(got - expected) <= tol.tol_act)) and abs(
        float(np.sum(y)) - (n - s)
    ) <= tol.tol_feas
