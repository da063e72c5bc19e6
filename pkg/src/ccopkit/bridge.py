"""Correspondence between M-stationary points and their lifted T-companions.

An M-stationary x with vanishing set I0 lifts to one T-stationary (x, y) per
index subset Ebar of I0 \\ {ibar} with n-s-1 elements, where ibar maximizes
c over I0: y carries 1+eps on Ebar, 1-(n-s-1)*eps at ibar, zeros elsewhere,
and the companion multipliers are available in closed form from c and the
M-multipliers.  Projection maps a T-stationary (x, y) back by reading gamma
off sigma1 (a01) and rho1 (a00).  Nondegenerate inputs preserve the index in
both directions, which verify_counts checks against a census together with
the binomial companion count and the minimizer/mountain-pass inequalities.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .ccop import MCertificate, certify_m
from .numkern import Tolerances
from .regmpoc import AssumptionError, RegularizedProblem, TCertificate, certify_t

__all__ = [
    "LiftSet",
    "CountCheck",
    "CountReport",
    "NotStationaryError",
    "BridgeError",
    "lift",
    "project",
    "verify_counts",
]

_CROSS_TOL = 1e-8


class NotStationaryError(ValueError):
    """Operation requires a stationary input point."""


class BridgeError(RuntimeError):
    """A correspondence guarantee failed numerically; indicates a bug or a
    tolerance breakdown, never a routine negative verdict."""


@dataclass
class LiftSet:
    """All T-stationary companions of one M-stationary base point."""

    base_point: np.ndarray
    base_certificate: MCertificate
    ibar: int
    subsets: tuple[tuple[int, ...], ...]
    companions: list[tuple[np.ndarray, TCertificate]]
    expected_count: int
    count_applicable: bool  # exact count asserted only for nondegenerate bases


def _closed_form_multipliers(
    rp: RegularizedProblem, mcert: MCertificate, ibar: int, ebar: tuple[int, ...]
) -> dict[str, dict[int, float] | float]:
    c = rp.c
    i0 = set(mcert.activity.I0)
    a01 = set(ebar) | {ibar}
    a00 = sorted(i0 - a01)
    support = sorted(set(range(1, rp.n + 1)) - i0)
    return {
        "lam": dict(mcert.lam),
        "mu1": dict(mcert.mu),
        "mu2": {i: float(c[ibar - 1] - c[i - 1]) for i in ebar},
        "mu3": float(c[ibar - 1]),
        "sigma1": {i: mcert.gamma[i] for i in sorted(a01)},
        "sigma2": {i: float(c[i - 1] - c[ibar - 1]) for i in support},
        "rho1": {i: mcert.gamma[i] for i in a00},
        "rho2": {i: float(c[i - 1] - c[ibar - 1]) for i in a00},
    }


def _match(label: str, expected, got, context: str):
    if isinstance(expected, dict):
        for i, v in expected.items():
            gv = got.get(i)
            if gv is None or abs(gv - v) > _CROSS_TOL:
                raise BridgeError(
                    f"{context}: closed-form {label}[{i}]={v!r} vs solved {gv!r}"
                )
    elif abs(expected - got) > _CROSS_TOL:
        raise BridgeError(f"{context}: closed-form {label}={expected!r} vs solved {got!r}")


def lift(rp: RegularizedProblem, x, tol: Tolerances = Tolerances()) -> LiftSet:
    """Enumerate every T-stationary companion of an M-stationary x.

    Requires the (c, eps) assumption: the maximizing index ibar is then
    unique, the construction is deterministic (subsets in lexicographic
    order) and every companion certifies T-stationary with the closed-form
    multipliers matching the independently solved ones.
    """
    if not rp.assumption1_ok:
        raise AssumptionError(
            "lift requires positive pairwise-distinct c and 0 < eps <= 1/(n-s); "
            "the maximizing index would otherwise be ill-defined"
        )
    x = np.asarray(x, dtype=float)
    n, s = rp.n, rp.s
    mcert = certify_m(rp.base, x, tol)
    if not mcert.stationary:
        raise NotStationaryError(
            f"point is not M-stationary ({mcert.degenerate_reason})"
        )
    i0 = mcert.activity.I0
    if len(i0) < n - s:
        raise BridgeError("fewer vanishing coordinates than n - s at a feasible point")

    norm0 = mcert.activity.x_norm0
    expected = math.comb(n - norm0 - 1, n - s - 1)
    if expected > 2**63 - 1:
        raise OverflowError("companion count exceeds 64-bit range")

    ibar = max(i0, key=lambda i: rp.c[i - 1])
    rest = sorted(set(i0) - {ibar})
    subsets = tuple(itertools.combinations(rest, n - s - 1))
    companions: list[tuple[np.ndarray, TCertificate]] = []
    for ebar in subsets:
        y = np.zeros(n)
        for i in ebar:
            y[i - 1] = 1.0 + rp.eps
        y[ibar - 1] = 1.0 - (n - s - 1) * rp.eps
        tcert = certify_t(rp, x, y, tol)
        if not tcert.stationary or tcert.residual > _CROSS_TOL:
            raise BridgeError(
                f"constructed companion failed to certify (Ebar={ebar}, "
                f"reason={tcert.degenerate_reason}, residual={tcert.residual:.3e})"
            )
        if mcert.ndm[0] and tcert.ndt[0]:
            closed = _closed_form_multipliers(rp, mcert, ibar, ebar)
            ctx = f"lift Ebar={ebar}"
            _match("lam", closed["lam"], tcert.lam, ctx)
            _match("mu1", closed["mu1"], tcert.mu1, ctx)
            _match("mu2", closed["mu2"], tcert.mu2, ctx)
            _match("mu3", closed["mu3"], tcert.mu3, ctx)
            _match("sigma1", closed["sigma1"], tcert.sigma1, ctx)
            _match("sigma2", closed["sigma2"], tcert.sigma2, ctx)
            _match("rho1", closed["rho1"], tcert.rho1, ctx)
            _match("rho2", closed["rho2"], tcert.rho2, ctx)
        companions.append((y, tcert))

    return LiftSet(
        base_point=x,
        base_certificate=mcert,
        ibar=ibar,
        subsets=subsets,
        companions=companions,
        expected_count=expected,
        count_applicable=mcert.nondegenerate,
    )


def project(rp: RegularizedProblem, x, y, tol: Tolerances = Tolerances()) -> MCertificate:
    """Project a T-stationary (x, y) down to an M-certificate for x.

    Under qualification on both sides the mapped multipliers (gamma read off
    sigma1 on a01 and rho1 on a00) must equal the independently solved ones;
    when the input is nondegenerate and satisfies NDT5, the projected point
    must be nondegenerate with matching index.  Violations raise BridgeError.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    tcert = certify_t(rp, x, y, tol)
    if not tcert.stationary:
        raise NotStationaryError(
            f"point is not T-stationary ({tcert.degenerate_reason})"
        )
    mapped_gamma = {**tcert.sigma1, **tcert.rho1}

    mcert = certify_m(rp.base, x, tol)
    if not mcert.stationary:
        raise BridgeError("projection of a T-stationary point failed to be M-stationary")

    if mcert.ndm[0] and tcert.ndt[0]:
        _match("lam", tcert.lam, mcert.lam, "project")
        _match("mu", tcert.mu1, mcert.mu, "project")
        _match("gamma", mapped_gamma, mcert.gamma, "project")

    if tcert.nondegenerate and tcert.ndt[4]:
        if not mcert.nondegenerate:
            raise BridgeError(
                f"nondegenerate input with nonvanishing a01 multipliers projected to a "
                f"degenerate point ({mcert.degenerate_reason})"
            )
        if mcert.m_index != tcert.t_index:
            raise BridgeError(
                f"index not preserved under projection: {mcert.m_index} != {tcert.t_index}"
            )
    return mcert


@dataclass
class CountCheck:
    name: str
    status: str  # pass | fail | n/a
    detail: str


@dataclass
class CountReport:
    checks: list[CountCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)


def verify_counts(rp: RegularizedProblem, census, tol: Tolerances = Tolerances()) -> CountReport:
    """Check the counting identities of a two-sided census.

    (a) every nondegenerate M-point has exactly binom(n-k-1, n-s-1)
        T-points above it (k its nonzero count), (b) that binomial equals
        binom(n-k-1, s-k), (c) minimizer counts agree on both sides,
        (d) index-1 points are at least minimizers minus one.
    Exact-count checks are n/a on incomplete censuses.
    """
    n, s = rp.n, rp.s
    report = CountReport()
    radius = 10.0 * tol.tol_act

    if not census.m_points or not census.t_points:
        report.checks.append(
            CountCheck("census-sides", "n/a", "census does not cover both sides")
        )
        return report

    if census.complete:
        for xm, mcert in census.m_points:
            if not mcert.nondegenerate:
                continue
            k = mcert.activity.x_norm0
            want = math.comb(n - k - 1, n - s - 1)
            got = sum(
                1
                for xt, _, _ in census.t_points
                if np.max(np.abs(xt - xm)) <= radius
            )
            status = "pass" if got == want else "fail"
            report.checks.append(
                CountCheck(
                    "companion-count",
                    status,
                    f"x={np.round(xm, 6).tolist()} expected {want} companions, found {got}",
                )
            )
    else:
        report.checks.append(
            CountCheck("companion-count", "n/a", "census incomplete; exact counts not asserted")
        )

    for k in sorted({mcert.activity.x_norm0 for _, mcert in census.m_points}):
        lhs = math.comb(n - k - 1, n - s - 1)
        rhs = math.comb(n - k - 1, s - k) if s - k >= 0 else None
        status = "pass" if lhs == rhs else "fail"
        report.checks.append(
            CountCheck(
                "binomial-identity",
                status,
                f"nonzero count {k}: binom({n - k - 1},{n - s - 1})={lhs}, "
                f"binom({n - k - 1},{s - k})={rhs}",
            )
        )

    if census.complete:
        m0 = sum(1 for _, c in census.m_points if c.m_index == 0)
        t0 = sum(1 for *_, c in census.t_points if c.t_index == 0)
        t1 = sum(1 for *_, c in census.t_points if c.t_index == 1)
        report.checks.append(
            CountCheck(
                "minimizer-count",
                "pass" if m0 == t0 else "fail",
                f"M-index 0 count {m0}, T-index 0 count {t0}",
            )
        )
        report.checks.append(
            CountCheck(
                "mountain-pass",
                "pass" if t1 >= t0 - 1 else "fail",
                f"T-index 1 count {t1} >= {t0} - 1",
            )
        )
    else:
        report.checks.append(
            CountCheck("minimizer-count", "n/a", "census incomplete"),
        )
        report.checks.append(
            CountCheck("mountain-pass", "n/a", "census incomplete"),
        )
    return report
