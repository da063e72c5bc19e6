"""Brute-force enumeration of stationary points on desk-scale instances.

For quadratic objectives with affine constraints the multiplier systems are
linear, so enumerating every support pattern and active set is exhaustive:
that census is the trust anchor against which the certification and
lift/project machinery is validated.  A multistart damped-Newton census
covers non-quadratic fixtures (never exhaustive), and a seeded sampler
covers the unregularized reformulation, whose stationary points can form
continua that no pattern enumeration captures.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field

import numpy as np

from .ccop import MCertificate, Problem, certify_m
from .exprcore import ExprDomainError, eval2, polynomial_degree, to_source
from .numkern import Tolerances
from .regmpoc import AssumptionError, RegularizedProblem, TCertificate, certify_t

__all__ = [
    "CensusReport",
    "GridSpec",
    "census_quadratic",
    "census_t_quadratic",
    "census_newton",
    "merge_censuses",
    "is_quadratic_affine",
    "instance_id",
]


@dataclass
class CensusReport:
    """Census of stationary points: the sparse side, the lifted side, or both.

    by_index_* map an index value (or the string "degenerate") to a point
    count; complete is True only for exhaustive pattern enumerations on
    quadratic-affine instances.
    """

    instance_id: str
    m_points: list[tuple[np.ndarray, MCertificate]] = field(default_factory=list)
    t_points: list[tuple[np.ndarray, np.ndarray, TCertificate]] = field(default_factory=list)
    by_index_m: dict = field(default_factory=dict)
    by_index_t: dict = field(default_factory=dict)
    complete: bool = False
    notes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class GridSpec:
    """Multistart grid: points per free axis over the box [lo, hi]."""

    points_per_axis: int
    lo: float = -2.0
    hi: float = 2.0


def instance_id(pr: Problem, rp: RegularizedProblem | None = None) -> str:
    parts = [str(pr.n), str(pr.s), to_source(pr.f)]
    parts += [to_source(e) for e in pr.h]
    parts += [to_source(e) for e in pr.g]
    if rp is not None:
        parts += [repr(float(v)) for v in rp.c] + [repr(float(rp.eps))]
    return hashlib.sha1("|".join(parts).encode()).hexdigest()[:12]


def is_quadratic_affine(pr: Problem) -> bool:
    """True when f is (at most) quadratic and all constraints are affine."""
    df = polynomial_degree(pr.f)
    if df is None or df > 2:
        return False
    for e in (*pr.h, *pr.g):
        d = polynomial_degree(e)
        if d is None or d > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Pattern spaces


def _supports(n: int, s: int):
    for k in range(s + 1):
        yield from itertools.combinations(range(1, n + 1), k)


def _active_sets(m: int):
    for k in range(m + 1):
        yield from itertools.combinations(range(1, m + 1), k)


# ---------------------------------------------------------------------------
# Linear pattern systems (quadratic-affine instances)


def _quadratic_data(pr: Problem):
    x0 = np.zeros(pr.n)
    jf = eval2(pr.f, x0)
    hdata = [(eval2(e, x0).gradient, eval2(e, x0).value) for e in pr.h]
    gdata = [(eval2(e, x0).gradient, eval2(e, x0).value) for e in pr.g]
    return jf.hessian, jf.gradient, hdata, gdata


def _solve_support_pattern(n, A, b, hdata, gdata, J, act, tol: Tolerances):
    """Solve the linear multiplier system pinned to support J and active set.

    Unknowns are x, equality multipliers, active-inequality multipliers and
    one coordinate multiplier per off-support index.  Returns None when the
    square system is numerically singular (no stationary point carries that
    exact pattern under a constraint qualification).
    """
    jc = [i for i in range(1, n + 1) if i not in J]
    mh, ma, mz = len(hdata), len(act), len(jc)
    size = n + mh + ma + mz
    M = np.zeros((size, size))
    rhs = np.zeros(size)
    M[:n, :n] = A
    rhs[:n] = -b
    col = n
    for a, _ in hdata:
        M[:n, col] = -a
        col += 1
    for q in act:
        M[:n, col] = -gdata[q - 1][0]
        col += 1
    for i in jc:
        M[i - 1, col] = -1.0
        col += 1
    row = n
    for a, d in hdata:
        M[row, :n] = a
        rhs[row] = -d
        row += 1
    for q in act:
        a, d = gdata[q - 1]
        M[row, :n] = a
        rhs[row] = -d
        row += 1
    for i in jc:
        M[row, i - 1] = 1.0
        row += 1
    sing = np.linalg.svd(M, compute_uv=False)
    if sing[0] == 0.0 or sing[-1] <= tol.tol_rank * sing[0]:
        return None
    return np.linalg.solve(M, rhs)


# ---------------------------------------------------------------------------
# Deduplication


def _index_label(cert) -> object:
    idx = cert.m_index if isinstance(cert, MCertificate) else cert.t_index
    return idx if idx is not None else "degenerate"


def _dedupe(entries, radius: float, notes: list[str], what: str):
    """Merge points closer than `radius` (inf-norm) with equal index; keep and
    flag close points whose indices differ."""
    out = []
    for key, payload in sorted(entries, key=lambda e: tuple(e[0])):
        label = _index_label(payload[-1])
        keep = True
        for kkey, kpayload in out:
            if np.max(np.abs(key - kkey)) <= radius:
                if _index_label(kpayload[-1]) == label:
                    keep = False
                    break
                notes.append(
                    f"manual review: nearby {what} points with differing index at "
                    f"{np.round(key, 6).tolist()}"
                )
        if keep:
            out.append((key, payload))
    return [payload for _, payload in out]


def _count_by_index(certs) -> dict:
    counts: dict = {}
    for cert in certs:
        counts[_index_label(cert)] = counts.get(_index_label(cert), 0) + 1
    ints = sorted(k for k in counts if isinstance(k, int))
    ordered = {k: counts[k] for k in ints}
    if "degenerate" in counts:
        ordered["degenerate"] = counts["degenerate"]
    return ordered


# ---------------------------------------------------------------------------
# Censuses on the sparse side


def census_quadratic(pr: Problem, tol: Tolerances = Tolerances()) -> CensusReport:
    """Exhaustive census of M-stationary points of a quadratic-affine instance."""
    if not is_quadratic_affine(pr):
        raise ValueError(
            "census_quadratic requires a quadratic objective and affine constraints"
        )
    A, b, hdata, gdata = _quadratic_data(pr)
    notes: list[str] = []
    raw = []
    for J in _supports(pr.n, pr.s):
        for act in _active_sets(len(pr.g)):
            z = _solve_support_pattern(pr.n, A, b, hdata, gdata, J, act, tol)
            if z is None:
                notes.append(f"skipped singular pattern support={list(J)} active={list(act)}")
                continue
            x = z[: pr.n]
            if not np.all(np.isfinite(x)):
                continue
            cert = certify_m(pr, x, tol)
            if cert.feasible and cert.stationary:
                raw.append((x, (x, cert)))
    m_points = _dedupe(raw, 10.0 * tol.tol_act, notes, "M")
    return CensusReport(
        instance_id=instance_id(pr),
        m_points=m_points,
        by_index_m=_count_by_index([c for _, c in m_points]),
        complete=True,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Censuses on the lifted side


def _lemma_y(n: int, s: int, eps: float, a01set: tuple[int, ...], ibar: int) -> np.ndarray:
    y = np.zeros(n)
    for i in a01set:
        y[i - 1] = 1.0 + eps
    y[ibar - 1] = 1.0 - (n - s - 1) * eps
    return y


def census_t_quadratic(rp: RegularizedProblem, tol: Tolerances = Tolerances()) -> CensusReport:
    """Census of T-stationary points of a quadratic-affine regularization.

    Under the parameter assumption the y-structure of stationary points makes
    the pattern space finite and the census exhaustive.  Under override (the
    unregularized reformulation) stationary points may form continua; the
    census then samples the y-polytope per support pattern and reports
    complete=False.
    """
    pr = rp.base
    if not is_quadratic_affine(pr):
        raise ValueError(
            "census_t_quadratic requires a quadratic objective and affine constraints"
        )
    if not rp.assumption1_ok:
        if not rp.override:
            raise AssumptionError(
                "regularization parameters violate the assumption; construct with "
                "override=True for the sampling census"
            )
        return _census_t_sampled(rp, tol)

    n, s = rp.n, rp.s
    A, b, hdata, gdata = _quadratic_data(pr)
    notes: list[str] = []
    raw = []
    for J in _supports(n, s):
        jc = [i for i in range(1, n + 1) if i not in J]
        for act in _active_sets(len(pr.g)):
            z = _solve_support_pattern(n, A, b, hdata, gdata, J, act, tol)
            if z is None:
                notes.append(f"skipped singular pattern support={list(J)} active={list(act)}")
                continue
            x = z[:n]
            if not np.all(np.isfinite(x)):
                continue
            # one candidate y per (n-s)-subset of the zero pattern; the mid
            # component must carry the largest c or the sign conditions on the
            # upper-bound multipliers are violated
            for a01set in itertools.combinations(jc, n - s):
                ibar = max(a01set, key=lambda i: rp.c[i - 1])
                y = _lemma_y(n, s, rp.eps, tuple(i for i in a01set if i != ibar), ibar)
                tcert = certify_t(rp, x, y, tol)
                if tcert.feasible and tcert.stationary:
                    raw.append((np.concatenate([x, y]), (x, y, tcert)))
    t_points = _dedupe(raw, 10.0 * tol.tol_act, notes, "T")
    return CensusReport(
        instance_id=instance_id(pr, rp),
        t_points=t_points,
        by_index_t=_count_by_index([c for *_, c in t_points]),
        complete=True,
        notes=notes,
    )


def _census_t_sampled(rp: RegularizedProblem, tol: Tolerances) -> CensusReport:
    pr = rp.base
    n, s = rp.n, rp.s
    A, b, hdata, gdata = _quadratic_data(pr)
    notes = ["override sampler: y-space sampled per support pattern, census not exhaustive"]
    rng = np.random.default_rng(int(instance_id(pr, rp), 16) % 2**32)
    upper = 1.0 + rp.eps
    raw = []
    for J in _supports(n, s):
        for act in _active_sets(len(pr.g)):
            z = _solve_support_pattern(n, A, b, hdata, gdata, J, act, tol)
            if z is None:
                continue
            x = z[:n]
            if not np.all(np.isfinite(x)):
                continue
            zeros = [i for i in range(1, n + 1) if abs(x[i - 1]) <= tol.tol_act]
            if len(zeros) > 14 or len(zeros) * upper < (n - s) - tol.tol_feas:
                continue
            candidates = []
            for k in range(len(zeros) + 1):
                if k * upper < (n - s) - tol.tol_feas:
                    continue
                for sub in itertools.combinations(zeros, k):
                    y = np.zeros(n)
                    for i in sub:
                        y[i - 1] = upper
                    candidates.append(y)
            for _ in range(3):
                y = np.zeros(n)
                draw = rng.uniform(0.0, upper, size=len(zeros))
                deficit = (n - s) - draw.sum()
                if deficit > 0:
                    draw = np.clip(draw + deficit / len(zeros), 0.0, upper)
                if draw.sum() < (n - s) - tol.tol_feas:
                    continue
                for i, v in zip(zeros, draw):
                    y[i - 1] = v
                candidates.append(y)
            for y in candidates:
                tcert = certify_t(rp, x, y, tol)
                if tcert.feasible and tcert.stationary:
                    raw.append((np.concatenate([x, y]), (x, y, tcert)))
    t_points = _dedupe(raw, 10.0 * tol.tol_act, notes, "T")
    return CensusReport(
        instance_id=instance_id(pr, rp),
        t_points=t_points,
        by_index_t=_count_by_index([c for *_, c in t_points]),
        complete=False,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Multistart Newton census (independent of the linear path)


def _m_pattern_system(pr: Problem, J, act):
    n = pr.n
    jc = [i for i in range(1, n + 1) if i not in J]
    mh, ma, mz = len(pr.h), len(act), len(jc)
    size = n + mh + ma + mz
    jc0 = np.array([i - 1 for i in jc], dtype=int)

    def eval_f(z):
        x = z[:n]
        lam = z[n : n + mh]
        mu = z[n + mh : n + mh + ma]
        gam = z[n + mh + ma :]
        jf = eval2(pr.f, x)
        hj = [eval2(e, x) for e in pr.h]
        gj = [eval2(pr.g[q - 1], x) for q in act]
        r1 = jf.gradient.copy()
        hess = jf.hessian.copy()
        for k, j in enumerate(hj):
            r1 -= lam[k] * j.gradient
            hess -= lam[k] * j.hessian
        for k, j in enumerate(gj):
            r1 -= mu[k] * j.gradient
            hess -= mu[k] * j.hessian
        r1[jc0] -= gam
        F = np.concatenate(
            [r1, [j.value for j in hj], [j.value for j in gj], x[jc0]]
        )
        JF = np.zeros((size, size))
        JF[:n, :n] = hess
        col = n
        for j in hj:
            JF[:n, col] = -j.gradient
            col += 1
        for j in gj:
            JF[:n, col] = -j.gradient
            col += 1
        for i0 in jc0:
            JF[i0, col] = -1.0
            col += 1
        row = n
        for j in hj:
            JF[row, :n] = j.gradient
            row += 1
        for j in gj:
            JF[row, :n] = j.gradient
            row += 1
        for i0 in jc0:
            JF[row, i0] = 1.0
            row += 1
        return F, JF

    return eval_f, size


def _damped_newton(eval_f, z0, tol: Tolerances, max_iter=100, max_halvings=30):
    z = z0.copy()
    try:
        F, JF = eval_f(z)
    except ExprDomainError:
        return z, False
    merit = float(np.linalg.norm(F))
    for _ in range(max_iter):
        if np.max(np.abs(F)) <= tol.tol_feas:
            return z, True
        try:
            dz = np.linalg.solve(JF, -F)
        except np.linalg.LinAlgError:
            dz = np.linalg.lstsq(JF, -F, rcond=None)[0]
        if not np.all(np.isfinite(dz)):
            return z, False
        step = 1.0
        for _ in range(max_halvings):
            try:
                Ft, JFt = eval_f(z + step * dz)
            except ExprDomainError:
                step *= 0.5
                continue
            mt = float(np.linalg.norm(Ft))
            if mt < merit:
                z = z + step * dz
                F, JF, merit = Ft, JFt, mt
                break
            step *= 0.5
        else:
            return z, bool(np.max(np.abs(F)) <= tol.tol_feas)
    return z, bool(np.max(np.abs(F)) <= tol.tol_feas)


def census_newton(target, grid: GridSpec, tol: Tolerances = Tolerances()) -> CensusReport:
    """Multistart damped-Newton census; works on any smooth instance.

    Each support/active-set pattern gets one Newton run per grid start over
    its free axes; converged roots are clustered and certified.  Never
    exhaustive: complete is always False.
    """
    if isinstance(target, RegularizedProblem):
        return _census_newton_t(target, grid, tol)
    return _census_newton_m(target, grid, tol)


def _newton_roots(pr: Problem, grid: GridSpec, tol: Tolerances):
    """Converged x per support/active-set pattern, plus a failed-start count."""
    axis = np.linspace(grid.lo, grid.hi, grid.points_per_axis)
    failures = 0
    per_pattern = []
    for J in _supports(pr.n, pr.s):
        for act in _active_sets(len(pr.g)):
            eval_f, size = _m_pattern_system(pr, J, act)
            roots = []
            for start in itertools.product(axis, repeat=len(J)):
                z0 = np.zeros(size)
                for slot, i in enumerate(J):
                    z0[i - 1] = start[slot]
                z, ok = _damped_newton(eval_f, z0, tol)
                if not ok:
                    failures += 1
                    continue
                x = z[: pr.n]
                if any(np.max(np.abs(x - r)) <= 10.0 * tol.tol_act for r in roots):
                    continue
                roots.append(x)
            per_pattern.append((J, act, roots))
    return per_pattern, failures


def _census_newton_m(pr: Problem, grid: GridSpec, tol: Tolerances) -> CensusReport:
    notes: list[str] = []
    if grid.points_per_axis <= 0:
        return CensusReport(instance_id(pr), notes=["empty grid"], complete=False)
    per_pattern, failures = _newton_roots(pr, grid, tol)
    raw = []
    for _, _, roots in per_pattern:
        for x in roots:
            cert = certify_m(pr, x, tol)
            if cert.feasible and cert.stationary:
                raw.append((x, (x, cert)))
    if failures:
        notes.append(f"{failures} Newton starts did not converge")
    m_points = _dedupe(raw, 10.0 * tol.tol_act, notes, "M")
    return CensusReport(
        instance_id=instance_id(pr),
        m_points=m_points,
        by_index_m=_count_by_index([c for _, c in m_points]),
        complete=False,
        notes=notes,
    )


def _census_newton_t(rp: RegularizedProblem, grid: GridSpec, tol: Tolerances) -> CensusReport:
    if not rp.assumption1_ok:
        raise AssumptionError(
            "the Newton census on the lifted side requires the (c, eps) assumption; "
            "use census_t_quadratic with override for the unregularized reformulation"
        )
    pr = rp.base
    n, s = rp.n, rp.s
    notes: list[str] = []
    if grid.points_per_axis <= 0:
        return CensusReport(instance_id(pr, rp), notes=["empty grid"], complete=False)
    per_pattern, failures = _newton_roots(pr, grid, tol)
    raw = []
    for J, _, roots in per_pattern:
        jc = [i for i in range(1, n + 1) if i not in J]
        for x in roots:
            for a01set in itertools.combinations(jc, n - s):
                ibar = max(a01set, key=lambda i: rp.c[i - 1])
                y = _lemma_y(n, s, rp.eps, tuple(i for i in a01set if i != ibar), ibar)
                tcert = certify_t(rp, x, y, tol)
                if tcert.feasible and tcert.stationary:
                    raw.append((np.concatenate([x, y]), (x, y, tcert)))
    if failures:
        notes.append(f"{failures} Newton starts did not converge")
    t_points = _dedupe(raw, 10.0 * tol.tol_act, notes, "T")
    return CensusReport(
        instance_id=instance_id(pr, rp),
        t_points=t_points,
        by_index_t=_count_by_index([c for *_, c in t_points]),
        complete=False,
        notes=notes,
    )


def merge_censuses(m_census: CensusReport, t_census: CensusReport) -> CensusReport:
    """Combine a sparse-side and a lifted-side census over the same instance."""
    return CensusReport(
        instance_id=t_census.instance_id,
        m_points=list(m_census.m_points),
        t_points=list(t_census.t_points),
        by_index_m=dict(m_census.by_index_m),
        by_index_t=dict(t_census.by_index_t),
        complete=m_census.complete and t_census.complete,
        notes=list(m_census.notes) + list(t_census.notes),
    )
