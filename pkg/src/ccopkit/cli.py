"""Command-line surface for certification, lifting, censuses and verification.

Problem files are plain UTF-8 text with bracketed section headers and
``key = value`` lines; expression strings are double quoted, vectors are
bracketed lists, and ``#`` starts a comment line:

    [problem]
    n = 2
    s = 1
    f = "(x1-1)^2 + (x2-1)^2"
    h = []                        # optional equality constraints
    g = []                        # optional inequality constraints

    [regularization]              # optional
    c = [0.3, 0.7]
    eps = 0.5
    override = false

    [points]                      # named points: length n (x) or 2n (x, y)
    origin = [0, 0]
    lifted = [0, 0, 0, 1]

    [tolerances]                  # optional overrides
    tol_feas = 1e-9

Reports come in two formats, both deterministic (byte-identical across runs
on the same input).  The machine format is a flat sequence of ``key = value``
lines: booleans are ``true``/``false``, missing values are ``none``, floats
use shortest round-trip notation, vectors are bracketed lists, strings are
double quoted.  The human format shows the same rows grouped per section.

Exit codes: 0 stationary and fully nondegenerate (for certify) or all
checks passed; 1 stationary but degenerate / some check failed; 2 not
stationary; 3 input error; 4 quadratic census requested on a non-quadratic
instance.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from .bridge import BridgeError, NotStationaryError, lift, project, verify_counts
from .ccop import MCertificate, Problem, certify_m, check_cc_licq
from .exprcore import ExprSyntaxError, parse
from .numkern import Tolerances
from .oracle import (
    CensusReport,
    GridSpec,
    census_newton,
    census_quadratic,
    census_t_quadratic,
    is_quadratic_affine,
    merge_censuses,
)
from .regmpoc import (
    AssumptionError,
    RegularizedProblem,
    TCertificate,
    certify_t,
    check_mpoc_licq,
    check_y_structure,
    make_regularized,
)

__all__ = ["main", "load_problem_file", "ProblemFile", "LoadError"]


class LoadError(ValueError):
    """Problem file malformed or inconsistent."""


@dataclasses.dataclass
class ProblemFile:
    problem: Problem
    c: np.ndarray | None
    eps: float | None
    override: bool
    points: dict[str, np.ndarray]
    tol_overrides: dict[str, float]


# ---------------------------------------------------------------------------
# Problem file parsing

_SECTIONS = ("problem", "regularization", "points", "tolerances")
_TOL_KEYS = ("tol_feas", "tol_act", "tol_rank", "tol_strict")


def _parse_scalar(raw: str, where: str):
    raw = raw.strip()
    if raw.startswith('"'):
        if not raw.endswith('"') or len(raw) < 2:
            raise LoadError(f"{where}: unterminated string {raw!r}")
        return raw[1:-1]
    if raw in ("true", "false"):
        return raw == "true"
    try:
        return float(raw)
    except ValueError:
        raise LoadError(f"{where}: cannot parse value {raw!r}") from None


def _parse_value(raw: str, where: str):
    raw = raw.strip()
    if not raw.startswith("["):
        return _parse_scalar(raw, where)
    if not raw.endswith("]"):
        raise LoadError(f"{where}: unterminated list {raw!r}")
    body = raw[1:-1].strip()
    if not body:
        return []
    items, quote, start = [], False, 0
    for k, ch in enumerate(body):
        if ch == '"':
            quote = not quote
        elif ch == "," and not quote:
            items.append(body[start:k])
            start = k + 1
    items.append(body[start:])
    return [_parse_scalar(item, where) for item in items]


def _read_sections(text: str, origin: str) -> dict[str, list[tuple[str, object, str]]]:
    sections: dict[str, list[tuple[str, object, str]]] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        where = f"{origin}:{lineno}"
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise LoadError(f"{where}: malformed section header {stripped!r}")
            current = stripped[1:-1].strip()
            if current not in _SECTIONS:
                raise LoadError(f"{where}: unknown section [{current}]")
            sections.setdefault(current, [])
            continue
        if current is None:
            raise LoadError(f"{where}: key outside any section")
        if "=" not in stripped:
            raise LoadError(f"{where}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        sections[current].append((key.strip(), _parse_value(raw, where), where))
    return sections


def load_problem_file(path: str) -> ProblemFile:
    """Load and validate a problem file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from None
    sections = _read_sections(text, path)

    if "problem" not in sections:
        raise LoadError(f"{path}: missing [problem] section")
    prob = {k: v for k, v, _ in sections["problem"]}
    for key in ("n", "s", "f"):
        if key not in prob:
            raise LoadError(f"{path}: [problem] requires {key}")
    n = int(prob["n"])
    s = int(prob["s"])
    try:
        f = parse(str(prob["f"]), n)
        h = tuple(parse(str(src), n) for src in prob.get("h", []))
        g = tuple(parse(str(src), n) for src in prob.get("g", []))
    except ExprSyntaxError as exc:
        raise LoadError(f"{path}: {exc}") from None
    try:
        problem = Problem(n, s, f, h, g)
    except ValueError as exc:
        raise LoadError(f"{path}: {exc}") from None

    c = eps = None
    override = False
    if "regularization" in sections:
        reg = {k: v for k, v, _ in sections["regularization"]}
        if "c" not in reg or "eps" not in reg:
            raise LoadError(f"{path}: [regularization] requires c and eps")
        c = np.asarray([float(v) for v in reg["c"]], dtype=float)
        if c.shape != (n,):
            raise LoadError(f"{path}: c has length {c.size}, expected {n}")
        eps = float(reg["eps"])
        override = bool(reg.get("override", False))

    points: dict[str, np.ndarray] = {}
    for key, value, where in sections.get("points", []):
        vec = np.asarray([float(v) for v in value], dtype=float)
        if vec.size not in (n, 2 * n):
            raise LoadError(f"{where}: point '{key}' has length {vec.size}, expected {n} or {2 * n}")
        points[key] = vec

    tol_overrides: dict[str, float] = {}
    for key, value, where in sections.get("tolerances", []):
        if key not in _TOL_KEYS:
            raise LoadError(f"{where}: unknown tolerance '{key}'")
        tol_overrides[key] = float(value)

    return ProblemFile(problem, c, eps, override, points, tol_overrides)


# ---------------------------------------------------------------------------
# Report rendering


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return f'"{value}"'


class Report:
    def __init__(self, kind: str, tol: Tolerances):
        self.rows: list[tuple[str, str]] = []
        self.add("schema", "ccopkit-report/1")
        self.add("kind", kind)
        for name in _TOL_KEYS:
            self.add(f"tolerances.{name}", getattr(tol, name))

    def add(self, key: str, value):
        self.rows.append((key, _fmt(value)))

    def render(self, fmt: str) -> str:
        if fmt == "machine":
            return "\n".join(f"{k} = {v}" for k, v in self.rows) + "\n"
        out = []
        previous = None
        for key, value in self.rows:
            head = key.split(".", 1)[0]
            if head != previous:
                if previous is not None:
                    out.append("")
                previous = head
            out.append(f"{key} = {value}")
        return "\n".join(out) + "\n"


def _add_m_certificate(rep: Report, prefix: str, cert: MCertificate):
    rep.add(f"{prefix}.feasible", cert.feasible)
    rep.add(f"{prefix}.stationary", cert.stationary)
    rep.add(f"{prefix}.residual", cert.residual)
    rep.add(f"{prefix}.activity.Q0", cert.activity.Q0)
    rep.add(f"{prefix}.activity.I0", cert.activity.I0)
    rep.add(f"{prefix}.activity.x_norm0", cert.activity.x_norm0)
    for p, v in cert.lam.items():
        rep.add(f"{prefix}.multipliers.lam.{p}", v)
    for q, v in cert.mu.items():
        rep.add(f"{prefix}.multipliers.mu.{q}", v)
    for i, v in cert.gamma.items():
        rep.add(f"{prefix}.multipliers.gamma.{i}", v)
    rep.add(f"{prefix}.multipliers.unique", not cert.non_unique)
    for k, flag in enumerate(cert.ndm, start=1):
        rep.add(f"{prefix}.ndm.{k}", flag)
    rep.add(f"{prefix}.index.quadratic", cert.quadratic_index)
    rep.add(f"{prefix}.index.sparsity", cert.sparsity_index)
    rep.add(f"{prefix}.index.m", cert.m_index)
    rep.add(f"{prefix}.reason", cert.degenerate_reason)


def _add_t_certificate(rep: Report, prefix: str, cert: TCertificate):
    rep.add(f"{prefix}.feasible", cert.feasible)
    rep.add(f"{prefix}.stationary", cert.stationary)
    rep.add(f"{prefix}.residual", cert.residual)
    act = cert.activity
    rep.add(f"{prefix}.activity.a00", act.a00)
    rep.add(f"{prefix}.activity.a01", act.a01)
    rep.add(f"{prefix}.activity.a10", act.a10)
    rep.add(f"{prefix}.activity.E", act.Ecal)
    rep.add(f"{prefix}.activity.sum_active", act.sum_active)
    rep.add(f"{prefix}.activity.Q0", act.Q0)
    for p, v in cert.lam.items():
        rep.add(f"{prefix}.multipliers.lam.{p}", v)
    for q, v in cert.mu1.items():
        rep.add(f"{prefix}.multipliers.mu1.{q}", v)
    for i, v in cert.mu2.items():
        rep.add(f"{prefix}.multipliers.mu2.{i}", v)
    rep.add(f"{prefix}.multipliers.mu3", cert.mu3)
    for i, v in cert.sigma1.items():
        rep.add(f"{prefix}.multipliers.sigma1.{i}", v)
    for i, v in cert.sigma2.items():
        rep.add(f"{prefix}.multipliers.sigma2.{i}", v)
    for i, v in cert.rho1.items():
        rep.add(f"{prefix}.multipliers.rho1.{i}", v)
    for i, v in cert.rho2.items():
        rep.add(f"{prefix}.multipliers.rho2.{i}", v)
    rep.add(f"{prefix}.multipliers.unique", not cert.non_unique)
    for k, flag in enumerate(cert.ndt, start=1):
        rep.add(f"{prefix}.ndt.{k}", flag)
    for i, (b1, b2) in cert.eq8_branches.items():
        rep.add(f"{prefix}.disjunction.{i}", [b1, b2])
    rep.add(f"{prefix}.index.quadratic", cert.quadratic_index)
    rep.add(f"{prefix}.index.biactive", cert.biactive_index)
    rep.add(f"{prefix}.index.t", cert.t_index)
    rep.add(f"{prefix}.reason", cert.degenerate_reason)


# ---------------------------------------------------------------------------
# Shared command plumbing


def _tolerances(pf: ProblemFile, args) -> Tolerances:
    merged = dict(pf.tol_overrides)
    for name in _TOL_KEYS:
        flag = getattr(args, name)
        if flag is not None:
            merged[name] = flag
    return Tolerances(**merged)


def _regularized(pf: ProblemFile, args, tol: Tolerances) -> RegularizedProblem:
    if pf.c is None:
        raise LoadError("this command needs a [regularization] section")
    override = pf.override or args.override_assumption1
    return make_regularized(pf.problem, pf.c, pf.eps, override=override, tol=tol)


def _named_point(pf: ProblemFile, name: str) -> np.ndarray:
    if name not in pf.points:
        raise LoadError(f"no point named '{name}' in file (have: {sorted(pf.points)})")
    return pf.points[name]


def _split_xy(pf: ProblemFile, vec: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    n = pf.problem.n
    if vec.size != 2 * n:
        raise LoadError(f"point '{name}' has length {vec.size}; a lifted point needs {2 * n}")
    return vec[:n], vec[n:]


def _emit(rep: Report, args) -> None:
    sys.stdout.write(rep.render(args.format))


# ---------------------------------------------------------------------------
# Subcommands


def cmd_certify(args) -> int:
    pf = load_problem_file(args.file)
    tol = _tolerances(pf, args)
    vec = _named_point(pf, args.point)
    rep = Report("certify", tol)
    rep.add("file", args.file)
    rep.add("point", args.point)
    rep.add("side", args.side)

    if args.side == "m":
        if vec.size != pf.problem.n:
            raise LoadError(f"point '{args.point}' has length {vec.size}; side m needs {pf.problem.n}")
        cert = certify_m(pf.problem, vec, tol)
        rep.add("x", vec)
        _add_m_certificate(rep, "certificate", cert)
        clean = cert.nondegenerate
    else:
        rp = _regularized(pf, args, tol)
        x, y = _split_xy(pf, vec, args.point)
        cert = certify_t(rp, x, y, tol)
        rep.add("x", x)
        rep.add("y", y)
        _add_t_certificate(rep, "certificate", cert)
        clean = cert.nondegenerate and cert.ndt[4]

    if not cert.stationary:
        rep.add("verdict", "not-stationary" if cert.feasible else "infeasible")
        _emit(rep, args)
        return 2
    rep.add("verdict", "nondegenerate" if clean else "degenerate")
    _emit(rep, args)
    return 0 if clean else 1


def cmd_lift(args) -> int:
    pf = load_problem_file(args.file)
    tol = _tolerances(pf, args)
    rp = _regularized(pf, args, tol)
    vec = _named_point(pf, args.point)
    if vec.size != pf.problem.n:
        raise LoadError(f"point '{args.point}' has length {vec.size}; lift needs an x of length {pf.problem.n}")
    rep = Report("lift", tol)
    rep.add("file", args.file)
    rep.add("point", args.point)
    rep.add("x", vec)
    try:
        ls = lift(rp, vec, tol)
    except NotStationaryError as exc:
        rep.add("verdict", "not-stationary")
        rep.add("reason", str(exc))
        _emit(rep, args)
        return 2
    _add_m_certificate(rep, "base", ls.base_certificate)
    rep.add("ibar", ls.ibar)
    rep.add("expected_count", ls.expected_count)
    rep.add("count_asserted", ls.count_applicable)
    rep.add("companions", len(ls.companions))
    for k, ((y, tcert), ebar) in enumerate(zip(ls.companions, ls.subsets)):
        rep.add(f"companion.{k}.Ebar", ebar)
        rep.add(f"companion.{k}.y", y)
        _add_t_certificate(rep, f"companion.{k}", tcert)
    rep.add("verdict", "ok")
    _emit(rep, args)
    return 0


def cmd_project(args) -> int:
    pf = load_problem_file(args.file)
    tol = _tolerances(pf, args)
    rp = _regularized(pf, args, tol)
    vec = _named_point(pf, args.point)
    x, y = _split_xy(pf, vec, args.point)
    rep = Report("project", tol)
    rep.add("file", args.file)
    rep.add("point", args.point)
    rep.add("x", x)
    rep.add("y", y)
    tcert = certify_t(rp, x, y, tol)
    _add_t_certificate(rep, "lifted", tcert)
    try:
        mcert = project(rp, x, y, tol)
    except NotStationaryError as exc:
        rep.add("verdict", "not-stationary")
        rep.add("reason", str(exc))
        _emit(rep, args)
        return 2
    except BridgeError as exc:
        rep.add("verdict", "correspondence-violated")
        rep.add("reason", str(exc))
        _emit(rep, args)
        return 1
    _add_m_certificate(rep, "projected", mcert)
    rep.add("verdict", "ok")
    _emit(rep, args)
    return 0


def _add_census(rep: Report, census: CensusReport, sides: str):
    rep.add("instance", census.instance_id)
    rep.add("complete", census.complete)
    if "m" in sides:
        rep.add("m.count", len(census.m_points))
        for label, count in census.by_index_m.items():
            rep.add(f"m.by_index.{label}", count)
        for k, (x, cert) in enumerate(census.m_points):
            rep.add(f"m.point.{k}.x", x)
            rep.add(f"m.point.{k}.index", cert.m_index)
            rep.add(f"m.point.{k}.reason", cert.degenerate_reason)
    if "t" in sides:
        rep.add("t.count", len(census.t_points))
        for label, count in census.by_index_t.items():
            rep.add(f"t.by_index.{label}", count)
        for k, (x, y, cert) in enumerate(census.t_points):
            rep.add(f"t.point.{k}.x", x)
            rep.add(f"t.point.{k}.y", y)
            rep.add(f"t.point.{k}.index", cert.t_index)
            rep.add(f"t.point.{k}.reason", cert.degenerate_reason)
    for k, note in enumerate(census.notes):
        rep.add(f"note.{k}", note)


def cmd_census(args) -> int:
    pf = load_problem_file(args.file)
    tol = _tolerances(pf, args)
    rep = Report("census", tol)
    rep.add("file", args.file)
    rep.add("method", args.method)
    rep.add("side", args.side)

    if args.method == "quadratic" and not is_quadratic_affine(pf.problem):
        sys.stdout.write(rep.render(args.format))
        sys.stderr.write("census: quadratic method on a non-quadratic instance\n")
        return 4

    grid = GridSpec(args.grid_points, args.grid_lo, args.grid_hi)
    m_census = t_census = None
    if args.side in ("m", "both"):
        if args.method == "quadratic":
            m_census = census_quadratic(pf.problem, tol)
        else:
            m_census = census_newton(pf.problem, grid, tol)
    if args.side in ("t", "both"):
        rp = _regularized(pf, args, tol)
        if args.method == "quadratic":
            t_census = census_t_quadratic(rp, tol)
        else:
            t_census = census_newton(rp, grid, tol)

    if args.side == "m":
        _add_census(rep, m_census, "m")
        rep.add("verdict", "ok")
        _emit(rep, args)
        return 0
    if args.side == "t":
        _add_census(rep, t_census, "t")
        rep.add("verdict", "ok")
        _emit(rep, args)
        return 0

    merged = merge_censuses(m_census, t_census)
    _add_census(rep, merged, "mt")
    rp = _regularized(pf, args, tol)
    counts = verify_counts(rp, merged, tol)
    for k, check in enumerate(counts.checks):
        rep.add(f"check.{k}.name", check.name)
        rep.add(f"check.{k}.status", check.status)
        rep.add(f"check.{k}.detail", check.detail)
    rep.add("verdict", "ok" if counts.ok else "failed")
    _emit(rep, args)
    return 0 if counts.ok else 1


def cmd_check_licq(args) -> int:
    pf = load_problem_file(args.file)
    tol = _tolerances(pf, args)
    vec = _named_point(pf, args.point)
    rep = Report("check-licq", tol)
    rep.add("file", args.file)
    rep.add("point", args.point)
    if vec.size == pf.problem.n:
        rep.add("side", "m")
        rep.add("x", vec)
        holds = check_cc_licq(pf.problem, vec, tol)
    else:
        rp = _regularized(pf, args, tol)
        x, y = _split_xy(pf, vec, args.point)
        rep.add("side", "t")
        rep.add("x", x)
        rep.add("y", y)
        holds = check_mpoc_licq(rp, x, y, tol)
    rep.add("holds", holds)
    rep.add("verdict", "ok" if holds else "failed")
    _emit(rep, args)
    return 0 if holds else 1


def cmd_verify(args) -> int:
    """Full battery: censuses both sides, counting identities, lift/project
    round trips for every nondegenerate M-point, and the y-structure of
    every T-stationary point."""
    pf = load_problem_file(args.file)
    tol = _tolerances(pf, args)
    rp = _regularized(pf, args, tol)
    rep = Report("verify", tol)
    rep.add("file", args.file)

    quadratic = is_quadratic_affine(pf.problem)
    grid = GridSpec(args.grid_points, args.grid_lo, args.grid_hi)
    if quadratic:
        m_census = census_quadratic(pf.problem, tol)
        t_census = census_t_quadratic(rp, tol) if (rp.assumption1_ok or rp.override) else None
    else:
        m_census = census_newton(pf.problem, grid, tol)
        t_census = census_newton(rp, grid, tol) if rp.assumption1_ok else None
    if t_census is None:
        raise LoadError("verify needs certifiable regularization parameters")
    merged = merge_censuses(m_census, t_census)
    _add_census(rep, merged, "mt")

    failures = 0
    rows = []
    counts = verify_counts(rp, merged, tol)
    for check in counts.checks:
        rows.append((check.name, check.status, check.detail))
        failures += check.status == "fail"

    if rp.assumption1_ok:
        for x, mcert in merged.m_points:
            if not mcert.nondegenerate:
                continue
            label = f"x={np.round(x, 6).tolist()}"
            try:
                ls = lift(rp, x, tol)
                ok = all(
                    t.nondegenerate and t.ndt[4] and t.t_index == mcert.m_index
                    for _, t in ls.companions
                )
                rows.append(
                    ("lift-roundtrip", "pass" if ok else "fail",
                     f"{label}: {len(ls.companions)} companions, index preserved={ok}")
                )
                failures += not ok
                for y, _ in ls.companions:
                    back = project(rp, x, y, tol)
                    ok2 = back.m_index == mcert.m_index
                    rows.append(
                        ("project-roundtrip", "pass" if ok2 else "fail", label)
                    )
                    failures += not ok2
            except (BridgeError, NotStationaryError) as exc:
                rows.append(("lift-roundtrip", "fail", f"{label}: {exc}"))
                failures += 1
        for x, y, tcert in merged.t_points:
            if not tcert.stationary:
                continue
            ok = check_y_structure(rp, y, tol)
            rows.append(
                ("y-structure", "pass" if ok else "fail",
                 f"y={np.round(y, 6).tolist()}")
            )
            failures += not ok

    for k, (name, status, detail) in enumerate(rows):
        rep.add(f"check.{k}.name", name)
        rep.add(f"check.{k}.status", status)
        rep.add(f"check.{k}.detail", detail)
    rep.add("checks", len(rows))
    rep.add("failures", failures)
    rep.add("verdict", "ok" if failures == 0 else "failed")
    _emit(rep, args)
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# Entry point


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-feas", dest="tol_feas", type=float, default=None)
    common.add_argument("--tol-act", dest="tol_act", type=float, default=None)
    common.add_argument("--tol-rank", dest="tol_rank", type=float, default=None)
    common.add_argument("--tol-strict", dest="tol_strict", type=float, default=None)
    common.add_argument("--override-assumption1", action="store_true")
    common.add_argument("--format", choices=("human", "machine"), default="human")

    parser = argparse.ArgumentParser(
        prog="ccopkit",
        description="certify stationary points of cardinality-constrained problems "
        "and their regularized continuous reformulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="certify one named point")
    p.add_argument("file")
    p.add_argument("point")
    p.add_argument("--side", choices=("m", "t"), required=True)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("lift", parents=[common], help="enumerate T-companions of an M-point")
    p.add_argument("file")
    p.add_argument("point")
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("project", parents=[common], help="project a lifted point down")
    p.add_argument("file")
    p.add_argument("point")
    p.set_defaults(fn=cmd_project)

    p = sub.add_parser("census", parents=[common], help="enumerate all stationary points")
    p.add_argument("file")
    p.add_argument("--method", choices=("quadratic", "newton"), default="quadratic")
    p.add_argument("--side", choices=("m", "t", "both"), default="both")
    p.add_argument("--grid-points", type=int, default=3)
    p.add_argument("--grid-lo", type=float, default=-2.0)
    p.add_argument("--grid-hi", type=float, default=2.0)
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("check-licq", parents=[common], help="constraint qualification test")
    p.add_argument("file")
    p.add_argument("point")
    p.set_defaults(fn=cmd_check_licq)

    p = sub.add_parser("verify", parents=[common], help="full identity battery on one instance")
    p.add_argument("file")
    p.add_argument("--grid-points", type=int, default=3)
    p.add_argument("--grid-lo", type=float, default=-2.0)
    p.add_argument("--grid-hi", type=float, default=2.0)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (LoadError, AssumptionError, ExprSyntaxError, ValueError) as exc:
        sys.stderr.write(f"ccopkit: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
