"""Command-line front end: ``pcapmono {scan,inequalities,verify,schwarzschild-table}``.

Scenarios are INI files::

    [scenario]
    name = perturbed-horizon
    p = 2
    k = 1                  ; number | matched | from-willmore | zero

    [metric]
    family = perturbed     ; schwarzschild | euclidean | perturbed | power
    r0 = horizon           ; number | horizon
    A = 1
    b = 0.1

    [coefficients]
    preset = thm11-a       ; or C1 = ..., C2 = ...
    C3 = 0

    [grid]
    n = 256
    span = 1000            ; or t_min / t_max
    spacing = log

    [tolerances]
    mono_rel = 1e-7

    [outputs]
    csv = scan.csv
    report = scan.json

Exit status: 0 when every verdict passes, 1 on any FAIL, 2 for a bad
scenario file or command line, 3 when the computation itself errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import inequalities as ineq
from .errors import ConfigError, MassNonconvergenceError, NotMinimalError, PcapError
from .monotone import PRESETS, CoefficientChoice, default_grid, monotonicity_scan, preset_choice
from .radial_metric import FAMILIES, adm_mass, check_admissible, from_family
from .reporting import dumps, scan_csv_text
from .schwarzschild import schwarzschild_surface, schwarzschild_u
from .settings import DEFAULT_TOL, Tolerances
from .solver import boundary_sample, solve
from .specfun import PExponentParams, eta, incomplete_I, model_from_capacity, model_from_mass_radius
from .verification import run_checks

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_COMPUTE = 0, 1, 2, 3

_SECTIONS = ("scenario", "metric", "coefficients", "grid", "tolerances", "outputs")
_TOL_FIELDS = {f.name for f in dataclasses.fields(Tolerances)}


@dataclass
class Scenario:
    name: str
    p: float
    k: float | str
    family: str
    r0: float | str | None
    metric_params: dict
    preset: str | None = None
    C1: float | None = None
    C2: float | None = None
    C3: float = 0.0
    t_min: float | None = None
    t_max: float | None = None
    span: float = 1e3
    n: int = 256
    spacing: str = "log"
    tolerances: Tolerances = DEFAULT_TOL
    outputs: dict = field(default_factory=dict)


def _number(cp, section, key, *, kind=float):
    raw = cp.get(section, key)
    try:
        value = kind(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {kind.__name__}") from None
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"[{section}] {key} must be finite, got {raw!r}")
    return value


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # parameter names are case-sensitive (A vs a)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    unknown = [s for s in cp.sections() if s not in _SECTIONS]
    if unknown:
        raise ConfigError(f"{source}: unknown section [{unknown[0]}]; expected {', '.join(_SECTIONS)}")
    for section in ("scenario", "metric"):
        if not cp.has_section(section):
            raise ConfigError(f"{source}: missing section [{section}]")
    for section, key in (("scenario", "p"), ("metric", "family")):
        if not cp.has_option(section, key):
            raise ConfigError(f"{source}: [{section}] needs '{key}'")

    sc = cp["scenario"]
    extra = set(sc) - {"name", "p", "k"}
    if extra:
        raise ConfigError(f"{source}: [scenario] has unknown key '{sorted(extra)[0]}'")
    p = _number(cp, "scenario", "p")
    if not 1.0 < p < 3.0:
        raise ConfigError(f"{source}: [scenario] p = {p} must lie in (1, 3)")
    k_raw = sc.get("k", "from-willmore").strip()
    if k_raw in ("from-willmore", "zero", "matched"):
        k = 0.0 if k_raw == "zero" else k_raw
    else:
        k = _number(cp, "scenario", "k")
        if not -1.0 < k <= 1.0:
            raise ConfigError(f"{source}: [scenario] k = {k} must lie in (-1, 1]")

    met = dict(cp["metric"])
    family = met.pop("family").strip()
    if family not in FAMILIES:
        raise ConfigError(f"{source}: [metric] family = {family!r}; expected one of {', '.join(FAMILIES)}")
    r0_raw = met.pop("r0", None)
    if r0_raw is None or r0_raw.strip() == "horizon":
        r0 = None if r0_raw is None else "horizon"
    else:
        r0 = _number(cp, "metric", "r0")
    params = {key: _number(cp, "metric", key) for key in met}
    if k == "matched" and family != "schwarzschild":
        raise ConfigError(f"{source}: [scenario] k = matched needs family = schwarzschild")

    s = Scenario(name=sc.get("name", Path(source).stem).strip(), p=p, k=k, family=family,
                 r0=r0, metric_params=params)

    if cp.has_section("coefficients"):
        co = cp["coefficients"]
        extra = set(co) - {"preset", "C1", "C2", "C3"}
        if extra:
            raise ConfigError(f"{source}: [coefficients] has unknown key '{sorted(extra)[0]}'")
        if "preset" in co:
            if "C1" in co or "C2" in co:
                raise ConfigError(f"{source}: [coefficients] give either preset or C1/C2, not both")
            s.preset = co["preset"].strip()
            if s.preset not in PRESETS:
                raise ConfigError(f"{source}: [coefficients] preset = {s.preset!r}; "
                                  f"expected one of {', '.join(PRESETS)}")
        elif "C1" in co or "C2" in co:
            if not ("C1" in co and "C2" in co):
                raise ConfigError(f"{source}: [coefficients] needs both C1 and C2")
            s.C1 = _number(cp, "coefficients", "C1")
            s.C2 = _number(cp, "coefficients", "C2")
        if "C3" in co:
            s.C3 = _number(cp, "coefficients", "C3")

    if cp.has_section("grid"):
        g = cp["grid"]
        extra = set(g) - {"t_min", "t_max", "span", "n", "spacing"}
        if extra:
            raise ConfigError(f"{source}: [grid] has unknown key '{sorted(extra)[0]}'")
        if "t_max" in g and "span" in g:
            raise ConfigError(f"{source}: [grid] give t_max or span, not both")
        for key in ("t_min", "t_max", "span"):
            if key in g:
                setattr(s, key, _number(cp, "grid", key))
        if "n" in g:
            s.n = _number(cp, "grid", "n", kind=int)
        s.spacing = g.get("spacing", "log").strip()
        if s.n < 2:
            raise ConfigError(f"{source}: [grid] n = {s.n} must be at least 2")
        if s.spacing not in ("log", "linear"):
            raise ConfigError(f"{source}: [grid] spacing = {s.spacing!r}; expected log or linear")
        if s.span <= 1.0:
            raise ConfigError(f"{source}: [grid] span = {s.span} must exceed 1")

    if cp.has_section("tolerances"):
        over = {}
        for key in cp["tolerances"]:
            if key not in _TOL_FIELDS:
                raise ConfigError(f"{source}: [tolerances] unknown key '{key}'; "
                                  f"expected one of {', '.join(sorted(_TOL_FIELDS))}")
            over[key] = _number(cp, "tolerances", key)
            if over[key] <= 0:
                raise ConfigError(f"{source}: [tolerances] {key} must be positive")
        s.tolerances = dataclasses.replace(DEFAULT_TOL, **over)

    if cp.has_section("outputs"):
        extra = set(cp["outputs"]) - {"csv", "report"}
        if extra:
            raise ConfigError(f"{source}: [outputs] has unknown key '{sorted(extra)[0]}'")
        s.outputs = dict(cp["outputs"])
    return s


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


# -- scenario set-up ------------------------------------------------------------

@dataclass
class Setup:
    scenario: Scenario
    tol: Tolerances
    sol: object
    model: object
    m_adm: float | None


def _context(s: Scenario, what: str) -> str:
    return f"scenario {s.name!r} ({what})"


def prepare(s: Scenario, tol_scale: float = 1.0) -> Setup:
    tol = s.tolerances.scaled(tol_scale)
    try:
        metric = from_family(s.family, s.metric_params, s.r0)
    except PcapError as exc:
        raise ConfigError(f"[metric] {exc}") from None
    P = PExponentParams.from_p(s.p)
    try:
        check_admissible(metric, floor=tol.curvature_floor)
    except PcapError as exc:
        raise type(exc)(f"{_context(s, 'metric')}: {exc}") from None
    sol = solve(metric, P)
    if s.k == "matched":
        k = s.metric_params["m"] / (2.0 * metric.r0)
        if not -1.0 < k <= 1.0:
            raise ConfigError(f"[scenario] k = matched gives m/2r0 = {k}, outside (-1, 1]")
    elif s.k == "from-willmore":
        k = ineq.solve_k(ineq.willmore_deficit_of(boundary_sample(sol)), guard=tol.k_guard)
    else:
        k = float(s.k)
    model = model_from_capacity(P, sol.cp, k)
    try:
        m_adm = adm_mass(metric, tol=tol.mass_extrapolation)
    except MassNonconvergenceError:
        m_adm = None
    return Setup(s, tol, sol, model, m_adm)


def _choice(setup: Setup) -> CoefficientChoice | None:
    s = setup.scenario
    if s.preset is not None:
        try:
            return preset_choice(s.preset, setup.model, s.C3)
        except PcapError as exc:
            raise ConfigError(f"[coefficients] preset {s.preset}: {exc}") from None
    if s.C1 is not None:
        return CoefficientChoice(setup.model, s.C1, s.C2, s.C3)
    return None


def _grid(setup: Setup) -> np.ndarray:
    s = setup.scenario
    r0 = setup.model.r0
    lo = r0 if s.t_min is None else s.t_min
    hi = s.span * r0 if s.t_max is None else s.t_max
    if lo < r0 * (1 - 1e-12):
        raise ConfigError(f"[grid] t_min = {lo} is below the model boundary r0 = {r0}")
    if hi <= lo:
        raise ConfigError(f"[grid] t_max = {hi} must exceed t_min = {lo}")
    if lo == r0 and s.t_max is None:
        return default_grid(setup.model, s.n, s.span, s.spacing)
    grid = np.geomspace(lo, hi, s.n) if s.spacing == "log" else np.linspace(lo, hi, s.n)
    grid[0], grid[-1] = max(lo, r0), hi
    return grid


def _header(setup: Setup) -> dict:
    m = setup.model
    return {"scenario": setup.scenario.name, "p": setup.sol.params.p, "a": m.a,
            "metric": setup.sol.metric.describe(), "cp": setup.sol.cp, "k": m.k,
            "m": m.m, "r0_model": m.r0, "m_adm": setup.m_adm}


def _write(out: Path | None, name: str | None, text: str) -> str | None:
    if out is None or not name:
        return None
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text, encoding="utf-8", newline="")
    return str(path)


# -- subcommands -----------------------------------------------------------------

def run_scan(s: Scenario, *, out: Path | None, tol_scale: float = 1.0, threads: int = 1,
             stream=None) -> int:
    stream = stream or sys.stdout
    setup = prepare(s, tol_scale)
    choice = _choice(setup)
    if choice is None:
        raise ConfigError("[coefficients] scan needs a preset or C1/C2")
    if not choice.predicate():
        raise ConfigError(f"[coefficients] ({choice.label}: C1={choice.C1}, C2={choice.C2}) "
                          f"violate the alpha >= 0 criterion for k={setup.model.k}")
    report = monotonicity_scan(setup.sol, choice, _grid(setup), tol=setup.tol, threads=threads,
                               m_adm=setup.m_adm, limit_slack=1e-4 * tol_scale)
    csv_text = scan_csv_text(report)
    summary = {**_header(setup), **report.summary()}
    csv_name = s.outputs.get("csv", f"{s.name}.csv")
    summary["csv"] = csv_name if _write(out, csv_name, csv_text) else None
    _write(out, s.outputs.get("report", f"{s.name}.json"), dumps(summary))
    if out is None:
        stream.write(csv_text)
    limit = ("n/a (ADM mass does not converge)" if report.limit_ok is None else
             f"F(t_max)={report.F_final:.6e} vs bound {report.limit_bound:.6e}: "
             f"{'ok' if report.limit_ok else 'VIOLATED'}")
    print(f"scan {s.name}: {choice.label} p={s.p} k={setup.model.k:.12g} cp={setup.sol.cp:.12g} "
          f"n={len(report.t)}", file=sys.stderr if out is None else stream)
    print(f"  monotone: {report.monotone} (max increase {report.max_increase:.3e}, "
          f"tol {report.tol:.3e})", file=sys.stderr if out is None else stream)
    print(f"  limit: {limit}", file=sys.stderr if out is None else stream)
    print(f"  verdict: {summary['verdict']}", file=sys.stderr if out is None else stream)
    return EXIT_PASS if report.passed else EXIT_FAIL


def collect_inequalities(setup: Setup) -> list:
    sol, tol, m_adm = setup.sol, setup.tol, setup.m_adm
    if m_adm is None:
        raise MassNonconvergenceError(
            f"{_context(setup.scenario, 'inequalities')}: ADM mass does not converge")
    b = boundary_sample(sol)
    reports = list(ineq.willmore_bounds(sol, b, m_adm=m_adm, tol=tol))
    try:
        reports += ineq.minimal_boundary_bounds(sol, b, m_adm=m_adm, tol=tol)
    except NotMinimalError:
        pass
    if setup.model.k == 1.0:
        reports += ineq.horizon_inequalities(sol, setup.model, b, m_adm=m_adm, tol=tol)
    else:
        reports += ineq.general_k_inequalities(sol, setup.model, b, m_adm=m_adm, tol=tol)
    reports += ineq.boundary_value_reports(sol, setup.model, _choice(setup), m_adm=m_adm, tol=tol)
    return reports


def run_inequalities(s: Scenario, *, out: Path | None, tol_scale: float = 1.0,
                     stream=None) -> int:
    stream = stream or sys.stdout
    setup = prepare(s, tol_scale)
    reports = collect_inequalities(setup)
    ok = all(r.satisfied for r in reports)
    payload = {**_header(setup), "reports": [r.as_dict() for r in reports],
               "verdict": "PASS" if ok else "FAIL"}
    _write(out, s.outputs.get("report", f"{s.name}-inequalities.json"), dumps(payload))
    print(f"inequalities {s.name}: p={s.p} k={setup.model.k:.12g} cp={setup.sol.cp:.12g} "
          f"m_adm={setup.m_adm:.12g}", file=stream)
    for r in reports:
        flag = "ok  " if r.satisfied else "FAIL"
        eq = " equality" if r.equality else ""
        print(f"  {flag} {r.name:<28s} lhs={r.lhs:.10e} rhs={r.rhs:.10e} "
              f"slack={r.slack:.3e}{eq}", file=stream)
    print(f"  verdict: {payload['verdict']}", file=stream)
    return EXIT_PASS if ok else EXIT_FAIL


def run_verify(*, out: Path | None, seed: int, tol_scale: float, threads: int,
               only=None, stream=None) -> int:
    stream = stream or sys.stdout
    results = run_checks(only, seed=seed, tol_scale=tol_scale, threads=threads)
    if only and len(results) != len(set(only)):
        raise ConfigError(f"unknown check name in --only {sorted(only)}")
    for r in results:
        print(r.line(), file=stream)
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed (seed={seed}, tol-scale={tol_scale:g})", file=stream)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("name", "passed", "measured", "tolerance"))
    for r in results:
        w.writerow((r.name, int(r.passed), "%.17e" % r.measured, "%.17e" % r.tolerance))
    _write(out, "verify.csv", buf.getvalue())
    _write(out, "verify.json", dumps({"seed": seed, "tol_scale": tol_scale,
                                      "passed": n_pass, "total": len(results),
                                      "checks": [r.as_dict() for r in results]}))
    return EXIT_PASS if n_pass == len(results) else EXIT_FAIL


TABLE_COLUMNS = ("r", "u", "du", "area", "H", "grad_u", "int_H_grad", "int_grad_sq",
                 "int_H_sq", "eta")


def schwarzschild_table(p: float, m: float, r0: float | None, n: int = 64, span: float = 1e3):
    """Closed-form p-capacitary data of Schwarzschild on a log grid. Returns (header, rows)."""
    P = PExponentParams.from_p(p)
    if r0 is None:
        if m <= 0:
            raise ConfigError("--r0 is required when m <= 0")
        r0 = m / 2.0
    model = model_from_mass_radius(P, m, r0)
    header = {"p": p, "a": P.a, "m": m, "r0": r0, "k": model.k, "cp": model.cp,
              "I_a(k)": incomplete_I(P.a, model.k) if model.k != 0 else 0.0}
    rows = []
    for r in np.geomspace(r0, span * r0, n):
        d = schwarzschild_surface(r, model)
        rows.append((d.r, schwarzschild_u(r, model), d.grad_u * (1 + model.x(r)) ** 2, d.area,
                     d.H, d.grad_u, d.int_H_grad, d.int_grad_sq, d.int_H_sq, eta(r, model)))
    return header, rows


def run_table(p, m, r0, n, span, *, out: Path | None, stream=None) -> int:
    stream = stream or sys.stdout
    header, rows = schwarzschild_table(p, m, r0, n, span)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for row in rows:
        if not all(math.isfinite(v) for v in row):
            raise PcapError(f"non-finite closed-form value at r={row[0]!r}")
        w.writerow(["%.17e" % v for v in row])
    name = f"schwarzschild-p{p:g}-m{m:g}.csv"
    if _write(out, name, buf.getvalue()) is None:
        stream.write(buf.getvalue())
    else:
        _write(out, name[:-4] + ".json", dumps(header))
    print("  ".join(f"{k}={v:.15g}" for k, v in header.items()),
          file=sys.stderr if out is None else stream)
    return EXIT_PASS


# -- argument parsing ------------------------------------------------------------

def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario INI file")
    common.add_argument("--out", type=Path, help="output directory (default: stdout only)")
    common.add_argument("--seed", type=int, default=20240611, help="sampling seed")
    common.add_argument("--tol-scale", type=_positive(float), default=1.0,
                        help="multiply every pass/fail tolerance")
    common.add_argument("--threads", type=_positive(int), default=1,
                        help="worker threads for grid evaluation")

    parser = argparse.ArgumentParser(prog="pcapmono",
                                     description="p-capacity monotone quantities on radial metrics")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common], help="sample F(t) and certify monotonicity")
    sub.add_parser("inequalities", parents=[common], help="evaluate the geometric inequalities")
    v = sub.add_parser("verify", parents=[common], help="run the self-verification suite")
    v.add_argument("--only", action="append", metavar="CHECK", help="run only the named check")
    t = sub.add_parser("schwarzschild-table", parents=[common],
                       help="closed-form Schwarzschild data for (p, m, r0)")
    t.add_argument("--p", type=float, required=True)
    t.add_argument("--m", type=float, required=True)
    t.add_argument("--r0", type=_positive(float), help="boundary radius (default m/2)")
    t.add_argument("--n", type=int, default=64)
    t.add_argument("--span", type=float, default=1e3)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(out=args.out, seed=args.seed, tol_scale=args.tol_scale,
                              threads=args.threads, only=args.only)
        if args.command == "schwarzschild-table":
            if not 1.0 < args.p < 3.0:
                raise ConfigError(f"--p {args.p} must lie in (1, 3)")
            if args.n < 2 or args.span <= 1.0:
                raise ConfigError("--n must be >= 2 and --span > 1")
            return run_table(args.p, args.m, args.r0, args.n, args.span, out=args.out)
        if args.config is None:
            raise ConfigError(f"{args.command} needs --config SCENARIO.ini")
        scenario = load_scenario(args.config)
        if args.command == "scan":
            return run_scan(scenario, out=args.out, tol_scale=args.tol_scale, threads=args.threads)
        return run_inequalities(scenario, out=args.out, tol_scale=args.tol_scale)
    except ConfigError as exc:
        print(f"pcapmono: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PcapError, ValueError, ArithmeticError) as exc:
        print(f"pcapmono: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
