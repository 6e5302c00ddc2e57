"""Command-line front end.

Subcommands::

    trigcoef recover  --preset fatou --method riemann --K 5 --N 8192
    trigcoef eval     --literal "poly 0.5 0 0; 1 0 1" --x 0.1 0.2
    trigcoef derive   --literal "1 1 0" --integrate 2 --kind schwarz --x 0.3
    trigcoef divdiff  --check identity17 --trials 1000
    trigcoef solve    --literal "1 1 0" --N 256 --check
    trigcoef gallery  fatou --alphas 2^-4..2^-20

Exit status: 0 on success, 2 on invalid input, 3 when a computation did not
converge or a verdict failed (whatever was computed is still written).
Data goes to standard output or ``--output``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .divdiff import IDENTITY_CHECKS, identity_suite
from .errors import BudgetExhausted, EvaluationFailure, NonConvergentBracket, NonSummableAtPoint, QuadratureFailure, TrigcoefError
from .gallery import fatou_report, james_report, skvortsov_report
from .genderiv import (
    LimitSchedule,
    borel_derivative,
    cesaro_derivative,
    schwarz_derivative,
    smoothness_check,
    sym_borel_derivative,
    sym_cesaro_derivative,
    sym_derivative,
)
from .recover import classical_coefficients, riemann_recover
from .schwarzsolve import discrete_schwarz_solve, p2_certificate_check
from .trigseries import PolyTrigSeries, TAIL_PRESETS, formal_integrate, parse_series, series_function, sum_series

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGENT = 0, 2, 3
SUBCOMMANDS = ("recover", "eval", "derive", "divdiff", "solve", "gallery")
FORMATS = ("table", "csv", "json")
DERIVATIVES = {
    "sym": sym_derivative,
    "schwarz": schwarz_derivative,
    "smooth": smoothness_check,
    "borel": borel_derivative,
    "sym-borel": sym_borel_derivative,
    "cesaro": cesaro_derivative,
    "sym-cesaro": sym_cesaro_derivative,
}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")


@dataclass
class RunConfig:
    subcommand: str
    preset: str | None = None
    series_file: str | None = None
    literal: str | None = None
    output_format: str = "table"
    output_path: str | None = None
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError("subcommand", f"unknown {self.subcommand!r}")
        if self.output_format not in FORMATS:
            raise ConfigError("--format", f"must be one of {FORMATS}")
        sources = [s for s in (self.preset, self.series_file, self.literal) if s is not None]
        if self.subcommand in ("recover", "eval", "derive", "solve") and len(sources) != 1:
            raise ConfigError("--preset/--series-file/--literal", "give exactly one series source")
        for key, value in self.options.items():
            if key.endswith("tol") and value is not None and not value > 0:
                raise ConfigError(f"--{key.replace('_', '-')}", "must be positive")
        if "N" in self.options:
            N = self.options["N"]
            if N < 4 or N % 2:
                raise ConfigError("--N", f"must be an even integer >= 4, got {N}")
        if self.options.get("K", 0) < 0:
            raise ConfigError("--K", "must be >= 0")

    def series(self) -> PolyTrigSeries:
        if self.preset is not None:
            if self.preset not in TAIL_PRESETS:
                raise ConfigError("--preset", f"unknown preset {self.preset!r}; known: {sorted(TAIL_PRESETS)}")
            return parse_series(f"tail {self.preset}")
        try:
            text = Path(self.series_file).read_text() if self.series_file is not None else self.literal.replace(";", "\n")
        except OSError as exc:
            raise ConfigError("--series-file", str(exc)) from None
        try:
            return parse_series(text)
        except ValueError as exc:
            raise ConfigError("--series-file" if self.series_file else "--literal", str(exc)) from None

    def schedule(self) -> LimitSchedule:
        o = self.options
        order = o.get("richardson", 2)
        try:
            return LimitSchedule(o.get("h0", 0.1), o.get("ratio", 0.5), o.get("steps", 8), order or None)
        except ValueError as exc:
            raise ConfigError("schedule (--h0/--ratio/--steps/--richardson)", str(exc)) from None


# ------------------------------------------------------------------ helpers


def parse_alphas(text: str) -> list[float]:
    """``2^-4..2^-20`` (every power in between) or comma-separated values."""
    m = re.fullmatch(r"\s*2\^(-?\d+)\s*\.\.\s*2\^(-?\d+)\s*", text)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        step = 1 if q >= p else -1
        return [2.0**e for e in range(p, q + step, step)]
    out = []
    for item in text.split(","):
        item = item.strip()
        pm = re.fullmatch(r"2\^(-?\d+)", item)
        out.append(2.0 ** int(pm.group(1)) if pm else float(item))
    return out


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "\n".join(" ".join(c[i].rjust(widths[i]) for i in range(len(header))) for c in cells) + "\n"


def _json_scalar(v):
    if hasattr(v, "item"):
        return v.item()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(cfg: RunConfig, header: list[str], rows: list[list], meta: dict) -> None:
    if cfg.output_format == "json":
        text = json.dumps({"meta": meta, "columns": header, "rows": rows}, indent=2, sort_keys=True, default=_json_scalar) + "\n"
    elif cfg.output_format == "csv":
        head = "# " + " ".join(f"{k}={meta[k]}" for k in sorted(meta)) + "\n"
        text = head + ",".join(header) + "\n" + "".join(",".join(_fmt(v) for v in r) + "\n" for r in rows)
    else:
        head = "".join(f"# {k}: {meta[k]}\n" for k in sorted(meta))
        text = head + _table(header, rows)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def _integrated(S: PolyTrigSeries, times: int) -> PolyTrigSeries:
    for _ in range(times):
        S = formal_integrate(S)
    return S


# --------------------------------------------------------------- subcommands


def _run_recover(cfg: RunConfig) -> int:
    o = cfg.options
    S = cfg.series()
    f = series_function(S, tol=o["tol"], max_terms=o["max_terms"])
    if o["method"] == "riemann":
        rep = riemann_recover(f, o["K"], o["N"])
    else:
        rep = classical_coefficients(f, o["K"], o["quad_tol"])
    rows = [[k, float(rep.a[k]), float(rep.b[k]), float(rep.per_coeff_error[k]), rep.refinement_ratio(k)] for k in range(rep.K + 1)]
    meta = {"method": rep.method, "K": rep.K, "N": ",".join(map(str, rep.grids_used)) or "-", "interval": list(rep.interval)}
    _emit(cfg, ["k", "a", "b", "error", "ratio"], rows, meta)
    return EXIT_OK


def _run_eval(cfg: RunConfig) -> int:
    o = cfg.options
    S = _integrated(cfg.series(), o["integrate"])
    rows, status = [], EXIT_OK
    for x in _points(o):
        try:
            v, bound = sum_series(S, x, o["tol"], o["max_terms"])
            rows.append([x, v, bound])
        except NonSummableAtPoint as exc:
            print(f"x={x!r}: {exc}", file=sys.stderr)
            rows.append([x, "nan", "inf"])
            status = EXIT_NONCONVERGENT
    _emit(cfg, ["x", "value", "bound"], rows, {"integrate": o["integrate"]})
    return status


def _points(o: dict) -> list[float]:
    if o.get("grid"):
        lo, hi, n = o["grid"]
        n = int(n)
        if n < 2:
            raise ConfigError("--grid", "needs at least 2 points")
        return [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    if not o.get("x"):
        raise ConfigError("--x/--grid", "give evaluation points")
    return list(o["x"])


def _run_derive(cfg: RunConfig) -> int:
    o = cfg.options
    S = _integrated(cfg.series(), o["integrate"])
    G = series_function(S, tol=o["tol"], max_terms=o["max_terms"], name="G")
    est_fn = DERIVATIVES[o["kind"]]
    sched = cfg.schedule()
    rows, status = [], EXIT_OK
    for x in _points(o):
        est = est_fn(G, x, sched)
        rows.append([x, est.value, est.error_estimate, est.converged])
        if not est.converged:
            status = EXIT_NONCONVERGENT
    _emit(cfg, ["x", "value", "error_estimate", "converged"], rows, {"kind": o["kind"], "integrate": o["integrate"]})
    return status


def _run_divdiff(cfg: RunConfig) -> int:
    o = cfg.options
    checks = IDENTITY_CHECKS if o["check"] == "all" else (o["check"],)
    results = [identity_suite(c, o["trials"], o["seed"], o["tol"]) for c in checks]
    if cfg.output_format == "table":
        text = "".join(r.line() + "\n" for r in results)
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        rows = [[r.check, r.passed, r.trials, r.worst] for r in results]
        _emit(cfg, ["check", "passed", "trials", "worst"], rows, {"seed": o["seed"], "tol": o["tol"]})
    return EXIT_OK if all(r.ok for r in results) else EXIT_NONCONVERGENT


def _run_solve(cfg: RunConfig) -> int:
    o = cfg.options
    S = cfg.series()
    f = series_function(S, tol=o["tol"], max_terms=o["max_terms"], name="f")
    a, b = o["a"], o["b"]
    if not a < b:
        raise ConfigError("--a/--b", "need a < b")
    F = discrete_schwarz_solve(f, a, b, o["N"])
    rows = [[float(x), float(v)] for x, v in zip(F.nodes, F.values)]
    meta = {"a": a, "b": b, "N": F.N, "provenance": F.provenance}
    if cfg.output_format == "table":
        text = F.to_table()
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(cfg, ["x", "F"], rows, meta)
    if o["check"]:
        rep = p2_certificate_check(f, F, cfg.schedule())
        print(rep.to_text(), file=sys.stderr)
        if not rep.consistent:
            return EXIT_NONCONVERGENT
    return EXIT_OK


def _run_gallery(cfg: RunConfig) -> int:
    o = cfg.options
    sched = cfg.schedule()
    which = o["which"]
    if which == "fatou":
        try:
            alphas = parse_alphas(o["alphas"])
        except ValueError as exc:
            raise ConfigError("--alphas", str(exc)) from None
        if not alphas or not all(0 < a < math.pi for a in alphas):
            raise ConfigError("--alphas", "every alpha must lie in (0, pi)")
        if o["term_budget"] < 10**4:
            raise ConfigError("--term-budget", "must be >= 10000")
        status = EXIT_OK
        try:
            rep = fatou_report(alphas, o["term_budget"])
        except BudgetExhausted as exc:
            print(f"numerical failure: BudgetExhausted: {exc}", file=sys.stderr)
            rep, status = exc.partial, EXIT_NONCONVERGENT
        rows = [[r.alpha, r.xi, r.xi_tol, r.m, r.S, r.compensated] for r in rep.rows]
        _emit(cfg, ["alpha", "xi", "xi_tol", "m", "S", "compensated"], rows, {"verdict": rep.verdict})
        print(f"verdict: {rep.verdict}", file=sys.stderr)
        return status if rep.verdict == "divergence-consistent" else EXIT_NONCONVERGENT
    if which == "james":
        probes = o["probes"] or [0.1, 0.25, 0.5]
        if not all(0 < p <= 2 / math.pi for p in probes):
            raise ConfigError("--probes", "probe points must lie in (0, 2/pi]")
        rep = james_report(sched, probes)
        rows = [[p.x, p.h, p.estimate.value, p.estimate.error_estimate, p.within_bounds] for p in rep.probes]
        meta = {
            "smooth_at_0": rep.smooth_at_0,
            "right_quotient_range": f"[{rep.right_min:.6f},{rep.right_max:.6f}]",
            "no_right_derivative": rep.no_right_derivative,
        }
        _emit(cfg, ["x", "h", "estimate", "error_estimate", "within_bounds"], rows, meta)
        ok = rep.smooth_at_0 and rep.no_right_derivative and all(p.within_bounds for p in rep.probes)
        return EXIT_OK if ok else EXIT_NONCONVERGENT
    rep = skvortsov_report(sched)
    print(rep.to_text(), file=sys.stderr, end="")
    rows = [[h, q] for h, q in rep.bracket_trace]
    meta = {
        "bracket_converged": rep.bracket_converged,
        "left_certificate": rep.left_certificate.verdict,
        "right_certificate": rep.right_certificate.verdict,
        "verdict": "additivity fails" if rep.additivity_fails else "inconclusive",
    }
    _emit(cfg, ["h", "bracket_quotient"], rows, meta)
    return EXIT_OK if rep.additivity_fails else EXIT_NONCONVERGENT


_DISPATCH = {
    "recover": _run_recover,
    "eval": _run_eval,
    "derive": _run_derive,
    "divdiff": _run_divdiff,
    "solve": _run_solve,
    "gallery": _run_gallery,
}


def run(cfg: RunConfig) -> int:
    """Validate and execute ``cfg``; returns the exit status."""
    try:
        cfg.validate()
        return _DISPATCH[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NonConvergentBracket, BudgetExhausted, QuadratureFailure, NonSummableAtPoint, EvaluationFailure) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    except TrigcoefError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


# ------------------------------------------------------------------- parser


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("series source (exactly one)")
    g.add_argument("--preset", help=f"named series: {', '.join(sorted(TAIL_PRESETS))}")
    g.add_argument("--series-file", help="series literal file ('poly c0 c1 c2', 'k a b' rows, 'tail <preset>')")
    g.add_argument("--literal", help="inline series literal; ';' separates lines")
    p.add_argument("--tol", type=float, default=1e-12, help="series evaluation tolerance")
    p.add_argument("--max-terms", type=int, default=10**7)


def _add_schedule(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("limit schedule")
    g.add_argument("--h0", type=float, default=0.1)
    g.add_argument("--ratio", type=float, default=0.5)
    g.add_argument("--steps", type=int, default=8)
    g.add_argument("--richardson", type=int, default=2, help="even order, 0 disables")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="output_format", choices=FORMATS, default="table")
    p.add_argument("--output", dest="output_path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trigcoef", description="Coefficient recovery for everywhere-convergent trigonometric series.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("recover", help="recover a_k, b_k from the sum function")
    _add_source(p)
    _add_output(p)
    p.add_argument("--method", choices=("riemann", "classical"), default="riemann")
    p.add_argument("--K", type=int, default=5)
    p.add_argument("--N", type=int, default=4096)
    p.add_argument("--quad-tol", type=float, default=1e-10)

    p = sub.add_parser("eval", help="sum a series (or its formal integrals) at points")
    _add_source(p)
    _add_output(p)
    p.add_argument("--x", type=float, nargs="+")
    p.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "N"))
    p.add_argument("--integrate", type=int, choices=(0, 1, 2), default=0, help="formal integrations applied first")

    p = sub.add_parser("derive", help="generalized derivative of a series sum")
    _add_source(p)
    _add_output(p)
    _add_schedule(p)
    p.add_argument("--kind", choices=sorted(DERIVATIVES), default="schwarz")
    p.add_argument("--x", type=float, nargs="+")
    p.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "N"))
    p.add_argument("--integrate", type=int, choices=(0, 1, 2), default=2)

    p = sub.add_parser("divdiff", help="randomized divided-difference identity checks")
    _add_output(p)
    p.add_argument("--check", choices=IDENTITY_CHECKS + ("all",), default="all")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("solve", help="discrete second primitive of a series sum")
    _add_source(p)
    _add_output(p)
    _add_schedule(p)
    p.add_argument("--a", type=float, default=-2 * math.pi)
    p.add_argument("--b", type=float, default=2 * math.pi)
    p.add_argument("--N", type=int, default=1024)
    p.add_argument("--check", action="store_true", help="run the second-primitive certificate check")

    p = sub.add_parser("gallery", help="counterexample audits")
    _add_output(p)
    _add_schedule(p)
    p.add_argument("which", choices=("fatou", "james", "skvortsov"))
    p.add_argument("--alphas", default="2^-4..2^-20")
    p.add_argument("--term-budget", type=int, default=10**7)
    p.add_argument("--probes", type=float, nargs="+")
    return parser


_SHARED = ("subcommand", "preset", "series_file", "literal", "output_format", "output_path")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns)
    options = {k: v for k, v in d.items() if k not in _SHARED}
    return RunConfig(
        ns.subcommand,
        d.get("preset"),
        d.get("series_file"),
        d.get("literal"),
        d.get("output_format", "table"),
        d.get("output_path"),
        options,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
