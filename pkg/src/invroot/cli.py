"""Command-line interface.

Exit codes: 0 success, 2 no root / bracket failure, 3 parse error,
4 admissibility or domain error, 5 convergence failure (also used when a
verification or comparison misses its tolerance).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import catalog
from .errors import ConfigurationError, InvRootError, ParseError
from .expr import parse_expression, to_function_model
from .identity import offset_sweep, rectangle_residual, rectangle_scale
from .model import FunctionModel
from .numeric import Interval, Tolerance
from .report import (
    comparison_record,
    dumps,
    error_record,
    interval_pair,
    result_record,
)
from .solver import METHOD_IDENTITY, METHOD_ORACLE, ComparisonError, SolverConfig, compare_methods, solve_identity

log = logging.getLogger("invroot")

ENV_TOL = "INVROOT_DEFAULT_TOL"
VERIFY_TOL = 1e-8
EXIT_OK, EXIT_NO_ROOT, EXIT_PARSE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 2, 3, 4, 5
COMMANDS = ("solve", "verify", "compare")


@dataclass(frozen=True)
class JobSpec:
    command: str = "solve"
    function: str | None = None
    family: str | None = None
    params: tuple[float, ...] | None = None
    domain: Interval | None = None
    bracket: Interval | None = None
    h: float | str = "auto"
    tol: float | None = None
    samples: int = 100
    seed: int = 0
    json: bool = False
    quiet: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if (self.function is None) == (self.family is None):
            raise ConfigurationError("give exactly one function source: an expression or a family")
        if self.function is not None and self.domain is None:
            raise ConfigurationError("an expression needs an explicit domain")
        if self.command in ("solve", "compare") and self.bracket is None:
            raise ConfigurationError(f"{self.command} needs a bracket")
        if self.samples < 1:
            raise ConfigurationError(f"samples must be positive, got {self.samples}")

    @classmethod
    def from_dict(cls, data: dict) -> JobSpec:
        """Build a job from one batch-file object."""
        if not isinstance(data, dict):
            raise ConfigurationError("a batch job must be a JSON object")
        known = {"command", "function", "family", "params", "domain", "bracket", "h", "tol", "samples", "seed"}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown job field(s): {', '.join(sorted(unknown))}")
        kw = dict(data)
        for key in ("domain", "bracket"):
            if kw.get(key) is not None:
                pair = kw[key]
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise ConfigurationError(f"{key} must be a [lo, hi] pair")
                kw[key] = Interval(float(pair[0]), float(pair[1]))
        if kw.get("params") is not None:
            kw["params"] = tuple(float(p) for p in kw["params"])
        if "h" in kw:
            kw["h"] = parse_h(kw["h"])
        return cls(**kw)


def parse_h(value) -> float | str:
    if isinstance(value, str):
        if value.strip().lower() == "auto":
            return "auto"
        try:
            value = float(value)
        except ValueError:
            raise ConfigurationError(f"--h must be 'auto' or a real number, got {value!r}") from None
    h = float(value)
    if h == 0.0 or not math.isfinite(h):
        raise ConfigurationError(f"--h must be nonzero and finite, got {h!r}")
    return h


def default_tolerance() -> float:
    raw = os.environ.get(ENV_TOL)
    if raw is None or raw.strip() == "":
        return Tolerance().abs_tol
    try:
        tol = float(raw)
    except ValueError:
        raise ConfigurationError(f"{ENV_TOL} must be a real number, got {raw!r}") from None
    if not (tol > 0 and math.isfinite(tol)):
        raise ConfigurationError(f"{ENV_TOL} must be positive, got {raw!r}")
    return tol


def job_tolerance(job: JobSpec) -> Tolerance:
    return Tolerance.uniform(job.tol if job.tol is not None else default_tolerance())


def build_model(job: JobSpec) -> tuple[FunctionModel, str]:
    if job.function is not None:
        expr = parse_expression(job.function)
        return to_function_model(expr, job.domain, name=job.function), job.function
    model = catalog.make(job.family, job.params, job.domain)
    return model, model.name


# ---------------------------------------------------------------------------
# commands; each returns (exit_code, json_record, text)
# ---------------------------------------------------------------------------


def _solve_text(rec: dict) -> str:
    rows = [
        ("function", rec["function"]),
        ("domain", f"[{rec['domain'][0]!r}, {rec['domain'][1]!r}]"),
        ("bracket", f"[{rec['bracket'][0]!r}, {rec['bracket'][1]!r}]"),
        ("root", f"{rec['root']:.17g}"),
        ("f(root)", f"{rec['f_at_root']:.3e}"),
        ("residual at root", f"{rec['residual_at_root']:.3e}"),
        ("offset h", "n/a" if rec["h_used"] is None else f"{rec['h_used']:.6g}"),
        ("iterations", str(rec["iterations"])),
        ("spurious filtered", "yes" if rec["spurious_filtered"] else "no"),
        ("method", rec["method"]),
        ("status", rec["status"]),
    ]
    return "\n".join(f"{k:<18} {v}" for k, v in rows)


def run_solve(job: JobSpec) -> tuple[int, dict, str]:
    model, label = build_model(job)
    config = SolverConfig(job.bracket, job.h, job_tolerance(job))
    result = solve_identity(model, config)
    rec = result_record(result, label, model.domain)
    code = EXIT_OK if result.ok else EXIT_NO_ROOT
    return code, rec, _solve_text(rec)


def run_verify(job: JobSpec) -> tuple[int, dict, str]:
    """Sample random ``(a, b)`` pairs: check the rectangle decomposition at each
    and the offset-independence of the root residual at ``alpha = a``."""
    model, label = build_model(job)
    rng = random.Random(job.seed)
    lo, hi = model.domain.lo, model.domain.hi
    worst_rect = worst_spread = 0.0
    for _ in range(job.samples):
        a, b = rng.uniform(lo, hi), rng.uniform(lo, hi)
        if a == b:
            continue
        rect = abs(rectangle_residual(model, a, b)) / rectangle_scale(model, a, b)
        d = b - a
        sweep = offset_sweep(model, a, [d * 0.01, d * 0.1, d])
        scale = 1.0 + abs(a * model(a)) + max(abs((a + s.h) * model(a + s.h)) for s in sweep.samples)
        worst_rect = max(worst_rect, rect)
        worst_spread = max(worst_spread, sweep.spread / scale)
    ok = worst_rect <= VERIFY_TOL and worst_spread <= VERIFY_TOL
    rec = {
        "function": label,
        "domain": interval_pair(model.domain),
        "samples": job.samples,
        "max_rectangle_residual": worst_rect,
        "max_offset_spread": worst_spread,
        "tolerance": VERIFY_TOL,
        "status": "success" if ok else "failed",
    }
    text = "\n".join([
        f"{'function':<24} {label}",
        f"{'domain':<24} [{lo!r}, {hi!r}]",
        f"{'samples':<24} {job.samples}",
        f"{'max rectangle residual':<24} {worst_rect:.3e} (scaled)",
        f"{'max offset spread':<24} {worst_spread:.3e} (scaled)",
        f"{'tolerance':<24} {VERIFY_TOL:.0e}",
        f"{'status':<24} {rec['status']}",
    ])
    return (EXIT_OK if ok else EXIT_CONVERGENCE), rec, text


def run_compare(job: JobSpec) -> tuple[int, dict, str]:
    model, label = build_model(job)
    config = SolverConfig(job.bracket, job.h, job_tolerance(job))
    try:
        report = compare_methods(model, config)
    except ComparisonError as exc:
        rec = {"function": label, "domain": interval_pair(model.domain),
               "bracket": interval_pair(job.bracket), "difference": None, "status": "error"}
        lines = [f"{'function':<12} {label}"]
        for method in (METHOD_IDENTITY, METHOD_ORACLE):
            if method in exc.errors:
                err = exc.errors[method]
                rec[method] = error_record(err, err.exit_code, method)
                lines.append(f"{method:<12} error (exit {err.exit_code}): {err}")
            else:
                res = exc.results[method]
                rec[method] = result_record(res, label, model.domain)
                lines.append(f"{method:<12} root {res.root:.17g}")
        return exc.exit_code, rec, "\n".join(lines)
    rec = comparison_record(report, label, model.domain)
    text = "\n".join([
        f"{'function':<12} {label}",
        f"{'bracket':<12} {job.bracket}",
        f"{'identity':<12} root {report.identity.root:.17g}  iterations {report.identity.iterations}"
        f"  residual {report.identity.residual_at_root:.3e}",
        f"{'oracle':<12} root {report.oracle.root:.17g}  iterations {report.oracle.iterations}"
        f"  f(root) {report.oracle.f_at_root:.3e}",
        f"{'difference':<12} {report.difference:.3e}",
        f"{'status':<12} {rec['status']}",
    ])
    return (EXIT_OK if report.agrees else EXIT_CONVERGENCE), rec, text


RUNNERS = {"solve": run_solve, "verify": run_verify, "compare": run_compare}


def run_job(job: JobSpec) -> tuple[int, dict, str]:
    """Run a job, converting package errors into exit codes and error records."""
    try:
        return RUNNERS[job.command](job)
    except InvRootError as exc:
        return exc.exit_code, error_record(exc, exc.exit_code), f"error: {exc}"


def _batch_entry(index: int, lineno: int, text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        err = ParseError(f"malformed JSON: {exc.msg}", exc.pos)
        return {"index": index, "line": lineno, "exit_code": EXIT_PARSE, "report": error_record(err, EXIT_PARSE)}
    try:
        job = JobSpec.from_dict(data)
    except (InvRootError, TypeError, ValueError) as exc:
        code = exc.exit_code if isinstance(exc, InvRootError) else EXIT_DOMAIN
        return {"index": index, "line": lineno, "exit_code": code, "report": error_record(exc, code)}
    code, rec, _ = run_job(job)
    return {"index": index, "line": lineno, "exit_code": code, "report": rec}


def run_batch(path: str, workers: int = 1) -> tuple[int, dict, str]:
    """Run one job per non-blank line of ``path``. Results keep input order."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [(n, ln) for n, ln in enumerate(fh, start=1) if ln.strip()]
    except OSError as exc:
        raise ConfigurationError(f"cannot read batch file {path!r}: {exc}") from exc
    if not lines:
        log.warning("batch file %s contains no jobs", path)
    jobs = [(i, n, ln) for i, (n, ln) in enumerate(lines)]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda j: _batch_entry(*j), jobs))
    failed = sum(1 for r in results if r["exit_code"] != EXIT_OK)
    rec = {"results": results, "total": len(results), "failed": failed,
           "status": "success" if failed == 0 else "failed"}
    text_lines = []
    for r in results:
        rep = r["report"]
        if r["exit_code"] == EXIT_OK and "root" in rep:
            detail = f"root {rep['root']:.17g}"
        elif r["exit_code"] == EXIT_OK:
            detail = rep.get("status", "ok")
        else:
            detail = rep.get("message") or rep.get("status", "failed")
        text_lines.append(f"line {r['line']}: exit {r['exit_code']}  {detail}")
    text_lines.append(f"{len(results)} job(s), {failed} failed")
    return (EXIT_OK if failed == 0 else max(r["exit_code"] for r in results if r["exit_code"])), rec, "\n".join(text_lines)


def run_families(_args=None) -> tuple[int, dict, str]:
    fams = catalog.list_families()
    rec = {
        "families": [
            {
                "family": f.family,
                "parameters": list(f.parameters),
                "formula": f.formula,
                "root": f.root,
                "monotonicity": f.monotonicity,
                "description": f.description,
                "default_params": list(f.default.params),
                "default_domain": interval_pair(f.default.domain),
            }
            for f in fams
        ]
    }
    lines = []
    for f in fams:
        params = ", ".join(f.parameters) if f.parameters else "none"
        lines.append(f"{f.family:<11} {f.formula:<20} root: {f.root:<26} {f.monotonicity}")
        lines.append(f"{'':<11} params: {params}; defaults {list(f.default.params)} on {f.default.domain}")
        lines.append(f"{'':<11} {f.description}")
    return EXIT_OK, rec, "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--function", metavar="EXPR", help="expression in x, e.g. \"ln(x)\" or \"2*x - 4\"")
    src.add_argument("--family", choices=[f.family for f in catalog.list_families()], help="catalog family")
    common.add_argument("--params", type=float, nargs="*", metavar="P", help="family parameters")
    common.add_argument("--domain", type=float, nargs=2, metavar=("LO", "HI"))
    common.add_argument("--h", default="auto", metavar="H|auto", help="residual offset (default: auto)")
    common.add_argument("--tol", type=float, help=f"tolerance (default 1e-12, or ${ENV_TOL})")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="suppress human-readable output")

    bracketed = argparse.ArgumentParser(add_help=False)
    bracketed.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"), required=True)

    parser = _Parser(prog="invroot", description="Root finding through the rectangle identity of inverse functions.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common, bracketed], help="find a root in a bracket")
    p_verify = sub.add_parser("verify", parents=[common], help="check the area identity on random samples")
    p_verify.add_argument("--samples", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    sub.add_parser("compare", parents=[common, bracketed], help="identity solver vs plain bisection")
    p_batch = sub.add_parser("batch", help="run one JSON job per line of a file")
    p_batch.add_argument("path")
    p_batch.add_argument("--workers", type=int, default=1)
    p_batch.add_argument("--json", action="store_true")
    p_batch.add_argument("--quiet", action="store_true")
    p_fam = sub.add_parser("families", help="list catalog families")
    p_fam.add_argument("--json", action="store_true")
    return parser


def _job_from_args(args) -> JobSpec:
    return JobSpec(
        command=args.command,
        function=args.function,
        family=args.family,
        params=None if args.params is None else tuple(args.params),
        domain=None if args.domain is None else Interval(*args.domain),
        bracket=Interval(*args.bracket) if getattr(args, "bracket", None) else None,
        h=parse_h(args.h),
        tol=args.tol,
        samples=getattr(args, "samples", 100),
        seed=getattr(args, "seed", 0),
        json=args.json,
        quiet=args.quiet,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    as_json = getattr(args, "json", False)
    quiet = getattr(args, "quiet", False)
    try:
        if args.command == "families":
            code, rec, text = run_families()
        elif args.command == "batch":
            default_tolerance()
            code, rec, text = run_batch(args.path, args.workers)
        else:
            default_tolerance()
            code, rec, text = run_job(_job_from_args(args))
    except InvRootError as exc:
        code, rec, text = exc.exit_code, error_record(exc, exc.exit_code), f"error: {exc}"

    if rec.get("status") == "error":
        print(text, file=sys.stderr)
    if as_json:
        print(dumps(rec))
    elif rec.get("status") != "error" and not quiet:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
