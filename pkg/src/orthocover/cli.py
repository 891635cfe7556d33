"""Command-line front end.

Exit codes: 0 success (valid covering, all checks within 3 sigma), 1 usage
error (the message names the violated bound), 2 non-covering configuration or
failed verification.  Results go to stdout and diagnostics to stderr.

``--format json`` field names for ``density3d``: p, q, r, case, param, s, h,
horoball_volume, hyperball_volume, cell_volume, density, covering,
uncovered_edges, and ``locally_optimal_only`` when a real p is used.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from . import covering2d, covering3d, lobachevsky, oracle
from .covering3d import CoveringCase
from .optimize import NoValidPointError
from .orthoscheme import REAL_P_WINDOW, ExistenceError, truncated_orthoscheme

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2
FORMATS = ("table", "csv", "json")


class UsageError(ValueError):
    pass


def fmt_num(x) -> str:
    """17 significant digits, ``.`` decimal; non-floats pass through."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


@dataclass
class RunSpec:
    """Parsed command line; ``to_argv`` gives a textual form that parses back to it."""
    command: str
    dimension: Optional[int] = None
    family: Optional[tuple[int, int]] = None
    kind: Optional[int] = None
    a: Optional[float] = None
    t: Optional[float] = None
    p: Optional[float] = None
    case: Optional[str] = None
    param: Optional[float] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    step: Optional[float] = None
    tol: Optional[float] = None
    fmt: str = "table"
    seed: Optional[int] = None
    samples: Optional[int] = None
    allow_nonextendable: bool = False
    workers: int = 1

    def to_argv(self) -> list[str]:
        argv = [self.command]
        for f in fields(self):
            name = f.name
            if name == "command":
                continue
            value = getattr(self, name)
            if value is None or value == f.default:
                continue
            flag = _FLAG_OF.get(name, "--" + name.replace("_", "-"))
            if isinstance(value, bool):
                argv.append(flag)
            elif name == "family":
                argv += [flag, f"{value[0]},{value[1]}"]
            elif isinstance(value, float):
                argv += [flag, repr(value)]
            else:
                argv += [flag, str(value)]
        return argv


_FLAG_OF = {"kind": "--type", "fmt": "--format"}


def _family(text: str) -> tuple[int, int]:
    try:
        q, r = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"family must be 'q,r', got {text!r}") from None
    return (q, r)


def _case(text: str) -> str:
    try:
        return CoveringCase.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orthocover",
                                 description="Hyperball-horoball coverings of truncated orthoschemes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        if fmt:
            p.add_argument("--format", dest="fmt", choices=FORMATS, default="table")
        return p

    def cell(p, need_case=True):
        p.add_argument("--family", type=_family, required=True, help="q,r")
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--case", type=_case, required=need_case)
        p.add_argument("--allow-nonextendable", action="store_true",
                       help="admit real p in (6,7) for family 3,6")

    p = common(sub.add_parser("density2d", help="density of a 2D covering"))
    p.add_argument("--type", dest="kind", type=int, choices=(1, 2), required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--t", type=float, required=True)

    p = common(sub.add_parser("density3d", help="density of a 3D covering"))
    cell(p)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--samples", type=int, help="edge samples for the coverage check")

    p = common(sub.add_parser("optimize", help="thinnest covering of one 3D case"))
    cell(p)
    p.add_argument("--tol", type=float)

    p = common(sub.add_parser("optimize2d", help="thinnest 2D covering of one type"))
    p.add_argument("--type", dest="kind", type=int, choices=(1, 2), required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--tol", type=float)

    p = common(sub.add_parser("realp", help="joint optimum over real p in (6,7), family 3,6"))
    p.add_argument("--start", type=float, help="lower end of the p range (default 6)")
    p.add_argument("--stop", type=float, help="upper end of the p range (default 7)")
    p.add_argument("--tol", type=float)

    p = common(sub.add_parser("table", help="optimal densities for the printed p of a family"))
    p.add_argument("--family", type=_family, required=True, help="6,3 | 3,6 | 4,4")

    p = sub.add_parser("sweep", help="density curve as CSV")
    p.add_argument("--dimension", type=int, choices=(2, 3), required=True)
    p.add_argument("--type", dest="kind", type=int, choices=(1, 2), help="2D covering type")
    p.add_argument("--a", type=float, help="2D: fixed a (sweep t)")
    p.add_argument("--t", type=float, help="2D: fixed t (sweep a)")
    p.add_argument("--family", type=_family, help="3D: q,r")
    p.add_argument("--p", type=float, help="3D: fixed p (sweep the case parameter)")
    p.add_argument("--case", type=_case, help="3D case; real-p sweep when --p is omitted")
    p.add_argument("--allow-nonextendable", action="store_true")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--samples", type=int, help="edge samples for the coverage check")
    p.add_argument("--workers", type=int, default=1)

    p = common(sub.add_parser("verify", help="closed forms against Monte Carlo and quadrature"))
    p.add_argument("--samples", type=int, help="Monte Carlo samples (default 1e7)")
    p.add_argument("--seed", type=int, help="overrides ORTHOCOVER_SEED")

    p = common(sub.add_parser("refute", help="witnesses that a case never covers"))
    cell(p)
    return ap


def parse(argv: Sequence[str]) -> RunSpec:
    ns = build_parser().parse_args(list(argv))
    return RunSpec(**{k: v for k, v in vars(ns).items() if v is not None})


# ---------------------------------------------------------------- rendering

def render(record: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(_jsonable(record), out, indent=2, sort_keys=False)
        out.write("\n")
    elif fmt == "csv":
        render_rows([record], out)
    else:
        width = max(len(k) for k in record)
        for k, v in record.items():
            out.write(f"{k.ljust(width)}  {_text(v)}\n")


def render_rows(rows: list[dict], out, fmt: str = "csv") -> None:
    if fmt == "json":
        json.dump([_jsonable(r) for r in rows], out, indent=2)
        out.write("\n")
        return
    if fmt == "table":
        keys = list(rows[0])
        cells = [[_text(r[k]) for k in keys] for r in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
        for c in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(rows[0]))
    for r in rows:
        w.writerow([fmt_num(v) if not isinstance(v, (dict, list)) else json.dumps(_jsonable(v))
                    for v in r.values()])


def _text(v) -> str:
    """Human-readable cell: shortest round-trip repr for floats."""
    if isinstance(v, (dict, list)):
        return json.dumps(_jsonable(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return fmt_num(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


# ----------------------------------------------------------------- commands

def _orth(spec: RunSpec):
    return truncated_orthoscheme(spec.p, spec.family, spec.allow_nonextendable)


def _real_p(spec: RunSpec) -> bool:
    return not float(spec.p).is_integer()


def cmd_density2d(spec: RunSpec, out, err) -> int:
    cfg = covering2d.construct(spec.a, spec.t, spec.kind)
    closed = (covering2d.density_c1 if spec.kind == 1 else covering2d.density_c2)(spec.a, spec.t)
    gaps = covering2d.verify_coverage(cfg)
    ok = all(w is None for w in gaps.values())
    rec = {"type": spec.kind, "a": spec.a, "t": spec.t,
           "horoball_volume": cfg.horoball_volume(), "hyperball_volume": cfg.hyperball_volume(),
           "domain_area": math.pi / 2, "density": closed, "density_generic": cfg.density(),
           "covering": ok,
           "uncovered_sides": {k: [float(x) for x in w[1:]] for k, w in gaps.items() if w is not None}}
    render(rec, spec.fmt, out)
    if not ok:
        err.write(f"not a covering: uncovered sides {sorted(rec['uncovered_sides'])}\n")
    return EXIT_OK if ok else EXIT_INVALID


def _evaluation_record(ev, real_p: bool) -> dict:
    rec = ev.as_dict()
    if real_p:
        rec["locally_optimal_only"] = True
    return rec


def cmd_density3d(spec: RunSpec, out, err) -> int:
    orth = _orth(spec)
    case = CoveringCase.parse(spec.case)
    ev = covering3d.evaluate(orth, case, spec.param,
                             spec.samples or covering3d.DEFAULT_SAMPLES)
    render(_evaluation_record(ev, _real_p(spec)), spec.fmt, out)
    if not ev.valid:
        for edge, w in ev.coverage.uncovered().items():
            pt = "none" if w is None else ", ".join(fmt_num(float(x)) for x in w[1:])
            err.write(f"uncovered edge {edge}: witness ({pt})\n")
        if not case.realizable:
            err.write(f"case {case.value} is not realizable as a covering\n")
        return EXIT_INVALID
    return EXIT_OK


def cmd_optimize(spec: RunSpec, out, err) -> int:
    case = CoveringCase.parse(spec.case)
    opt = covering3d.optimize_case(spec.family, spec.p, case, spec.allow_nonextendable,
                                   tol=spec.tol or 1e-10)
    rec = {"p": spec.p, "q": spec.family[0], "r": spec.family[1], "case": case.value,
           "param": opt.param, "density": opt.density, "covering": opt.evaluation.valid}
    if _real_p(spec):
        rec["locally_optimal_only"] = True
    render(rec, spec.fmt, out)
    return EXIT_OK if opt.evaluation.valid else EXIT_INVALID


def cmd_optimize2d(spec: RunSpec, out, err) -> int:
    m = covering2d.optimize2d(spec.kind, spec.a, spec.tol or 1e-10)
    cfg = covering2d.construct(spec.a, m.x, spec.kind)
    ok = covering2d.is_covering(cfg)
    render({"type": spec.kind, "a": spec.a, "t": m.x, "density": m.fx,
            "bound": covering2d.COVERING_BOUND, "covering": ok}, spec.fmt, out)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_realp(spec: RunSpec, out, err) -> int:
    rng = (6.0 if spec.start is None else spec.start, 7.0 if spec.stop is None else spec.stop)
    opt = covering3d.optimize_real_p(rng, tol=spec.tol or 1e-7)
    render({"p": opt.p, "q": 3, "r": 6, "case": opt.case.value, "param": opt.param,
            "density": opt.density, "locally_optimal_only": True}, spec.fmt, out)
    err.write(opt.note + "\n")
    return EXIT_OK


def table_rows(family: tuple[int, int]) -> list[dict]:
    for case, (fam, ps) in covering3d.TABLE_FAMILIES.items():
        if fam == tuple(family):
            break
    else:
        raise UsageError(f"no printed table for family {family}; use one of "
                         f"{[f for f, _ in covering3d.TABLE_FAMILIES.values()]}")
    rows = []
    for p in ps:
        opt = covering3d.optimize_case(fam, p, case)
        rows.append({"p": p, "case": case.value, "density": opt.density, "param": opt.param})
    return rows


def cmd_table(spec: RunSpec, out, err) -> int:
    render_rows(table_rows(spec.family), out, spec.fmt)
    return EXIT_OK


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    if not step > 0:
        raise UsageError(f"step must be positive, got {step}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    if n < 1 or stop < start:
        raise UsageError(f"empty range [{start}, {stop}]")
    return start + step * np.arange(n)


def _sweep_2d_point(args):
    kind, a, t = args
    try:
        f = covering2d.density_c1 if kind == 1 else covering2d.density_c2
        d = f(a, t)
        return d, covering2d.is_covering(covering2d.construct(a, t, kind))
    except ValueError:
        return math.nan, False


def _sweep_3d_point(args):
    family, p, case, param, samples, allow = args
    try:
        orth = truncated_orthoscheme(p, family, allow)
        ev = covering3d.evaluate(orth, CoveringCase.parse(case), param, samples,
                                 structural=False)
        return ev.density, ev.valid
    except ValueError:
        return math.nan, False


def _sweep_realp_point(args):
    p, case, samples = args
    try:
        opt = covering3d.optimize_case((3, 6), p, CoveringCase.parse(case), True,
                                       tol=1e-8, n_grid=21, samples_per_edge=samples)
        return opt.param, opt.density, opt.evaluation.valid
    except (ValueError, NoValidPointError):
        return math.nan, math.nan, False


def _map(fn, jobs, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [fn(j) for j in jobs]


def cmd_sweep(spec: RunSpec, out, err) -> int:
    xs = _grid(spec.start, spec.stop, spec.step)
    rows = []
    if spec.dimension == 2:
        if spec.kind is None or (spec.a is None) == (spec.t is None):
            raise UsageError("2D sweep needs --type and exactly one of --a, --t")
        jobs = [(spec.kind, x, spec.t) if spec.a is None else (spec.kind, spec.a, x) for x in xs]
        for (kind, a, t), (d, ok) in zip(jobs, _map(_sweep_2d_point, jobs, spec.workers)):
            rows.append({"type": kind, "a": a, "t": t, "density": d, "valid": ok})
    else:
        if spec.family is None or spec.case is None:
            raise UsageError("3D sweep needs --family and --case")
        samples = spec.samples or covering3d.DEFAULT_SAMPLES
        if spec.p is not None:
            truncated_orthoscheme(spec.p, spec.family, spec.allow_nonextendable)
            jobs = [(spec.family, spec.p, spec.case, x, samples, spec.allow_nonextendable)
                    for x in xs]
            for j, (d, ok) in zip(jobs, _map(_sweep_3d_point, jobs, spec.workers)):
                rows.append({"p": spec.p, "param": j[3], "density": d, "valid": ok})
        else:
            if tuple(spec.family) != (3, 6) or not spec.allow_nonextendable:
                raise UsageError("real-p sweep needs --family 3,6 and --allow-nonextendable")
            lo, hi = REAL_P_WINDOW[(3, 6)]
            xs = xs[(xs > lo) & (xs < hi)]
            if not len(xs):
                raise UsageError(f"real p must lie in ({lo}, {hi})")
            jobs = [(x, spec.case, samples) for x in xs]
            for x, (u, d, ok) in zip(xs, _map(_sweep_realp_point, jobs, spec.workers)):
                rows.append({"p": x, "param": u, "density": d, "valid": ok})
    render_rows(rows, out)
    return EXIT_OK


def cmd_verify(spec: RunSpec, out, err) -> int:
    samples = spec.samples or 10**7
    seed = spec.seed if spec.seed is not None else oracle.default_seed()
    opt = covering3d.TABLE_FAMILIES[CoveringCase.ON_A1A2]
    orth = truncated_orthoscheme(7, opt[0])
    ev = covering3d.evaluate(orth, CoveringCase.ON_A1A2, 0.3324288)
    checks = oracle.cell_checks(orth, ev.pair.horoball, ev.pair.h, ev.horoball_volume,
                                ev.hyperball_volume, samples, seed)
    checks.append(oracle.lambert_check(0.5, samples, seed))
    rows = [{"quantity": c.name, "closed_form": c.exact, "monte_carlo": c.estimate.value,
             "stderr": c.estimate.stderr, "z": c.z, "within_3sigma": c.ok} for c in checks]
    grid = np.linspace(-math.pi, math.pi, 1001)
    dlob = max(abs(lobachevsky.lob(x) - lobachevsky.lob_quadrature(x)) for x in grid)
    lob_ok = dlob <= 1e-9
    rows.append({"quantity": "lob_series_vs_quadrature", "closed_form": 0.0,
                 "monte_carlo": dlob, "stderr": math.nan, "z": math.nan, "within_3sigma": lob_ok})
    render_rows(rows, out, spec.fmt)
    err.write(f"seed {seed}, {samples} samples\n")
    return EXIT_OK if all(r["within_3sigma"] for r in rows) else EXIT_INVALID


def cmd_refute(spec: RunSpec, out, err) -> int:
    orth = _orth(spec)
    case = CoveringCase.parse(spec.case)
    ref = covering3d.refute_case(orth, case)
    rec = {"p": spec.p, "q": spec.family[0], "r": spec.family[1], "case": case.value,
           "grid_points": len(ref.params), "refuted": int(ref.refuted.sum()),
           "all_refuted": ref.all_refuted}
    if ref.tangency is not None:
        rec["tangent_everywhere"] = bool(np.all(ref.tangency))
    render(rec, spec.fmt, out)
    return EXIT_OK if ref.all_refuted else EXIT_INVALID


COMMANDS = {
    "density2d": cmd_density2d, "density3d": cmd_density3d, "optimize": cmd_optimize,
    "optimize2d": cmd_optimize2d, "realp": cmd_realp, "table": cmd_table,
    "sweep": cmd_sweep, "verify": cmd_verify, "refute": cmd_refute,
}


def _check_real_p(spec: RunSpec) -> None:
    if spec.p is not None and not float(spec.p).is_integer() and not spec.allow_nonextendable:
        raise UsageError(f"p={spec.p} is not an integer; real p in (6,7) for family 3,6 "
                         "needs --allow-nonextendable")


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        spec = parse(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _check_real_p(spec)
        return COMMANDS[spec.command](spec, out, err)
    except (UsageError, ExistenceError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NoValidPointError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except ValueError as exc:
        # parameter outside its admissible range
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
