"""Command-line front end.

Exit codes: 0 success, 1 verification failure or failed stage, 2 usage or
schema error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .curves import CurveFamily
from .incidence import (
    PointLineSystem,
    SchemaError,
    ShearError,
    count_incidences_bruteforce,
    generate_grid_system,
    shear_normalize,
)
from .patterns import (
    EdgeOrderedGraph,
    ZeroOneMatrix,
    check_claim_p2,
    contains_forbidden_p5,
    contains_positive_c6,
    extremal_bruteforce_p5,
    extremal_bruteforce_positive_c6,
    star_redraw,
)
from .svg import emit_svg
from .synthesis import RoutingError, synthesize
from .verifier import NonSimpleError, TangencyReport, tangency_report, verify_grounded

OK, FAILED, USAGE = 0, 1, 2
K_CAP = 5


class UsageError(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage, exc):
        self.stage = stage
        super().__init__(f"stage {stage} failed: {exc}")


def threads() -> int:
    raw = os.environ.get("TANGENCY_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TANGENCY_LAB_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError("TANGENCY_LAB_THREADS must be at least 1")
    return n


# ---------------------------------------------------------------- io

def _read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}")


def _write_json(path, data):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=1)
        f.write("\n")


def _load(path, kind):
    data = _read_json(path)
    try:
        return kind.from_json(data)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: {kind.__name__}: {exc!r}")


def _print(obj):
    print(json.dumps(obj, indent=1))


# ---------------------------------------------------------------- pipeline

def build_system(k, shear_m=None, raw=False) -> PointLineSystem:
    if k < 1:
        raise UsageError("k must be at least 1")
    sys_ = generate_grid_system(k)
    if raw:
        return sys_
    try:
        return shear_normalize(sys_, shear_m)
    except ShearError as exc:
        raise UsageError(str(exc))


def incidence_pairs(sys_: PointLineSystem) -> set:
    nl = len(sys_.lines)
    return {(li, nl + pi) for li, pi in sys_.incidences}


def certify(family, report, expected=None) -> list:
    """Human-readable reasons the family fails certification."""
    problems = []
    if report.same_color_violations:
        problems.append(f"{len(report.same_color_violations)} same-color intersections")
    if report.overlap_violations:
        problems.append(f"{len(report.overlap_violations)} overlaps")
    if expected is not None:
        missing = expected - report.pair_set()
        if missing:
            problems.append(f"{len(missing)} incidences are not certified tangencies, e.g. {sorted(missing)[0]}")
    if family.grounded:
        problems.extend(verify_grounded(family).violations)
    return problems


def run_pipeline(k, grounded=False, outdir=None):
    """Generate, synthesize and certify; returns (system, family, report, problems)."""
    stage = "gen-incidences"
    try:
        sys_ = build_system(k)
        stage = "synth-curves"
        family = synthesize(sys_, grounded=grounded)
        stage = "verify"
        report = tangency_report(family)
    except UsageError:
        raise
    except (RoutingError, ShearError, NonSimpleError, ValueError, AssertionError) as exc:
        raise StageError(stage, exc)
    problems = certify(family, report, incidence_pairs(sys_))
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "point_line_system.json", sys_.to_json())
        _write_json(out / "curve_family.json", family.to_json())
        _write_json(out / "tangency_report.json", report.to_json())
        (out / "figure.svg").write_text(emit_svg(family, report))
    return sys_, family, report, problems


@dataclass
class ScalingRow:
    k: int
    n_points: int
    n_lines: int
    n_curves: int
    incidences: int
    tangencies_certified: int
    ratio: str


def scaling_row(k) -> ScalingRow:
    sys_, family, report, problems = run_pipeline(k)
    if problems:
        raise StageError("verify", "; ".join(problems))
    n = len(family.curves)
    return ScalingRow(
        k, len(sys_.points), len(sys_.lines), n, count_incidences_bruteforce(sys_),
        report.total_tangencies, f"{report.total_tangencies / n ** (4 / 3):.6f}",
    )


def fit_slope(rows):
    """Least-squares slope and intercept of log tangencies on log curve count, over k >= 2."""
    pts = [(math.log(r.n_curves), math.log(r.tangencies_certified)) for r in rows if r.k >= 2]
    fit = statistics.linear_regression([x for x, _ in pts], [y for _, y in pts])
    return fit.slope, fit.intercept


# ---------------------------------------------------------------- commands

def cmd_gen_incidences(a):
    sys_ = build_system(a.k, a.shear_m, a.raw)
    _write_json(a.out, sys_.to_json())
    print(f"k={a.k}: {len(sys_.points)} points, {len(sys_.lines)} lines, {len(sys_.incidences)} incidences")
    return OK


def cmd_synth_curves(a):
    sys_ = _load(a.inp, PointLineSystem)
    try:
        family = synthesize(sys_, grounded=a.grounded)
    except (RoutingError, ValueError, AssertionError) as exc:
        raise StageError("synth-curves", exc)
    _write_json(a.out, family.to_json())
    print(f"{len(family.reds())} red and {len(family.blues())} blue curves")
    return OK


def cmd_count_tangencies(a):
    family = _load(a.inp, CurveFamily)
    report = tangency_report(family)
    if a.out:
        _write_json(a.out, report.to_json())
    print(report.total_tangencies)
    return OK


def cmd_verify(a):
    family = _load(a.inp, CurveFamily)
    report = tangency_report(family)
    problems = certify(family, report)
    declared = {(c.id, o) for c in family.reds() for o, _ in c.declared_tangencies}
    missing = declared - report.pair_set()
    if missing:
        problems.append(f"{len(missing)} declared tangencies are not certified")
    for p in problems:
        print(p, file=sys.stderr)
    print(f"{report.total_tangencies} certified tangencies; {'ok' if not problems else 'FAILED'}")
    return FAILED if problems else OK


def cmd_pipeline(a):
    t0 = time.perf_counter()
    _, family, report, problems = run_pipeline(a.k, a.grounded, a.out)
    for p in problems:
        print(p, file=sys.stderr)
    print(f"k={a.k}: {report.total_tangencies} certified tangencies, {len(family.curves)} curves, "
          f"{time.perf_counter() - t0:.1f}s; {'ok' if not problems else 'FAILED'}")
    return FAILED if problems else OK


def cmd_scaling_table(a):
    if a.k_max < 3:
        raise UsageError("--k-max must be at least 3 so the fit over k >= 2 has two points")
    if a.k_max > K_CAP and not a.force:
        raise UsageError(f"--k-max above {K_CAP} needs --force")
    ks = list(range(1, a.k_max + 1))
    workers = min(threads(), len(ks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(scaling_row, ks))
    else:
        rows = [scaling_row(k) for k in ks]
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(list(asdict(rows[0])))
        for r in rows:
            w.writerow(list(asdict(r).values()))
    slope, intercept = fit_slope(rows)
    png = Path(a.png) if a.png else out.with_suffix(".png")
    from .figures import scaling_plot

    scaling_plot(rows, slope, intercept, png)
    print(f"slope {slope:.6f} over k=2..{a.k_max}")
    return OK


def cmd_emit_svg(a):
    family = _load(a.inp, CurveFamily)
    report = _load(a.report, TangencyReport) if a.report else None
    text = emit_svg(family, report)
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    with open(a.out, "w", newline="\n") as f:
        f.write(text)
    return OK


def cmd_check_p5(a):
    g = _load(a.inp, EdgeOrderedGraph)
    w = contains_forbidden_p5(g)
    _print({"witness": None if w is None else list(w)})
    return OK if w is None else FAILED


def cmd_check_positive_c6(a):
    m = _load(a.inp, ZeroOneMatrix)
    w = contains_positive_c6(m)
    _print({"witness": None if w is None else {k: [list(x) if isinstance(x, tuple) else x for x in v] for k, v in w.items()}})
    return OK if w is None else FAILED


def cmd_claim_p2(a):
    family = _load(a.inp, CurveFamily)
    report = tangency_report(family)
    if not report.ok:
        print("family has violations; redraw needs a valid family", file=sys.stderr)
        return FAILED
    g = star_redraw(family, report, "grounded" if family.grounded else "curve_start")
    rep = check_claim_p2(g)
    _print(rep.to_json())
    return OK if rep.ok else FAILED


def cmd_extremal_search(a):
    limit = 5 if a.pattern == "p5" else 6
    if not 1 <= a.n <= limit:
        raise UsageError(f"--n must be between 1 and {limit} for pattern {a.pattern}")
    if a.pattern == "p5":
        value, g = extremal_bruteforce_p5(a.n)
        witness = g.to_json()
    else:
        value, m = extremal_bruteforce_positive_c6(a.n)
        witness = m.to_json()
    _print({"pattern": a.pattern, "n": a.n, "max": value, "witness": witness})
    return OK


# ---------------------------------------------------------------- parser

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tangency-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-incidences", help="write the grid point-line system")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--shear-m", type=int, default=None, help="shear parameter (default 2k^2+1)")
    s.add_argument("--raw", action="store_true", help="skip the shear")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen_incidences)

    s = sub.add_parser("synth-curves", help="build red and blue curves from a point-line system")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--grounded", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth_curves)

    s = sub.add_parser("count-tangencies", help="certify tangencies of a curve family")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_count_tangencies)

    s = sub.add_parser("verify", help="exit nonzero on any violation")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("pipeline", help="generate, synthesize, verify and draw")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--grounded", action="store_true")
    s.add_argument("--out", default="out")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("scaling-table", help="tangency growth table, CSV and log-log PNG")
    s.add_argument("--k-max", type=int, default=K_CAP)
    s.add_argument("--out", default="scaling.csv")
    s.add_argument("--png", default=None)
    s.add_argument("--force", action="store_true", help=f"allow k above {K_CAP}")
    s.set_defaults(func=cmd_scaling_table)

    s = sub.add_parser("emit-svg", help="render a curve family")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--report", default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_emit_svg)

    s = sub.add_parser("check-p5", help="search an edge-ordered graph for the forbidden path")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_check_p5)

    s = sub.add_parser("check-positive-c6", help="search a 0-1 matrix for a positive 6-cycle")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_check_positive_c6)

    s = sub.add_parser("claim-p2", help="self-crossing checks on the star redrawing")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_claim_p2)

    s = sub.add_parser("extremal-search", help="exhaustive extremal numbers at tiny n")
    s.add_argument("--pattern", choices=("p5", "posc6"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_extremal_search)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return USAGE
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
