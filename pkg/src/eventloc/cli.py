"""Command-line harness.

Examples::

    eventloc --problem example1 --s 2 --steps 40
    eventloc --problem example1 --table1 --s 1,2,3 --levels 6
    eventloc --problem example2 --table2 --s 1,2,3 --k 4
    eventloc --problem example3 --example3 --format jsonl
    eventloc --problem example3 --s 3 --k 11 --steps 1000 --dump-trajectory traj.csv
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import problems
from .errors import EventLocError
from .legendre import build_tables
from .locator import convergence_study, locate
from .surface import emit_surface_samples, write_surface_samples

RECORD_FIELDS = [
    "problem", "s", "k", "N", "g_residual", "error", "rate", "alpha_max",
    "energy_residual_max", "omega_residual_max", "iterations_max", "wall_time",
]


@dataclass
class RunConfig:
    problem: str
    s: List[int]
    k: Optional[List[int]] = None
    steps: Optional[int] = None
    level: Optional[int] = None
    levels: int = 6
    fp_tol: float = 1e-14
    fp_max_iter: int = 100
    format: str = "table"
    output: Optional[str] = None
    table1: bool = False
    table2: bool = False
    example3: bool = False
    dump_trajectory: Optional[str] = None
    dense: bool = False
    surface: Optional[str] = None
    resolution: int = 40
    error_mode: str = "successive"
    timing: bool = False
    records: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.k is not None and len(self.k) not in (1, len(self.s)):
            raise ValueError("--k must be a single value or match the length of --s")
        for s, k in self.pairs():
            if s < 1:
                raise ValueError(f"s must be >= 1, got {s}")
            if k < s:
                raise ValueError(f"k must be >= s (got k={k}, s={s})")
        if self.steps is not None and self.steps < 1:
            raise ValueError("--steps must be >= 1")
        if self.level is not None and self.level < 0:
            raise ValueError("--level must be >= 0")
        if self.levels < 2:
            raise ValueError("--levels must be >= 2")
        if self.fp_tol <= 0 or self.fp_max_iter < 1:
            raise ValueError("--fp-tol must be positive and --fp-max-iter >= 1")

    def pairs(self):
        if self.k is None:
            return [(s, s) for s in self.s]
        ks = self.k * len(self.s) if len(self.k) == 1 else self.k
        return list(zip(self.s, ks))

    @property
    def N(self):
        if self.steps is not None:
            return self.steps
        return 10 * 2 ** (self.level or 0)


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _problem_arg(text):
    if text in problems.names() or os.path.isfile(text):
        return text
    raise argparse.ArgumentTypeError(f"{text!r} is neither a built-in problem ({', '.join(problems.names())}) nor a file")


def build_parser():
    ap = argparse.ArgumentParser(prog="eventloc", description="One-sided direct event location with EPHBVM(k,s) methods.")
    ap.add_argument("--problem", required=True, type=_problem_arg,
                    help=f"built-in name ({', '.join(problems.names())}) or a problem file")
    ap.add_argument("--s", type=_int_list, default=[1], help="comma-separated list of s values")
    ap.add_argument("--k", type=_int_list, default=None, help="quadrature nodes (one value, or one per s; default k = s)")
    grp = ap.add_mutually_exclusive_group()
    grp.add_argument("--steps", type=int, help="number of steps N")
    grp.add_argument("--level", type=int, help="refinement level n, N = 10 * 2^n")
    ap.add_argument("--levels", type=int, default=6, help="rows of the convergence table (n = 0..levels-1)")
    ap.add_argument("--fp-tol", type=float, default=1e-14)
    ap.add_argument("--fp-max-iter", type=int, default=100)
    ap.add_argument("--format", choices=["table", "csv", "jsonl"], default="table")
    ap.add_argument("--output", "-o", help="write results here instead of stdout")
    mode = ap.add_mutually_exclusive_group()
    mode.add_argument("--table1", action="store_true", help="convergence study on h_n = hbar / (10 * 2^n)")
    mode.add_argument("--table2", action="store_true", help="EPHBVM(s,s) vs EPHBVM(k,s) residuals at h = hbar/10")
    mode.add_argument("--example3", action="store_true", help="EPHBVM(11,3) vs EPHBVM(3,3) comparison")
    ap.add_argument("--dump-trajectory", nargs="?", const="trajectory.csv", default=None, metavar="PATH")
    ap.add_argument("--dense", action="store_true", help="include stage points in the trajectory dump")
    ap.add_argument("--surface", metavar="PATH", help="also write samples of the event surface (3-d problems)")
    ap.add_argument("--resolution", type=int, default=40)
    ap.add_argument("--error-mode", choices=["successive", "reference"], default="successive")
    ap.add_argument("--timing", action="store_true", help="fill the wall_time field")
    return ap


def parse_config(argv=None):
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        return RunConfig(**vars(ns))
    except ValueError as exc:
        ap.error(str(exc))


def _record(cfg, res, s, k, error=None, rate=None, wall=None):
    return {
        "problem": cfg.problem,
        "s": s,
        "k": k,
        "N": res.steps,
        "g_residual": res.g_residual,
        "error": error,
        "rate": rate,
        "alpha_max": res.alpha_max,
        "energy_residual_max": res.energy_residual_max,
        "omega_residual_max": res.omega_residual_max,
        "iterations_max": res.iterations_max,
        "wall_time": wall if cfg.timing else None,
    }


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def _fmt(v, spec=".3e"):
    if v is None:
        return "---"
    if isinstance(v, str):
        return v
    return format(v, spec)


def _run_single(cfg, p):
    records, text = [], []
    results = []
    for s, k in cfg.pairs():
        res, wall = _timed(locate, p, s, k, cfg.N, fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter,
                           keep_stages=cfg.dense)
        results.append(res)
        records.append(_record(cfg, res, s, k, wall=wall))
    lines = [f"{'s':>3} {'k':>3} {'N':>6} {'g(x*)':>11} {'alpha_max':>10} {'|H|_max':>10} {'|dw|_max':>10} {'iters':>5}"]
    for r in records:
        lines.append(
            f"{r['s']:>3} {r['k']:>3} {r['N']:>6} {r['g_residual']:>11.3e} {r['alpha_max']:>10.2e} "
            f"{r['energy_residual_max']:>10.2e} {r['omega_residual_max']:>10.2e} {r['iterations_max']:>5}"
        )
    text.append("\n".join(lines))
    if cfg.dump_trajectory:
        for (s, k), res in zip(cfg.pairs(), results):
            path = cfg.dump_trajectory
            if len(results) > 1:
                stem, dot, ext = path.rpartition(".")
                path = f"{stem}_s{s}_k{k}.{ext}" if dot else f"{path}_s{s}_k{k}"
            write_trajectory(path, p, res)
    return records, "\n".join(text)


def _run_table1(cfg, p):
    records = []
    columns = {}
    for s, k in cfg.pairs():
        rows, wall = _timed(convergence_study, p, s, k, cfg.levels - 1, error_mode=cfg.error_mode,
                            fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter)
        columns[(s, k)] = rows
        for row in rows:
            records.append({
                "problem": cfg.problem, "s": s, "k": k, "N": 10 * 2**row.n,
                "g_residual": row.g_residual, "error": row.error,
                "rate": None if row.rate == "---" else row.rate,
                "alpha_max": None, "energy_residual_max": None, "omega_residual_max": None,
                "iterations_max": None, "wall_time": wall if cfg.timing else None,
            })
    head = "  n |" + "|".join(f" {'s=%d,k=%d' % sk:^31} " for sk in columns)
    sub = "    |" + "|".join(f" {'g(x_n*)':>10} {'e_n*':>10} {'rate':>7}  " for _ in columns)
    lines = [head, sub]
    for n in range(cfg.levels):
        cells = []
        for rows in columns.values():
            r = rows[n]
            cells.append(f" {_fmt(r.g_residual, '.2e'):>10} {_fmt(r.error, '.2e'):>10} {r.rate_str():>7}  ")
        lines.append(f"{n:>3} |" + "|".join(cells))
    return records, "\n".join(lines)


def _run_table2(cfg, p):
    k_alt = cfg.k[0] if cfg.k else 4
    N = cfg.steps or 10
    records = []
    lines = [f"{'s':>3} | {'EPHBVM(s,s)':>12} | {'EPHBVM(%d,s)' % k_alt:>12}"]
    for s in cfg.s:
        vals = []
        for k in (s, max(k_alt, s)):
            res, wall = _timed(locate, p, s, k, N, fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter)
            records.append(_record(cfg, res, s, k, wall=wall))
            vals.append(res.g_residual)
        lines.append(f"{s:>3} | {vals[0]:>12.4e} | {vals[1]:>12.4e}")
    return records, "\n".join(lines)


def _run_example3(cfg, p):
    N = cfg.steps or 1000
    fine, w1 = _timed(locate, p, 3, 11, N, fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter,
                      keep_stages=cfg.dense)
    gauss, w2 = _timed(locate, p, 3, 3, N, fp_tol=cfg.fp_tol, fp_max_iter=cfg.fp_max_iter)
    dist = float(np.linalg.norm(gauss.x_star - fine.x_star))
    records = [_record(cfg, fine, 3, 11, wall=w1), _record(cfg, gauss, 3, 3, error=dist, wall=w2)]
    lines = [
        f"EPHBVM(11,3): x* = {np.array2string(fine.x_star, precision=10)}  g(x*) = {fine.g_residual:.2e}",
        f"EPHBVM(3,3):  x~ = {np.array2string(gauss.x_star, precision=10)}  g(x~) = {gauss.g_residual:.2e}",
        f"|x~ - x*| = {dist:.2e}",
    ]
    if cfg.dump_trajectory:
        write_trajectory(cfg.dump_trajectory, p, fine)
    return records, "\n".join(lines)


def write_trajectory(path, p, res):
    """CSV with columns ``t, omega, x1..xn, g, H`` at step endpoints.

    When the run kept its stages, the stage points of each step are written
    between its endpoints with ``t = t_i + c_l h``.
    """
    n = res.x_star.size
    header = ["t", "omega"] + [f"x{i + 1}" for i in range(n)] + ["g", "H"]
    h = res.hbar / res.steps
    nodes = build_tables(res.k, res.s).nodes

    def row(t, y):
        g = float(p.g(y[:-1]))
        return [repr(float(t)), repr(float(y[-1]))] + [repr(float(v)) for v in y[:-1]] + [repr(g), repr(float(g - y[-1] + res.hbar))]

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, (t, st) in enumerate(res.trajectory):
            w.writerow(row(t, st.y))
            if res.stages is not None and i < res.steps:
                for c, y in zip(nodes, res.stages[i]):
                    w.writerow(row(t + c * h, y))


def format_records(records, fmt):
    if fmt == "jsonl":
        return "\n".join(json.dumps(r) for r in records)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=RECORD_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({key: ("" if v is None else v) for key, v in r.items()})
    return buf.getvalue().rstrip("\n")


def run(cfg):
    """Execute ``cfg``; returns ``(exit_status, records)``."""
    p = problems.resolve(cfg.problem)
    if cfg.table1:
        records, text = _run_table1(cfg, p)
    elif cfg.table2:
        records, text = _run_table2(cfg, p)
    elif cfg.example3:
        records, text = _run_example3(cfg, p)
    else:
        records, text = _run_single(cfg, p)
    if cfg.surface:
        write_surface_samples(cfg.surface, emit_surface_samples(p, resolution=cfg.resolution))
    out = text if cfg.format == "table" else format_records(records, cfg.format)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0, records


def main(argv=None):
    cfg = parse_config(argv)
    try:
        status, _ = run(cfg)
    except EventLocError as exc:
        print(f"eventloc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
