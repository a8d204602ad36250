"""Command-line front end: per-state reports, table reproduction, entropy-density data, sweeps.

Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import published
from .observables import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    EntropyReport,
    UncertaintyReport,
    bbm_report,
    density_samples,
    heisenberg_report,
)
from .states import GAMMA_MIN, StateLabel, eigenvalue

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
SIG_DIGITS = 10

# Acceptance tolerances used to flag published numbers that disagree with ours.
TABLE1_TOL = {"S_rho": 2e-3, "S_xi": 3e-3, "S_sum": 5e-3}
TABLE2_TOL = {"var_x": 2e-3, "var_p": 2e-3, "product": 2e-3}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    gamma_list: tuple[float, ...]
    m_max: int
    output_format: str = "csv"
    output_path: Optional[str] = None
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self):
        if not self.gamma_list:
            raise UsageError("need at least one gamma")
        for g in self.gamma_list:
            if g < GAMMA_MIN:
                raise UsageError(f"gamma must satisfy gamma >= 3/2 (A >= 0), got {g:g}")
        if self.m_max < 0:
            raise UsageError("m-max must be nonnegative")

    def labels(self) -> list[StateLabel]:
        return [StateLabel(m, g) for g in sorted(self.gamma_list) for m in range(self.m_max + 1)]


def parse_gamma(text: str) -> float:
    """Parse ``"7/2"`` or ``"3.5"``; rejects gamma < 3/2."""
    try:
        value = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"cannot parse gamma {text!r}") from None
    if value < GAMMA_MIN:
        raise argparse.ArgumentTypeError(f"gamma must satisfy gamma >= 3/2 (A >= 0), got {text}")
    return value


def parse_gamma_list(text: str) -> tuple[float, ...]:
    return tuple(parse_gamma(part) for part in text.split(",") if part.strip())


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, f".{SIG_DIGITS}g")
    if x is None:
        return ""
    return str(x)


def _json_num(x):
    if isinstance(x, float):
        return float(format(x, f".{SIG_DIGITS}g"))
    return x


def gamma_text(g: float) -> str:
    frac = Fraction(g).limit_denominator(64)
    return str(frac) if float(frac) == g else fmt(g)


def state_record(ent: EntropyReport, unc: UncertaintyReport) -> dict:
    s = ent.label
    return {
        "m": s.m,
        "gamma": _json_num(s.gamma),
        "eigenvalue": _json_num(eigenvalue(s)),
        "s_position": _json_num(ent.s_position),
        "s_momentum": _json_num(ent.s_momentum),
        "s_sum": _json_num(ent.s_sum),
        "bbm_bound": _json_num(ent.bbm_bound),
        "bbm_satisfied": ent.bbm_satisfied,
        "entropy_squeezed_position": ent.entropy_squeezed_position,
        "entropy_squeezed_momentum": ent.entropy_squeezed_momentum,
        "mean_x": _json_num(unc.mean_x),
        "mean_x2": _json_num(unc.mean_x2),
        "var_x": _json_num(unc.var_x),
        "var_p": _json_num(unc.var_p),
        "var_p_momentum_space": _json_num(unc.var_p_momentum_space),
        "product": _json_num(unc.product),
        "heisenberg_bound": _json_num(unc.heisenberg_bound),
        "x_squeezed": unc.x_squeezed,
        "p_squeezed": unc.p_squeezed,
    }


RECORD_FIELDS = [
    "m", "gamma", "eigenvalue", "s_position", "s_momentum", "s_sum", "bbm_bound",
    "bbm_satisfied", "entropy_squeezed_position", "entropy_squeezed_momentum", "mean_x",
    "mean_x2", "var_x", "var_p", "var_p_momentum_space", "product", "heisenberg_bound",
    "x_squeezed", "p_squeezed",
]


def evaluate_state(label: StateLabel, abs_tol: float = DEFAULT_ABS_TOL,
                   rel_tol: float = DEFAULT_REL_TOL) -> dict:
    return state_record(bbm_report(label, abs_tol, rel_tol),
                        heisenberg_report(label, abs_tol, rel_tol))


def _evaluate_cell(args):
    m, gamma, abs_tol, rel_tol = args
    return evaluate_state(StateLabel(m, gamma), abs_tol, rel_tol)


def format_report_text(rec: dict) -> str:
    def yn(flag):
        return "true" if flag else "false"

    lines = [
        f"state: m={rec['m']} gamma={gamma_text(rec['gamma'])} eigenvalue={rec['eigenvalue']:g}",
        f"S_rho={rec['s_position']:.4f}  S_xi={rec['s_momentum']:.4f}  "
        f"S_sum={rec['s_sum']:.4f}  bound(1+ln pi)={rec['bbm_bound']:.6f}",
        f"BBM: {'satisfied' if rec['bbm_satisfied'] else 'VIOLATED'}",
        f"entropy_squeezed_position={yn(rec['entropy_squeezed_position'])}  "
        f"entropy_squeezed_momentum={yn(rec['entropy_squeezed_momentum'])}",
        f"<x>={rec['mean_x']:.6f}  <x^2>={rec['mean_x2']:.6f}  var_x={rec['var_x']:.4f}",
        f"var_p={rec['var_p']:.4f} (derivative)  var_p={rec['var_p_momentum_space']:.4f} "
        f"(momentum space)",
        f"product={rec['product']:.4f}  Heisenberg bound={rec['heisenberg_bound']:g}: "
        f"{'satisfied' if rec['product'] >= rec['heisenberg_bound'] - 1e-6 else 'VIOLATED'}",
        f"x_squeezed={yn(rec['x_squeezed'])}  p_squeezed={yn(rec['p_squeezed'])}",
    ]
    return "\n".join(lines) + "\n"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _text_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(header)] + [[fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


def table_rows(which: int, cfg: RunConfig, jobs: int = 1) -> tuple[list[str], list[list]]:
    """Rows reproducing published table 1 (entropies) or 2 (variances) with deltas."""
    if which == 1:
        cols = ["S_rho", "S_xi", "S_sum"]
        keys = ["s_position", "s_momentum", "s_sum"]
        extra, extra_key = "bbm_bound", "bbm_bound"
        ref, tols = published.TABLE1, TABLE1_TOL
    elif which == 2:
        cols = ["var_x", "var_p", "product"]
        keys = ["var_x", "var_p", "product"]
        extra, extra_key = "heisenberg_min", "heisenberg_bound"
        ref, tols = published.TABLE2, TABLE2_TOL
    else:
        raise UsageError("--which must be 1 or 2")
    header = (["gamma", "m"] + cols + [extra] + [f"paper_value_{c}" for c in cols]
              + [f"delta_{c}" for c in cols] + ["flag"])
    rows = []
    for rec in sweep_records(cfg, jobs):
        values = [rec[k] for k in keys]
        printed = ref.get((rec["gamma"], rec["m"]))
        if printed is None:
            printed_cells = [None] * 3
            deltas = [None] * 3
            flag = ""
        else:
            printed_cells = list(printed)
            deltas = [v - p for v, p in zip(values, printed)]
            off = [c for c, d in zip(cols, deltas) if abs(d) > tols[c]]
            flag = ";".join(f"{c}_differs" for c in off)
        rows.append([rec["gamma"], rec["m"], *values, rec[extra_key], *printed_cells, *deltas, flag])
    return header, rows


def sweep_records(cfg: RunConfig, jobs: int = 1) -> list[dict]:
    """Evaluate every (gamma, m) cell; output order is sorted by gamma then m."""
    cells = [(s.m, s.gamma, cfg.abs_tol, cfg.rel_tol) for s in cfg.labels()]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_evaluate_cell, cells))
    else:
        records = [_evaluate_cell(c) for c in cells]
    return sorted(records, key=lambda r: (r["gamma"], r["m"]))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_output(records: list[dict], kind: str, output_format: str) -> str:
    if output_format == "json":
        return json.dumps({"kind": kind, "records": records}, indent=2) + "\n"
    rows = [[r[f] for f in RECORD_FIELDS] for r in records]
    if output_format == "csv":
        return _csv_text(RECORD_FIELDS, rows)
    if kind == "report" and len(records) == 1:
        return format_report_text(records[0])
    return _text_table(RECORD_FIELDS, rows)


def cmd_report(args) -> str:
    label = StateLabel(args.m, args.gamma)
    rec = evaluate_state(label, args.abs_tol, args.rel_tol)
    return _records_output([rec], "report", args.format or "text")


def cmd_table(args) -> str:
    gammas = args.gammas or published.TABLE_GAMMAS
    m_max = published.TABLE_M_MAX if args.m_max is None else args.m_max
    cfg = RunConfig(tuple(gammas), m_max, args.format or "csv", args.out, args.abs_tol,
                    args.rel_tol)
    header, rows = table_rows(args.which, cfg, args.jobs)
    if cfg.output_format == "json":
        recs = [{h: _json_num(v) for h, v in zip(header, row)} for row in rows]
        return json.dumps({"kind": f"table{args.which}", "records": recs}, indent=2) + "\n"
    if cfg.output_format == "text":
        return _text_table(header, rows)
    return _csv_text(header, rows)


def cmd_density(args) -> str:
    lo, hi = args.range
    label = StateLabel(args.m, args.gamma)
    curve = density_samples(label, args.space, lo, hi, args.samples)
    coord = "x" if args.space == "position" else "p"
    rows = list(zip(curve.coordinates.tolist(), curve.values.tolist()))
    if args.format == "json":
        doc = {"kind": "density", "space": args.space, "m": label.m,
               "gamma": _json_num(label.gamma),
               "samples": [[_json_num(c), _json_num(v)] for c, v in rows]}
        return json.dumps(doc, indent=2) + "\n"
    if args.format == "text":
        return _text_table([coord, "entropy_density"], rows)
    return _csv_text([coord, "entropy_density"], rows)


def cmd_sweep(args) -> str:
    cfg = RunConfig(tuple(args.gammas), args.m_max if args.m_max is not None else 0,
                    args.format or "csv", args.out, args.abs_tol, args.rel_tol)
    records = sweep_records(cfg, args.jobs)
    return _records_output(records, "sweep", cfg.output_format)


def _range_pair(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoentropy",
        description="Shannon entropies, variances and squeezing for isotonic-oscillator eigenstates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "csv", "json")):
        p.add_argument("--format", choices=formats, default=None)
        p.add_argument("--out", metavar="PATH", default=None, help="write to a file instead of stdout")
        p.add_argument("--abs-tol", type=float, default=DEFAULT_ABS_TOL)
        p.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL)

    p = sub.add_parser("report", help="full report for one eigenstate")
    p.add_argument("--gamma", type=parse_gamma, required=True, help='e.g. "3/2" or 1.5')
    p.add_argument("--m", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("table", help="reproduce the entropy (1) or variance (2) table")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--gammas", type=parse_gamma_list, default=None)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("density", help="entropy-density curve -rho ln rho as figure data")
    p.add_argument("--space", choices=("position", "momentum"), required=True)
    p.add_argument("--gamma", type=parse_gamma, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--range", type=_range_pair, nargs=2, metavar=("LO", "HI"), required=True)
    p.add_argument("--samples", type=int, default=400)
    common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sweep", help="entropy and uncertainty records over a (gamma, m) grid")
    p.add_argument("--gammas", type=parse_gamma_list, required=True)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except (UsageError, ValueError, IndexError) as exc:
        print(f"isoentropy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"isoentropy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
