"""Command-line interface: ``incred {assess,batch,threshold,curve,simulate}``.

Exit codes: 0 success, 1 domain or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import core
from .errors import DomainError
from .simulation import DEFAULT_DRAWS, SimulationConfig, simulate_replication

VERDICTS = ("not_significant", "suggestive", "intrinsically_credible")
SCALES = ("identity", "log")

INPUT_COLUMNS = ["id", "lower", "upper", "level", "scale"]
REPORT_COLUMNS = [
    "p", "t", "box_stat_sq", "p_box", "p_ic", "p_rep",
    "cred_ratio", "alpha_ic", "significant", "verdict",
]
OUTPUT_COLUMNS = INPUT_COLUMNS + REPORT_COLUMNS

HEADLINE_CREDIBLE = 0.005
HEADLINE_SIGNIFICANT = 0.05

VERDICT_HELP = (
    "Verdicts: not_significant (interval covers zero), suggestive (significant "
    "but p > alpha_IC) and intrinsically_credible (p <= alpha_IC). The "
    "suggestive band is anchored at the conventional 95% level "
    "(0.0056 < p < 0.05); at other levels the same rule is applied with that "
    "level's alpha_IC, which is an extrapolation."
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class StudyRecord:
    id: str
    lower: float
    upper: float
    level: float = 0.95
    scale: str = "identity"

    def __post_init__(self):
        if self.scale not in SCALES:
            raise DomainError(f"unknown scale {self.scale!r}")
        if self.scale == "log" and not self.lower > 0:
            raise DomainError("log scale requires positive limits")

    def interval(self) -> core.SymmetricInterval:
        if self.scale == "log":
            return core.SymmetricInterval(math.log(self.lower), math.log(self.upper), self.level)
        return core.SymmetricInterval(self.lower, self.upper, self.level)


def verdict(report: core.CredibilityReport, headline: bool = False) -> str:
    if headline:
        if report.p_value < HEADLINE_CREDIBLE:
            return "intrinsically_credible"
        if report.p_value < HEADLINE_SIGNIFICANT:
            return "suggestive"
        return "not_significant"
    if not report.significant:
        return "not_significant"
    if report.intrinsically_credible_box:
        return "intrinsically_credible"
    return "suggestive"


def assess_record(record: StudyRecord, headline: bool = False) -> dict:
    """Assess one study; returns the JSON-shaped result document."""
    ci = record.interval()
    est = core.interval_to_estimate(ci)
    report = core.assess(ci)
    return {
        "inputs": {
            "id": record.id,
            "lower": record.lower,
            "upper": record.upper,
            "level": record.level,
            "scale": record.scale,
            "estimate": est.estimate,
            "std_error": est.std_error,
        },
        "report": report.as_dict(),
        "verdict": verdict(report, headline),
    }


def flat_row(doc: dict) -> dict:
    inp, rep = doc["inputs"], doc["report"]
    return {
        "id": inp["id"],
        "lower": inp["lower"],
        "upper": inp["upper"],
        "level": inp["level"],
        "scale": inp["scale"],
        "p": rep["p_value"],
        "t": rep["t_statistic"],
        "box_stat_sq": rep["box_statistic_sq"],
        "p_box": rep["p_box"],
        "p_ic": rep["p_ic"],
        "p_rep": rep["p_rep"],
        "cred_ratio": rep["credibility_ratio"],
        "alpha_ic": rep["alpha_ic"],
        "significant": rep["significant"],
        "verdict": doc["verdict"],
    }


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _table_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def render_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def render_table(rows: list[dict], columns: list[str]) -> str:
    cells = [[_table_cell(row[c]) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for r in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_record(doc: dict) -> str:
    """Key/value table for a single assessment."""
    pairs = [("verdict", doc["verdict"])]
    pairs += [(k, v) for k, v in doc["inputs"].items() if k != "id" or v]
    pairs += list(doc["report"].items())
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {_table_cell(v)}\n" for k, v in pairs)


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Argument types
# ---------------------------------------------------------------------------

def _open_unit(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {text}")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return value


def _positive(text: str) -> float:
    value = _finite(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _study_mode(args) -> str:
    has_ci = args.lower is not None or args.upper is not None
    has_est = args.estimate is not None or args.se is not None
    if has_ci == has_est:
        raise UsageError("give exactly one of --lower/--upper or --estimate/--se")
    if has_ci:
        if args.lower is None or args.upper is None:
            raise UsageError("--lower and --upper must be given together")
        return "interval"
    if args.estimate is None or args.se is None:
        raise UsageError("--estimate and --se must be given together")
    if args.scale != "identity":
        raise UsageError("--scale log applies to interval limits only; give --estimate/--se on the analysis scale")
    return "estimate"


def _study_from_args(args) -> StudyRecord:
    if _study_mode(args) == "interval":
        return StudyRecord("", args.lower, args.upper, args.level, args.scale)
    ci = core.estimate_to_interval(core.EffectEstimate(args.estimate, args.se), args.level)
    return StudyRecord("", ci.lower, ci.upper, args.level, "identity")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_assess(args) -> int:
    doc = assess_record(_study_from_args(args), args.headline)
    if args.format == "json":
        text = render_json(doc)
    elif args.format == "csv":
        text = render_csv([flat_row(doc)], OUTPUT_COLUMNS)
    else:
        text = render_record(doc)
    _emit(text, args.output)
    return 0


def _parse_row(row: dict, level_override: Optional[float], default_scale: str) -> StudyRecord:
    def number(name):
        raw = (row.get(name) or "").strip()
        try:
            value = float(raw)
        except ValueError:
            raise DomainError(f"non-numeric {name} {raw!r}")
        if not math.isfinite(value):
            raise DomainError(f"non-finite {name}")
        return value

    lower, upper = number("lower"), number("upper")
    if not lower < upper:
        raise DomainError("invalid interval")
    if level_override is not None:
        level = level_override
    elif (row.get("level") or "").strip():
        level = number("level")
        if not 0.0 < level < 1.0:
            raise DomainError(f"level {level!r} outside (0, 1)")
    else:
        level = 0.95
    scale = (row.get("scale") or "").strip() or default_scale
    return StudyRecord((row.get("id") or "").strip(), lower, upper, level, scale)


def run_batch(text: str, level_override=None, default_scale="identity", headline=False):
    """Assess every row of a CSV document.

    Returns ``(results, rejects)``: result documents in input order, and
    ``{"row", "id", "reason"}`` entries for rows that could not be assessed.
    """
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [c for c in ("id", "lower", "upper") if c not in header]
    if missing:
        raise DomainError(f"bad header: missing column(s) {', '.join(missing)}")
    results, rejects = [], []
    for line_no, row in enumerate(reader, start=2):
        try:
            record = _parse_row(row, level_override, default_scale)
            results.append(assess_record(record, headline))
        except DomainError as exc:
            rejects.append({"row": line_no, "id": (row.get("id") or "").strip(), "reason": str(exc)})
    return results, rejects


def cmd_batch(args) -> int:
    try:
        with open(args.input, encoding="utf-8-sig", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {args.input}: {exc.strerror or exc}")
    results, rejects = run_batch(text, args.level, args.scale, args.headline)

    if args.format == "json":
        _emit(render_json({"results": results, "rejects": rejects}), args.output)
    else:
        rows = [flat_row(doc) for doc in results]
        render = render_table if args.format == "table" else render_csv
        _emit(render(rows, OUTPUT_COLUMNS), args.output)
        if rejects:
            listing = render_csv(rejects, ["row", "id", "reason"])
            if args.rejects:
                with open(args.rejects, "w", encoding="utf-8", newline="") as fh:
                    fh.write(listing)
            else:
                for r in rejects:
                    print(f"rejected row {r['row']} ({r['id'] or '-'}): {r['reason']}", file=sys.stderr)
    return 0


def cmd_threshold(args) -> int:
    alpha = args.alpha if args.alpha is not None else 1.0 - args.gamma
    row = {
        "alpha": alpha,
        "level": 1.0 - alpha,
        "alpha_ic": core.intrinsic_credibility_threshold(alpha),
        "matthews": core.matthews_threshold(alpha),
    }
    columns = list(row)
    if args.format == "json":
        text = render_json(row)
    elif args.format == "csv":
        text = render_csv([row], columns)
    else:
        text = render_table([row], columns)
    _emit(text, args.output)
    return 0


def _grid(start: float, stop: float, step: float) -> np.ndarray:
    if not step > 0:
        raise UsageError("--step must be positive")
    if stop < start:
        raise UsageError(f"empty range: start {start} exceeds stop {stop}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    x = start + step * np.arange(n)
    if not (x[0] > 0.0 and x[-1] < 1.0):
        raise UsageError("range must lie strictly inside (0, 1)")
    return x


def cmd_curve(args) -> int:
    x = _grid(args.start, args.stop, args.step)
    if args.curve == "thresholds":
        box, matthews = core.threshold_curves(x)
        columns = ["x", "box_threshold", "matthews_threshold"]
        rows = [dict(zip(columns, map(float, r))) for r in zip(x, box, matthews)]
    else:
        columns = ["p", "p_ic"]
        rows = [dict(zip(columns, map(float, r))) for r in zip(x, core.p_intrinsic_vec(x))]
    if args.format == "json":
        text = render_json(rows)
    elif args.format == "table":
        text = render_table(rows, columns)
    else:
        text = render_csv(rows, columns)
    _emit(text, args.output)
    return 0


def cmd_simulate(args) -> int:
    if _study_mode(args) == "estimate":
        estimate, se = args.estimate, args.se
    else:
        est = core.interval_to_estimate(_study_from_args(args).interval())
        estimate, se = est.estimate, est.std_error
    result = simulate_replication(
        SimulationConfig(estimate, se, args.draws, args.seed), workers=args.workers
    )
    row = {
        "estimate": estimate,
        "std_error": se,
        "num_draws": result.num_draws,
        "seed": args.seed,
        "flip_probability": result.flip_probability,
        "monte_carlo_se": result.monte_carlo_se,
        "closed_form": result.closed_form,
        "p_rep": result.p_rep,
        "p_rep_closed_form": 1.0 - result.closed_form,
    }
    if args.format == "json":
        text = render_json(row)
    elif args.format == "csv":
        text = render_csv([row], list(row))
    else:
        width = max(map(len, row))
        text = "".join(f"{k.ljust(width)}  {_table_cell(v)}\n" for k, v in row.items())
    _emit(text, args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_study_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("study (interval or estimate)")
    g.add_argument("--lower", type=_finite, help="lower confidence limit")
    g.add_argument("--upper", type=_finite, help="upper confidence limit")
    g.add_argument("--estimate", type=_finite, help="effect estimate on the analysis scale")
    g.add_argument("--se", type=_positive, help="standard error of the estimate")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    levels = argparse.ArgumentParser(add_help=False)
    levels.add_argument("--scale", choices=SCALES, default="identity",
                        help="scale of the limits; 'log' for ratio measures (OR, HR, RR)")

    parser = argparse.ArgumentParser(
        prog="incred",
        description="Intrinsic credibility of significant findings via reverse-Bayes analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assess", parents=[common, levels], help="assess one study",
                       description=VERDICT_HELP)
    _add_study_args(p)
    p.add_argument("--level", type=_open_unit, default=0.95, help="confidence level (default 0.95)")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--headline", action="store_true",
                   help="label with the fixed 0.005/0.05 cut-offs instead of alpha_IC")
    p.set_defaults(func=cmd_assess, subparser=p)

    p = sub.add_parser("batch", parents=[common, levels], help="assess every row of a CSV file",
                       description="Input columns: id,lower,upper[,level][,scale]. " + VERDICT_HELP)
    p.add_argument("input", help="input CSV path")
    p.add_argument("--level", type=_open_unit, default=None,
                   help="override the level of every row (default: row value, else 0.95)")
    p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    p.add_argument("--rejects", help="write rejected rows here (default: stderr)")
    p.add_argument("--headline", action="store_true",
                   help="label with the fixed 0.005/0.05 cut-offs instead of alpha_IC")
    p.set_defaults(func=cmd_batch, subparser=p)

    p = sub.add_parser("threshold", parents=[common], help="alpha_IC and Matthews' threshold")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", type=_open_unit, help="significance level")
    g.add_argument("--gamma", type=_open_unit, help="confidence level")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.set_defaults(func=cmd_threshold, subparser=p)

    p = sub.add_parser("curve", parents=[common], help="plot-ready threshold or p_IC curves")
    p.add_argument("curve", choices=("thresholds", "p_ic"),
                   help="thresholds: alpha_IC and Matthews vs alpha; p_ic: p_IC vs p")
    p.add_argument("--start", type=_finite, default=0.001, help="first grid point (default 0.001)")
    p.add_argument("--stop", type=_finite, default=0.1, help="last grid point (default 0.1)")
    p.add_argument("--step", type=_finite, default=0.001, help="grid spacing (default 0.001)")
    p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    p.set_defaults(func=cmd_curve, subparser=p)

    p = sub.add_parser("simulate", parents=[common, levels],
                       help="Monte Carlo check of the replication probability")
    _add_study_args(p)
    p.add_argument("--level", type=_open_unit, default=0.95, help="confidence level (default 0.95)")
    p.add_argument("--draws", "-n", type=_positive_int, default=DEFAULT_DRAWS,
                   help=f"number of simulated replications (default {DEFAULT_DRAWS:,})")
    p.add_argument("--seed", type=_seed, default=0, help="non-negative integer seed (default 0)")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="threads; the result does not depend on this (default 1)")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.set_defaults(func=cmd_simulate, subparser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        args.subparser.error(str(exc))
    except DomainError as exc:
        print(f"incred: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
