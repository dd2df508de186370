"""Command-line front end: ``eacc-sim {capacity,simulate,sweep,verify}``.

Exit status is 0 on success, 1 when verification or estimation fails (or
output cannot be written) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, verify
from .channels import LcTimingModel
from .experiment import (
    DEFAULT_MEAN_COUNTS,
    DEFAULT_SEED,
    ERROR_METHODS,
    EstimationError,
    ExperimentConfig,
    run_point,
    run_sweep,
    sweep_configs,
)
from .information import eacc

SCHEMA_VERSION = 1
SWEEP_COLUMNS = ("p_exp", "p_effective", "I_measured", "I_sigma", "C_theory")
CAPACITY_COLUMNS = ("p", "C_theory")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


def _num(x: float) -> str:
    # repr is the shortest string that round-trips to the same double
    return repr(float(x))


@dataclass
class OutputRecordSet:
    """Tabular command output plus run metadata.

    CSV carries only the header and rows. JSON adds ``schema_version``,
    ``tool``, ``version`` and the metadata block; NaN values become null.
    """

    columns: tuple[str, ...]
    records: list[dict]
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for rec in self.records:
            w.writerow([_num(rec[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tool": "eacc-sim",
            "version": __version__,
            "columns": list(self.columns),
            "records": [
                {c: (None if math.isnan(rec[c]) else float(rec[c])) for c in self.columns}
                | ({"error": rec["error"]} if rec.get("error") else {})
                for rec in self.records
            ],
            "metadata": self.metadata,
        }
        return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()

    @classmethod
    def from_csv(cls, text: str) -> OutputRecordSet:
        rows = list(csv.reader(io.StringIO(text)))
        columns = tuple(rows[0])
        return cls(columns, [dict(zip(columns, map(float, r))) for r in rows[1:]])

    @classmethod
    def from_json(cls, text: str) -> OutputRecordSet:
        doc = json.loads(text)
        columns = tuple(doc["columns"])
        records = [{c: (math.nan if r[c] is None else float(r[c])) for c in columns} for r in doc["records"]]
        return cls(columns, records, doc.get("metadata", {}))


def _sweep_row(rec) -> dict:
    row = dict(zip(SWEEP_COLUMNS, (rec.p_exp, rec.p_effective, rec.i_measured, rec.i_uncertainty, rec.capacity_theory)))
    if rec.error:
        row["error"] = rec.error
    return row


def capacity_records(p_min: float, p_max: float, steps: int) -> OutputRecordSet:
    grid = np.linspace(p_min, p_max, steps)
    return OutputRecordSet(
        CAPACITY_COLUMNS,
        [{"p": float(p), "C_theory": eacc(p)} for p in grid],
        {"command": "capacity", "p_min": p_min, "p_max": p_max, "steps": steps},
    )


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``min:max:steps`` into an inclusive uniform grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like min:max:steps, got {spec!r}")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1:
        raise ValueError(f"grid needs at least one step, got {steps}")
    if not (0.0 <= lo <= hi <= 1.0):
        raise ValueError(f"grid bounds must satisfy 0 <= min <= max <= 1, got {lo}:{hi}")
    if steps == 1 and lo != hi:
        raise ValueError("a one-step grid needs min == max")
    return np.linspace(lo, hi, steps)


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _timing(text: str) -> LcTimingModel:
    try:
        t1, t2, t3, period = (float(x) for x in text.split(","))
        return LcTimingModel(t1, t2, t3, period)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected t1,t2,t3,T: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eacc-sim",
        description="Entanglement-assisted capacity of the depolarizing channel: theory, simulation, checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    parser.add_argument("-v", "--verbose", action="store_true")

    # sub-level copies must not reset a global value given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", metavar="PATH", help="write here instead of standard output")

    experiment = argparse.ArgumentParser(add_help=False)
    experiment.add_argument("--visibility", type=_probability, default=0.94)
    experiment.add_argument("--mean-counts", type=_positive, default=DEFAULT_MEAN_COUNTS,
                            help="expected coincidences per input state over its four projections")
    experiment.add_argument("--error-method", choices=ERROR_METHODS, default="delta")
    experiment.add_argument("--bootstrap-resamples", type=int, default=1000)

    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", parents=[common], help="closed-form capacity on a p grid")
    cap.add_argument("--p-min", type=_probability, default=0.0)
    cap.add_argument("--p-max", type=_probability, default=1.0)
    cap.add_argument("--steps", type=int, default=101)

    sim = sub.add_parser("simulate", parents=[common, experiment], help="one simulated operating point")
    src = sim.add_mutually_exclusive_group()
    src.add_argument("--p-exp", type=_probability, default=None)
    src.add_argument("--lc-timing", type=_timing, metavar="t1,t2,t3,T",
                     help="liquid-crystal activation times and cycle period instead of --p-exp")

    sw = sub.add_parser("sweep", parents=[common, experiment], help="simulated sweep over p_exp")
    sw.add_argument("--grid", default="0:1:21", metavar="min:max:steps")
    sw.add_argument("--workers", type=int, default=1)

    ver = sub.add_parser("verify", help="analytic vs density-matrix oracle checks")
    ver.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    ver.add_argument("--grid-points", type=int, default=21)
    return parser


def _emit(args, out: OutputRecordSet) -> int:
    text = out.render(args.format)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"eacc-sim: cannot write {args.output}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_FAILURE
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_capacity(args, parser) -> int:
    if args.p_min > args.p_max:
        parser.error(f"--p-min {args.p_min} exceeds --p-max {args.p_max}")
    if args.steps < 1:
        parser.error("--steps must be at least 1")
    if args.steps == 1 and args.p_min != args.p_max:
        parser.error("--steps 1 needs --p-min equal to --p-max")
    return _emit(args, capacity_records(args.p_min, args.p_max, args.steps))


def _experiment_kwargs(args) -> dict:
    return dict(
        mean_counts_per_input=args.mean_counts,
        seed=args.seed,
        error_method=args.error_method,
        bootstrap_resamples=args.bootstrap_resamples,
    )


def _cmd_simulate(args, parser) -> int:
    if args.bootstrap_resamples < 2:
        parser.error("--bootstrap-resamples must be at least 2")
    p_exp = args.lc_timing if args.lc_timing is not None else (args.p_exp or 0.0)
    try:
        config = ExperimentConfig(args.visibility, p_exp, **_experiment_kwargs(args))
    except ValueError as exc:
        parser.error(str(exc))
    record, counts = run_point(config)
    out = OutputRecordSet(
        SWEEP_COLUMNS,
        [_sweep_row(record)],
        {"command": "simulate", "config": config.as_dict(), "counts": counts.counts.tolist()},
    )
    status = _emit(args, out)
    if not record.ok:
        print(f"eacc-sim: estimation failed: {record.error}", file=sys.stderr)
        return EXIT_FAILURE
    return status


def _cmd_sweep(args, parser) -> int:
    if args.bootstrap_resamples < 2:
        parser.error("--bootstrap-resamples must be at least 2")
    try:
        grid = parse_grid(args.grid)
    except ValueError as exc:
        parser.error(str(exc))
    configs = sweep_configs(args.visibility, grid, **_experiment_kwargs(args))
    records = run_sweep(configs, workers=max(1, args.workers))
    meta = {
        "command": "sweep",
        "grid": args.grid,
        "visibility": args.visibility,
        **_experiment_kwargs(args),
    }
    status = _emit(args, OutputRecordSet(SWEEP_COLUMNS, [_sweep_row(r) for r in records], meta))
    failed = [r for r in records if not r.ok]
    for r in failed:
        print(f"eacc-sim: point p_exp={r.p_exp} failed: {r.error}", file=sys.stderr)
    return EXIT_FAILURE if failed else status


def _cmd_verify(args, parser) -> int:
    if args.grid_points < 2:
        parser.error("--grid-points must be at least 2")
    results = verify.run_checks(args.grid_points)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<32} max deviation {r.max_deviation:.3e} (tol {r.tol:.0e}) worst at {r.worst_at}")
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed on a {args.grid_points}-point grid")
    return EXIT_FAILURE if n_fail else EXIT_OK


COMMANDS = {
    "capacity": _cmd_capacity,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args, parser)
    except EstimationError as exc:
        print(f"eacc-sim: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
