"""Command line entry point: ``crmetrics {extract,compare,network,synth}``.

Exit codes: 0 success, 2 input/configuration error, 3 empty cohort,
4 numerical failure.  Failures also write ``error.json`` to the output
directory (when one is known) and print the same JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .binning import write_day_vectors
from .cohort.compare import GROUPS, METRIC_LABELS, CrMetricSet, compare_sensors
from .cohort.network import MIN_ROWS, ConstantMetricError, mgm_network
from .ingest import ConfigError, IngestError, get_zone, parse_accel, parse_gps
from .nonparam import RESOLUTIONS
from .pipeline import ExtractOptions, extract_cohort
from .synth import SynthSpec, write_cohort

log = logging.getLogger("crmetrics")

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_NUMERIC = 0, 2, 3, 4

METRICS_HEADER = ["participant_id", "sensor", "n_days", *METRIC_LABELS, "M10", "L5"]
DIAG_HEADER = ["participant_id", "sensor", "converged", "rss", "n_iter", "alpha", "beta", "M10", "L5",
               "E24_raw", "basic_MES", "basic_AMP", "basic_PHI", "basic_FS"]
COMPARISON_HEADER = ["metric", "mean_accel", "mean_gps", "t", "df", "p", "stars"]


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


@dataclass
class RunConfig:
    accel: str | None = None
    gps: str | None = None
    tz: str = "America/Chicago"
    min_days: int = 5
    out: str = "out"
    seed: int = 0
    jobs: int = 1
    resolution: str = "10min"
    min_period: float = 4.0
    max_period: float = 48.0
    oversample: int = 4
    lenient: bool = False

    def validate(self) -> None:
        if self.min_days < 2:
            raise ConfigError("min_days: must be >= 2")
        if self.jobs < 1:
            raise ConfigError("jobs: must be >= 1")
        if self.resolution not in RESOLUTIONS:
            raise ConfigError(f"resolution: must be one of {RESOLUTIONS}")
        if not 0 < self.min_period < 23.5 or self.max_period <= 24.5:
            raise ConfigError("min_period/max_period: grid must cover the 23.5-24.5 h band")
        if self.oversample < 1:
            raise ConfigError("oversample: must be >= 1")
        get_zone(self.tz)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))
    return "" if v is None else str(v)


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a mapping")
    return doc


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    merged = {}
    known = {f.name for f in fields(RunConfig)}
    for key, value in load_config(getattr(args, "config", None)).items():
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"{key}: unknown config field")
        merged[key] = value
    for key in known:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            merged[key] = value
    try:
        cfg = RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------
# extract

def cmd_extract(cfg: RunConfig) -> int:
    if not cfg.accel or not cfg.gps:
        raise ConfigError("accel/gps: both input paths are required")
    for p in (cfg.accel, cfg.gps):
        if not Path(p).is_file():
            raise CliError(EXIT_INPUT, "input", f"input file not found: {p}")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    accel = parse_accel(cfg.accel, strict=not cfg.lenient)
    gps = parse_gps(cfg.gps, strict=not cfg.lenient)
    opts = ExtractOptions(cfg.resolution, cfg.min_period, cfg.max_period, cfg.oversample)
    try:
        result = extract_cohort(accel.tracks, gps.tracks, cfg.tz, cfg.min_days, opts, cfg.jobs)
    except (ArithmeticError, np.linalg.LinAlgError, FloatingPointError) as exc:
        raise CliError(EXIT_NUMERIC, "numerical", f"numerical failure during extraction: {exc}") from None

    with open(out / "rejections.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["participant_id", "accel_days", "gps_days", "joint_days", "reason"])
        for r in result.rejections:
            w.writerow([r.participant_id, r.accel_days, r.gps_days, r.joint_days, r.reason])
    report = {
        "accel": {"rows": accel.report.n_rows, "kept": accel.report.n_kept,
                  "duplicates": accel.report.n_duplicates, "rejected": accel.report.n_rejected,
                  "errors": [str(e) for e in accel.report.errors[:100]]},
        "gps": {"rows": gps.report.n_rows, "kept": gps.report.n_kept,
                "duplicates": gps.report.n_duplicates, "rejected": gps.report.n_rejected,
                "errors": [str(e) for e in gps.report.errors[:100]]},
        "retained_participants": len({r.participant_id for r in result.rows}),
        "rejected_participants": len(result.rejections),
        # the output location is left out so a cohort re-extracted elsewhere reproduces this file
        "config": {k: v for k, v in asdict(cfg).items() if k != "out"},
    }
    (out / "ingest_report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    with open(out / "day_vectors.csv", "w", newline="") as fh:
        write_day_vectors(result.day_vectors, fh)
    if not result.rows:
        raise CliError(EXIT_EMPTY, "empty_cohort",
                       f"no participant has {cfg.min_days} jointly complete days "
                       f"({len(result.rejections)} rejected, see rejections.csv)")

    with open(out / "metrics.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for r in result.rows:
            w.writerow([r.participant_id, r.sensor, r.n_days,
                        *[_fmt(v) for v in r.metrics.as_labeled().values()], _fmt(r.m10), _fmt(r.l5)])
    with open(out / "diagnostics.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIAG_HEADER)
        for r in result.rows:
            d = dict(r.diagnostics, M10=r.m10, L5=r.l5)
            w.writerow([r.participant_id, r.sensor] + [_fmt(d.get(k)) for k in DIAG_HEADER[2:]])
    log.info("extracted %d rows, rejected %d participants", len(result.rows), len(result.rejections))
    return EXIT_OK


# --------------------------------------------------------------------------
# compare / network

def read_metrics(path: str) -> dict[str, dict[str, CrMetricSet]]:
    """``{sensor: {participant_id: CrMetricSet}}`` from a metrics CSV."""
    if not Path(path).is_file():
        raise CliError(EXIT_INPUT, "input", f"metrics file not found: {path}")
    out: dict[str, dict[str, CrMetricSet]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in ("participant_id", "sensor", *METRIC_LABELS) if c not in (reader.fieldnames or [])]
        if missing:
            raise CliError(EXIT_INPUT, "input", f"metrics file lacks columns {missing}")
        for line, row in enumerate(reader, start=2):
            try:
                rec = CrMetricSet.from_labeled(row)
            except ValueError:
                raise CliError(EXIT_INPUT, "input", f"{path}: line {line}: non-numeric metric") from None
            out.setdefault(row["sensor"], {})[row["participant_id"]] = rec
    return out


def cmd_compare(metrics_path: str, out_dir: str, group: str) -> int:
    data = read_metrics(metrics_path)
    if set(data) != {"accel", "gps"}:
        raise CliError(EXIT_INPUT, "input", f"need both accel and gps rows, found sensors {sorted(data)}")
    common = sorted(set(data["accel"]) & set(data["gps"]))
    rows = compare_sensors([data["accel"][p] for p in common], [data["gps"][p] for p in common],
                           GROUPS[group])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "comparison.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COMPARISON_HEADER)
        for r in rows:
            w.writerow([r.metric, _fmt(r.mean_a), _fmt(r.mean_b), _fmt(r.t), _fmt(r.df), _fmt(r.p), r.stars])
    meta = {"group": group, "n_participants": len(common),
            "rows": [{"metric": r.metric, "n_accel": r.n_a, "n_gps": r.n_b, "reliable": r.reliable}
                     for r in rows]}
    (out / "comparison_meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def cmd_network(metrics_path: str, out_dir: str, sensor: str, seed: int, force: bool) -> int:
    data = read_metrics(metrics_path)
    if sensor not in data:
        raise CliError(EXIT_INPUT, "input", f"no rows for sensor {sensor!r}")
    pids = sorted(data[sensor])
    M = np.array([[data[sensor][p].get(m) for m in METRIC_LABELS] for p in pids], dtype=float)
    n_complete = int(np.isfinite(M).all(axis=1).sum())
    if n_complete < MIN_ROWS and not force:
        raise CliError(EXIT_INPUT, "insufficient_rows",
                       f"{n_complete} complete rows for {sensor} (< {MIN_ROWS}); pass --force to proceed")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore" if force else "default")
        try:
            graph = mgm_network(M, METRIC_LABELS, seed=seed)
        except ConstantMetricError as exc:
            raise CliError(EXIT_NUMERIC, "constant_metric", str(exc)) from None
    graph.meta["sensor"] = sensor
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"network_{sensor}.json").write_text(graph.to_json())
    (out / f"network_{sensor}.dot").write_text(graph.to_dot(f"metrics_{sensor}"))
    return EXIT_OK


def cmd_synth(spec_path: str, out_dir: str, seed: int | None = None) -> int:
    doc = load_config(spec_path)
    if seed is not None:
        doc["seed"] = seed
    spec = SynthSpec.from_dict(doc)
    write_cohort(spec, out_dir)
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crmetrics", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="raw CSVs -> metrics.csv, diagnostics.csv, rejections.csv")
    ex.add_argument("--config")
    ex.add_argument("--accel")
    ex.add_argument("--gps")
    ex.add_argument("--tz")
    ex.add_argument("--min-days", dest="min_days", type=int)
    ex.add_argument("--out")
    ex.add_argument("--seed", type=int)
    ex.add_argument("--jobs", type=int)
    ex.add_argument("--resolution", choices=RESOLUTIONS)
    ex.add_argument("--min-period", dest="min_period", type=float)
    ex.add_argument("--max-period", dest="max_period", type=float)
    ex.add_argument("--oversample", type=int)
    ex.add_argument("--lenient", action="store_true", help="skip malformed rows instead of aborting")

    cp = sub.add_parser("compare", help="Welch tests between sensors")
    cp.add_argument("--metrics", required=True)
    cp.add_argument("--out", default="out")
    cp.add_argument("--group", choices=sorted(GROUPS), default="both")
    cp.add_argument("--all", action="store_true", help="shorthand for --group all")

    nw = sub.add_parser("network", help="round-robin LASSO metric network")
    nw.add_argument("--metrics", required=True)
    nw.add_argument("--sensor", choices=("accel", "gps"), required=True)
    nw.add_argument("--seed", type=int, default=0)
    nw.add_argument("--out", default="out")
    nw.add_argument("--force", action="store_true", help=f"proceed with fewer than {MIN_ROWS} rows")

    sy = sub.add_parser("synth", help="generate a synthetic cohort from a YAML/JSON spec")
    sy.add_argument("--spec", required=True)
    sy.add_argument("--out", default="synth")
    sy.add_argument("--seed", type=int)
    return parser


def _fail(err: CliError, out_dir: str | None) -> int:
    doc = {"error": err.kind, "message": err.message, "exit_code": err.code}
    text = json.dumps(doc, sort_keys=True)
    print(text, file=sys.stderr)
    if out_dir:
        try:
            Path(out_dir).mkdir(parents=True, exist_ok=True)
            (Path(out_dir) / "error.json").write_text(text + "\n")
        except OSError:
            pass
    return err.code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out_dir = getattr(args, "out", None)
    try:
        if args.command == "extract":
            cfg = build_run_config(args)
            out_dir = cfg.out
            return cmd_extract(cfg)
        if args.command == "compare":
            return cmd_compare(args.metrics, args.out, "all" if args.all else args.group)
        if args.command == "network":
            return cmd_network(args.metrics, args.out, args.sensor, args.seed, args.force)
        if args.command == "synth":
            return cmd_synth(args.spec, args.out, args.seed)
    except CliError as err:
        return _fail(err, out_dir)
    except (ConfigError, IngestError) as exc:
        return _fail(CliError(EXIT_INPUT, "config" if isinstance(exc, ConfigError) else "input", str(exc)),
                     out_dir)
    except OSError as exc:
        return _fail(CliError(EXIT_INPUT, "io", str(exc)), out_dir)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
