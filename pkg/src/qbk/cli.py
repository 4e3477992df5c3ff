"""Batch command-line harness.

Report formats (CSV, fixed column order):

* features: ``benchmark_id, file, communication, critical_depth, entanglement,
  parallelism, liveness, measurement, depth, num_qubits, two_qubit_gates``
* score: ``benchmark_id, backend, mean, std, repetitions``
* coverage: ``axis, min, max`` rows followed by ``volume`` (and ``stderr``)
* correlate: ``axis, <backend>...`` with one R² per cell

Results are JSONL, one record per (benchmark, backend, repetition).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from ._rng import derive_seed
from .analysis import (
    FeatureRecord,
    ScoreTable,
    correlation_table,
    hull_volume,
    monte_carlo_hull_volume,
    synthetic_suite,
)
from .benchmarks import BenchmarkInstance, default_suite, load_instance, save_instance, shot_split
from .benchmarks.suite import INSTANCE_FILE
from .config import BackendProfile, ConfigError, SuiteConfig, load_config
from .features import AXES, FeatureVector, circuit_profile, compute_features
from .qasm import QasmError, parse_qasm
from .simulator import sample

FEATURE_COLUMNS = ("benchmark_id", "file", *AXES, "depth", "num_qubits", "two_qubit_gates")
SCORE_COLUMNS = ("benchmark_id", "backend", "mean", "std", "repetitions")
SEED_ENV = "QBK_SEED"


class CliError(Exception):
    """A documented user-facing failure; reported on stderr with exit code 1."""


# ---------------------------------------------------------------------------
# helpers


def _resolve_seed(args: argparse.Namespace, config: SuiteConfig | None = None) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"{SEED_ENV}={env!r} is not an integer") from None
    if args.seed is not None:
        return args.seed
    return config.seed if config else 0


def _require_config(args: argparse.Namespace) -> SuiteConfig:
    if not args.config:
        raise CliError("this command needs --config")
    return load_config(args.config)


def _out_dir(args: argparse.Namespace, config: SuiteConfig | None = None, default: str = ".") -> Path:
    path = Path(args.out or (config.out if config and config.out else default))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _histogram_digest(histograms) -> str:
    canon = json.dumps([dict(h.counts) for h in histograms], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args: argparse.Namespace) -> int:
    config = _require_config(args)
    seed = _resolve_seed(args, config)
    root = _out_dir(args, config) / "instances"
    for inst in config.instances(seed):
        save_instance(inst, root / inst.id)
        print(root / inst.id)
    return 0


# ---------------------------------------------------------------------------
# features


def _qasm_files(paths: Sequence[str]) -> list[Path]:
    files: list[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.rglob("*.qasm")))
        elif p.exists():
            files.append(p)
        else:
            raise CliError(f"{p}: no such file or directory")
    return files


def _benchmark_id_for(path: Path) -> str:
    meta = path.parent / INSTANCE_FILE
    if meta.exists():
        return json.loads(meta.read_text())["id"]
    return path.stem


def feature_rows(paths: Sequence[str]) -> list[dict[str, object]]:
    rows = []
    for file in _qasm_files(paths):
        try:
            circuit = parse_qasm(file.read_text())
        except QasmError as exc:
            raise CliError(f"{file}: {exc}") from exc
        fv = compute_features(circuit)
        row: dict[str, object] = {"benchmark_id": _benchmark_id_for(file), "file": str(file)}
        row.update(zip(AXES, fv.as_tuple()))
        row.update(circuit_profile(circuit))
        rows.append(row)
    return rows


def cmd_features(args: argparse.Namespace) -> int:
    rows = feature_rows(args.paths)
    text = _csv_text(FEATURE_COLUMNS, [[r[c] for c in FEATURE_COLUMNS] for r in rows])
    if args.out:
        out = _out_dir(args)
        (out / "features.csv").write_text(text)
        (out / "features.json").write_text(json.dumps(rows, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def read_feature_records(path: str | Path) -> list[FeatureRecord]:
    """One record per benchmark from a features CSV/JSON; the first circuit row wins."""
    p = Path(path)
    try:
        if p.suffix == ".json":
            rows = json.loads(p.read_text())
        else:
            with open(p, newline="") as fh:
                rows = list(csv.DictReader(fh))
        records: dict[str, FeatureRecord] = {}
        for row in rows:
            bench = str(row["benchmark_id"])
            if bench in records:
                continue
            fv = FeatureVector(*(float(row[a]) for a in AXES))
            extras = {k: float(row[k]) for k in ("depth", "num_qubits", "two_qubit_gates") if k in row}
            records[bench] = FeatureRecord(bench, fv, extras)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise CliError(f"{p}: unreadable feature report ({exc})") from exc
    return list(records.values())


# ---------------------------------------------------------------------------
# run


def run_one(instance: BenchmarkInstance, backend: BackendProfile, repetition: int, seed: int) -> dict[str, object]:
    """Execute one repetition; the sampling seed ignores the backend so noise levels share random numbers."""
    run_seed = derive_seed(seed, instance.id, repetition)
    start = time.perf_counter()
    hists = [
        sample(circuit, shots, backend.noise, derive_seed(run_seed, k))
        for k, (circuit, shots) in enumerate(zip(instance.circuits, shot_split(instance.family, backend.shots)))
    ]
    score = instance.score(hists)
    return {
        "benchmark_id": instance.id,
        "backend": backend.name,
        "repetition": repetition,
        "seed": run_seed,
        "shots": backend.shots,
        "noise": backend.noise.to_dict(),
        "score": score,
        "histogram_digest": _histogram_digest(hists),
        "wall_clock": round(time.perf_counter() - start, 6),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }


def _load_instances(args: argparse.Namespace, config: SuiteConfig, seed: int) -> list[BenchmarkInstance]:
    if args.instances:
        dirs = sorted(p.parent for p in Path(args.instances).rglob(INSTANCE_FILE))
        if not dirs:
            raise CliError(f"{args.instances}: no instance directories found")
        return [load_instance(d) for d in dirs]
    return config.instances(seed)


def cmd_run(args: argparse.Namespace) -> int:
    config = _require_config(args)
    seed = _resolve_seed(args, config)
    instances = _load_instances(args, config, seed)
    tasks = [(inst, backend, rep) for inst in instances for backend in config.backends for rep in range(backend.repetitions)]

    def work(task):
        return run_one(*task, seed)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(work, tasks))
    else:
        records = [work(t) for t in tasks]
    path = _out_dir(args, config) / "results.jsonl"
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    print(f"{len(records)} records appended to {path}")
    return 0


# ---------------------------------------------------------------------------
# score


def read_results(paths: Sequence[str]) -> list[dict]:
    """Parse JSONL results; a malformed final line is skipped with a warning."""
    records = []
    for path in paths:
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise CliError(f"{path}: {exc}") from exc
        while lines and not lines[-1].strip():
            lines.pop()
        for number, line in enumerate(lines, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                float(rec["score"]), str(rec["benchmark_id"]), str(rec["backend"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                if number == len(lines):
                    print(f"warning: {path}:{number}: skipping malformed trailing line", file=sys.stderr)
                    continue
                raise CliError(f"{path}:{number}: malformed result record") from None
            records.append(rec)
    return records


def score_table(paths: Sequence[str]) -> ScoreTable:
    recs = read_results(paths)
    return ScoreTable.from_scores((r["benchmark_id"], r["backend"], r["score"]) for r in recs)


def cmd_score(args: argparse.Namespace) -> int:
    table = score_table(args.results)
    rows = [[r.benchmark_id, r.backend, r.mean, r.std, r.repetitions] for r in table.rows]
    text = _csv_text(SCORE_COLUMNS, rows)
    _emit(text, _out_dir(args) / "scores.csv" if args.out else None)
    return 0


# ---------------------------------------------------------------------------
# coverage


def _coverage_points(args: argparse.Namespace) -> list[tuple[float, ...]]:
    if args.synthetic:
        return synthetic_suite()
    if args.default_suite:
        return [compute_features(inst.circuits[0]).as_tuple() for inst in default_suite()]
    if not args.features:
        raise CliError("coverage needs a features report, --synthetic or --default-suite")
    return [rec.features.as_tuple() for rec in read_feature_records(args.features)]


def cmd_coverage(args: argparse.Namespace) -> int:
    points = _coverage_points(args)
    rows: list[list[object]] = []
    for k, axis in enumerate(AXES):
        values = [p[k] for p in points]
        rows.append([axis, min(values) if values else "", max(values) if values else ""])
    if args.monte_carlo:
        volume, stderr = monte_carlo_hull_volume(points, args.samples, _resolve_seed(args))
        rows.append(["volume", volume, ""])
        rows.append(["stderr", stderr, ""])
    else:
        rows.append(["volume", hull_volume(points), ""])
    text = _csv_text(("axis", "min", "max"), rows)
    _emit(text, _out_dir(args) / "coverage.csv" if args.out else None)
    return 0


# ---------------------------------------------------------------------------
# correlate


def cmd_correlate(args: argparse.Namespace) -> int:
    records = read_feature_records(args.features)
    table = score_table(args.results)
    exclude = [f for f in (args.exclude or "").split(",") if f]
    matrix = correlation_table(records, table, extra_axes=args.extra_axes, exclude=exclude)
    text = _csv_text(("axis", *matrix.backends), matrix.rows())
    _emit(text, _out_dir(args) / "correlation.csv" if args.out else None)
    return 0


# ---------------------------------------------------------------------------
# entry point


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies must not overwrite values given before the subcommand
    def default(value):
        return argparse.SUPPRESS if suppress else value

    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--config", metavar="PATH", default=default(None), help="suite configuration (TOML)")
    flags.add_argument(
        "--seed", type=int, default=default(None), help=f"base seed (the {SEED_ENV} environment variable takes precedence)"
    )
    flags.add_argument("--out", metavar="DIR", default=default(None), help="output directory")
    flags.add_argument("--jobs", type=int, default=default(1), help="worker threads for run")
    return flags


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="qbk",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[_global_flags(suppress=False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("generate", parents=[common], help="write instance directories").set_defaults(func=cmd_generate)

    p = sub.add_parser("features", parents=[common], help="feature report for .qasm files or directories")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("run", parents=[common], help="simulate every (instance, backend, repetition)")
    p.add_argument("--instances", metavar="DIR", help="run saved instances instead of regenerating")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("score", parents=[common], help="mean/std score table from results")
    p.add_argument("results", nargs="+")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("coverage", parents=[common], help="convex-hull volume of feature vectors")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--features", metavar="FILE")
    src.add_argument("--synthetic", action="store_true", help="origin plus the six unit vectors")
    src.add_argument("--default-suite", action="store_true", help="8 families at sizes 3..8")
    p.add_argument("--monte-carlo", action="store_true")
    p.add_argument("--samples", type=int, default=10_000_000)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("correlate", parents=[common], help="R² of features against mean scores")
    p.add_argument("--features", metavar="FILE", required=True)
    p.add_argument("--results", metavar="FILE", nargs="+", required=True)
    p.add_argument("--exclude", metavar="FAMILIES", help="comma-separated families to drop")
    p.add_argument("--extra-axes", action="store_true", help="add depth, qubit count and two-qubit gate count")
    p.set_defaults(func=cmd_correlate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except (CliError, ConfigError, QasmError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
