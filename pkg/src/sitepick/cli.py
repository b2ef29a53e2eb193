"""Command-line pipeline: survey CSV in, clustered site recommendations out.

Subcommands:
  weights   parse a survey and report reliability weights and per-quadrant AUC
  cluster   cluster one or more quadrants at a fixed k
  sweep     full pipeline: sweep k per quadrant, pick the best, emit artifacts
  synth     generate a synthetic survey CSV for demos and tests

Configuration is read from flags and, optionally, a key=value config file
given with --config; flags win over the file. Environment variables are
deliberately never consulted, so a command line plus its files fully
determines the run. Exit codes: 0 success, 2 bad configuration or usage,
3 unparseable input, 4 clustering that produced no scoreable partition.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .clustering import DEFAULT_MAX_ITERATIONS, HaversineMetric
from .errors import (
    ConfigError,
    DegenerateClusteringError,
    ParseError,
    SweepError,
    ValidationError,
)
from .geo import EarthModel
from .io_pipeline import (
    ParseResult,
    Quadrant,
    QuadrantSummary,
    RunManifest,
    build_weighted_points,
    export_dunn_curve,
    export_geojson,
    export_site_table,
    parse_key_values,
    parse_responses,
    sha256_digest,
    source_points,
)
from .model_selection import DEFAULT_RUNS_PER_K, default_k_max, sweep
from .sites import DEFAULT_REGION_ORDER, assign_site_ids, select_representatives
from .synth import WEIGHT_LAWS, SynthSpec, synthetic_csv
from .weighting import frequency_weight, reliability_auc

_QUADRANT_CHOICES = tuple(q.letter for q in Quadrant)


@dataclass(frozen=True)
class RunConfig:
    """Resolved knobs for a pipeline run (defaults < config file < flags)."""

    input: Optional[str] = None
    output_dir: str = "sitepick_out"
    base_seed: int = 0
    runs_per_k: int = DEFAULT_RUNS_PER_K
    k_min: int = 2
    k_max: Optional[int] = None  # None: floor(sqrt(n)) per quadrant
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    earth_radius_km: float = 6371.0
    strict: bool = False
    quadrants: tuple[str, ...] = _QUADRANT_CHOICES
    region_order: tuple[str, ...] = DEFAULT_REGION_ORDER
    workers: int = 1

    def validate(self) -> None:
        if self.k_min < 2:
            raise ConfigError(f"k_min must be >= 2, got {self.k_min}")
        if self.k_max is not None and self.k_max < self.k_min:
            raise ConfigError(f"k_max {self.k_max} is below k_min {self.k_min}")
        if self.runs_per_k < 1:
            raise ConfigError(f"runs_per_k must be >= 1, got {self.runs_per_k}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.earth_radius_km > 0:
            raise ConfigError(f"earth_radius_km must be positive, got {self.earth_radius_km}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if len(set(self.quadrants)) != len(self.quadrants):
            raise ConfigError("duplicate quadrant letters")
        for letter in self.quadrants:
            if letter not in _QUADRANT_CHOICES:
                raise ConfigError(f"unknown quadrant letter {letter!r}")
        if not self.region_order:
            raise ConfigError("region_order must name at least one region")


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"config key {key}: expected a boolean, got {raw!r}")


def _parse_letters(raw: str) -> tuple[str, ...]:
    return tuple(part.strip().upper() for part in raw.split(",") if part.strip())


def _parse_regions(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


_CONFIG_PARSERS = {
    "base_seed": lambda k, v: int(v),
    "runs_per_k": lambda k, v: int(v),
    "k_min": lambda k, v: int(v),
    "k_max": lambda k, v: int(v),
    "max_iterations": lambda k, v: int(v),
    "earth_radius_km": lambda k, v: float(v),
    "strict": _parse_bool,
    "quadrants": lambda k, v: _parse_letters(v),
    "region_order": lambda k, v: _parse_regions(v),
    "workers": lambda k, v: int(v),
}


def load_config_file(path: "str | Path") -> RunConfig:
    """RunConfig from a key=value file; unknown keys are an error."""
    values = parse_key_values(Path(path).read_text(encoding="utf-8"))
    fields: dict = {}
    for key, raw in values.items():
        parser = _CONFIG_PARSERS.get(key)
        if parser is None:
            known = ", ".join(sorted(_CONFIG_PARSERS))
            raise ConfigError(f"unknown config key {key!r} (known: {known})")
        try:
            fields[key] = parser(key, raw)
        except ValueError:
            raise ConfigError(f"config key {key}: could not parse {raw!r}") from None
    return RunConfig(**fields)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the optional --config file, and explicit flags."""
    config = RunConfig()
    if args.config is not None:
        config = load_config_file(args.config)
    overrides: dict = {}
    for name in (
        "input",
        "output_dir",
        "base_seed",
        "runs_per_k",
        "k_min",
        "k_max",
        "max_iterations",
        "earth_radius_km",
        "workers",
    ):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "strict", False):
        overrides["strict"] = True
    if getattr(args, "quadrant", None):
        overrides["quadrants"] = tuple(args.quadrant)
    if getattr(args, "region_order", None) is not None:
        overrides["region_order"] = _parse_regions(args.region_order)
    config = replace(config, **overrides)
    config.validate()
    return config


def _load_column_map(path: "str | None") -> "dict[str, str] | None":
    if path is None:
        return None
    return parse_key_values(Path(path).read_text(encoding="utf-8"))


def _read_input(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read input {path!r}: {exc}") from exc


def _parse_survey(args: argparse.Namespace, config: RunConfig) -> tuple[bytes, ParseResult]:
    assert config.input is not None
    data = _read_input(config.input)
    column_map = _load_column_map(args.column_map)
    parsed = parse_responses(data, column_map=column_map, strict=config.strict)
    for diagnostic in parsed.diagnostics:
        print(f"warning: {diagnostic}", file=sys.stderr)
    return data, parsed


def _write(directory: Path, name: str, payload: bytes) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / name
    target.write_bytes(payload)
    return target


def cmd_weights(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    _, parsed = _parse_survey(args, config)
    out_dir = Path(config.output_dir)
    lines = ["source_row,participant_id,quadrant,region,frequency_factor,avg_duration_min,weight"]
    summary = ["quadrant,label,n_points,auc"]
    for letter in config.quadrants:
        quadrant = Quadrant.from_token(letter)
        weighted = build_weighted_points(parsed.responses, quadrant)
        for wp in weighted:
            response = parsed.responses[wp.source_index]
            factor = frequency_weight(response.visit_count_category)
            lines.append(
                f"{response.row},{response.participant_id},{letter},{response.region},"
                f"{factor},{response.avg_duration_min:.6f},{wp.weight:.12f}"
            )
        if not weighted:
            print(f"quadrant {letter} ({quadrant.label}): no responses", file=sys.stderr)
            continue
        auc = reliability_auc([wp.weight for wp in weighted])
        summary.append(f"{letter},{quadrant.label},{len(weighted)},{auc:.12f}")
        print(f"quadrant {letter} ({quadrant.label}): n={len(weighted)} auc={auc:.4f}")
    _write(out_dir, "weights.csv", ("\n".join(lines) + "\n").encode("utf-8"))
    _write(out_dir, "auc_summary.csv", ("\n".join(summary) + "\n").encode("utf-8"))
    return 0


def _run_pipeline(args: argparse.Namespace, fixed_k: Optional[int]) -> int:
    config = resolve_config(args)
    data, parsed = _parse_survey(args, config)
    metric = HaversineMetric(EarthModel(config.earth_radius_km))
    out_dir = Path(config.output_dir)
    column_map = _load_column_map(args.column_map)
    manifest = RunManifest(
        tool_version=__version__,
        input_digest=sha256_digest(data),
        base_seed=config.base_seed,
        k_min=fixed_k if fixed_k is not None else config.k_min,
        k_max=fixed_k if fixed_k is not None else config.k_max,
        runs_per_k=config.runs_per_k,
        max_iterations=config.max_iterations,
        earth_radius_km=config.earth_radius_km,
        strict=config.strict,
        column_map=column_map,
        region_order=config.region_order,
    )
    produced = 0
    for letter in config.quadrants:
        quadrant = Quadrant.from_token(letter)
        weighted = build_weighted_points(parsed.responses, quadrant)
        if not weighted:
            print(f"quadrant {letter} ({quadrant.label}): no responses, skipped", file=sys.stderr)
            continue
        points = [wp.point for wp in weighted]
        weights = [wp.weight for wp in weighted]
        auc = reliability_auc(weights)
        if fixed_k is not None:
            k_range: Sequence[int] = [fixed_k]
        else:
            k_top = config.k_max if config.k_max is not None else default_k_max(len(weighted))
            k_range = range(config.k_min, k_top + 1)
        swept = sweep(
            points,
            weights,
            k_range=k_range,
            runs_per_k=config.runs_per_k,
            base_seed=config.base_seed,
            metric=metric,
            max_iterations=config.max_iterations,
            workers=config.workers,
        )
        best = swept.best
        representatives = select_representatives(
            points, best.result.assignment, list(best.result.centers), metric
        )
        report = assign_site_ids(
            representatives,
            quadrant.letter,
            source_points(parsed.responses, weighted),
            region_order=config.region_order,
        )
        _write(out_dir, f"clusters_{letter}.geojson",
               export_geojson(weighted, parsed.responses, best.result, report))
        _write(out_dir, f"sites_{letter}.csv", export_site_table(report))
        _write(out_dir, f"dunn_curve_{letter}.csv", export_dunn_curve(swept))
        manifest.quadrants[letter] = QuadrantSummary(
            label=quadrant.label,
            n_points=len(weighted),
            auc=auc,
            k_max=max(swept.k_range),
            optimal_k=swept.optimal_k,
            best_dunn=best.dunn.value,
            min_inter_km=best.dunn.min_inter_km,
            max_intra_km=best.dunn.max_intra_km,
            sites=len(report.records),
        )
        produced += 1
        print(
            f"quadrant {letter} ({quadrant.label}): n={len(weighted)} auc={auc:.4f} "
            f"k={swept.optimal_k} dunn={best.dunn.value:.4f} sites={len(report.records)}"
        )
    if produced == 0:
        raise ConfigError("no selected quadrant had any responses")
    _write(out_dir, "manifest.json", manifest.to_json())
    return 0


def cmd_cluster(args: argparse.Namespace) -> int:
    if args.k < 2:
        raise ConfigError(f"--k must be >= 2, got {args.k}")
    return _run_pipeline(args, fixed_k=args.k)


def cmd_sweep(args: argparse.Namespace) -> int:
    return _run_pipeline(args, fixed_k=None)


def cmd_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        blobs=args.blobs,
        per_blob=args.per_blob,
        spread_km=args.spread_km,
        ring_km=args.ring_km,
        center_lat_deg=args.center_lat,
        center_lon_deg=args.center_lon,
        weight_law=args.weight_law,
        quadrants=tuple(args.quadrant) if args.quadrant else _QUADRANT_CHOICES,
        seed=args.seed,
    )
    payload = synthetic_csv(spec)
    target = Path(args.output)
    if target.parent != Path(""):
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(payload)
    rows = payload.count(b"\n") - 1
    print(f"wrote {rows} synthetic responses to {target}")
    return 0


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="survey CSV file")
    parser.add_argument("-o", "--output-dir", default="sitepick_out",
                        help="directory for artifacts (default: %(default)s)")
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--column-map",
                        help="key=value file renaming canonical CSV columns to yours")
    parser.add_argument("--strict", action="store_true",
                        help="treat any row diagnostic as a fatal parse error")
    parser.add_argument("--quadrant", action="append", choices=_QUADRANT_CHOICES,
                        metavar="LETTER",
                        help="quadrant letter to process (repeatable; default all)")
    parser.add_argument("--base-seed", type=int, help="seed all runs derive from (default 0)")
    parser.add_argument("--runs-per-k", type=int,
                        help=f"restarts per candidate k (default {DEFAULT_RUNS_PER_K})")
    parser.add_argument("--k-min", type=int, help="smallest candidate k (default 2)")
    parser.add_argument("--k-max", type=int,
                        help="largest candidate k (default: floor(sqrt(n)) per quadrant)")
    parser.add_argument("--max-iterations", type=int,
                        help=f"iteration cap per run (default {DEFAULT_MAX_ITERATIONS})")
    parser.add_argument("--earth-radius-km", type=float,
                        help="sphere radius for distances (default 6371)")
    parser.add_argument("--region-order",
                        help="comma-separated region ordering for site tables")
    parser.add_argument("--workers", type=int,
                        help="processes for the k sweep; results do not depend on this")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sitepick",
        description="Pick representative sites from weighted survey locations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    weights = commands.add_parser("weights", help="compute reliability weights and AUC")
    _add_run_options(weights)
    weights.set_defaults(handler=cmd_weights)

    cluster = commands.add_parser("cluster", help="cluster quadrants at a fixed k")
    _add_run_options(cluster)
    cluster.add_argument("--k", type=int, required=True, help="number of clusters")
    cluster.set_defaults(handler=cmd_cluster)

    swp = commands.add_parser("sweep", help="sweep k, keep the best clustering per quadrant")
    _add_run_options(swp)
    swp.set_defaults(handler=cmd_sweep)

    synth = commands.add_parser("synth", help="generate a synthetic survey CSV")
    synth.add_argument("-o", "--output", default="synthetic_survey.csv",
                       help="output CSV path (default: %(default)s)")
    synth.add_argument("--blobs", type=int, default=4, help="blobs per quadrant")
    synth.add_argument("--per-blob", type=int, default=12, help="points per blob")
    synth.add_argument("--spread-km", type=float, default=1.0,
                       help="Gaussian spread of each blob in km")
    synth.add_argument("--ring-km", type=float, default=20.0,
                       help="radius of the ring blobs are placed on")
    synth.add_argument("--center-lat", type=float, default=1.3521)
    synth.add_argument("--center-lon", type=float, default=103.8198)
    synth.add_argument("--weight-law", choices=WEIGHT_LAWS, default="uniform",
                       help="how visit counts and durations are drawn")
    synth.add_argument("--quadrant", action="append", choices=_QUADRANT_CHOICES,
                       metavar="LETTER", help="quadrant to generate (repeatable; default all)")
    synth.add_argument("--seed", type=int, default=0)
    synth.set_defaults(handler=cmd_synth)
    return parser


def main(argv: "Sequence[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DegenerateClusteringError, SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
