"""Command-line entry point: validate, run, synth, report.

The run configuration is one JSON document holding the input paths, the
cost model, and the analysis settings; every numeric parameter has a
default so a minimal config only names the four input files. Exit
codes: 0 success, 1 validation failure, 2 configuration failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, fields as dataclass_fields
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .errors import ConfigurationError, CorpusValidationError, InputIOError
from .hca import write_flags_csv
from .indicators import write_scoreboard_csv
from .ingest import CorpusPaths, load_corpus
from .model import (
    DEFAULT_CAPITAL,
    DEFAULT_FENCE_MULTIPLIER,
    DEFAULT_MIN_YEARS,
    DEFAULT_PERCENTILES,
    DEFAULT_REPORTING_SCALE,
    DEFAULT_RESEARCH_TIME_SHARE,
    DEFAULT_SALARY,
    FALLBACK_UDA_THEN_NATIONAL,
    AnalysisConfig,
    CostModel,
)
from .pipeline import analytics_payload, run_pipeline
from .reporting import FORMATS, ReportBundle, render
from .scoring import write_researcher_scores_csv
from .synth import SynthParams, generate

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

_CONFIG_KEYS = {
    "inputs", "window", "hca_percentiles", "min_years", "census_date",
    "ts_fence_multiplier", "rescale_fallback", "roster_only_baseline",
    "salary", "capital", "research_time_share", "reporting_scale",
    "top_bottom_k", "export_hca_flags", "export_researcher_scores",
}
_INPUT_KEYS = ("taxonomy", "researchers", "publications", "authorships")


@dataclass(frozen=True)
class RunConfig:
    paths: CorpusPaths
    analysis: AnalysisConfig
    cost_model: CostModel
    top_bottom_k: int
    export_hca_flags: bool
    export_researcher_scores: bool
    raw: dict[str, Any]
    input_paths_as_written: dict[str, str]


def load_run_config(path: Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputIOError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a JSON object")
    unknown = sorted(set(raw) - _CONFIG_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {unknown}")

    inputs = raw.get("inputs")
    if not isinstance(inputs, dict) or sorted(inputs) != sorted(_INPUT_KEYS):
        raise ConfigurationError(f"config needs 'inputs' with exactly the keys {_INPUT_KEYS}")
    base = Path(path).parent
    resolved = {key: base / inputs[key] for key in _INPUT_KEYS}

    try:
        analysis = AnalysisConfig(
            window=tuple(raw.get("window", (2012, 2016))),
            hca_percentiles=tuple(raw.get("hca_percentiles", DEFAULT_PERCENTILES)),
            min_years=int(raw.get("min_years", DEFAULT_MIN_YEARS)),
            census_date=raw.get("census_date"),
            ts_fence_multiplier=float(raw.get("ts_fence_multiplier", DEFAULT_FENCE_MULTIPLIER)),
            rescale_fallback=raw.get("rescale_fallback", FALLBACK_UDA_THEN_NATIONAL),
            roster_only_baseline=bool(raw.get("roster_only_baseline", False)),
        )
        salary = {str(k): float(v) for k, v in raw.get("salary", DEFAULT_SALARY).items()}
        cost_model = CostModel(
            salary=salary,
            capital=float(raw.get("capital", DEFAULT_CAPITAL)),
            research_time_share=float(raw.get("research_time_share", DEFAULT_RESEARCH_TIME_SHARE)),
            reporting_scale=float(raw.get("reporting_scale", DEFAULT_REPORTING_SCALE)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad config value: {exc}") from exc

    return RunConfig(
        paths=CorpusPaths(**resolved),
        analysis=analysis,
        cost_model=cost_model,
        top_bottom_k=int(raw.get("top_bottom_k", 10)),
        export_hca_flags=bool(raw.get("export_hca_flags", True)),
        export_researcher_scores=bool(raw.get("export_researcher_scores", True)),
        raw=raw,
        input_paths_as_written={key: str(inputs[key]) for key in _INPUT_KEYS},
    )


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _config_hash(raw: dict[str, Any]) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def cmd_validate(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    try:
        corpus = load_corpus(config.paths, config.analysis)
    except CorpusValidationError as exc:
        print(f"{len(exc.issues)} errors")
        for issue in exc.issues:
            print(f"  {issue.format()}")
        return EXIT_VALIDATION
    print("0 errors")
    report = corpus.report
    for name in ("researchers", "publications", "authorships"):
        print(f"  {name}: kept {report.kept.get(name, 0)}")
    for warning in report.warnings:
        print(f"  warning: {warning}")
    return EXIT_OK


def _run(config: RunConfig, out_dir: Path, formats: list[str]) -> int:
    corpus = load_corpus(config.paths, config.analysis)
    result = run_pipeline(corpus, config.cost_model, config.top_bottom_k)

    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for fmt in formats:
        files.extend(render(result.bundle, fmt, out_dir))

    percentiles = list(corpus.config.sorted_percentiles)
    n = write_scoreboard_csv(result.boards, percentiles, out_dir / "scoreboard.csv")
    files.append({"path": "scoreboard.csv", "rows": n})
    if config.export_hca_flags:
        n = write_flags_csv(result.flag_sets, out_dir / "hca_flags.csv")
        files.append({"path": "hca_flags.csv", "rows": n})
    if config.export_researcher_scores:
        ts_by_sds = {b.sds: b.ts_ids for b in result.boards}
        n = write_researcher_scores_csv(result.scores, ts_by_sds,
                                        out_dir / "researcher_scores.csv")
        files.append({"path": "researcher_scores.csv", "rows": n})

    _write_json(out_dir / "analytics.json", analytics_payload(result))
    files.append({"path": "analytics.json", "rows": len(result.boards)})
    _write_json(out_dir / "bundle.json", result.bundle.to_dict())
    files.append({"path": "bundle.json", "rows": len(result.boards)})

    manifest = {
        "version": __version__,
        "config_hash": _config_hash(config.raw),
        "inputs": {
            name: {
                "path": config.input_paths_as_written[name],
                "sha256": _sha256_file(path),
            }
            for name, path in sorted(config.paths.as_dict().items())
        },
        "counts": result.counts,
        "parsed": dict(sorted(corpus.report.parsed.items())),
        "kept": dict(sorted(corpus.report.kept.items())),
        "dropped": dict(sorted(corpus.report.dropped.items())),
        "warnings": result.warnings,
        "files": sorted(files, key=lambda f: f["path"]),
    }
    _write_json(out_dir / "manifest.json", manifest)
    log.info("wrote %d files to %s", len(files) + 1, out_dir)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    formats = _parse_formats(args.format)
    return _run(config, Path(args.out), formats)


def cmd_synth(args: argparse.Namespace) -> int:
    overrides: dict[str, Any] = {}
    if args.params:
        try:
            overrides = json.loads(Path(args.params).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputIOError(f"cannot read params {args.params}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"bad params JSON: {exc}") from exc
    known = {f.name for f in dataclass_fields(SynthParams)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigurationError(f"unknown synth params: {unknown}")
    for name in ("n_udas", "n_fields_per_uda", "hca_fraction", "pubs_per_professor_mean"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.seed is not None:
        overrides["seed"] = args.seed
    for name in ("window", "professors_per_field", "categories_per_pub", "rank_mix"):
        if name in overrides:
            overrides[name] = tuple(overrides[name])
    try:
        params = SynthParams(**overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad synth params: {exc}") from exc
    paths = generate(params, Path(args.out))
    for name, path in sorted(paths.items()):
        print(f"wrote {name}: {path}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    try:
        payload = json.loads(Path(args.bundle).read_text(encoding="utf-8"))
        bundle = ReportBundle.from_dict(payload)
    except OSError as exc:
        raise InputIOError(f"cannot read bundle {args.bundle}: {exc}") from exc
    except (json.JSONDecodeError, TypeError) as exc:
        raise ConfigurationError(f"bad bundle file: {exc}") from exc
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for fmt in _parse_formats(args.format):
        for entry in render(bundle, fmt, out_dir):
            print(f"wrote {entry['path']} ({entry['rows']} rows)")
    return EXIT_OK


def _parse_formats(text: str) -> list[str]:
    formats = [f.strip() for f in text.split(",") if f.strip()]
    for fmt in formats:
        if fmt not in FORMATS:
            raise ConfigurationError(f"unknown format {fmt!r}; expected subset of {FORMATS}")
    if not formats:
        raise ConfigurationError("no output format selected")
    return formats


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldstrength",
        description="Field-level research strength scoreboards from roster, "
                    "publication, and citation tables.",
    )
    parser.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="validate the input corpus")
    p_validate.add_argument("--config", required=True, type=Path)
    p_validate.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run the full pipeline and write reports")
    p_run.add_argument("--config", required=True, type=Path)
    p_run.add_argument("--out", required=True, type=Path)
    p_run.add_argument("--format", default="csv,json,markdown",
                       help="comma-separated subset of csv,json,markdown")
    p_run.set_defaults(func=cmd_run)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus")
    p_synth.add_argument("--out", required=True, type=Path)
    p_synth.add_argument("--seed", type=int, default=None,
                         help="generator seed (default 42, or the params file's)")
    p_synth.add_argument("--params", type=Path, help="JSON file of generator parameters")
    p_synth.add_argument("--n-udas", type=int, dest="n_udas")
    p_synth.add_argument("--n-fields-per-uda", type=int, dest="n_fields_per_uda")
    p_synth.add_argument("--hca-fraction", type=float, dest="hca_fraction")
    p_synth.add_argument("--pubs-per-professor", type=float, dest="pubs_per_professor_mean")
    p_synth.set_defaults(func=cmd_synth)

    p_report = sub.add_parser("report", help="re-render reports from a cached bundle")
    p_report.add_argument("--bundle", required=True, type=Path)
    p_report.add_argument("--out", required=True, type=Path)
    p_report.add_argument("--format", default="csv,json,markdown")
    p_report.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CorpusValidationError as exc:
        print(f"validation failed:\n{exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputIOError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
