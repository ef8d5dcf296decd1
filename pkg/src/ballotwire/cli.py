"""Command-line orchestration: file-based config, subcommands for each
pipeline stage, deterministic artifacts in the output directory.

Exit codes: 0 success, 1 usage/config error, 2 data validation error,
3 numerical failure. Each failure writes a one-line machine-parsable tag to
stderr (``ballotwire: error: <category>: <message>``).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from .errors import DataError, NumericalError
from .ingest import export_tweet_ids, validate_corpus
from .features import frame_to_csv
from .models import LinearModel
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    config_hash,
    load_corpus,
    run_pipeline,
)
from .svgplot import render_chart
from .svr import SvrModel
from .synth import SynthSpec, gen_corpus, write_corpus_csvs

log = logging.getLogger("ballotwire")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

SUBCOMMANDS = ("ingest", "featurize", "adf", "train", "forecast", "evaluate",
               "plot", "synth", "all")


class ConfigError(Exception):
    pass


def _parse_actual_share(raw: str) -> tuple[str, float]:
    if "=" not in raw:
        raise ConfigError(f"--actual-share wants NAME=PCT, got {raw!r}")
    name, _, pct = raw.partition("=")
    try:
        return name.strip(), float(pct)
    except ValueError:
        raise ConfigError(f"--actual-share percentage {pct!r} is not a number")


def _read_config_file(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {path} does not exist")
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")


_KNOWN_KEYS = {f.name for f in dataclasses.fields(PipelineConfig)}


def build_config(args: argparse.Namespace) -> PipelineConfig:
    """File values first, then command-line flags on top (flags win)."""
    values: dict = {}
    if args.config:
        raw = _read_config_file(args.config)
        unknown = set(raw) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(raw)
    if "candidates" in values:
        values["candidates"] = tuple(values["candidates"])
    if values.get("date_range"):
        values["date_range"] = tuple(values["date_range"])
    if values.get("split"):
        values["split"] = tuple(int(v) for v in values["split"])

    if args.out_dir is not None:
        values["out_dir"] = args.out_dir
    if args.seed is not None:
        values["seed"] = args.seed
    if args.alpha is not None:
        values["alpha"] = args.alpha
    for flag in ("fill_polls", "fill_engagement", "standardize",
                 "difference_all", "strict"):
        if getattr(args, flag):
            values[flag] = True
    if args.actual_share:
        shares = dict(values.get("actual_shares", {}))
        for raw in args.actual_share:
            name, pct = _parse_actual_share(raw)
            shares[name] = pct
        values["actual_shares"] = shares

    try:
        config = PipelineConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc))
    if not 0.0 < config.alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {config.alpha}")
    return config


def _require_inputs(config: PipelineConfig) -> None:
    if config.polling_csv is None or not config.tweet_csvs:
        raise ConfigError("input CSV paths are not configured "
                          "(tweet_csvs / post_csvs / polling_csv)")


def _out_dir(config: PipelineConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")


def _manifest(out: Path, config: PipelineConfig, files: list[str],
              extra: dict | None = None) -> None:
    """Every artifact set carries the config hash and column order used."""
    from .features import FEATURE_COLUMNS, PREV_POLL_COLUMN

    payload = {
        "config_hash": config_hash(config),
        "column_order": [*FEATURE_COLUMNS, PREV_POLL_COLUMN],
        "files": sorted(files),
    }
    payload.update(extra or {})
    _write_json(out / "manifest.json", payload)


def _synth_config(config: PipelineConfig, out: Path,
                  random_walk: bool = False) -> PipelineConfig:
    """Generate a seeded corpus under out/data and point the config at it."""
    spec = SynthSpec(seed=config.seed, random_walk=random_walk)
    corpus = gen_corpus(spec, config.candidates)
    paths = write_corpus_csvs(corpus, out / "data", config.candidates)
    return dataclasses.replace(
        config,
        tweet_csvs={c: str(paths[f"tweets_{c}"]) for c in config.candidates},
        post_csvs={c: str(paths[f"posts_{c}"]) for c in config.candidates},
        polling_csv=str(paths["polls"]),
    )


def _serialize_model(model) -> dict:
    if isinstance(model, LinearModel):
        return {"kind": "linear",
                "weights": [float(w) for w in model.weights],
                "intercept": float(model.intercept)}
    if isinstance(model, SvrModel):
        return {"kind": "svr", "bias": float(model.bias),
                "epsilon": float(model.epsilon), "C": float(model.C),
                "kernel": model.kernel.kind,
                "dual_coef": [float(b) for b in model.dual_coef]}
    return {"kind": type(model).__name__}


def _cmd_synth(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    resolved = _synth_config(config, out, random_walk=args.random_walk)
    files = [resolved.polling_csv,
             *resolved.tweet_csvs.values(), *resolved.post_csvs.values()]
    _manifest(out, config, [str(Path(f).name) for f in files],
              {"seed": config.seed, "random_walk": args.random_walk})
    log.info("wrote synthetic corpus for seed %d to %s", config.seed, out)
    return EXIT_OK


def _cmd_ingest(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    corpus = load_corpus(config)
    report = validate_corpus(corpus, corpus.date_range, config.candidates)
    n_ids = export_tweet_ids(corpus, out / "tweet_ids.txt")
    _write_json(out / "validation.json", {
        "config_hash": config_hash(config),
        "findings": report.findings,
        "ok": report.ok,
        "n_tweets": len(corpus.tweets),
        "n_posts": len(corpus.posts),
        "n_polls": len(corpus.polls),
        "n_ids_exported": n_ids,
    })
    return EXIT_OK


def _run(config: PipelineConfig) -> PipelineResult:
    corpus = load_corpus(config)
    return run_pipeline(corpus, config)


def _cmd_featurize(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    corpus = load_corpus(config)
    from .pipeline import build_frames

    frames = build_frames(corpus, config)
    files = []
    for candidate, frame in frames.items():
        name = f"frame_{candidate}.csv"
        frame_to_csv(frame, out / name)
        files.append(name)
    _manifest(out, config, files)
    return EXIT_OK


def _cmd_adf(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    result = _run(config)
    rows = []
    for rep in result.adf_reports:
        row = {
            "candidate": rep.candidate,
            "column": rep.column,
            "before": {"statistic": rep.before.statistic,
                       "p_value": rep.before.p_value,
                       "lag": rep.before.lag_used,
                       "stationary": rep.before.reject_unit_root},
        }
        if rep.after is not None:
            row["after"] = {"statistic": rep.after.statistic,
                            "p_value": rep.after.p_value,
                            "lag": rep.after.lag_used,
                            "stationary": rep.after.reject_unit_root}
        rows.append(row)
    _write_json(out / "adf_report.json", {
        "config_hash": result.config_hash,
        "alpha": config.alpha,
        "n_stationary_before": sum(r.before.reject_unit_root
                                   for r in result.adf_reports),
        "rows": rows,
    })
    return EXIT_OK


def _cmd_train(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    result = _run(config)
    payload = {"config_hash": result.config_hash, "candidates": {}}
    for candidate, run in result.runs.items():
        sel = run.selection
        trainval = run.dataset.slice(0, len(run.train) + len(run.val))
        model = sel.selected.fit_model(trainval.X, trainval.y)
        payload["candidates"][candidate] = {
            "selected": sel.selected.name,
            "validation_mae": sel.validation_mae,
            "table": [[n, m] for n, m in sel.table],
            "failures": sel.failures,
            "model": _serialize_model(model),
        }
    _write_json(out / "selection.json", payload)
    return EXIT_OK


def _write_predictions(result: PipelineResult, out: Path) -> None:
    payload = {"config_hash": result.config_hash, "candidates": {}}
    for name, o in sorted(result.report.outcomes.items()):
        payload["candidates"][name] = {
            "test_dates": o.test_dates,
            "predictions": o.predictions,
            "model": o.model_name,
        }
    _write_json(out / "predictions.json", payload)


def _cmd_forecast(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    _write_predictions(_run(config), out)
    return EXIT_OK


def _cmd_evaluate(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    result = _run(config)
    (out / "report.json").write_text(result.report.to_json(), encoding="utf-8")
    (out / "report.txt").write_text(result.report.to_text(), encoding="utf-8")
    sys.stdout.write(result.report.to_text())
    return EXIT_OK


def _write_plots(result: PipelineResult, out: Path) -> list[str]:
    from datetime import date

    files = []
    for name, o in sorted(result.report.outcomes.items()):
        days = [date.fromisoformat(d) for d in o.test_dates]
        svg = render_chart(days, o.predictions, o.polling_reference,
                           f"{name}: prediction vs aggregate polling",
                           config_hash=result.config_hash)
        path = out / f"plot_{name}.svg"
        path.write_text(svg, encoding="utf-8")
        files.append(path.name)
    return files


def _cmd_plot(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    result = _run(config)
    _write_plots(result, out)
    return EXIT_OK


def _cmd_all(config: PipelineConfig, args) -> int:
    out = _out_dir(config)
    if not config.tweet_csvs:
        config = _synth_config(config, out)
    _cmd_ingest(config, args)
    _cmd_featurize(config, args)
    result = _run(config)
    _cmd_adf(config, args)
    _cmd_train(config, args)
    (out / "report.json").write_text(result.report.to_json(), encoding="utf-8")
    (out / "report.txt").write_text(result.report.to_text(), encoding="utf-8")
    _write_predictions(result, out)
    _write_plots(result, out)
    sys.stdout.write(result.report.to_text())
    return EXIT_OK


_HANDLERS = {
    "ingest": _cmd_ingest,
    "featurize": _cmd_featurize,
    "adf": _cmd_adf,
    "train": _cmd_train,
    "forecast": _cmd_forecast,
    "evaluate": _cmd_evaluate,
    "plot": _cmd_plot,
    "synth": _cmd_synth,
    "all": _cmd_all,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballotwire",
        description="Election vote-share forecasting from social media "
                    "sentiment and engagement.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="TOML or JSON config file; flags override it")
        p.add_argument("--out-dir", default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--fill-polls", action="store_true")
        p.add_argument("--fill-engagement", action="store_true")
        p.add_argument("--standardize", action="store_true")
        p.add_argument("--difference-all", action="store_true")
        p.add_argument("--strict", action="store_true")
        p.add_argument("--actual-share", action="append", default=[],
                       metavar="NAME=PCT")
        if name == "synth":
            p.add_argument("--random-walk", action="store_true",
                           help="integrated engagement features")
    return parser


def _fail(category: str, message: str, code: int) -> int:
    first_line = str(message).splitlines()[0] if str(message) else category
    sys.stderr.write(f"ballotwire: error: {category}: {first_line}\n")
    return code


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("BALLOTWIRE_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        config = build_config(args)
        if args.subcommand not in ("synth", "all"):
            _require_inputs(config)
        return _HANDLERS[args.subcommand](config, args)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except FileNotFoundError as exc:
        return _fail("data", str(exc), EXIT_DATA)
    except DataError as exc:
        return _fail("data", str(exc), EXIT_DATA)
    except NumericalError as exc:
        return _fail("numerical", str(exc), EXIT_NUMERICAL)


if __name__ == "__main__":
    sys.exit(main())
