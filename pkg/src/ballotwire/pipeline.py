"""End-to-end orchestration: corpus -> features -> stationarity -> supervised
sets -> model selection -> recursive forecast -> report.

All stages are pure given (inputs, config), so a fixed corpus and seed give
byte-identical artifacts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import DataError
from .evaluate import ForecastReport, SelectionResult, evaluate_test, pick_model, r_squared
from .features import (
    FeatureFrame,
    aggregate_candidate_engagement,
    aggregate_hashtag_tweets,
    assemble_frame,
)
from .ingest import (
    Corpus,
    fill_poll_gaps,
    parse_candidate_csv,
    parse_polling_csv,
    parse_tweet_csv,
    validate_corpus,
)
from .models import ModelSpec, default_model_specs, standardize_apply, standardize_fit
from .sentiment import DEFAULT_LEXICON_PATH, SentimentScorer, load_lexicon
from .stationarity import apply_differencing, frame_stationarity_report
from .supervise import SplitSpec, SupervisedSet, make_sliding_window, split


@dataclass
class PipelineConfig:
    candidates: tuple[str, str] = ("CandidateA", "CandidateB")
    tweet_csvs: dict[str, str] = field(default_factory=dict)      # candidate -> path
    post_csvs: dict[str, str] = field(default_factory=dict)
    polling_csv: str | None = None
    lexicon: str = str(DEFAULT_LEXICON_PATH)
    date_range: tuple[str, str] | None = None                     # ISO dates
    split: tuple[int, int, int] | None = None                     # None = auto 80/20
    model_overrides: dict[str, dict] = field(default_factory=dict)
    alpha: float = 0.05
    fill_polls: bool = False
    fill_engagement: bool = False
    standardize: bool = False
    difference_all: bool = False
    strict: bool = False
    out_dir: str = "out"
    seed: int = 7
    actual_shares: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "candidates": list(self.candidates),
            "tweet_csvs": dict(self.tweet_csvs),
            "post_csvs": dict(self.post_csvs),
            "polling_csv": self.polling_csv,
            "lexicon": self.lexicon,
            "date_range": list(self.date_range) if self.date_range else None,
            "split": list(self.split) if self.split else None,
            "model_overrides": self.model_overrides,
            "alpha": self.alpha,
            "fill_polls": self.fill_polls,
            "fill_engagement": self.fill_engagement,
            "standardize": self.standardize,
            "difference_all": self.difference_all,
            "strict": self.strict,
            "out_dir": self.out_dir,
            "seed": self.seed,
            "actual_shares": dict(self.actual_shares),
        }


def config_hash(config: PipelineConfig) -> str:
    canonical = json.dumps(config.to_dict(), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def load_corpus(config: PipelineConfig) -> Corpus:
    """Parse the five CSVs into a validated corpus."""
    if config.polling_csv is None:
        raise DataError("no polling CSV configured")
    tweets = []
    posts = []
    for candidate in config.candidates:
        if candidate not in config.tweet_csvs or candidate not in config.post_csvs:
            raise DataError(f"no input CSVs configured for {candidate}")
        tweets.extend(parse_tweet_csv(config.tweet_csvs[candidate], candidate,
                                      strict=config.strict).records)
        posts.extend(parse_candidate_csv(config.post_csvs[candidate], candidate,
                                         strict=config.strict).records)
    polls = parse_polling_csv(config.polling_csv, config.candidates)

    if config.date_range:
        start = date.fromisoformat(config.date_range[0])
        end = date.fromisoformat(config.date_range[1])
    else:
        days = sorted({t.created_at.date() for t in tweets})
        if not days:
            raise DataError("no tweets parsed")
        start, end = days[0], days[-1]
    corpus = Corpus(tweets=tweets, posts=posts, polls=polls,
                    date_range=(start, end))

    report = validate_corpus(corpus, (start, end), config.candidates)
    if report.missing_poll_days or report.missing_lag_anchor:
        if not config.fill_polls:
            raise DataError("missing polling days: "
                            + ", ".join(report.findings))
        anchor = start - timedelta(days=1)
        corpus.polls = fill_poll_gaps(polls, anchor, end)
    return corpus


def build_frames(corpus: Corpus, config: PipelineConfig,
                 scorer: SentimentScorer | None = None) -> dict[str, FeatureFrame]:
    scorer = scorer or SentimentScorer(load_lexicon(config.lexicon))
    frames = {}
    for candidate in config.candidates:
        sums = aggregate_hashtag_tweets(
            [t for t in corpus.tweets if t.candidate == candidate], scorer)
        means = aggregate_candidate_engagement(
            [p for p in corpus.posts if p.candidate == candidate])
        frames[candidate] = assemble_frame(
            sums, means, corpus.polls, candidate, corpus.date_range,
            fill_engagement=config.fill_engagement)
    return frames


def auto_split(n: int) -> SplitSpec:
    """As close to 80/20 as possible, twice (train+val vs test, train vs val)."""
    n_test = max(1, round(0.2 * n))
    n_trainval = n - n_test
    n_val = max(1, round(0.2 * n_trainval))
    n_train = n_trainval - n_val
    if n_train < 1:
        raise DataError(f"dataset of {n} rows is too small to split")
    return SplitSpec(n_train=n_train, n_val=n_val, n_test=n_test)


@dataclass
class CandidateRun:
    frame: FeatureFrame
    differenced: FeatureFrame
    dataset: SupervisedSet
    train: SupervisedSet
    val: SupervisedSet
    test: SupervisedSet
    selection: SelectionResult


@dataclass
class PipelineResult:
    frames: dict[str, FeatureFrame]
    adf_reports: list
    runs: dict[str, CandidateRun]
    report: ForecastReport
    config_hash: str


class _StandardizedModel:
    """Wrap a fitted model with the z-scoring learned on its training rows."""

    def __init__(self, model, mean, scale):
        self._model = model
        self._mean = mean
        self._scale = scale

    def predict(self, X):
        return self._model.predict(standardize_apply(X, self._mean, self._scale))


def _spec_with_standardize(spec: ModelSpec) -> ModelSpec:
    def fit(X, y, **params):
        mean, scale = standardize_fit(X)
        model = spec.fit(standardize_apply(X, mean, scale), y, **params)
        return _StandardizedModel(model, mean, scale)

    return ModelSpec(spec.name, fit, spec.params)


def run_pipeline(corpus: Corpus, config: PipelineConfig,
                 frames: Mapping[str, FeatureFrame] | None = None) -> PipelineResult:
    frames = dict(frames) if frames is not None else build_frames(corpus, config)
    adf_reports = frame_stationarity_report(
        [frames[c] for c in config.candidates], alpha=config.alpha)

    poll_levels = {
        c: {p.date: p.shares[c] for p in corpus.polls}
        for c in config.candidates
    }

    specs = default_model_specs(config.model_overrides)
    if config.standardize:
        specs = [_spec_with_standardize(s) for s in specs]

    runs: dict[str, CandidateRun] = {}
    selections = {}
    trainval_sets = {}
    test_sets = {}
    for candidate in config.candidates:
        frame = frames[candidate]
        differenced = apply_differencing(
            frame, difference_prev_poll=config.difference_all)
        levels = poll_levels[candidate]
        if config.difference_all:
            targets = {
                d: levels[d] - levels[d - timedelta(days=1)]
                for d in (row.date for row in differenced.rows)
            }
        else:
            targets = levels
        dataset = make_sliding_window(differenced, targets)
        spec = (SplitSpec(*config.split) if config.split
                else auto_split(len(dataset)))
        train, val, test = split(dataset, spec)
        selection = pick_model(specs, train, val)
        runs[candidate] = CandidateRun(
            frame=frame, differenced=differenced, dataset=dataset,
            train=train, val=val, test=test, selection=selection)
        selections[candidate] = (selection.selected, selection)
        trainval_sets[candidate] = dataset.slice(0, spec.n_train + spec.n_val)
        test_sets[candidate] = test

    metadata = {
        "config_hash": config_hash(config),
        "column_order": list(next(iter(runs.values())).dataset.column_names),
        "differenced_target": config.difference_all,
        "seed": config.seed,
    }
    report = evaluate_test(
        selections, trainval_sets, test_sets,
        actual_vote_share=config.actual_shares or None,
        metadata=metadata)
    if config.difference_all:
        _relevel_report(report, runs, poll_levels)
    return PipelineResult(frames=frames, adf_reports=adf_reports, runs=runs,
                          report=report, config_hash=metadata["config_hash"])


def _relevel_report(report: ForecastReport, runs: Mapping[str, CandidateRun],
                    poll_levels) -> None:
    """Difference-everything mode forecasts share *changes*; integrate them
    back to levels from the last pre-test poll before reporting."""
    for candidate, outcome in report.outcomes.items():
        run = runs[candidate]
        anchor_day = run.test.dates[0] - timedelta(days=1)
        anchor = poll_levels[candidate][anchor_day]
        level_preds = list(anchor + np.cumsum(outcome.predictions))
        outcome.predictions = [float(p) for p in level_preds]
        outcome.polling_reference = [
            float(poll_levels[candidate][d])
            for d in run.test.dates
        ]
        outcome.election_day_prediction = outcome.predictions[-1]
        outcome.r2_vs_polling = r_squared(outcome.predictions,
                                          outcome.polling_reference)
    report.mean_r2_vs_polling = float(np.mean(
        [o.r2_vs_polling for o in report.outcomes.values()]))
    report.winner_predicted = max(
        sorted(report.outcomes),
        key=lambda n: report.outcomes[n].election_day_prediction)
