"""Election vote-share forecasting from social-media sentiment and engagement.

The pipeline: lexicon sentiment scoring of hashtag tweets, daily
sentiment-times-engagement features per candidate, unit-root testing with
single differencing, lag-1 sliding-window supervision, selection among five
regularized regressors by validation MAE, and recursive multi-step
forecasting evaluated against aggregate polling.
"""

from .errors import BallotwireError, DataError, NumericalError
from .evaluate import (
    ForecastReport,
    SelectionResult,
    evaluate_test,
    mae,
    pick_model,
    r_squared,
    verify_report_totals,
)
from .features import (
    FeatureFrame,
    aggregate_candidate_engagement,
    aggregate_hashtag_tweets,
    assemble_frame,
    frame_from_csv,
    frame_to_csv,
)
from .ingest import (
    Corpus,
    export_tweet_ids,
    parse_candidate_csv,
    parse_polling_csv,
    parse_tweet_csv,
    validate_corpus,
)
from .models import (
    LinearModel,
    ModelSpec,
    default_model_specs,
    fit_elastic_net,
    fit_lasso,
    fit_ridge,
)
from .pipeline import PipelineConfig, config_hash, load_corpus, run_pipeline
from .sentiment import Lexicon, SentimentScore, SentimentScorer, load_lexicon, score_text
from .stationarity import AdfResult, adf_test, difference, frame_stationarity_report
from .supervise import SplitSpec, SupervisedSet, make_sliding_window, recursive_forecast, split
from .svr import KernelSpec, SvrModel, fit_svr
from .synth import SynthSpec, gen_corpus, write_corpus_csvs

__version__ = "0.1.0"

__all__ = [
    "AdfResult",
    "BallotwireError",
    "Corpus",
    "DataError",
    "FeatureFrame",
    "ForecastReport",
    "KernelSpec",
    "Lexicon",
    "LinearModel",
    "ModelSpec",
    "NumericalError",
    "PipelineConfig",
    "SelectionResult",
    "SentimentScore",
    "SentimentScorer",
    "SplitSpec",
    "SupervisedSet",
    "SvrModel",
    "SynthSpec",
    "adf_test",
    "aggregate_candidate_engagement",
    "aggregate_hashtag_tweets",
    "assemble_frame",
    "config_hash",
    "default_model_specs",
    "difference",
    "evaluate_test",
    "export_tweet_ids",
    "fit_elastic_net",
    "fit_lasso",
    "fit_ridge",
    "fit_svr",
    "frame_from_csv",
    "frame_stationarity_report",
    "frame_to_csv",
    "gen_corpus",
    "load_corpus",
    "load_lexicon",
    "mae",
    "make_sliding_window",
    "parse_candidate_csv",
    "parse_polling_csv",
    "parse_tweet_csv",
    "pick_model",
    "r_squared",
    "recursive_forecast",
    "run_pipeline",
    "score_text",
    "split",
    "validate_corpus",
    "verify_report_totals",
    "write_corpus_csvs",
]
