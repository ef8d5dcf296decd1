"""Seeded synthetic corpora and independent numerical oracles.

The original tweet data cannot be redistributed, so tests and demos run on
generated corpora that exercise the same CSV schemas end to end. Streams come
from the counter-based Philox generator keyed by the spec seed, so repeated
invocation is bit-identical and reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path

import numpy as np

from .errors import SingularSystemError, TooLargeError
from .ingest import (
    CandidatePost,
    Corpus,
    PollSnapshot,
    RawTweet,
    polls_to_csv,
    tweets_to_csv,
)
from .models import LinearModel

DEFAULT_START = date(2020, 10, 16)

# Template fragments built from tokens of the shipped lexicon, so oracle
# compound scores are computable with the package scorer alone.
POSITIVE_TEXTS = (
    "what a great rally tonight",
    "a strong honest leader, love it",
    "big win coming, feeling happy",
    "brilliant debate, truly impressive",
    "so proud, a wonderful campaign",
)
NEGATIVE_TEXTS = (
    "what a terrible rally tonight",
    "a weak dishonest leader, hate it",
    "big loss coming, feeling sad",
    "awful debate, truly pathetic",
    "so ashamed, a hopeless campaign",
)
NEUTRAL_TEXTS = (
    "watching the rally tonight",
    "the debate is on again",
    "polls update every morning",
)


@dataclass(frozen=True)
class SynthSpec:
    seed: int = 7
    n_days: int = 20
    tweets_per_day: int = 30
    ar_phi: float = 0.85
    noise_sigma: float = 0.3
    drift: float = 7.8            # stationary mean = drift / (1 - ar_phi)
    sentiment_link: float = 0.5
    random_walk: bool = False     # integrate engagement so features are walks
    start: date = DEFAULT_START

    def __post_init__(self):
        if not abs(self.ar_phi) < 1:
            raise ValueError("|ar_phi| must be < 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.tweets_per_day < 1:
            raise ValueError("tweets_per_day must be >= 1")


def _rng(spec: SynthSpec, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=spec.seed * 1000 + stream))


def gen_polling(spec: SynthSpec, stream: int = 0) -> np.ndarray:
    """AR(1) polling series of length n_days + 1 (one anchor day before the
    range, for the lag feature)."""
    rng = _rng(spec, stream)
    mean = spec.drift / (1.0 - spec.ar_phi)
    values = np.empty(spec.n_days + 1)
    values[0] = mean
    for t in range(1, spec.n_days + 1):
        values[t] = (spec.drift + spec.ar_phi * values[t - 1]
                     + rng.normal(0.0, spec.noise_sigma))
    return values


def gen_corpus(spec: SynthSpec, candidates: tuple[str, str] = ("CandidateA",
                                                               "CandidateB"),
               second_drift: float | None = None) -> Corpus:
    """Full two-candidate corpus: hashtag tweets, candidate posts, polls.

    The second candidate's polling uses ``second_drift`` (default: drift
    scaled to a mean 5 points lower) so the constructed winner ordering is
    known.
    """
    if second_drift is None:
        second_drift = spec.drift - 5.0 * (1.0 - spec.ar_phi)
    specs = {
        candidates[0]: spec,
        candidates[1]: replace(spec, drift=second_drift),
    }
    polling = {name: gen_polling(s, stream=i)
               for i, (name, s) in enumerate(specs.items())}

    anchor_day = spec.start - timedelta(days=1)
    polls = []
    for t in range(spec.n_days + 1):
        day = anchor_day + timedelta(days=t)
        polls.append(PollSnapshot(
            date=day,
            shares={name: float(polling[name][t]) for name in candidates},
        ))

    tweets: list[RawTweet] = []
    posts: list[CandidatePost] = []
    next_id = 1_000_000
    for ci, name in enumerate(candidates):
        rng = _rng(spec, 10 + ci)
        series = polling[name]
        followers_of_candidate = 1_000_000 * (ci + 1)
        walk_factor = 1.0
        for t in range(spec.n_days):
            day = spec.start + timedelta(days=t)
            delta = float(series[t + 1] - series[t])
            if spec.random_walk:
                # geometric random walk in engagement volume dominates the
                # per-day sampling noise, so every feature column integrates
                p_positive = 0.85
                walk_factor *= float(np.exp(rng.normal(0.18, 0.35)))
            else:
                p_positive = min(0.9, max(0.1, 0.5 + spec.sentiment_link * delta))
            for k in range(spec.tweets_per_day):
                u = rng.random()
                if u < 0.2:
                    text = NEUTRAL_TEXTS[int(rng.integers(len(NEUTRAL_TEXTS)))]
                elif rng.random() < p_positive:
                    text = POSITIVE_TEXTS[int(rng.integers(len(POSITIVE_TEXTS)))]
                else:
                    text = NEGATIVE_TEXTS[int(rng.integers(len(NEGATIVE_TEXTS)))]
                created = datetime.combine(
                    day, time(hour=int(rng.integers(24)),
                              minute=int(rng.integers(60))),
                    tzinfo=timezone.utc)
                tweets.append(RawTweet(
                    tweet_id=next_id,
                    created_at=created,
                    text=text,
                    like_count=int(walk_factor * rng.lognormal(2.0, 1.2)) + 1,
                    retweet_count=int(walk_factor * rng.lognormal(1.0, 1.2)) + 1,
                    author_follower_count=int(
                        walk_factor * rng.lognormal(6.0, 1.5)) + 1,
                    candidate=name,
                ))
                next_id += 1
            for k in range(2):   # candidates posted daily in the studied window
                created = datetime.combine(day, time(hour=9 + 8 * k),
                                           tzinfo=timezone.utc)
                posts.append(CandidatePost(
                    tweet_id=next_id,
                    created_at=created,
                    text=POSITIVE_TEXTS[k % len(POSITIVE_TEXTS)],
                    like_count=int(walk_factor * rng.lognormal(9.0, 0.6)) + 1,
                    retweet_count=int(walk_factor * rng.lognormal(8.0, 0.6)) + 1,
                    author_follower_count=followers_of_candidate,
                    candidate=name,
                ))
                next_id += 1

    tweets.sort(key=lambda t: (t.created_at, t.tweet_id))
    posts.sort(key=lambda p: (p.created_at, p.tweet_id))
    end_day = spec.start + timedelta(days=spec.n_days - 1)
    return Corpus(tweets=tweets, posts=posts, polls=polls,
                  date_range=(spec.start, end_day))


def write_corpus_csvs(corpus: Corpus, out_dir: str | Path,
                      candidates: tuple[str, str]) -> dict[str, Path]:
    """Emit the corpus in exactly the CSV schemas the ingest module consumes."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name in candidates:
        tweet_path = out_dir / f"tweets_{name}.csv"
        tweets_to_csv([t for t in corpus.tweets if t.candidate == name],
                      tweet_path)
        paths[f"tweets_{name}"] = tweet_path
        post_path = out_dir / f"posts_{name}.csv"
        tweets_to_csv([p for p in corpus.posts if p.candidate == name],
                      post_path)
        paths[f"posts_{name}"] = post_path
    poll_path = out_dir / "polls.csv"
    polls_to_csv(corpus.polls, list(candidates), poll_path)
    paths["polls"] = poll_path
    return paths


# --- oracles (test support) -------------------------------------------------

def ols_oracle(X, y) -> LinearModel:
    """Exact least squares with intercept via a dense solve; test cross-check
    for the iterative fitters."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([np.ones(X.shape[0]), X])
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise SingularSystemError("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return LinearModel(weights=coef[1:], intercept=float(coef[0]))


def qp_oracle(X, y, C: float, epsilon: float, kernel) -> float:
    """Optimal dual objective of the SVR problem, solved by a generic QP
    routine over the (alpha, alpha*) variables. Small problems only."""
    from cvxopt import matrix, solvers

    from .svr import kernel_matrix, resolve_gamma

    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if n > 6:
        raise TooLargeError("qp_oracle is limited to 6 training rows")
    gamma = resolve_gamma(X, kernel)
    K = kernel_matrix(X, X, kernel, gamma)
    # minimize 1/2 z'Pz + q'z over z = (alpha, alpha*)
    P = np.block([[K, -K], [-K, K]]) + 1e-12 * np.eye(2 * n)
    q = np.concatenate([epsilon - y, epsilon + y])
    G = np.vstack([np.eye(2 * n), -np.eye(2 * n)])
    h = np.concatenate([np.full(2 * n, C), np.zeros(2 * n)])
    A = np.concatenate([np.ones(n), -np.ones(n)])[None, :]
    options = {"show_progress": False, "abstol": 1e-12, "reltol": 1e-12,
               "feastol": 1e-12}
    sol = solvers.qp(matrix(P), matrix(q), matrix(G), matrix(h),
                     matrix(A), matrix(np.zeros(1)), options=options)
    # returned value is the minimized F; negate for the dual objective
    return -float(sol["primal objective"])
