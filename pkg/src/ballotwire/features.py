"""Per-day, per-candidate feature table construction.

Each day gets five engagement features: three sums of compound sentiment
multiplied by likes / retweets / author followers over the hashtag tweets,
and two means of likes-per-follower / retweets-per-follower over the
candidate's own posts. The previous day's polling share rides along as the
lag column.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Mapping, Sequence

from .errors import (
    DataError,
    MissingFeatureDayError,
    MissingLagAnchorError,
)
from .ingest import CandidatePost, PollSnapshot, RawTweet, _days_between
from .sentiment import SentimentScorer

FEATURE_COLUMNS = (
    "Sum of Sentiment*Likes",
    "Sum of Sentiment*Retweets",
    "Sum of Sentiment*Followers",
    "Mean of {candidate} Likes/Followers",
    "Mean of {candidate} Retweets/Followers",
)
PREV_POLL_COLUMN = "Previous Polling Estimate"
DATE_COLUMN = "Date"


@dataclass(frozen=True)
class DailyFeatureRow:
    date: date
    sum_sent_likes: float
    sum_sent_retweets: float
    sum_sent_followers: float
    mean_likes_per_follower: float
    mean_retweets_per_follower: float

    def features(self) -> tuple[float, float, float, float, float]:
        return (self.sum_sent_likes, self.sum_sent_retweets,
                self.sum_sent_followers, self.mean_likes_per_follower,
                self.mean_retweets_per_follower)


@dataclass
class FeatureFrame:
    candidate: str
    rows: list[DailyFeatureRow]
    prev_poll: dict[date, float]

    def column_names(self) -> list[str]:
        return [c.format(candidate=self.candidate) for c in FEATURE_COLUMNS]

    def dates(self) -> list[date]:
        return [row.date for row in self.rows]


def aggregate_hashtag_tweets(
    tweets: Sequence[RawTweet], scorer: SentimentScorer
) -> dict[date, tuple[float, float, float]]:
    """Per-UTC-day sums of compound * likes, * retweets, * followers.

    Uses compensated summation: follower products reach 1e8 scale, and the
    aggregates must be invariant to tweet order to 1e-9.
    """
    buckets: dict[date, list[tuple[float, float, float]]] = {}
    for tweet in tweets:
        compound = scorer.score(tweet.text).compound
        day = tweet.created_at.date()
        buckets.setdefault(day, []).append((
            compound * tweet.like_count,
            compound * tweet.retweet_count,
            compound * tweet.author_follower_count,
        ))
    return {
        day: (
            math.fsum(t[0] for t in terms),
            math.fsum(t[1] for t in terms),
            math.fsum(t[2] for t in terms),
        )
        for day, terms in buckets.items()
    }


def aggregate_candidate_engagement(
    posts: Sequence[CandidatePost],
) -> dict[date, tuple[float, float]]:
    """Per-day arithmetic means of likes/followers and retweets/followers."""
    buckets: dict[date, list[tuple[float, float]]] = {}
    for post in posts:
        if post.author_follower_count <= 0:
            raise DataError(f"post {post.tweet_id} has no followers")
        day = post.created_at.date()
        buckets.setdefault(day, []).append((
            post.like_count / post.author_follower_count,
            post.retweet_count / post.author_follower_count,
        ))
    return {
        day: (
            math.fsum(r[0] for r in ratios) / len(ratios),
            math.fsum(r[1] for r in ratios) / len(ratios),
        )
        for day, ratios in buckets.items()
    }


def assemble_frame(
    sums: Mapping[date, tuple[float, float, float]],
    means: Mapping[date, tuple[float, float]],
    polls: Sequence[PollSnapshot],
    candidate: str,
    date_range: tuple[date, date],
    fill_engagement: bool = False,
) -> FeatureFrame:
    """Join daily sums, means and the lagged poll into a date-ascending frame."""
    start, end = date_range
    poll_by_date = {p.date: p.shares[candidate] for p in polls}

    rows = []
    prev_poll: dict[date, float] = {}
    last_means: tuple[float, float] | None = None
    for day in _days_between(start, end):
        if day not in sums:
            raise MissingFeatureDayError(day)
        day_means = means.get(day)
        if day_means is None:
            if fill_engagement and last_means is not None:
                day_means = last_means
            else:
                raise MissingFeatureDayError(day)
        last_means = day_means
        lag_day = date.fromordinal(day.toordinal() - 1)
        if lag_day not in poll_by_date:
            raise MissingLagAnchorError(
                f"no poll for {lag_day.isoformat()} (lag of {day.isoformat()})")
        s = sums[day]
        rows.append(DailyFeatureRow(
            date=day,
            sum_sent_likes=s[0],
            sum_sent_retweets=s[1],
            sum_sent_followers=s[2],
            mean_likes_per_follower=day_means[0],
            mean_retweets_per_follower=day_means[1],
        ))
        prev_poll[day] = poll_by_date[lag_day]
    return FeatureFrame(candidate=candidate, rows=rows, prev_poll=prev_poll)


def frame_to_csv(frame: FeatureFrame, path: str | Path) -> None:
    """Serialize with the exact published column names."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([DATE_COLUMN, *frame.column_names(), PREV_POLL_COLUMN])
        for row in frame.rows:
            writer.writerow([
                row.date.isoformat(),
                *(repr(v) for v in row.features()),
                repr(frame.prev_poll[row.date]),
            ])


def frame_from_csv(path: str | Path, candidate: str) -> FeatureFrame:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path} is empty")
        expected = [DATE_COLUMN,
                    *(c.format(candidate=candidate) for c in FEATURE_COLUMNS),
                    PREV_POLL_COLUMN]
        if header != expected:
            raise DataError(
                f"{path}: header {header!r} does not match expected {expected!r}")
        rows = []
        prev_poll: dict[date, float] = {}
        for record in reader:
            if not any(cell.strip() for cell in record):
                continue
            day = date.fromisoformat(record[0])
            values = [float(v) for v in record[1:7]]
            rows.append(DailyFeatureRow(day, *values[:5]))
            prev_poll[day] = values[5]
    rows.sort(key=lambda r: r.date)
    return FeatureFrame(candidate=candidate, rows=rows, prev_poll=prev_poll)
