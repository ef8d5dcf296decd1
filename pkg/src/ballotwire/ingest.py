"""Parsing of the three input CSVs into validated domain records.

Inputs are RFC-4180 CSVs with a header row: two hashtag-tweet files (one per
candidate), two candidate-timeline files, and one aggregate-polling file.
Malformed data rows are dropped and counted unless strict mode is on; only
tweet IDs may be re-exported for redistribution.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DataError,
    DuplicateDateError,
    EmptyCorpusError,
    EmptyFileError,
    EncodingError,
    MissingCandidateColumnError,
    MissingColumnError,
    ShareOutOfRangeError,
    ZeroFollowersError,
)

# Default column names follow the published hashtag-tweet dataset schema.
DEFAULT_TWEET_COLUMNS = {
    "created_at": "created_at",
    "text": "tweet",
    "like_count": "likes",
    "retweet_count": "retweet_count",
    "follower_count": "user_followers_count",
    "tweet_id": "tweet_id",
}


@dataclass(frozen=True)
class RawTweet:
    tweet_id: int
    created_at: datetime
    text: str
    like_count: int
    retweet_count: int
    author_follower_count: int
    candidate: str


@dataclass(frozen=True)
class CandidatePost:
    tweet_id: int
    created_at: datetime
    text: str
    like_count: int
    retweet_count: int
    author_follower_count: int
    candidate: str


@dataclass(frozen=True)
class PollSnapshot:
    date: date
    shares: dict[str, float]


@dataclass
class Corpus:
    tweets: list[RawTweet]
    posts: list[CandidatePost]
    polls: list[PollSnapshot]
    date_range: tuple[date, date]


class TweetParseResult(NamedTuple):
    records: list
    dropped: int


@dataclass
class ValidationReport:
    missing_tweet_days: list[tuple[str, date]] = field(default_factory=list)
    missing_post_days: list[tuple[str, date]] = field(default_factory=list)
    missing_poll_days: list[date] = field(default_factory=list)
    missing_lag_anchor: bool = False

    @property
    def findings(self) -> list[str]:
        out = [f"MissingTweetDay({cand}, {d.isoformat()})"
               for cand, d in self.missing_tweet_days]
        out += [f"MissingPostDay({cand}, {d.isoformat()})"
                for cand, d in self.missing_post_days]
        out += [f"MissingPollDay({d.isoformat()})" for d in self.missing_poll_days]
        if self.missing_lag_anchor:
            out.append("MissingLagAnchor")
        return out

    @property
    def ok(self) -> bool:
        return not self.findings


def parse_timestamp(raw: str) -> datetime:
    """Parse a timestamp string, normalized to UTC (day boundary = UTC midnight)."""
    raw = raw.strip()
    if not raw:
        raise ValueError("empty timestamp")
    text = raw.replace("Z", "+00:00") if raw.endswith("Z") else raw
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        ts = datetime.strptime(raw, "%m/%d/%Y %H:%M")
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _open_rows(path: str | Path):
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except UnicodeDecodeError as exc:
        # count newlines up to the failure point to name the offending line
        with open(path, "rb") as fh:
            prefix = fh.read(exc.start)
        raise EncodingError(str(path), prefix.count(b"\n") + 1) from None
    if not rows:
        raise EmptyFileError(f"{path} is empty")
    return rows


def _column_indices(header: Sequence[str], columns: dict[str, str],
                    path: str | Path) -> dict[str, int]:
    indices = {}
    for role, name in columns.items():
        if name not in header:
            raise MissingColumnError(name, str(path))
        indices[role] = header.index(name)
    return indices


def _parse_tweet_row(row, idx, candidate, cls):
    tweet_id = int(float(row[idx["tweet_id"]]))
    created_at = parse_timestamp(row[idx["created_at"]])
    text = row[idx["text"]]
    if not text.strip():
        raise ValueError("empty text")
    counts = []
    for role in ("like_count", "retweet_count", "follower_count"):
        value = int(float(row[idx[role]]))
        if value < 0:
            raise ValueError(f"negative {role}")
        counts.append(value)
    return cls(
        tweet_id=tweet_id,
        created_at=created_at,
        text=text,
        like_count=counts[0],
        retweet_count=counts[1],
        author_follower_count=counts[2],
        candidate=candidate,
    )


def parse_tweet_csv(path: str | Path, candidate: str,
                    columns: dict[str, str] | None = None,
                    strict: bool = False) -> TweetParseResult:
    """Parse a hashtag-tweet CSV; malformed rows are dropped and counted."""
    columns = {**DEFAULT_TWEET_COLUMNS, **(columns or {})}
    rows = _open_rows(path)
    idx = _column_indices(rows[0], columns, path)
    records: list[RawTweet] = []
    dropped = 0
    for row_number, row in enumerate(rows[1:], start=1):
        if not any(cell.strip() for cell in row):
            continue
        try:
            records.append(_parse_tweet_row(row, idx, candidate, RawTweet))
        except (ValueError, IndexError) as exc:
            if strict:
                raise DataError(
                    f"{path}: bad data row {row_number}: {exc}") from exc
            dropped += 1
    return TweetParseResult(records, dropped)


def parse_candidate_csv(path: str | Path, candidate: str,
                        columns: dict[str, str] | None = None,
                        strict: bool = False) -> TweetParseResult:
    """Parse a candidate-timeline CSV; a zero follower count is always fatal
    because the engagement ratios divide by it."""
    columns = {**DEFAULT_TWEET_COLUMNS, **(columns or {})}
    rows = _open_rows(path)
    idx = _column_indices(rows[0], columns, path)
    records: list[CandidatePost] = []
    dropped = 0
    for row_number, row in enumerate(rows[1:], start=1):
        if not any(cell.strip() for cell in row):
            continue
        try:
            post = _parse_tweet_row(row, idx, candidate, CandidatePost)
        except (ValueError, IndexError) as exc:
            if strict:
                raise DataError(
                    f"{path}: bad data row {row_number}: {exc}") from exc
            dropped += 1
            continue
        if post.author_follower_count == 0:
            raise ZeroFollowersError(row_number)
        records.append(post)
    return TweetParseResult(records, dropped)


def parse_polling_csv(path: str | Path, candidates: Sequence[str],
                      date_column: str = "date") -> list[PollSnapshot]:
    """Parse the aggregate-polling CSV into date-sorted snapshots."""
    rows = _open_rows(path)
    header = rows[0]
    if date_column not in header:
        raise MissingColumnError(date_column, str(path))
    for candidate in candidates:
        if candidate not in header:
            raise MissingCandidateColumnError(candidate, str(path))
    date_idx = header.index(date_column)
    cand_idx = {c: header.index(c) for c in candidates}

    snapshots = []
    seen: set[date] = set()
    for row in rows[1:]:
        if not any(cell.strip() for cell in row):
            continue
        day = date.fromisoformat(row[date_idx].strip())
        if day in seen:
            raise DuplicateDateError(f"duplicate polling date {day.isoformat()}")
        seen.add(day)
        shares = {}
        for candidate, ci in cand_idx.items():
            share = float(row[ci])
            if not 0.0 <= share <= 100.0:
                raise ShareOutOfRangeError(
                    f"{candidate} share {share} on {day.isoformat()} "
                    "outside [0, 100]")
            shares[candidate] = share
        snapshots.append(PollSnapshot(date=day, shares=shares))
    snapshots.sort(key=lambda s: s.date)
    return snapshots


def export_tweet_ids(corpus: Corpus, path: str | Path) -> int:
    """Write newline-delimited tweet IDs (tweets first, then posts)."""
    if not corpus.tweets and not corpus.posts:
        raise EmptyCorpusError("corpus has no tweets or posts to export")
    ids = [record.tweet_id for record in corpus.tweets]
    ids += [record.tweet_id for record in corpus.posts]
    with open(path, "w", encoding="utf-8") as fh:
        for tweet_id in ids:
            fh.write(f"{tweet_id}\n")
    return len(ids)


def _days_between(start: date, end: date) -> list[date]:
    out = []
    day = start
    while day <= end:
        out.append(day)
        day = date.fromordinal(day.toordinal() + 1)
    return out


def validate_corpus(corpus: Corpus,
                    required_range: tuple[date, date] | None = None,
                    candidates: Iterable[str] | None = None) -> ValidationReport:
    """Report missing tweet/post/poll days and lag-anchor coverage."""
    start, end = required_range or corpus.date_range
    if candidates is None:
        candidates = sorted({t.candidate for t in corpus.tweets}
                            | {p.candidate for p in corpus.posts})
    report = ValidationReport()
    days = _days_between(start, end)

    tweet_days = {c: {t.created_at.date() for t in corpus.tweets
                      if t.candidate == c} for c in candidates}
    post_days = {c: {p.created_at.date() for p in corpus.posts
                     if p.candidate == c} for c in candidates}
    poll_days = {p.date for p in corpus.polls}

    for candidate in candidates:
        for day in days:
            if day not in tweet_days[candidate]:
                report.missing_tweet_days.append((candidate, day))
            if day not in post_days[candidate]:
                report.missing_post_days.append((candidate, day))
    for day in days:
        if day not in poll_days:
            report.missing_poll_days.append(day)
    anchor = date.fromordinal(start.toordinal() - 1)
    report.missing_lag_anchor = anchor not in poll_days
    return report


def fill_poll_gaps(polls: Sequence[PollSnapshot], start: date,
                   end: date) -> list[PollSnapshot]:
    """Forward-fill missing days from the previous snapshot (polling is a step
    function between releases)."""
    by_date = {p.date: p for p in polls}
    out = []
    last: PollSnapshot | None = None
    for day in _days_between(start, end):
        snap = by_date.get(day)
        if snap is None:
            if last is None:
                raise DataError(f"no poll available on or before {day.isoformat()}")
            snap = PollSnapshot(date=day, shares=dict(last.shares))
        out.append(snap)
        last = snap
    return out


def tweets_to_csv(tweets: Sequence[RawTweet | CandidatePost], path: str | Path,
                  columns: dict[str, str] | None = None) -> None:
    """Serialize records back to the same CSV schema parse_* consumes."""
    columns = {**DEFAULT_TWEET_COLUMNS, **(columns or {})}
    order = ["created_at", "tweet_id", "text", "like_count",
             "retweet_count", "follower_count"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([columns[role] for role in order])
        for record in tweets:
            writer.writerow([
                record.created_at.isoformat(),
                record.tweet_id,
                record.text,
                record.like_count,
                record.retweet_count,
                record.author_follower_count,
            ])


def polls_to_csv(polls: Sequence[PollSnapshot], candidates: Sequence[str],
                 path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *candidates])
        for snap in polls:
            writer.writerow([snap.date.isoformat(),
                             *(repr(snap.shares[c]) for c in candidates)])
