from datetime import date, datetime, timezone

import pytest

from ballotwire.errors import (
    DataError,
    DuplicateDateError,
    EmptyCorpusError,
    EmptyFileError,
    MissingCandidateColumnError,
    MissingColumnError,
    ShareOutOfRangeError,
    ZeroFollowersError,
)
from ballotwire.ingest import (
    CandidatePost,
    Corpus,
    PollSnapshot,
    RawTweet,
    export_tweet_ids,
    fill_poll_gaps,
    parse_candidate_csv,
    parse_polling_csv,
    parse_timestamp,
    parse_tweet_csv,
    polls_to_csv,
    tweets_to_csv,
    validate_corpus,
)

HEADER = "created_at,tweet,likes,retweet_count,user_followers_count,tweet_id\n"


def _write(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


# --- timestamps -------------------------------------------------------------

def test_parse_timestamp_iso_z():
    ts = parse_timestamp("2020-10-16T12:00:00Z")
    assert ts == datetime(2020, 10, 16, 12, tzinfo=timezone.utc)


def test_parse_timestamp_naive_assumed_utc():
    ts = parse_timestamp("2020-10-16 23:59:59")
    assert ts.tzinfo == timezone.utc
    assert ts.date() == date(2020, 10, 16)


def test_parse_timestamp_offset_normalized():
    ts = parse_timestamp("2020-10-17T01:30:00+05:00")
    # UTC midnight is the day boundary: this lands on the 16th
    assert ts.date() == date(2020, 10, 16)


def test_parse_timestamp_us_format():
    assert parse_timestamp("10/16/2020 12:30").date() == date(2020, 10, 16)


# --- tweet CSV --------------------------------------------------------------

def test_parse_tweet_row_fields(tmp_path):
    path = _write(tmp_path, "t.csv",
                  HEADER + "2020-10-16T12:00:00Z,I love this,10,4,500,1\n")
    result = parse_tweet_csv(path, "CandidateA")
    assert result.dropped == 0
    (tweet,) = result.records
    assert tweet.like_count == 10
    assert tweet.retweet_count == 4
    assert tweet.author_follower_count == 500
    assert tweet.tweet_id == 1
    assert tweet.candidate == "CandidateA"


def test_header_only_file(tmp_path):
    path = _write(tmp_path, "t.csv", HEADER)
    result = parse_tweet_csv(path, "CandidateA")
    assert result.records == []
    assert result.dropped == 0


def test_malformed_rows_dropped_and_counted(tmp_path):
    rows = [f"2020-10-{10 + i:02d}T00:00:00Z,text {i},1,1,10,{i}" for i in range(8)]
    rows.insert(2, "not-a-date,text,1,1,10,100")
    rows.insert(6, "also-not-a-date,text,1,1,10,101")
    path = _write(tmp_path, "t.csv", HEADER + "\n".join(rows) + "\n")
    result = parse_tweet_csv(path, "CandidateA")
    assert len(result.records) == 8
    assert result.dropped == 2


def test_drop_accounting(tmp_path):
    """parsed + dropped equals the number of data rows, always."""
    rows = ["2020-10-16T00:00:00Z,ok,1,1,10,1",
            "bad,bad,x,y,z,2",
            "2020-10-17T00:00:00Z,ok,2,2,20,3",
            "2020-10-17T00:00:00Z,,1,1,10,4"]          # empty text
    path = _write(tmp_path, "t.csv", HEADER + "\n".join(rows) + "\n")
    result = parse_tweet_csv(path, "CandidateA")
    assert len(result.records) + result.dropped == 4


def test_strict_mode_raises_on_bad_row(tmp_path):
    path = _write(tmp_path, "t.csv", HEADER + "garbage,text,1,1,10,1\n")
    with pytest.raises(DataError):
        parse_tweet_csv(path, "CandidateA", strict=True)


def test_missing_column_named(tmp_path):
    path = _write(tmp_path, "t.csv", "created_at,tweet\nx,y\n")
    with pytest.raises(MissingColumnError) as err:
        parse_tweet_csv(path, "CandidateA")
    assert "likes" in str(err.value)


def test_empty_file_rejected(tmp_path):
    path = _write(tmp_path, "t.csv", "")
    with pytest.raises(EmptyFileError):
        parse_tweet_csv(path, "CandidateA")


def test_configurable_columns(tmp_path):
    path = _write(tmp_path, "t.csv",
                  "when,body,hearts,rts,fans,id\n"
                  "2020-10-16T00:00:00Z,hello there,3,1,9,77\n")
    result = parse_tweet_csv(path, "CandidateA", columns={
        "created_at": "when", "text": "body", "like_count": "hearts",
        "retweet_count": "rts", "follower_count": "fans", "tweet_id": "id"})
    assert result.records[0].tweet_id == 77


# --- candidate CSV ----------------------------------------------------------

def test_candidate_post_ratio_ready(tmp_path):
    path = _write(tmp_path, "c.csv",
                  HEADER + "2020-10-16T09:00:00Z,announcement,2000,100,1000000,5\n")
    (post,) = parse_candidate_csv(path, "CandidateA").records
    assert post.like_count / post.author_follower_count == pytest.approx(0.002)


def test_zero_followers_fatal(tmp_path):
    path = _write(tmp_path, "c.csv",
                  HEADER + "2020-10-16T09:00:00Z,announcement,10,1,0,5\n")
    with pytest.raises(ZeroFollowersError):
        parse_candidate_csv(path, "CandidateA")


def test_five_row_fixture_sorts_chronologically(tmp_path):
    days = [18, 16, 20, 17, 19]
    rows = [f"2020-10-{d}T09:00:00Z,post {d},10,1,100,{d}" for d in days]
    path = _write(tmp_path, "c.csv", HEADER + "\n".join(rows) + "\n")
    posts = parse_candidate_csv(path, "CandidateA").records
    assert len(posts) == 5
    # parsing keeps file order; sorting by timestamp restores chronology
    assert [p.created_at.day for p in posts] == days
    ordered = sorted(posts, key=lambda p: p.created_at)
    assert [p.created_at.day for p in ordered] == sorted(days)


# --- polling CSV ------------------------------------------------------------

def test_polling_rows_in_order(tmp_path):
    path = _write(tmp_path, "p.csv",
                  "date,Biden\n2020-10-15,51.7\n2020-10-16,51.2\n")
    snaps = parse_polling_csv(path, ["Biden"])
    assert [s.shares["Biden"] for s in snaps] == [51.7, 51.2]


def test_polling_unsorted_input_sorted(tmp_path):
    path = _write(tmp_path, "p.csv",
                  "date,A\n2020-10-17,50.0\n2020-10-15,49.0\n2020-10-16,49.5\n")
    snaps = parse_polling_csv(path, ["A"])
    assert [s.date.day for s in snaps] == [15, 16, 17]


def test_polling_duplicate_date(tmp_path):
    path = _write(tmp_path, "p.csv",
                  "date,A\n2020-10-15,49.0\n2020-10-15,50.0\n")
    with pytest.raises(DuplicateDateError):
        parse_polling_csv(path, ["A"])


def test_polling_share_out_of_range(tmp_path):
    path = _write(tmp_path, "p.csv", "date,A\n2020-10-15,101.0\n")
    with pytest.raises(ShareOutOfRangeError):
        parse_polling_csv(path, ["A"])


def test_polling_missing_candidate_column(tmp_path):
    path = _write(tmp_path, "p.csv", "date,A\n2020-10-15,50.0\n")
    with pytest.raises(MissingCandidateColumnError):
        parse_polling_csv(path, ["A", "B"])


# --- ID export --------------------------------------------------------------

def _tweet(tweet_id, day=16):
    return RawTweet(tweet_id=tweet_id,
                    created_at=datetime(2020, 10, day, tzinfo=timezone.utc),
                    text="x", like_count=1, retweet_count=1,
                    author_follower_count=10, candidate="CandidateA")


def _corpus(tweets=(), posts=()):
    return Corpus(tweets=list(tweets), posts=list(posts), polls=[],
                  date_range=(date(2020, 10, 16), date(2020, 10, 16)))


def test_export_ids_stable_order(tmp_path):
    corpus = _corpus([_tweet(3), _tweet(1), _tweet(2)])
    path = tmp_path / "ids.txt"
    assert export_tweet_ids(corpus, path) == 3
    assert path.read_text() == "3\n1\n2\n"


def test_export_ids_empty_corpus(tmp_path):
    with pytest.raises(EmptyCorpusError):
        export_tweet_ids(_corpus(), tmp_path / "ids.txt")


def test_export_ids_tweets_then_posts(tmp_path):
    post = CandidatePost(tweet_id=9,
                         created_at=datetime(2020, 10, 16, tzinfo=timezone.utc),
                         text="y", like_count=1, retweet_count=1,
                         author_follower_count=10, candidate="CandidateA")
    corpus = _corpus([_tweet(1), _tweet(2)], [post])
    path = tmp_path / "ids.txt"
    assert export_tweet_ids(corpus, path) == 3
    assert path.read_text().splitlines() == ["1", "2", "9"]


def test_export_ids_cover_corpus_exactly(tmp_path, synth_corpus):
    path = tmp_path / "ids.txt"
    count = export_tweet_ids(synth_corpus, path)
    written = [int(line) for line in path.read_text().splitlines()]
    expected = [t.tweet_id for t in synth_corpus.tweets] + \
        [p.tweet_id for p in synth_corpus.posts]
    assert written == expected
    assert count == len(expected)
    assert len(set(written)) == len(written)


# --- validation and gap filling ---------------------------------------------

def test_validate_full_corpus_clean(synth_corpus):
    report = validate_corpus(synth_corpus, synth_corpus.date_range,
                             ("CandidateA", "CandidateB"))
    assert report.ok
    assert report.findings == []


def test_validate_missing_poll_day(synth_corpus):
    polls = [p for p in synth_corpus.polls if p.date != date(2020, 10, 20)]
    corpus = Corpus(tweets=synth_corpus.tweets, posts=synth_corpus.posts,
                    polls=polls, date_range=synth_corpus.date_range)
    report = validate_corpus(corpus, corpus.date_range,
                             ("CandidateA", "CandidateB"))
    assert "MissingPollDay(2020-10-20)" in report.findings


def test_validate_missing_lag_anchor(synth_corpus):
    start = synth_corpus.date_range[0]
    polls = [p for p in synth_corpus.polls if p.date >= start]
    corpus = Corpus(tweets=synth_corpus.tweets, posts=synth_corpus.posts,
                    polls=polls, date_range=synth_corpus.date_range)
    report = validate_corpus(corpus, corpus.date_range,
                             ("CandidateA", "CandidateB"))
    assert report.missing_lag_anchor
    assert "MissingLagAnchor" in report.findings


def test_fill_poll_gaps_forward_fill():
    polls = [PollSnapshot(date(2020, 10, 15), {"A": 51.7}),
             PollSnapshot(date(2020, 10, 18), {"A": 51.2})]
    filled = fill_poll_gaps(polls, date(2020, 10, 15), date(2020, 10, 19))
    assert [p.shares["A"] for p in filled] == [51.7, 51.7, 51.7, 51.2, 51.2]


def test_fill_poll_gaps_without_anchor():
    polls = [PollSnapshot(date(2020, 10, 18), {"A": 51.2})]
    with pytest.raises(DataError):
        fill_poll_gaps(polls, date(2020, 10, 15), date(2020, 10, 19))


# --- round trips ------------------------------------------------------------

def test_tweet_round_trip(tmp_path, synth_corpus):
    tweets = [t for t in synth_corpus.tweets
              if t.candidate == "CandidateA"][:100]
    path = tmp_path / "rt.csv"
    tweets_to_csv(tweets, path)
    reparsed = parse_tweet_csv(path, "CandidateA")
    assert reparsed.dropped == 0
    assert reparsed.records == tweets


def test_polls_round_trip(tmp_path, synth_corpus):
    path = tmp_path / "polls.csv"
    polls_to_csv(synth_corpus.polls, ["CandidateA", "CandidateB"], path)
    reparsed = parse_polling_csv(path, ["CandidateA", "CandidateB"])
    assert reparsed == synth_corpus.polls
