import numpy as np
import pytest

from ballotwire.errors import ConstantSeriesError, SeriesTooShortError
from ballotwire.stationarity import (
    adf_test,
    apply_differencing,
    difference,
    frame_stationarity_report,
    mackinnon_p_value,
    undifference,
)

statsmodels_adfuller = pytest.importorskip(
    "statsmodels.tsa.stattools").adfuller


def _walks_and_noise(n=200):
    """5 seeded random walks and 5 seeded white-noise series."""
    series = []
    for seed in range(5):
        rng = np.random.Generator(np.random.Philox(key=42 + seed))
        series.append(("walk", np.cumsum(rng.normal(size=n))))
    for seed in range(5):
        rng = np.random.Generator(np.random.Philox(key=142 + seed))
        series.append(("noise", rng.normal(size=n)))
    return series


# --- oracle agreement -------------------------------------------------------

def test_statistic_matches_statsmodels_at_matched_lag():
    for kind, y in _walks_and_noise():
        stat, p, lag, *_ = statsmodels_adfuller(y, regression="c", autolag="AIC")
        ours = adf_test(y, lag=lag)
        assert ours.statistic == pytest.approx(stat, abs=1e-6), kind
        assert ours.p_value == pytest.approx(p, abs=1e-3), kind


def test_aic_lag_choice_matches_statsmodels():
    for _, y in _walks_and_noise():
        _, _, lag, *_ = statsmodels_adfuller(y, regression="c", autolag="AIC")
        assert adf_test(y).lag_used == lag


def test_decisions_walks_accepted_noise_rejected():
    for kind, y in _walks_and_noise():
        result = adf_test(y, alpha=0.05)
        if kind == "walk":
            assert not result.reject_unit_root
        else:
            assert result.reject_unit_root


def test_reject_iff_p_below_alpha():
    for _, y in _walks_and_noise():
        result = adf_test(y, alpha=0.05)
        assert result.reject_unit_root == (result.p_value < 0.05)


# --- error cases ------------------------------------------------------------

def test_constant_series_rejected():
    with pytest.raises(ConstantSeriesError):
        adf_test([5.0] * 50)


def test_short_series_rejected():
    with pytest.raises(SeriesTooShortError):
        adf_test([1.0, 2.0, 1.5])


# --- p-value surface --------------------------------------------------------

def test_p_value_monotone_in_statistic():
    stats = np.linspace(-18.0, 2.5, 400)
    ps = [mackinnon_p_value(s) for s in stats]
    assert all(a <= b + 1e-12 for a, b in zip(ps, ps[1:]))


def test_p_value_saturation():
    assert mackinnon_p_value(-25.0) == 0.0
    assert mackinnon_p_value(5.0) == 1.0


# --- differencing -----------------------------------------------------------

def test_difference_definition():
    assert list(difference([3, 5, 4])) == [2, -1]


def test_difference_constant_is_zero():
    assert list(difference([7.0] * 6)) == [0.0] * 5


def test_difference_cumsum_identity():
    y = [3, 1, 4, 1, 5, 9, 2, 6]
    d = difference(y)
    back = undifference(d, anchor=y[0])
    assert list(back) == y               # bit-for-bit on integer values


def test_difference_too_short():
    with pytest.raises(SeriesTooShortError):
        difference([1.0])


def test_second_order_difference():
    y = [1.0, 4.0, 9.0, 16.0, 25.0]
    assert list(difference(y, order=2)) == [2.0, 2.0, 2.0]


# --- frame-level report and differencing ------------------------------------

def test_report_has_ten_rows(synth_frames):
    reports = frame_stationarity_report(
        [synth_frames["CandidateA"], synth_frames["CandidateB"]])
    assert len(reports) == 10
    assert {r.candidate for r in reports} == {"CandidateA", "CandidateB"}


def test_white_noise_frames_all_stationary(synth_frames):
    from ballotwire.features import DailyFeatureRow, FeatureFrame

    template = synth_frames["CandidateA"]
    frames = []
    for fi, name in enumerate(("CandidateA", "CandidateB")):
        rng = np.random.Generator(np.random.Philox(key=900 + fi))
        rows = [
            DailyFeatureRow(row.date, *rng.normal(size=5))
            for row in template.rows * 10   # n = 200 for test power
        ]
        frames.append(FeatureFrame(name, rows, dict(template.prev_poll)))
    reports = frame_stationarity_report(frames)
    assert sum(r.before.reject_unit_root for r in reports) == 10


def test_random_walk_frames_difference_to_stationary(synth_frames):
    from ballotwire.features import DailyFeatureRow, FeatureFrame

    template = synth_frames["CandidateA"]
    frames = []
    for fi, name in enumerate(("CandidateA", "CandidateB")):
        rng = np.random.Generator(np.random.Philox(key=950 + fi))
        walks = np.cumsum(rng.normal(size=(len(template.rows) * 10, 5)), axis=0)
        rows = [DailyFeatureRow(row.date, *walks[i])
                for i, row in enumerate(template.rows * 10)]
        frames.append(FeatureFrame(name, rows, dict(template.prev_poll)))
    reports = frame_stationarity_report(frames)
    assert sum(r.before.reject_unit_root for r in reports) == 0
    assert all(r.after is not None and r.after.reject_unit_root
               for r in reports)


def test_apply_differencing_drops_first_row(synth_frames):
    frame = synth_frames["CandidateA"]
    assert len(frame.rows) == 20
    differenced = apply_differencing(frame)
    assert len(differenced.rows) == 19    # 20 days -> 19 usable rows
    got = differenced.rows[0].features()
    expected = tuple(c - p for p, c in zip(frame.rows[0].features(),
                                           frame.rows[1].features()))
    assert got == pytest.approx(expected)


def test_apply_differencing_prev_poll_stays_in_levels(synth_frames):
    frame = synth_frames["CandidateA"]
    differenced = apply_differencing(frame)
    for row in differenced.rows:
        assert differenced.prev_poll[row.date] == frame.prev_poll[row.date]


def test_apply_differencing_all_mode(synth_frames):
    frame = synth_frames["CandidateA"]
    differenced = apply_differencing(frame, difference_prev_poll=True)
    first, second = frame.rows[0].date, frame.rows[1].date
    assert differenced.prev_poll[second] == pytest.approx(
        frame.prev_poll[second] - frame.prev_poll[first])


def test_two_row_frame_differences_to_one(synth_frames):
    from ballotwire.features import FeatureFrame

    frame = synth_frames["CandidateA"]
    small = FeatureFrame(frame.candidate, frame.rows[:2],
                         dict(frame.prev_poll))
    assert len(apply_differencing(small).rows) == 1


def test_one_row_frame_cannot_difference(synth_frames):
    from ballotwire.features import FeatureFrame

    frame = synth_frames["CandidateA"]
    tiny = FeatureFrame(frame.candidate, frame.rows[:1], dict(frame.prev_poll))
    with pytest.raises(SeriesTooShortError):
        apply_differencing(tiny)
