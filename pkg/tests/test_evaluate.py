import json
from datetime import date, timedelta

import numpy as np
import pytest

from ballotwire.errors import ConstantReferenceError, LengthMismatchError
from ballotwire.evaluate import (
    evaluate_test,
    mae,
    pick_model,
    r_squared,
    verify_report_totals,
)
from ballotwire.models import ModelSpec, default_model_specs, fit_ridge
from ballotwire.supervise import SupervisedSet


def _make_set(X, y, start=date(2020, 10, 1)):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    return SupervisedSet(
        dates=tuple(start + timedelta(days=i) for i in range(len(y))),
        X=X, y=y,
        column_names=("f1", "f2", "f3", "f4", "f5",
                      "Previous Polling Estimate"),
    )


def _ar1_sets(seed=5, n_train=12, n_val=3, n_test=4, phi=0.8, drift=10.0,
              sigma=0.05):
    rng = np.random.Generator(np.random.Philox(key=seed))
    total = n_train + n_val + n_test
    y = np.empty(total + 1)
    y[0] = drift / (1 - phi)
    for t in range(1, total + 1):
        y[t] = drift + phi * y[t - 1] + rng.normal(0, sigma)
    features = rng.normal(size=(total, 5)) * 0.01
    X = np.column_stack([features, y[:-1]])
    dataset = _make_set(X, y[1:])
    return (dataset.slice(0, n_train),
            dataset.slice(n_train, n_train + n_val),
            dataset.slice(n_train + n_val, total),
            dataset)


# --- metrics ----------------------------------------------------------------

def test_mae_identical_zero():
    assert mae([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0


def test_mae_hand_case():
    assert mae([1.0, 2.0], [2.0, 4.0]) == 1.5


def test_mae_symmetric():
    a, b = [1.0, 5.0, 2.0], [4.0, 0.0, 2.5]
    assert mae(a, b) == mae(b, a)


def test_mae_length_mismatch():
    with pytest.raises(LengthMismatchError):
        mae([1.0], [1.0, 2.0])
    with pytest.raises(LengthMismatchError):
        mae([], [])


def test_r_squared_perfect():
    assert r_squared([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0


def test_r_squared_mean_prediction_zero():
    ref = [1.0, 2.0, 3.0, 6.0]
    assert r_squared([3.0] * 4, ref) == pytest.approx(0.0)


def test_r_squared_worse_than_mean_negative():
    # reference (1,2,3,4): SS_tot = 5; predictions (4,3,2,1): SS_res = 20
    assert r_squared([4.0, 3.0, 2.0, 1.0],
                     [1.0, 2.0, 3.0, 4.0]) == pytest.approx(1 - 20 / 5)


def test_r_squared_constant_reference():
    with pytest.raises(ConstantReferenceError):
        r_squared([1.0, 2.0], [3.0, 3.0])


def test_delta_report_math():
    # the published headline: model MAE 1.85, polling baseline 1.5
    model_mae, baseline = 1.85, 1.5
    assert model_mae - baseline == pytest.approx(0.35)


# --- selection --------------------------------------------------------------

def test_single_spec_selected_trivially():
    train, val, _, _ = _ar1_sets()
    spec = ModelSpec("ridge", fit_ridge, {"lam": 1.0})
    result = pick_model([spec], train, val)
    assert result.selected is spec
    assert len(result.table) == 1


def test_selection_reports_five_specs():
    train, val, _, _ = _ar1_sets()
    result = pick_model(default_model_specs(), train, val)
    assert [name for name, _ in result.table] == [
        "lasso", "elastic_net", "ridge", "svr_linear", "svr_rbf"]
    assert result.validation_mae >= 0.0


def test_ar1_drift_selects_linear_family():
    """On data generated by a pure AR(1)-with-drift law, a linear-family
    model beats the RBF SVR under default settings (frozen regression test)."""
    train, val, _, _ = _ar1_sets(seed=5)
    result = pick_model(default_model_specs(), train, val)
    assert result.selected.name in ("lasso", "elastic_net", "ridge",
                                    "svr_linear")


def test_tie_broken_by_registry_order():
    # constant targets make every linear model predict the constant exactly
    train = _make_set(np.column_stack([np.linspace(0, 1, 8).reshape(8, 1)
                                       * np.ones((1, 5)),
                                       np.full(8, 50.0)]), np.full(8, 50.0))
    val = _make_set(np.column_stack([np.linspace(0, 1, 3).reshape(3, 1)
                                     * np.ones((1, 5)),
                                     np.full(3, 50.0)]), np.full(3, 50.0),
                    start=date(2020, 10, 9))
    specs = default_model_specs()
    result = pick_model(specs, train, val)
    tied = [name for name, score in result.table
            if score is not None and
            score == pytest.approx(result.validation_mae, abs=1e-12)]
    assert result.selected.name == tied[0]


def test_failed_fit_disqualified_not_fatal():
    train, val, _, _ = _ar1_sets()

    def broken_fit(X, y, **params):
        raise ValueError("deliberately broken")

    specs = [ModelSpec("broken", broken_fit, {}),
             ModelSpec("ridge", fit_ridge, {"lam": 1.0})]
    result = pick_model(specs, train, val)
    assert result.selected.name == "ridge"
    assert result.table[0] == ("broken", None)
    assert "broken" in result.failures


def test_all_fits_failing_is_fatal():
    from ballotwire.errors import NumericalError

    train, val, _, _ = _ar1_sets()

    def broken_fit(X, y, **params):
        raise ValueError("nope")

    with pytest.raises(NumericalError):
        pick_model([ModelSpec("b1", broken_fit, {}),
                    ModelSpec("b2", broken_fit, {})], train, val)


def test_argmax_invariance_under_constant_shift():
    train, val, _, _ = _ar1_sets(seed=17)
    specs = default_model_specs()
    base = pick_model(specs, train, val)

    shift = 4.0
    train2 = _make_set(
        np.column_stack([train.X[:, :5], train.X[:, 5] + shift]),
        train.y + shift)
    val2 = _make_set(
        np.column_stack([val.X[:, :5], val.X[:, 5] + shift]),
        val.y + shift, start=val.dates[0])
    shifted = pick_model(specs, train2, val2)
    assert shifted.selected.name == base.selected.name


# --- final evaluation -------------------------------------------------------

def _run_evaluation(actual=None):
    reports = {}
    trainvals = {}
    tests = {}
    for name, seed, drift in (("CandidateA", 5, 10.4), ("CandidateB", 6, 9.4)):
        train, val, test, dataset = _ar1_sets(seed=seed, drift=drift)
        selection = pick_model(default_model_specs(), train, val)
        reports[name] = (selection.selected, selection)
        trainvals[name] = dataset.slice(0, 15)
        tests[name] = test
    return evaluate_test(reports, trainvals, tests, actual_vote_share=actual)


def test_protocol_shape():
    report = _run_evaluation()
    for outcome in report.outcomes.values():
        assert len(outcome.predictions) == 4
        assert len(outcome.selection_table) == 5


def test_optional_actuals_omitted():
    report = _run_evaluation()
    assert report.winner_correct is None
    assert report.mae_vs_actual is None
    assert report.baseline_mae is None
    payload = json.loads(report.to_json())
    assert payload["winner_correct"] is None


def test_constructed_winner_argmax():
    # drift 10.4 vs 9.4 puts CandidateA's level 5 points higher
    report = _run_evaluation(actual={"CandidateA": 52.0, "CandidateB": 47.0})
    assert report.winner_predicted == "CandidateA"
    assert report.winner_correct is True
    assert report.delta_vs_baseline == pytest.approx(
        report.mae_vs_actual - report.baseline_mae)


def test_perfect_model_scores_perfectly():
    class Oracle:
        def __init__(self, mapping):
            self.mapping = mapping

        def predict(self, X):
            return np.array([self.mapping[round(float(x[-1]), 6)]
                             for x in np.asarray(X)])

    train, val, test, dataset = _ar1_sets(seed=9)
    # oracle model: maps each lag value to the true next share
    mapping = {round(float(x), 6): float(t)
               for x, t in zip(dataset.X[:, 5], dataset.y)}
    mapping.update({round(float(p), 6): float(t)
                    for p, t in zip(dataset.y[:-1], dataset.y[1:])})

    spec = ModelSpec("oracle", lambda X, y: Oracle(mapping), {})
    selection = pick_model([spec], train, val)
    report = evaluate_test({"CandidateA": (spec, selection)},
                           {"CandidateA": dataset.slice(0, 15)},
                           {"CandidateA": test})
    outcome = report.outcomes["CandidateA"]
    assert mae(outcome.predictions, outcome.polling_reference) == \
        pytest.approx(0.0, abs=1e-9)
    assert outcome.r2_vs_polling == pytest.approx(1.0, abs=1e-9)


def test_report_self_verifies():
    report = _run_evaluation(actual={"CandidateA": 52.0, "CandidateB": 47.0})
    payload = json.loads(report.to_json())
    assert verify_report_totals(payload)


def test_report_totals_detect_tampering():
    report = _run_evaluation()
    payload = json.loads(report.to_json())
    payload["candidates"]["CandidateA"]["r2_vs_polling"] += 0.5
    assert not verify_report_totals(payload)


def test_report_metadata_flags_conventions():
    report = _run_evaluation()
    assert "joint-over-test-window" in report.metadata["r2_convention"]
    assert "recursive" in report.metadata["validation_protocol"]


def test_text_report_renders():
    report = _run_evaluation(actual={"CandidateA": 52.0, "CandidateB": 47.0})
    text = report.to_text()
    assert "winner_predicted: CandidateA" in text
    assert "mae_vs_actual" in text
    assert "delta_vs_baseline" in text
