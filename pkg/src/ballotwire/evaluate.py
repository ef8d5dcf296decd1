"""Model selection by validation MAE and final three-metric evaluation.

Metrics, in order of importance: winner call, MAE of election-day predictions
against actual vote shares (when supplied), and the mean R-squared of each
candidate's test-window predictions against aggregate polling. The aggregate
polling itself is the baseline the model must beat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    ConstantReferenceError,
    LengthMismatchError,
    NumericalError,
)
from .models import ModelSpec
from .supervise import SupervisedSet, recursive_forecast


def mae(predicted: Sequence[float], actual: Sequence[float]) -> float:
    """Mean absolute error in percentage points."""
    predicted = np.asarray(predicted, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if predicted.shape != actual.shape:
        raise LengthMismatchError(
            f"lengths {predicted.shape[0]} and {actual.shape[0]} differ")
    if predicted.size == 0:
        raise LengthMismatchError("cannot take MAE of empty sequences")
    return float(np.mean(np.abs(predicted - actual)))


def r_squared(predicted: Sequence[float], reference: Sequence[float]) -> float:
    """1 - SS_res/SS_tot about the reference mean; may be negative."""
    predicted = np.asarray(predicted, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if predicted.shape != reference.shape:
        raise LengthMismatchError(
            f"lengths {predicted.shape[0]} and {reference.shape[0]} differ")
    if predicted.size < 2:
        raise LengthMismatchError("need at least 2 points for R-squared")
    ss_tot = float(np.sum((reference - reference.mean()) ** 2))
    if ss_tot == 0.0:
        raise ConstantReferenceError("reference series is constant")
    ss_res = float(np.sum((reference - predicted) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass
class SelectionResult:
    selected: ModelSpec
    validation_mae: float
    table: list[tuple[str, float | None]]       # (name, val MAE or None if failed)
    failures: dict[str, str] = field(default_factory=dict)


def pick_model(candidate_specs: Sequence[ModelSpec], train: SupervisedSet,
               val: SupervisedSet) -> SelectionResult:
    """Fit every spec on train, recursively forecast the validation window,
    and keep the lowest MAE. Ties fall to the earlier registry entry; a spec
    whose fit fails is disqualified, not fatal."""
    if not candidate_specs:
        raise ValueError("no candidate specs")
    if len(train) == 0 or len(val) == 0:
        raise LengthMismatchError("train and validation sets must be non-empty")
    anchor = float(train.y[-1])
    table: list[tuple[str, float | None]] = []
    failures: dict[str, str] = {}
    best: tuple[float, int] | None = None
    for position, spec in enumerate(candidate_specs):
        try:
            model = spec.fit_model(train.X, train.y)
            preds = recursive_forecast(model, val.X[:, :-1], anchor)
            score = mae(preds, val.y)
        except (NumericalError, ValueError) as exc:
            failures[spec.name] = str(exc)
            table.append((spec.name, None))
            continue
        table.append((spec.name, score))
        if best is None or score < best[0]:
            best = (score, position)
    if best is None:
        raise NumericalError("every candidate model failed to fit")
    selected = candidate_specs[best[1]]
    return SelectionResult(selected=selected, validation_mae=best[0],
                           table=table, failures=failures)


@dataclass
class CandidateOutcome:
    candidate: str
    model_name: str
    validation_mae: float
    selection_table: list[tuple[str, float | None]]
    test_dates: list[str]
    predictions: list[float]
    polling_reference: list[float]
    election_day_prediction: float
    r2_vs_polling: float


@dataclass
class ForecastReport:
    outcomes: dict[str, CandidateOutcome]
    winner_predicted: str
    mean_r2_vs_polling: float
    winner_correct: bool | None = None
    mae_vs_actual: float | None = None
    baseline_mae: float | None = None
    delta_vs_baseline: float | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "winner_predicted": self.winner_predicted,
            "winner_correct": self.winner_correct,
            "mae_vs_actual": self.mae_vs_actual,
            "mean_r2_vs_polling": self.mean_r2_vs_polling,
            "baseline_mae": self.baseline_mae,
            "delta_vs_baseline": self.delta_vs_baseline,
            "candidates": {
                name: {
                    "model": o.model_name,
                    "validation_mae": o.validation_mae,
                    "selection_table": [[n, m] for n, m in o.selection_table],
                    "test_dates": o.test_dates,
                    "predictions": o.predictions,
                    "polling_reference": o.polling_reference,
                    "election_day_prediction": o.election_day_prediction,
                    "r2_vs_polling": o.r2_vs_polling,
                }
                for name, o in sorted(self.outcomes.items())
            },
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for name, o in sorted(self.outcomes.items()):
            lines.append(f"candidate {name}: model={o.model_name} "
                         f"val_mae={o.validation_mae:.4f} "
                         f"election_day={o.election_day_prediction:.2f} "
                         f"r2={o.r2_vs_polling:.4f}")
            for spec_name, score in o.selection_table:
                shown = "failed" if score is None else f"{score:.4f}"
                lines.append(f"  {spec_name:<12} val MAE {shown}")
        lines.append(f"winner_predicted: {self.winner_predicted}")
        if self.winner_correct is not None:
            lines.append(f"winner_correct: {self.winner_correct}")
        if self.mae_vs_actual is not None:
            lines.append(f"mae_vs_actual: {self.mae_vs_actual:.4f}")
        lines.append(f"mean_r2_vs_polling: {self.mean_r2_vs_polling:.4f}")
        if self.baseline_mae is not None:
            lines.append(f"baseline_mae: {self.baseline_mae:.4f}")
            lines.append(f"delta_vs_baseline: {self.delta_vs_baseline:.4f}")
        return "\n".join(lines) + "\n"


def verify_report_totals(payload: dict, tol: float = 1e-9) -> bool:
    """Recompute the aggregate fields from the serialized per-day predictions."""
    r2s = []
    election_day = {}
    for name, cand in payload["candidates"].items():
        r2 = r_squared(cand["predictions"], cand["polling_reference"])
        if abs(r2 - cand["r2_vs_polling"]) > tol:
            return False
        r2s.append(r2)
        election_day[name] = cand["predictions"][-1]
    if abs(float(np.mean(r2s)) - payload["mean_r2_vs_polling"]) > tol:
        return False
    winner = max(sorted(election_day), key=lambda n: election_day[n])
    return winner == payload["winner_predicted"]


def evaluate_test(
    selections: Mapping[str, tuple[ModelSpec, SelectionResult]],
    trainval: Mapping[str, SupervisedSet],
    test: Mapping[str, SupervisedSet],
    actual_vote_share: Mapping[str, float] | None = None,
    metadata: dict | None = None,
) -> ForecastReport:
    """Retrain each candidate's selected spec on train+val and score the
    4-day recursive forecast. Actual vote shares are optional user input;
    when absent the winner-correctness and MAE fields are omitted."""
    outcomes: dict[str, CandidateOutcome] = {}
    for candidate, (spec, selection) in selections.items():
        fit_set = trainval[candidate]
        test_set = test[candidate]
        model = spec.fit_model(fit_set.X, fit_set.y)
        preds = recursive_forecast(model, test_set.X[:, :-1],
                                   float(fit_set.y[-1]))
        outcomes[candidate] = CandidateOutcome(
            candidate=candidate,
            model_name=spec.name,
            validation_mae=selection.validation_mae,
            selection_table=selection.table,
            test_dates=[d.isoformat() for d in test_set.dates],
            predictions=[float(p) for p in preds],
            polling_reference=[float(v) for v in test_set.y],
            election_day_prediction=float(preds[-1]),
            r2_vs_polling=r_squared(preds, test_set.y),
        )

    winner = max(sorted(outcomes),
                 key=lambda name: outcomes[name].election_day_prediction)
    mean_r2 = float(np.mean([o.r2_vs_polling for o in outcomes.values()]))
    report = ForecastReport(
        outcomes=outcomes,
        winner_predicted=winner,
        mean_r2_vs_polling=mean_r2,
        metadata=dict(metadata or {}),
    )
    # the R-squared convention: computed jointly over the window, per
    # candidate, then averaged across candidates
    report.metadata.setdefault("r2_convention",
                               "joint-over-test-window, mean over candidates")
    report.metadata.setdefault("validation_protocol",
                               "recursive over validation window")

    if actual_vote_share:
        names = sorted(outcomes)
        if set(names) - set(actual_vote_share):
            raise LengthMismatchError("actual shares missing for a candidate")
        predicted_final = [outcomes[n].election_day_prediction for n in names]
        actual_final = [float(actual_vote_share[n]) for n in names]
        polling_final = [outcomes[n].polling_reference[-1] for n in names]
        report.mae_vs_actual = mae(predicted_final, actual_final)
        report.baseline_mae = mae(polling_final, actual_final)
        report.delta_vs_baseline = report.mae_vs_actual - report.baseline_mae
        actual_winner = max(names, key=lambda n: actual_vote_share[n])
        report.winner_correct = winner == actual_winner
    return report
