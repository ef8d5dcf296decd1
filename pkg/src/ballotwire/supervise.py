"""Sliding-window supervised conversion, chronological split, and recursive
multi-step forecasting.

Each day's design row is (five engagement features, previous day's polling
share); the target is that day's polling share. Forecasting beyond the last
known poll feeds each prediction back in as the next day's lag input, so test
period truth is never read.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Mapping, Sequence

import numpy as np

from .errors import MissingTargetError, SpecMismatchError
from .features import FeatureFrame


@dataclass(frozen=True)
class SupervisedSet:
    dates: tuple[date, ...]
    X: np.ndarray                  # (n, 6): 5 features + prev_poll last
    y: np.ndarray                  # (n,) polling share, percentage points
    column_names: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.dates)

    def slice(self, start: int, stop: int) -> "SupervisedSet":
        return SupervisedSet(
            dates=self.dates[start:stop],
            X=self.X[start:stop],
            y=self.y[start:stop],
            column_names=self.column_names,
        )


@dataclass(frozen=True)
class SplitSpec:
    n_train: int = 12
    n_val: int = 3
    n_test: int = 4


def make_sliding_window(frame: FeatureFrame,
                        targets: Mapping[date, float]) -> SupervisedSet:
    """Build the (n, 6) design matrix and target vector from a frame."""
    dates = []
    x_rows = []
    y_vals = []
    for row in frame.rows:
        if row.date not in targets:
            raise MissingTargetError(row.date)
        dates.append(row.date)
        x_rows.append([*row.features(), frame.prev_poll[row.date]])
        y_vals.append(targets[row.date])
    return SupervisedSet(
        dates=tuple(dates),
        X=np.array(x_rows, dtype=float),
        y=np.array(y_vals, dtype=float),
        column_names=(*frame.column_names(), "Previous Polling Estimate"),
    )


def split(dataset: SupervisedSet,
          spec: SplitSpec = SplitSpec()) -> tuple[SupervisedSet, SupervisedSet,
                                                  SupervisedSet]:
    """Chronological train / validation / test partition."""
    total = spec.n_train + spec.n_val + spec.n_test
    if total != len(dataset):
        raise SpecMismatchError(
            f"split {spec.n_train}/{spec.n_val}/{spec.n_test} sums to {total} "
            f"but dataset has {len(dataset)} rows")
    if min(spec.n_train, spec.n_val, spec.n_test) < 1:
        raise SpecMismatchError("every split part must have at least 1 row")
    a = spec.n_train
    b = spec.n_train + spec.n_val
    return dataset.slice(0, a), dataset.slice(a, b), dataset.slice(b, total)


def recursive_forecast(model, feature_rows: Sequence[Sequence[float]] | np.ndarray,
                       anchor_poll: float) -> np.ndarray:
    """Forecast a horizon day by day, feeding each prediction back as the lag.

    ``feature_rows`` holds only the five engagement features per day, in date
    order; test-period polling truth is deliberately not a parameter.
    """
    feature_rows = np.asarray(feature_rows, dtype=float)
    if not np.isfinite(anchor_poll):
        raise ValueError("anchor_poll must be finite")
    lag = float(anchor_poll)
    predictions = []
    for row in feature_rows:
        x = np.concatenate([row, [lag]])
        pred = float(np.asarray(model.predict(x[None, :])).ravel()[0])
        predictions.append(pred)
        lag = pred
    return np.array(predictions)
