"""Augmented Dickey-Fuller unit-root testing and first differencing.

The test regresses dy_t on a constant, y_{t-1}, and k lagged differences,
picks k by AIC over 0..max_lag (all candidates fit on the common sample so
the criteria are comparable), and converts the t-statistic of the y_{t-1}
coefficient to a p-value with MacKinnon's (1994) regression-surface
approximation for the constant-only case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ConstantSeriesError,
    DegenerateRegressionError,
    SeriesTooShortError,
)

# MacKinnon (1994) approximation constants, constant-only ("c") case, N=1.
# Small-p polynomial applies for statistics at or below TAU_STAR; large-p
# above it; beyond TAU_MAX / TAU_MIN the p-value saturates at 1 / 0.
_TAU_STAR_C = -1.61
_TAU_MIN_C = -18.83
_TAU_MAX_C = 2.74
_TAU_SMALLP_C = (2.1659, 1.4412, 3.8269e-2)
_TAU_LARGEP_C = (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2)


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    lag_used: int
    n_obs: int
    reject_unit_root: bool
    alpha: float


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def mackinnon_p_value(statistic: float) -> float:
    """Approximate p-value for the constant-only ADF tau statistic."""
    if statistic > _TAU_MAX_C:
        return 1.0
    if statistic < _TAU_MIN_C:
        return 0.0
    coeffs = _TAU_SMALLP_C if statistic <= _TAU_STAR_C else _TAU_LARGEP_C
    poly = 0.0
    for power, coef in enumerate(coeffs):
        poly += coef * statistic ** power
    return _norm_cdf(poly)


def default_max_lag(n: int) -> int:
    """Schwert's rule of thumb, capped so the regression stays estimable."""
    max_lag = int(math.ceil(12.0 * (n / 100.0) ** 0.25))
    return min(n // 2 - 2, max_lag)


def _ols_tstat(dy: np.ndarray, design: np.ndarray) -> tuple[float, float]:
    """Return (t-statistic of the level coefficient, residual sum of squares).

    The level column is assumed to be column 1 (after the constant).
    """
    n, k = design.shape
    if n <= k:
        raise DegenerateRegressionError("more parameters than observations")
    xtx = design.T @ design
    try:
        xtx_inv = np.linalg.inv(xtx)
    except np.linalg.LinAlgError:
        raise DegenerateRegressionError("singular design matrix") from None
    beta = xtx_inv @ (design.T @ dy)
    resid = dy - design @ beta
    rss = float(resid @ resid)
    sigma2 = rss / (n - k)
    se = math.sqrt(sigma2 * xtx_inv[1, 1])
    if se == 0.0:
        raise DegenerateRegressionError("zero standard error on level term")
    return float(beta[1] / se), rss


def adf_test(series: Sequence[float], max_lag: int | None = None,
             alpha: float = 0.05, lag: int | None = None) -> AdfResult:
    """ADF test with constant, AIC lag selection (or a forced ``lag``)."""
    y = np.asarray(series, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    n = y.shape[0]
    if np.max(y) == np.min(y):
        raise ConstantSeriesError("series is constant")

    if lag is not None:
        best_lag = int(lag)
        if n < best_lag + 4:
            raise SeriesTooShortError(
                f"need at least lag+4 = {best_lag + 4} points, got {n}")
    else:
        if max_lag is None:
            max_lag = default_max_lag(n)
            if max_lag < 0:
                raise SeriesTooShortError(f"series of length {n} is too short")
        if n < max_lag + 4:
            raise SeriesTooShortError(
                f"need at least max_lag+4 = {max_lag + 4} points, got {n}")
        best_lag = _select_lag_aic(y, max_lag)

    dy = np.diff(y)
    nobs = dy.shape[0] - best_lag
    design = _adf_design(y, dy, best_lag, nobs)
    statistic, _ = _ols_tstat(dy[-nobs:], design)
    p_value = mackinnon_p_value(statistic)
    return AdfResult(
        statistic=statistic,
        p_value=p_value,
        lag_used=best_lag,
        n_obs=nobs,
        reject_unit_root=p_value < alpha,
        alpha=alpha,
    )


def _adf_design(y: np.ndarray, dy: np.ndarray, k: int, nobs: int) -> np.ndarray:
    """Columns: constant, y_{t-1}, dy_{t-1} .. dy_{t-k}."""
    cols = [np.ones(nobs), y[-nobs - 1:-1]]
    for j in range(1, k + 1):
        cols.append(dy[len(dy) - nobs - j: len(dy) - j])
    return np.column_stack(cols)


def _select_lag_aic(y: np.ndarray, max_lag: int) -> int:
    """Minimize AIC over lag 0..max_lag on the common max_lag-trimmed sample."""
    dy = np.diff(y)
    nobs = dy.shape[0] - max_lag
    if nobs < 3:
        raise SeriesTooShortError("not enough observations for lag selection")
    target = dy[-nobs:]
    full = _adf_design(y, dy, max_lag, nobs)
    best = None
    for k in range(max_lag + 1):
        design = full[:, : 2 + k]
        _, rss = _ols_tstat(target, design)
        aic = nobs * math.log(rss / nobs) + 2 * (2 + k)
        if best is None or aic < best[0]:
            best = (aic, k)
    return best[1]


def difference(series: Sequence[float], order: int = 1) -> np.ndarray:
    """Apply first differencing ``order`` times; length shrinks by ``order``."""
    y = np.asarray(series, dtype=float)
    if y.shape[0] <= order:
        raise SeriesTooShortError(
            f"cannot difference length {y.shape[0]} series {order} time(s)")
    for _ in range(order):
        y = np.diff(y)
    return y


def undifference(diffs: Sequence[float], anchor: float) -> np.ndarray:
    """Inverse of one differencing pass: rebuilds the full level series,
    anchor first."""
    diffs = np.asarray(diffs, dtype=float)
    return np.concatenate([[anchor], anchor + np.cumsum(diffs)])


@dataclass(frozen=True)
class ColumnAdfReport:
    candidate: str
    column: str
    before: AdfResult
    after: AdfResult | None


def frame_stationarity_report(frames, alpha: float = 0.05,
                              max_lag: int | None = None) -> list[ColumnAdfReport]:
    """Test all five feature columns of each frame, then re-test the
    first-differenced series. 2 frames x 5 columns = 10 rows."""
    reports = []
    for frame in frames:
        names = frame.column_names()
        matrix = np.array([row.features() for row in frame.rows], dtype=float)
        for j, name in enumerate(names):
            col = matrix[:, j]
            before = adf_test(col, alpha=alpha, max_lag=max_lag)
            try:
                after = adf_test(difference(col), alpha=alpha, max_lag=max_lag)
            except (ConstantSeriesError, SeriesTooShortError):
                after = None
            reports.append(ColumnAdfReport(frame.candidate, name, before, after))
    return reports


def apply_differencing(frame, difference_prev_poll: bool = False):
    """First-difference the five feature columns once; the first row drops.

    ``prev_poll`` stays in levels by default, matching the published frame;
    ``difference_prev_poll`` implements the difference-everything reading.
    """
    from .features import DailyFeatureRow, FeatureFrame

    if len(frame.rows) < 2:
        raise SeriesTooShortError("frame needs at least 2 rows to difference")
    new_rows = []
    new_prev = {}
    for prev, cur in zip(frame.rows, frame.rows[1:]):
        feats = [c - p for p, c in zip(prev.features(), cur.features())]
        new_rows.append(DailyFeatureRow(cur.date, *feats))
        if difference_prev_poll:
            new_prev[cur.date] = frame.prev_poll[cur.date] - frame.prev_poll[prev.date]
        else:
            new_prev[cur.date] = frame.prev_poll[cur.date]
    return FeatureFrame(candidate=frame.candidate, rows=new_rows,
                        prev_poll=new_prev)
