"""Classify and compare the asymptotic size of positive sequences.

A sampled positive sequence is matched against five parametric growth
families, fitted by least squares in transformed coordinates:

    constant    v ~ c
    log         v ~ a*log2(n) + b              (a > 0)
    power       log2(v) ~ alpha*log2(n) + b
    stretched   log2(v) ~ coeff*n^alpha + b    (0 < alpha < 1)
    exp         log2(v) ~ rate*n + b

Every candidate is scored by its residual standard error in log2-value
space (root of the residual sum of squares over degrees of freedom), so
scores are comparable across families and extra parameters earn no free
advantage.  The winner is the simplest family (in the order above)
whose score is within 5% of the best.  Two admissibility guards keep
neighbouring families from poaching: the stretched alpha is confined to
(0.02, 0.98), because at the ends it degenerates into the power family
(below) or the exponential family (above); and every non-constant
family must fit a trend swing of at least four times its own residual,
otherwise it is merely reshaping noise around a constant.

The classes form a total order by eventual size — exponential decay
below power decay below constant below logarithmic growth below power
growth and so on — with parameters breaking ties inside a family and
fit uncertainty deciding equality.  Bounded multiplicative factors are
deliberately invisible: two constants are always equal, and rescaling
a sequence never changes its class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from .errors import DomainError, InsufficientDataError

MODEL_ORDER = ("constant", "log", "power", "stretched", "exp")

_MARGIN = 1.05
_TIE = 1e-12
_ALPHA_EDGE = 0.02
_SWING_FACTOR = 4.0
_MIN_POINTS = 8
_MIN_SPAN = 100.0


@dataclass(frozen=True)
class SeriesSample:
    """Positive sequence samples (n, value) on a strictly increasing grid."""

    ns: np.ndarray
    values: np.ndarray


def make_series(ns, values) -> SeriesSample:
    n_arr = np.asarray(ns, dtype=np.float64)
    v_arr = np.asarray(values, dtype=np.float64)
    if n_arr.ndim != 1 or n_arr.shape != v_arr.shape:
        raise DomainError(
            f"ns and values must be 1-d and equal length, got shapes "
            f"{n_arr.shape} and {v_arr.shape}"
        )
    if n_arr.size < _MIN_POINTS:
        raise InsufficientDataError(
            f"need >= {_MIN_POINTS} samples to classify, got {n_arr.size}"
        )
    if np.any(np.diff(n_arr) <= 0):
        raise DomainError("sample grid must be strictly increasing")
    if n_arr[0] <= 0:
        raise DomainError(f"sample grid must be positive, starts at {n_arr[0]}")
    if n_arr[-1] / n_arr[0] < _MIN_SPAN:
        raise InsufficientDataError(
            f"sample grid must span >= 2 decades, got {n_arr[0]}..{n_arr[-1]}"
        )
    if not np.all(np.isfinite(v_arr)) or np.any(v_arr <= 0):
        raise DomainError("values must be finite and > 0")
    return SeriesSample(ns=n_arr, values=v_arr)


@dataclass(frozen=True)
class OrderClass:
    """One growth family with fitted parameters and per-family scores."""

    tag: str
    params: dict
    stderr: dict
    residuals: dict


def make_order(tag: str, **params) -> OrderClass:
    """Hand-build a class (for comparisons) with zero fit uncertainty."""
    if tag not in MODEL_ORDER:
        raise DomainError(f"tag must be one of {MODEL_ORDER}, got {tag!r}")
    return OrderClass(tag=tag, params=dict(params), stderr={}, residuals={})


def _rms(errors: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(errors))))


def _score(log_v: np.ndarray, pred: np.ndarray, n_params: int):
    """Residual standard error in log2-value space, or None when the
    fitted trend is too small to distinguish from a constant."""
    dof = max(log_v.size - n_params, 1)
    rse = float(np.sqrt(np.sum(np.square(log_v - pred)) / dof))
    if n_params > 1:
        swing = float(np.max(pred) - np.min(pred))
        if swing <= _SWING_FACTOR * rse:
            return None
    return rse


def _fit_constant(ns, values, log_v):
    c = float(np.mean(values))
    score = _score(log_v, np.full_like(log_v, np.log2(c)), 1)
    err = float(np.std(values, ddof=1) / np.sqrt(values.size))
    return score, {"c": c}, {"c": err}


def _fit_log(ns, values, log_n, log_v):
    res = stats.linregress(log_n, values)
    a, b = float(res.slope), float(res.intercept)
    if a <= 0:
        return None
    pred = a * log_n + b
    if np.any(pred <= 0):
        return None
    score = _score(log_v, np.log2(pred), 2)
    if score is None:
        return None
    return score, {"a": a, "b": b}, {
        "a": float(res.stderr), "b": float(res.intercept_stderr)
    }


def _fit_power(log_n, log_v):
    res = stats.linregress(log_n, log_v)
    alpha, b = float(res.slope), float(res.intercept)
    if abs(alpha) < 1e-9:
        return None
    score = _score(log_v, alpha * log_n + b, 2)
    if score is None:
        return None
    return score, {"alpha": alpha, "b": b}, {
        "alpha": float(res.stderr), "b": float(res.intercept_stderr)
    }


def _stretched_profile(alpha, ns, log_v):
    """Best (coeff, b) for log2(v) ~ coeff*n^alpha + b at fixed alpha."""
    basis = np.stack([np.power(ns, alpha), np.ones_like(ns)], axis=1)
    sol, *_ = np.linalg.lstsq(basis, log_v, rcond=None)
    return _rms(log_v - basis @ sol), sol


def _fit_stretched(ns, log_n, log_v):
    # log2(v) = coeff * n^alpha + b.  The offset absorbs bounded scale
    # factors; alpha is profiled (coarse scan plus local refinement)
    # because the model is nonlinear in it.  An optimum pinned at either
    # end of (0, 1) means the data really wants the power family (below)
    # or the exponential family (above), so those ends are inadmissible.
    if ns.size < 5:
        return None
    coarse = np.linspace(_ALPHA_EDGE, 1.0 - _ALPHA_EDGE, 49)
    scores = [_stretched_profile(a, ns, log_v)[0] for a in coarse]
    seed_alpha = float(coarse[int(np.argmin(scores))])
    res = optimize.minimize_scalar(
        lambda a: _stretched_profile(a, ns, log_v)[0],
        bounds=(max(_ALPHA_EDGE - 0.005, seed_alpha - 0.02),
                min(1.0 - _ALPHA_EDGE + 0.005, seed_alpha + 0.02)),
        method="bounded",
        options={"xatol": 1e-7},
    )
    alpha = float(res.x)
    if not (_ALPHA_EDGE < alpha < 1.0 - _ALPHA_EDGE):
        return None
    _, (coeff, b) = _stretched_profile(alpha, ns, log_v)
    coeff = float(coeff)
    b = float(b)
    if abs(coeff) < 1e-9:
        return None
    power_n = np.power(ns, alpha)
    score = _score(log_v, coeff * power_n + b, 3)
    if score is None:
        return None
    # Standard errors by linearizing around the optimum.
    jac = np.stack([coeff * power_n * np.log(ns), power_n, np.ones_like(ns)],
                   axis=1)
    try:
        cov = score**2 * np.linalg.inv(jac.T @ jac)
        err_alpha = float(np.sqrt(max(cov[0, 0], 0.0)))
        err_coeff = float(np.sqrt(max(cov[1, 1], 0.0)))
    except np.linalg.LinAlgError:
        err_alpha = float("nan")
        err_coeff = float("nan")
    return score, {"alpha": alpha, "coeff": coeff, "b": b}, {
        "alpha": err_alpha, "coeff": err_coeff
    }


def _fit_exp(ns, log_v):
    res = stats.linregress(ns, log_v)
    rate, b = float(res.slope), float(res.intercept)
    if abs(rate) < 1e-12:
        return None
    score = _score(log_v, rate * ns + b, 2)
    if score is None:
        return None
    return score, {"rate": rate, "b": b}, {
        "rate": float(res.stderr), "b": float(res.intercept_stderr)
    }


def fit_order(series: SeriesSample, allowed=None) -> OrderClass:
    """Fit all five families and pick the simplest within 5% of the best.

    `allowed` optionally restricts the candidate families to a subset of
    MODEL_ORDER; residuals are still reported for every family.
    """
    if allowed is None:
        allowed = MODEL_ORDER
    else:
        allowed = tuple(allowed)
        unknown = [tag for tag in allowed if tag not in MODEL_ORDER]
        if unknown or not allowed:
            raise DomainError(f"unknown model families: {unknown or allowed}")
    ns = np.asarray(series.ns, dtype=np.float64)
    values = np.asarray(series.values, dtype=np.float64)
    log_n = np.log2(ns)
    log_v = np.log2(values)

    fits = {
        "constant": _fit_constant(ns, values, log_v),
        "log": _fit_log(ns, values, log_n, log_v),
        "power": _fit_power(log_n, log_v),
        "stretched": _fit_stretched(ns, log_n, log_v),
        "exp": _fit_exp(ns, log_v),
    }
    residuals = {
        tag: (float("inf") if fit is None else fit[0])
        for tag, fit in fits.items()
    }
    best = min(residuals[tag] for tag in allowed)
    if not np.isfinite(best):
        raise DomainError("no growth family is admissible for this series")
    for tag in MODEL_ORDER:
        fit = fits[tag]
        if tag in allowed and fit is not None and fit[0] <= _MARGIN * best + _TIE:
            return OrderClass(
                tag=tag, params=fit[1], stderr=fit[2], residuals=residuals
            )
    raise AssertionError("unreachable: the best fit admits itself")


def _tier(order: OrderClass):
    """Sort key for the total order, with matching uncertainty widths.

    The leading integer ranks the families by eventual size; later
    components order within a family, each paired with the fitted
    uncertainty used for equality.
    """
    tag = order.tag
    if tag == "constant":
        return (0,), (0.0,)
    if tag == "log":
        return (1,), (0.0,)
    if tag == "power":
        alpha = float(order.params["alpha"])
        err = float(order.stderr.get("alpha", 0.0))
        rank = 2 if alpha > 0 else -2
        return (rank, alpha), (0.0, err)
    if tag == "stretched":
        alpha = float(order.params["alpha"])
        coeff = float(order.params["coeff"])
        e_a = float(order.stderr.get("alpha", 0.0))
        e_c = float(order.stderr.get("coeff", 0.0))
        if coeff > 0:
            return (3, alpha, coeff), (0.0, e_a, e_c)
        return (-3, -alpha, coeff), (0.0, e_a, e_c)
    if tag == "exp":
        rate = float(order.params["rate"])
        err = float(order.stderr.get("rate", 0.0))
        rank = 4 if rate > 0 else -4
        return (rank, rate), (0.0, err)
    raise DomainError(f"unknown class tag {tag!r}")


def compare_orders(o1: OrderClass, o2: OrderClass) -> str:
    """Total order on classes: returns 'less', 'equal', or 'greater'."""
    key1, err1 = _tier(o1)
    key2, err2 = _tier(o2)
    if key1[0] != key2[0]:
        return "less" if key1[0] < key2[0] else "greater"
    for a, b, ea, eb in zip(key1[1:], key2[1:], err1[1:], err2[1:]):
        tol = ea + eb + _TIE
        if a < b - tol:
            return "less"
        if a > b + tol:
            return "greater"
    return "equal"
