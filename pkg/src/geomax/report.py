"""Assemble moment reports from any analytic evaluation path."""

from __future__ import annotations

from fractions import Fraction

from . import chain, moments
from .params import FLOAT, CancellationError, GameParams, MomentReport, NumericMode

#: Analytic methods moment_report accepts. "auto" is the closed route
#: with automatic series fallback; "closed" insists on the alternating
#: sums and raises CancellationError when they cannot deliver.
ANALYTIC_METHODS = ("auto", "closed", "series", "recursive", "matrix-power")


def _closed_report(params: GameParams, mode: NumericMode, fallback: bool) -> MomentReport:
    if mode.exact:
        mean = moments._closed_mean_exact(params)
        m2 = moments._closed_m2_exact(params)
        return MomentReport(
            mean=mean,
            second_moment=m2,
            variance=m2 - mean * mean,
            method="closed-alternating",
            error_bound=Fraction(0),
        )
    mean, mean_err, mean_cancel = moments._closed_mean_float(params)
    m2, m2_err, m2_cancel = moments._closed_m2_float(params)
    if max(mean_cancel, m2_cancel) > moments.CANCELLATION_TOLERANCE:
        if not fallback:
            raise CancellationError(
                f"closed alternating sums at n={params.n}, s={params.s} lost "
                "too much precision and fallback is disabled"
            )
        return _series_report(params, mode)
    return _pack_float(mean, m2, mean_err, m2_err, "closed-alternating")


def _series_report(params: GameParams, mode: NumericMode) -> MomentReport:
    if mode.exact:
        report = _closed_report(params, mode, fallback=False)
        return report
    eps = mode.truncation_epsilon
    mean, mean_err = moments._series_mean_float(params, eps)
    m2, m2_err = moments._series_m2_float(params, eps)
    return _pack_float(mean, m2, mean_err, m2_err, "series")


def _recursive_report(params: GameParams, mode: NumericMode) -> MomentReport:
    profile = chain.second_moments_recursive(params, mode)
    mean = profile.first_moments[params.n]
    assert profile.second_moments is not None
    m2 = profile.second_moments[params.n]
    if mode.exact:
        return MomentReport(
            mean=mean,
            second_moment=m2,
            variance=m2 - mean * mean,
            method="recursive",
            error_bound=Fraction(0),
        )
    # mild heuristic: the recursion is a positive cascade of n divisions
    scale = 2.0 ** -52 * 8.0 * params.n
    return _pack_float(mean, m2, scale * abs(mean), scale * abs(m2), "recursive")


def _power_report(params: GameParams, mode: NumericMode) -> MomentReport:
    mean, m2, err = chain.moments_by_power(params, mode)
    return _pack_float(mean, m2, err, err, "matrix-power")


def _pack_float(mean: float, m2: float, mean_err: float, m2_err: float, tag: str) -> MomentReport:
    variance = m2 - mean * mean
    var_err = m2_err + 2.0 * abs(mean) * mean_err + mean_err * mean_err
    return MomentReport(
        mean=mean,
        second_moment=m2,
        variance=variance,
        method=tag,
        error_bound=max(mean_err, m2_err, var_err),
    )


def moment_report(
    params: GameParams, mode: NumericMode = FLOAT, method: str = "auto"
) -> MomentReport:
    """Mean, second moment and variance by the requested analytic path.

    The report's method tag names the path that actually ran, which for
    "auto" under heavy cancellation is the series fallback. Exact-mode
    series requests route to the closed form; exact-mode matrix-power
    moments are rejected (that path sums a truncated series).
    """
    if method == "auto":
        return _closed_report(params, mode, fallback=True)
    if method == "closed":
        return _closed_report(params, mode, fallback=False)
    if method == "series":
        return _series_report(params, mode)
    if method == "recursive":
        return _recursive_report(params, mode)
    if method == "matrix-power":
        return _power_report(params, mode)
    raise ValueError(f"unknown method {method!r}; pick from {ANALYTIC_METHODS}")
