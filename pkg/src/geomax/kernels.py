"""Low-level numeric machinery shared by the evaluators.

Everything here is a pure function or a small value type, safe to call
from multiple threads. The pieces:

* closed forms for the power-weighted geometric series that back the
  second-moment algebra,
* an exact binomial table built by Pascal's rule,
* a Neumaier-compensated accumulator that tracks how large the partial
  sums got, which is what the cancellation diagnostics feed on,
* geometric tail bounds used to truncate the positive-term series.
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction
from functools import lru_cache

_EPS = sys.float_info.epsilon


def _check_open_unit(x) -> None:
    if not -1 < x < 1:
        raise ValueError(f"series diverges for |x| >= 1, got x={x!r}")


def weighted_geom_sum_first(x):
    """Sum of i * x**i over i >= 1, for |x| < 1.

    Works on floats and fractions alike; the closed form is x/(1-x)**2.
    """
    _check_open_unit(x)
    return x / (1 - x) ** 2


def weighted_geom_sum_second(x):
    """Sum of i**2 * x**i over i >= 1, for |x| < 1: x(1+x)/(1-x)**3."""
    _check_open_unit(x)
    return x * (1 + x) / (1 - x) ** 3


@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[int, ...]:
    row = (1,)
    for _ in range(n):
        row = (1, *(row[i] + row[i + 1] for i in range(len(row) - 1)), 1)
    return row


def binomial(n: int, k: int) -> int:
    """Exact C(n, k) from a cached Pascal-rule table.

    Rows are plain Python integers, so there is no overflow ceiling; the
    table grows on demand and is shared process-wide (lru_cache makes the
    row construction thread safe).
    """
    if n < 0 or k < 0:
        raise ValueError("binomial needs n >= 0 and k >= 0")
    if k > n:
        return 0
    return _pascal_row(n)[k]


def tail_bound_max_geom(n: int, q, start: int):
    """Upper bound on sum_{k >= start} (1 - (1 - q**k)**n).

    Uses 1 - (1-x)**n <= n*x termwise, then sums the geometric tail:
    n * q**start / (1 - q). Valid for 0 <= q < 1; q may be a float or a
    Fraction and the bound comes back in the same arithmetic.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if start < 0:
        raise ValueError("start must be nonnegative")
    if not 0 <= q < 1:
        raise ValueError(f"tail bound needs 0 <= q < 1, got {q!r}")
    return n * q**start / (1 - q)


def tail_bound_weighted_max_geom(n: int, q, start: int):
    """Upper bound on sum_{t >= start} (2t+1) * (1 - (1 - q**t)**n).

    Same termwise bound as tail_bound_max_geom with the linear weight
    folded in: (2*start + 3) * n * q**start * (1 + 2q/(1-q)) / (1-q).
    Slightly loose, and the (2*start + 3) factor can make it grow for
    small start; it decays geometrically once 2*start + 5 > 2/(1 - q),
    which is all the truncation logic needs.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if start < 0:
        raise ValueError("start must be nonnegative")
    if not 0 <= q < 1:
        raise ValueError(f"tail bound needs 0 <= q < 1, got {q!r}")
    return (2 * start + 3) * n * q**start * (1 + 2 * q / (1 - q)) / (1 - q)


class CompensatedAccumulator:
    """Neumaier-compensated float sum that remembers its largest partial.

    The running compensation keeps the folded sum within a few machine
    epsilons of the true sum of the terms as given. max_partial_magnitude
    records the largest magnitude any partial sum reached, which bounds
    how much cancellation the final value absorbed.
    """

    __slots__ = ("_sum", "_comp", "max_partial_magnitude")

    def __init__(self) -> None:
        self._sum = 0.0
        self._comp = 0.0
        self.max_partial_magnitude = 0.0

    def add(self, term: float) -> None:
        s = self._sum + term
        if abs(self._sum) >= abs(term):
            self._comp += (self._sum - s) + term
        else:
            self._comp += (term - s) + self._sum
        self._sum = s
        magnitude = abs(s + self._comp)
        if magnitude > self.max_partial_magnitude:
            self.max_partial_magnitude = magnitude

    @property
    def value(self) -> float:
        return self._sum + self._comp

    def error_estimate(self) -> float:
        """Absolute rounding-error estimate for value(), from the partials."""
        return 4.0 * _EPS * self.max_partial_magnitude

    def relative_cancellation(self) -> float:
        """Estimated relative error of value() due to cancellation."""
        v = abs(self.value)
        if v == 0.0:
            return math.inf if self.max_partial_magnitude > 0.0 else 0.0
        return self.error_estimate() / v
