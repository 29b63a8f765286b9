"""Shared parameter and result types for the elimination-game turn count.

The game: n dice with s faces each are rolled together once per turn, and
every die showing a value equal to the current number of dice is removed.
The number of turns until no dice remain is distributed as the maximum of
n independent geometric variables with success probability 1/s, which is
what every evaluator in this package computes.

Exact mode returns ``fractions.Fraction`` values; float mode returns IEEE
doubles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class CancellationError(ArithmeticError):
    """Alternating-sum evaluation lost too many digits and fallback was off."""


class GameNotFinishedError(RuntimeError):
    """A simulated game hit the iteration cap before all dice were removed."""


@dataclass(frozen=True)
class NumericMode:
    """Arithmetic regime for the evaluators.

    kind "exact" evaluates every finite formula in arbitrary-precision
    rationals. Infinite series have no exact finite evaluation, so series
    entry points route to the closed forms in that mode. kind "float"
    uses doubles with compensated summation and tail-bounded truncation;
    truncation_epsilon is the absolute tail mass at which series stop.
    """

    kind: str = "float"
    truncation_epsilon: float = 1e-13

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown numeric mode kind {self.kind!r}")
        if not self.truncation_epsilon > 0:
            raise ValueError("truncation_epsilon must be positive")

    @property
    def exact(self) -> bool:
        return self.kind == "exact"


FLOAT = NumericMode("float")
EXACT = NumericMode("exact")


@dataclass(frozen=True)
class GameParams:
    """Game size: n dice, each with s faces.

    The playable game needs n <= s (while more dice than faces remain, no
    die can show the current dice count and nothing is ever removed). The
    distribution formulas stay valid for any n >= 1, so relaxed=True lifts
    the n <= s check for the analytic evaluators; the simulator refuses
    such parameters regardless.
    """

    n: int
    s: int
    relaxed: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or isinstance(self.s, bool):
            raise ValueError("n and s must be integers")
        if not isinstance(self.n, int) or not isinstance(self.s, int):
            raise ValueError("n and s must be integers")
        if self.n < 1 or self.s < 1:
            raise ValueError("n and s must both be at least 1")
        if self.n > self.s and not self.relaxed:
            raise ValueError(
                f"n={self.n} exceeds s={self.s}; pass relaxed=True to evaluate anyway"
            )

    @property
    def p(self) -> float:
        """Per-turn removal probability of a single die, as a double."""
        return 1.0 / self.s

    @property
    def q(self) -> float:
        return 1.0 - 1.0 / self.s

    @property
    def p_exact(self) -> Fraction:
        return Fraction(1, self.s)

    @property
    def q_exact(self) -> Fraction:
        return 1 - Fraction(1, self.s)


#: Provenance tags a MomentReport may carry.
METHODS = ("closed-alternating", "series", "recursive", "matrix-power", "monte-carlo")


@dataclass(frozen=True)
class MomentReport:
    """Mean, second moment and variance of the turn count, with provenance.

    error_bound is an absolute estimate covering all three figures; exact
    evaluations report 0. variance always equals
    second_moment - mean**2 as computed, so the identity holds to rounding.
    """

    mean: float | Fraction
    second_moment: float | Fraction
    variance: float | Fraction
    method: str
    error_bound: float | Fraction

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if self.error_bound < 0:
            raise ValueError("error_bound must be nonnegative")
