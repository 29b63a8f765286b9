"""Distribution and moment checks for the throw-by-throw evaluators.

The heavyweight oracle here enumerates the game tree literally: every
combination of faces each turn, with exact rational probabilities. It
knows nothing about geometric variables, so agreement with the closed
formulas is a real end-to-end check of the model.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomax import (
    CANCELLATION_TOLERANCE,
    EXACT,
    FLOAT,
    CancellationError,
    GameParams,
    NumericMode,
    cdf,
    expected_value_closed,
    expected_value_series,
    pair_expected_value,
    pmf,
    quantile,
    second_moment_closed,
    second_moment_series,
    variance_closed,
)


def game_tree_cdf(n: int, s: int, y: int) -> Fraction:
    """P(game over within y turns) by brute enumeration of all face rolls."""

    @lru_cache(maxsize=None)
    def finish_within(alive: int, turns_left: int) -> Fraction:
        if alive == 0:
            return Fraction(1)
        if turns_left == 0:
            return Fraction(0)
        step = Fraction(1, s**alive)
        total = Fraction(0)
        for faces in product(range(1, s + 1), repeat=alive):
            removed = sum(1 for f in faces if f == alive)
            total += step * finish_within(alive - removed, turns_left - 1)
        return total

    return finish_within(n, y)


small_params = st.integers(1, 8).flatmap(
    lambda s: st.integers(1, s).map(lambda n: GameParams(n=n, s=s))
)


class TestDistribution:
    @pytest.mark.parametrize(
        "n,s,y",
        [(2, 2, 1), (2, 2, 2), (2, 2, 3), (1, 3, 2), (2, 3, 2), (3, 3, 3), (3, 2, 0)],
    )
    def test_cdf_matches_game_tree(self, n, s, y):
        if n > s:
            pytest.skip("unplayable")
        params = GameParams(n, s)
        assert cdf(params, y, EXACT) == game_tree_cdf(n, s, y)

    def test_two_dice_two_faces_frozen_values(self):
        params = GameParams(2, 2)
        # game-tree value; both dice gone in one turn 1/4 of the time
        assert cdf(params, 1, EXACT) == Fraction(1, 4)
        assert cdf(params, 2, EXACT) == Fraction(9, 16)
        assert pmf(params, 2, EXACT) == Fraction(5, 16)
        assert pmf(params, 2) == pytest.approx(5 / 16, abs=1e-15)

    def test_cdf_below_support_is_zero(self):
        params = GameParams(3, 4)
        assert cdf(params, 0) == 0.0
        assert cdf(params, -5, EXACT) == 0
        with pytest.raises(ValueError):
            pmf(params, 0)

    @given(small_params, st.integers(1, 60))
    def test_pmf_telescopes_exactly(self, params, y):
        assert pmf(params, y, EXACT) == cdf(params, y, EXACT) - cdf(params, y - 1, EXACT)

    @settings(max_examples=60)
    @given(small_params, st.integers(1, 200))
    def test_pmf_telescopes_in_float(self, params, y):
        gap = pmf(params, y) - (cdf(params, y) - cdf(params, y - 1))
        assert abs(gap) <= 1e-12

    @given(small_params, st.integers(1, 100))
    def test_cdf_monotone_and_in_unit_interval(self, params, y):
        lo = cdf(params, y, EXACT)
        hi = cdf(params, y + 1, EXACT)
        assert 0 <= lo <= hi <= 1

    @given(small_params, st.integers(1, 40))
    def test_exact_normalization(self, params, y):
        total = sum(pmf(params, t, EXACT) for t in range(1, y + 1))
        assert total + (1 - cdf(params, y, EXACT)) == 1

    def test_float_normalization_spot(self):
        for n, s in [(1, 1), (2, 2), (3, 7), (12, 12)]:
            params = GameParams(n, s)
            total = math.fsum(pmf(params, y) for y in range(1, 201))
            assert abs(total - cdf(params, 200)) <= 1e-12


class TestClosedMoments:
    def test_single_die_mean_is_face_count(self):
        for s in (1, 2, 5, 17, 60):
            assert expected_value_closed(GameParams(1, s), EXACT) == s

    def test_two_dice_frozen_values(self):
        assert expected_value_closed(GameParams(2, 2), EXACT) == Fraction(8, 3)
        assert second_moment_closed(GameParams(2, 2), EXACT) == Fraction(88, 9)
        assert variance_closed(GameParams(2, 2), EXACT) == Fraction(8, 3)
        assert expected_value_closed(GameParams(2, 10), EXACT) == Fraction(280, 19)

    def test_two_dice_identity_across_face_counts(self):
        # closed sum at n=2 collapses to (3s**2 - 2s)/(2s - 1)
        for s in range(2, 41):
            assert expected_value_closed(GameParams(2, s), EXACT) == pair_expected_value(s)

    def test_four_dice_six_faces_float(self):
        assert expected_value_closed(GameParams(4, 6)) == pytest.approx(
            11.926696, abs=5e-6
        )

    def test_one_face_degenerate(self):
        params = GameParams(1, 1)
        assert expected_value_closed(params, EXACT) == 1
        assert variance_closed(params, EXACT) == 0
        assert expected_value_series(params) == 1.0
        assert pmf(params, 1) == 1.0 and pmf(params, 2) == 0.0
        assert cdf(params, 1) == 1.0
        assert quantile(params, 0.42) == 1

    def test_mean_from_game_tree_tail_sum(self):
        # E = sum of survival probabilities; truncate far beyond the bulk
        params = GameParams(2, 2)
        tail_sum = sum(1 - game_tree_cdf(2, 2, y) for y in range(0, 120))
        assert float(tail_sum) == pytest.approx(8 / 3, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 30))
    def test_strictly_increasing_in_dice(self, s):
        n = min(s, 6)
        values = [expected_value_closed(GameParams(k, s), EXACT) for k in range(1, n + 1)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_strictly_increasing_in_faces(self):
        values = [expected_value_closed(GameParams(3, s), EXACT) for s in range(3, 20)]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestSeriesAgreement:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 20).flatmap(lambda n: st.integers(n, 20).map(lambda s: (n, s))))
    def test_series_matches_closed_float(self, ns):
        params = GameParams(*ns)
        assert abs(expected_value_series(params) - expected_value_closed(params)) < 1e-9
        assert abs(second_moment_series(params) - second_moment_closed(params)) < 1e-9

    def test_exact_mode_routes_to_closed(self):
        params = GameParams(3, 9)
        assert expected_value_series(params, EXACT) == expected_value_closed(params, EXACT)
        assert second_moment_series(params, EXACT) == second_moment_closed(params, EXACT)

    def test_truncation_epsilon_tightens_the_answer(self):
        params = GameParams(4, 11)
        rough = expected_value_series(params, NumericMode("float", truncation_epsilon=1e-4))
        fine = expected_value_series(params, NumericMode("float", truncation_epsilon=1e-14))
        exact = float(expected_value_closed(params, EXACT))
        assert abs(fine - exact) < abs(rough - exact) + 1e-13
        assert abs(fine - exact) < 1e-12


class TestCancellationPolicy:
    def test_large_alternating_sum_refuses_without_fallback(self):
        params = GameParams(45, 45)
        with pytest.raises(CancellationError):
            expected_value_closed(params, fallback=False)
        with pytest.raises(CancellationError):
            second_moment_closed(params, fallback=False)

    def test_fallback_lands_on_series_value(self):
        params = GameParams(45, 45)
        assert expected_value_closed(params) == expected_value_series(params)
        # sanity: the fallback value sits inside the coarse bracket
        assert params.s < expected_value_closed(params) < params.n * params.s

    def test_small_cases_stay_on_closed_path(self):
        # a float evaluation differing from the series by less than the
        # series truncation error implies no fallback occurred
        params = GameParams(2, 2)
        assert expected_value_closed(params, fallback=False) == pytest.approx(
            8 / 3, rel=1e-15
        )
        assert CANCELLATION_TOLERANCE == 1e-9


class TestQuantile:
    def test_frozen_example(self):
        # exact scan oracle: smallest y with (1 - (5/6)**y)**2 >= 99/100
        q = Fraction(5, 6)
        y_oracle = 1
        while (1 - q**y_oracle) ** 2 < Fraction(99, 100):
            y_oracle += 1
        assert y_oracle == 30
        assert quantile(GameParams(2, 6), 0.99) == 30
        assert quantile(GameParams(2, 6), 0.99, EXACT) == 30

    @given(small_params, st.floats(min_value=1e-6, max_value=1 - 1e-9))
    def test_inverse_property(self, params, prob):
        # Fraction-vs-float comparison is exact, so these checks are sharp
        y = quantile(params, prob, EXACT)
        assert y >= 1
        assert cdf(params, y, EXACT) >= prob
        if y > 1:
            assert cdf(params, y - 1, EXACT) < prob

    def test_level_extremes_rejected(self):
        params = GameParams(2, 3)
        for prob in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                quantile(params, prob)


class TestRelaxedParameters:
    def test_more_dice_than_faces_needs_opt_in(self):
        with pytest.raises(ValueError):
            GameParams(5, 2)
        params = GameParams(5, 2, relaxed=True)
        mean = expected_value_closed(params, EXACT)
        # more variables only push the maximum up
        assert mean > expected_value_closed(GameParams(2, 2), EXACT)
        assert mean == Fraction(2470, 651)

    def test_relaxed_float_and_series_agree(self):
        params = GameParams(7, 3, relaxed=True)
        assert expected_value_series(params) == pytest.approx(
            float(expected_value_closed(params, EXACT)), abs=1e-10
        )

    def test_invalid_sizes_rejected(self):
        for n, s in [(0, 3), (3, 0), (-1, 2)]:
            with pytest.raises(ValueError):
                GameParams(n, s)
        with pytest.raises(ValueError):
            GameParams(2.0, 3)  # type: ignore[arg-type]
