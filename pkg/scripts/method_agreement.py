#!/usr/bin/env python3
"""Sweep all evaluation paths against each other and report the worst gaps.

Covers the closed alternating sums, the positive series, the chain
recursion, and the matrix-power route over every playable pair up to the
requested sizes, then spot-checks a few pairs against a seeded Monte
Carlo run. Exits nonzero if any analytic gap exceeds the tolerance or
any Monte Carlo estimate falls more than 4 standard errors out.

    python scripts/method_agreement.py --n-max 20 --s-max 20 --trials 200000
"""

from __future__ import annotations

import argparse
import math
import sys

from geomax import (
    EXACT,
    GameParams,
    expected_value_closed,
    expected_value_series,
    monte_carlo_moments,
    moments_by_power,
    second_moment_closed,
    second_moment_series,
    second_moments_recursive,
    variance_closed,
)

MC_SPOTS = [(2, 2), (3, 6), (5, 10)]


def analytic_sweep(n_max: int, s_max: int, tolerance: float) -> bool:
    """Closed/series/recursive within tolerance; power within its own bound."""
    worst = 0.0
    worst_at = None
    power_excess = 0.0
    for s in range(1, s_max + 1):
        for n in range(1, min(n_max, s) + 1):
            params = GameParams(n, s)
            mean = expected_value_closed(params)
            m2 = second_moment_closed(params)
            profile = second_moments_recursive(params)
            gap = max(
                abs(mean - expected_value_series(params)),
                abs(m2 - second_moment_series(params)),
                abs(mean - profile.first_moments[n]),
                abs(m2 - profile.second_moments[n]),
            )
            if gap > worst:
                worst, worst_at = gap, (n, s)
            power_mean, power_m2, power_err = moments_by_power(params)
            power_gap = max(abs(mean - power_mean), abs(m2 - power_m2))
            power_excess = max(power_excess, power_gap - power_err)
    print(f"three-way sweep n<={n_max}, s<={s_max}: worst gap {worst:.3e} at {worst_at}")
    print(f"matrix-power route: worst gap minus reported bound {power_excess:.3e}")
    ok = worst <= tolerance and power_excess <= 0.0
    if not ok:
        print(f"  outside tolerance {tolerance:g} or reported bound", file=sys.stderr)
    return ok


def monte_carlo_spots(trials: int, seed: int) -> float:
    worst_z = 0.0
    for n, s in MC_SPOTS:
        params = GameParams(n, s)
        est = monte_carlo_moments(params, trials, seed)
        mean_true = float(expected_value_closed(params, EXACT))
        var_true = float(variance_closed(params, EXACT))
        z = abs(est.mean - mean_true) / math.sqrt(var_true / trials)
        worst_z = max(worst_z, z)
        print(
            f"monte carlo ({n},{s}) trials={trials}: mean {est.mean:.6f} "
            f"vs {mean_true:.6f} (z={z:.2f}), variance {est.variance:.4f} "
            f"vs {var_true:.4f}"
        )
    return worst_z


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=20)
    parser.add_argument("--s-max", type=int, default=20)
    parser.add_argument("--tolerance", type=float, default=1e-9)
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=20260822)
    args = parser.parse_args()

    analytic_ok = analytic_sweep(args.n_max, args.s_max, args.tolerance)
    worst_z = monte_carlo_spots(args.trials, args.seed)
    ok = analytic_ok and worst_z < 4.0
    print("agreement ok" if ok else "agreement FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
