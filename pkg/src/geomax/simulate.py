"""Seeded playout of the elimination game and Monte Carlo estimation.

A turn rolls every remaining die once and removes each die showing a
value equal to the current dice count. play_game records a single game
throw by throw; the Monte Carlo entry points play games in fixed-size
chunks, vectorized across games, with an independent RNG substream per
chunk derived from (seed, chunk index). Chunk boundaries depend only on
the trial count, and chunk results merge by plain integer addition, so
estimates are bit-identical across runs and across any parallel
scheduling of chunks.

Signatures: the sequence of values shown by removed dice, in removal
order (ties within a turn in ascending original die order; they all show
the same value, so the signature itself is unaffected).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .moments import cdf
from .params import FLOAT, GameNotFinishedError, GameParams, NumericMode

#: A game exceeding this many turns aborts with GameNotFinishedError.
TURN_CAP = 10**9

#: Trials per RNG substream in the Monte Carlo drivers.
CHUNK_TRIALS = 1 << 16

#: enumerate_signatures refuses n above this (2**23 signatures at n=24).
MAX_ENUMERATION_DICE = 24


@dataclass(frozen=True)
class GameRecord:
    """Full transcript of one game.

    turns[t] holds the faces shown in turn t by the dice still on the
    table, in ascending original die order. removed_per_turn[t] counts
    how many of them matched the dice count and left.
    """

    params: GameParams
    turns: tuple[tuple[int, ...], ...]
    removed_per_turn: tuple[int, ...]
    signature: tuple[int, ...]
    turn_count: int


@dataclass(frozen=True)
class McEstimate:
    mean: float
    variance: float
    std_error_mean: float
    trials: int
    seed: int


def _require_playable(params: GameParams) -> None:
    if params.n > params.s:
        raise ValueError(
            "the game cannot be played with n > s: no die can show the "
            "dice count, so nothing would ever be removed"
        )


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    return seed


def play_game(
    params: GameParams,
    seed: int | None = None,
    roll_source: Iterable[int] | None = None,
) -> GameRecord:
    """Play one game and return its transcript.

    Faces come from roll_source when given (any iterable of ints in
    1..s, consumed left to right, one per die per turn), otherwise from
    a generator seeded with seed. Exhausting a roll_source mid-game or
    feeding it an out-of-range face raises ValueError.
    """
    _require_playable(params)
    n, s = params.n, params.s
    source: Iterator[int]
    if roll_source is not None:
        source = iter(roll_source)

        def draw(count: int) -> list[int]:
            faces = []
            for _ in range(count):
                try:
                    face = next(source)
                except StopIteration:
                    raise ValueError("roll source exhausted before the game ended")
                face = int(face)
                if not 1 <= face <= s:
                    raise ValueError(f"face {face} outside 1..{s}")
                faces.append(face)
            return faces

    else:
        rng = np.random.default_rng(_check_seed(seed) if seed is not None else None)

        def draw(count: int) -> list[int]:
            return [int(f) for f in rng.integers(1, s + 1, size=count)]

    turns: list[tuple[int, ...]] = []
    removed_per_turn: list[int] = []
    signature: list[int] = []
    alive = n
    while alive > 0:
        if len(turns) >= TURN_CAP:
            raise GameNotFinishedError(f"game still running after {TURN_CAP} turns")
        faces = draw(alive)
        removed = sum(1 for face in faces if face == alive)
        turns.append(tuple(faces))
        removed_per_turn.append(removed)
        signature.extend([alive] * removed)
        alive -= removed
    return GameRecord(
        params=params,
        turns=tuple(turns),
        removed_per_turn=tuple(removed_per_turn),
        signature=tuple(signature),
        turn_count=len(turns),
    )


def enumerate_signatures(n: int) -> list[tuple[int, ...]]:
    """All 2**(n-1) attainable signatures, lexicographically descending.

    Built from the block structure: a signature of n dice is i copies of
    n (the dice removed the first time anything leaves) followed by any
    signature of the remaining n - i dice.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("n must be a positive integer")
    if n > MAX_ENUMERATION_DICE:
        raise ValueError(
            f"n={n} would enumerate 2**{n - 1} signatures; refusing above "
            f"n={MAX_ENUMERATION_DICE}"
        )
    levels: list[list[tuple[int, ...]]] = [[()]]
    for m in range(1, n + 1):
        block: list[tuple[int, ...]] = []
        for i in range(m, 0, -1):
            prefix = (m,) * i
            block.extend(prefix + rest for rest in levels[m - i])
        levels.append(block)
    return levels[n]


def is_valid_signature(values: Iterable[int]) -> bool:
    """True when values could be the signature of a len(values)-dice game."""
    sig = tuple(values)
    remaining = len(sig)
    idx = 0
    while remaining > 0:
        run = 0
        while idx + run < len(sig) and sig[idx + run] == remaining:
            run += 1
        if run == 0:
            return False
        idx += run
        remaining -= run
    return idx == len(sig)


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, chunk_index)))


def _play_chunk(
    params: GameParams,
    count: int,
    rng: np.random.Generator,
    want_signatures: bool,
) -> tuple[np.ndarray, list[list[int]] | None]:
    """Play `count` games at once; returns turn counts and optional signatures."""
    n, s = params.n, params.s
    alive = np.full(count, n, dtype=np.int64)
    turn_counts = np.zeros(count, dtype=np.int64)
    active = np.arange(count, dtype=np.int64)
    signatures: list[list[int]] | None = (
        [[] for _ in range(count)] if want_signatures else None
    )
    turn = 0
    while active.size:
        turn += 1
        if turn > TURN_CAP:
            raise GameNotFinishedError(f"chunk still running after {TURN_CAP} turns")
        counts = alive[active]
        faces = rng.integers(1, s + 1, size=int(counts.sum()))
        needed = np.repeat(counts, counts)
        hits = (faces == needed).astype(np.int64)
        offsets = np.zeros(counts.size, dtype=np.int64)
        np.cumsum(counts[:-1], out=offsets[1:])
        removed = np.add.reduceat(hits, offsets)
        turn_counts[active] += 1
        if signatures is not None:
            for local in np.nonzero(removed)[0]:
                game = int(active[local])
                signatures[game].extend([int(counts[local])] * int(removed[local]))
        survivors = counts - removed
        alive[active] = survivors
        active = active[survivors > 0]
    return turn_counts, signatures


def _chunks(trials: int) -> Iterator[tuple[int, int]]:
    index = 0
    done = 0
    while done < trials:
        size = min(CHUNK_TRIALS, trials - done)
        yield index, size
        index += 1
        done += size


def monte_carlo_moments(params: GameParams, trials: int, seed: int) -> McEstimate:
    """Sample mean and variance of the turn count over seeded games.

    Accumulates exact integer sums per chunk, so the estimate is a pure
    function of (params, trials, seed).
    """
    _require_playable(params)
    _check_seed(seed)
    if trials < 2:
        raise ValueError("need at least 2 trials for a variance")
    total = 0
    total_sq = 0
    for index, size in _chunks(trials):
        turn_counts, _ = _play_chunk(params, size, _chunk_rng(seed, index), False)
        total += int(turn_counts.sum())
        total_sq += int((turn_counts * turn_counts).sum())
    mean = total / trials
    # exact integer numerator: no cancellation between the two big sums
    variance = (trials * total_sq - total * total) / (trials * (trials - 1))
    return McEstimate(
        mean=mean,
        variance=variance,
        std_error_mean=math.sqrt(variance / trials),
        trials=trials,
        seed=seed,
    )


def turn_count_histogram(params: GameParams, trials: int, seed: int) -> np.ndarray:
    """Counts of observed turn counts; index y holds how many games took y turns."""
    _require_playable(params)
    _check_seed(seed)
    if trials < 1:
        raise ValueError("trials must be positive")
    hist = np.zeros(1, dtype=np.int64)
    for index, size in _chunks(trials):
        turn_counts, _ = _play_chunk(params, size, _chunk_rng(seed, index), False)
        bc = np.bincount(turn_counts)
        if bc.size > hist.size:
            bc[: hist.size] += hist
            hist = bc
        else:
            hist[: bc.size] += bc
    return hist


def signature_frequencies(params: GameParams, trials: int, seed: int) -> Counter:
    """Observed signature counts over seeded games, keyed by tuple."""
    _require_playable(params)
    _check_seed(seed)
    if trials < 1:
        raise ValueError("trials must be positive")
    freq: Counter = Counter()
    for index, size in _chunks(trials):
        _, signatures = _play_chunk(params, size, _chunk_rng(seed, index), True)
        assert signatures is not None
        freq.update(tuple(sig) for sig in signatures)
    return freq


def ks_statistic(histogram: np.ndarray, params: GameParams, mode: NumericMode = FLOAT) -> float:
    """Sup distance between the empirical turn-count CDF and the model CDF."""
    trials = int(histogram.sum())
    if trials < 1:
        raise ValueError("empty histogram")
    cumulative = np.cumsum(histogram)
    worst = 0.0
    for y in range(1, histogram.size):
        gap = abs(cumulative[y] / trials - cdf(params, y, mode))
        if gap > worst:
            worst = gap
    return worst


def ks_critical_value(trials: int, alpha: float = 0.001) -> float:
    """Asymptotic one-sample KS critical value; conservative for discrete data."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return math.sqrt(-math.log(alpha / 2.0) / 2.0) / math.sqrt(trials)
