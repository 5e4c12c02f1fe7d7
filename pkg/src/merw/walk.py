"""Direct simulation of the multi-dimensional elephant random walk.

The next step repeats a uniformly chosen past step with probability p and
otherwise moves to one of the other 2d-1 directions uniformly.  Because the
remembered time is uniform over the past, the step law depends on the
history only through the per-direction step counts, so a path is simulated
with O(2d) state no matter how long it runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .params import DEFAULT_DESIGNATED, ModelParams, ParameterError, StepDirection


@dataclass
class WalkState:
    """Walk after n steps: position S_n and per-direction step counts."""

    n: int
    position: np.ndarray          # shape (d,), int64
    direction_counts: np.ndarray  # shape (2d,), int64

    @classmethod
    def origin(cls, d: int) -> "WalkState":
        return cls(
            n=0,
            position=np.zeros(d, dtype=np.int64),
            direction_counts=np.zeros(2 * d, dtype=np.int64),
        )

    def apply(self, step: StepDirection) -> None:
        """Advance the state in place by one step."""
        self.n += 1
        self.direction_counts[step.colour] += 1
        self.position[step.axis] += step.sign


@dataclass(frozen=True)
class PathSnapshot:
    """Positions of a single path recorded at a strictly increasing time grid."""

    times: tuple[int, ...]
    positions: np.ndarray  # shape (len(times), d), int64


def sample_first_step(
    params: ModelParams,
    rng: np.random.Generator,
    designated: StepDirection | None = None,
) -> StepDirection:
    """Draw the initial step: ``designated`` with probability q, else uniform
    over the remaining 2d-1 directions."""
    designated = designated or DEFAULT_DESIGNATED
    twod = params.n_colours
    if designated.colour >= twod:
        raise ParameterError(
            f"designated direction {designated} does not exist in dimension {params.d}"
        )
    if rng.random() < params.q:
        return designated
    other = int(rng.integers(0, twod - 1))
    if other >= designated.colour:
        other += 1
    return StepDirection.from_colour(other)


def sample_step(
    state: WalkState, params: ModelParams, rng: np.random.Generator
) -> StepDirection:
    """Draw the next step from a state with at least one past step.

    Two-stage draw: a remembered direction is chosen with probability
    proportional to its count (an exact integer draw, no float division),
    then kept with probability p or replaced by a uniform draw from the
    other 2d-1 directions.
    """
    if state.n < 1:
        raise ValueError("sample_step requires n >= 1; use sample_first_step for the first step")
    m = int(rng.integers(0, state.n))
    cumulative = 0
    remembered = 0
    for colour, count in enumerate(state.direction_counts):
        cumulative += int(count)
        if m < cumulative:
            remembered = colour
            break
    if rng.random() < params.p:
        return StepDirection.from_colour(remembered)
    twod = params.n_colours
    other = int(rng.integers(0, twod - 1))
    if other >= remembered:
        other += 1
    return StepDirection.from_colour(other)


def step_distribution(counts: Sequence[int], params: ModelParams) -> np.ndarray:
    """Marginal law of the next step given direction counts.

    Computed as the remembered-direction mixture: each past direction sigma
    is remembered with weight counts[sigma]/n and then contributes p to
    itself and (1-p)/(2d-1) to every other direction.
    """
    counts = np.asarray(counts, dtype=np.float64)
    twod = params.n_colours
    if counts.shape != (twod,):
        raise ParameterError(f"expected {twod} direction counts, got shape {counts.shape}")
    n = counts.sum()
    if n <= 0:
        raise ValueError("step_distribution requires at least one past step")
    off = (1.0 - params.p) / (twod - 1)
    kernel = np.full((twod, twod), off)
    np.fill_diagonal(kernel, params.p)
    return kernel @ (counts / n)


def step_distribution_exact(counts: Sequence[int], params: ModelParams) -> list[Fraction]:
    """Exact rational version of :func:`step_distribution`."""
    twod = params.n_colours
    counts = [int(c) for c in counts]
    if len(counts) != twod:
        raise ParameterError(f"expected {twod} direction counts, got {len(counts)}")
    n = sum(counts)
    if n <= 0:
        raise ValueError("step_distribution_exact requires at least one past step")
    p = params.p_as_fraction()
    off = (1 - p) / (twod - 1)
    out = [Fraction(0)] * twod
    for sigma, count in enumerate(counts):
        if count == 0:
            continue
        weight = Fraction(count, n)
        for tau in range(twod):
            out[tau] += weight * (p if tau == sigma else off)
    return out


def simulate_path(
    params: ModelParams,
    n_max: int,
    snapshot_times: Iterable[int],
    rng: np.random.Generator,
    designated: StepDirection | None = None,
) -> PathSnapshot:
    """Run one path to time ``n_max`` and record S_t at the requested times.

    Times are sorted and deduplicated; time 0 is allowed and yields the
    origin.  Memory stays O(2d) regardless of n_max, and the result is a
    deterministic function of the generator state.
    """
    times = sorted(set(int(t) for t in snapshot_times))
    if times and (times[0] < 0 or times[-1] > n_max):
        raise ParameterError(
            f"snapshot times must lie in [0, {n_max}], got range [{times[0]}, {times[-1]}]"
        )
    if n_max < 0:
        raise ParameterError(f"n_max must be nonnegative, got {n_max}")
    state = WalkState.origin(params.d)
    recorded = np.zeros((len(times), params.d), dtype=np.int64)
    wanted = {t: i for i, t in enumerate(times)}
    for t in range(1, n_max + 1):
        if t == 1:
            step = sample_first_step(params, rng, designated)
        else:
            step = sample_step(state, params, rng)
        state.apply(step)
        if t in wanted:
            recorded[wanted[t]] = state.position
    return PathSnapshot(times=tuple(times), positions=recorded)
