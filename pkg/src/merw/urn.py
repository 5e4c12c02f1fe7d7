"""The 2d-colour urn that reproduces the walk's law.

One ball is added per drawing: a ball is drawn uniformly, replaced, and a
ball of the same colour is added with probability p, otherwise a ball of a
uniformly chosen other colour.  Colour counts then encode the walk's
per-direction step counts, and the pairwise difference map recovers the
walk position.  The mean replacement matrix of these dynamics has fully
explicit spectral data, which is constructed here in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .params import DEFAULT_DESIGNATED, ModelParams, ParameterError, StepDirection


@dataclass
class UrnState:
    """Urn composition at time n: counts per colour, summing to n."""

    n: int
    counts: np.ndarray  # shape (2d,), int64

    def total(self) -> int:
        return int(self.counts.sum())


def init_urn(
    params: ModelParams,
    rng: np.random.Generator,
    designated: StepDirection | None = None,
) -> UrnState:
    """Start the urn with a single ball whose colour follows the first-step law."""
    designated = designated or DEFAULT_DESIGNATED
    twod = params.n_colours
    if designated.colour >= twod:
        raise ParameterError(
            f"designated direction {designated} does not exist in dimension {params.d}"
        )
    counts = np.zeros(twod, dtype=np.int64)
    if rng.random() < params.q:
        colour = designated.colour
    else:
        colour = int(rng.integers(0, twod - 1))
        if colour >= designated.colour:
            colour += 1
    counts[colour] = 1
    return UrnState(n=1, counts=counts)


def urn_step(state: UrnState, params: ModelParams, rng: np.random.Generator) -> UrnState:
    """One drawing: returns the urn with one more ball."""
    if state.n < 1:
        raise ValueError("urn_step requires an initialized urn (n >= 1); call init_urn first")
    m = int(rng.integers(0, state.n))
    cumulative = 0
    drawn = 0
    for colour, count in enumerate(state.counts):
        cumulative += int(count)
        if m < cumulative:
            drawn = colour
            break
    if rng.random() < params.p:
        added = drawn
    else:
        added = int(rng.integers(0, params.n_colours - 1))
        if added >= drawn:
            added += 1
    counts = state.counts.copy()
    counts[added] += 1
    return UrnState(n=state.n + 1, counts=counts)


def added_colour_distribution(counts: Sequence[int], params: ModelParams) -> np.ndarray:
    """Law of the added ball's colour given the current composition.

    Closed form per colour i: p * counts[i]/n + (1-p)/(2d-1) * (n-counts[i])/n.
    """
    counts = np.asarray(counts, dtype=np.float64)
    twod = params.n_colours
    if counts.shape != (twod,):
        raise ParameterError(f"expected {twod} colour counts, got shape {counts.shape}")
    n = counts.sum()
    if n <= 0:
        raise ValueError("added_colour_distribution requires a non-empty urn")
    return params.p * counts / n + (1.0 - params.p) / (twod - 1) * (n - counts) / n


def added_colour_distribution_exact(
    counts: Sequence[int], params: ModelParams
) -> list[Fraction]:
    """Exact rational version of :func:`added_colour_distribution`."""
    twod = params.n_colours
    counts = [int(c) for c in counts]
    if len(counts) != twod:
        raise ParameterError(f"expected {twod} colour counts, got {len(counts)}")
    n = sum(counts)
    if n <= 0:
        raise ValueError("added_colour_distribution_exact requires a non-empty urn")
    p = params.p_as_fraction()
    off = (1 - p) / (twod - 1)
    return [p * Fraction(c, n) + off * Fraction(n - c, n) for c in counts]


def project_counts(counts: np.ndarray) -> np.ndarray:
    """Pairwise difference map from colour counts to the walk position.

    Component k of the result is counts[2k] - counts[2k+1]; works on a
    single count vector or on a batch with colours along the last axis.
    """
    counts = np.asarray(counts)
    if counts.shape[-1] % 2 != 0:
        raise ParameterError(f"count vector length must be even, got {counts.shape[-1]}")
    return counts[..., 0::2] - counts[..., 1::2]


def project_to_walk(state: UrnState) -> np.ndarray:
    """Walk position encoded by the urn composition."""
    return project_counts(state.counts)


def pairing_matrix(d: int) -> np.ndarray:
    """The d x 2d matrix P of the difference map: position = P @ counts."""
    P = np.zeros((d, 2 * d))
    for k in range(d):
        P[k, 2 * k] = 1.0
        P[k, 2 * k + 1] = -1.0
    return P


@dataclass(frozen=True)
class SpectralData:
    """Mean replacement matrix with its closed-form eigenstructure.

    The matrix is p on the diagonal and (1-p)/(2d-1) off it; its eigenvalues
    are 1 (simple, with right eigenvector v1 = (1/2d)(1,...,1) and left
    eigenvector u1 = (1,...,1)) and lambda2 = (2dp-1)/(2d-1) on the whole
    complement {x : sum(x) = 0}, of multiplicity 2d-1.
    """

    matrix: np.ndarray
    lambda1: float
    lambda2: float
    v1: np.ndarray
    u1: np.ndarray
    lambda2_multiplicity: int


def mean_replacement_matrix(params: ModelParams) -> SpectralData:
    """Construct the mean replacement matrix and its analytic spectral data.

    Everything is written down in closed form; no numerical eigensolver is
    involved.
    """
    d, p = params.d, params.p
    twod = 2 * d
    off = (1.0 - p) / (twod - 1)
    A = np.full((twod, twod), off)
    np.fill_diagonal(A, p)
    return SpectralData(
        matrix=A,
        lambda1=1.0,
        lambda2=(twod * p - 1.0) / (twod - 1.0),
        v1=np.full(twod, 1.0 / twod),
        u1=np.ones(twod),
        lambda2_multiplicity=twod - 1,
    )


def lambda2_eigenspace_basis(d: int) -> np.ndarray:
    """A basis of the zero-sum subspace, the eigenspace of lambda2.

    Rows are e_i - e_{i+1}, i = 0..2d-2: 2d-1 independent vectors, each
    orthogonal to u1.
    """
    twod = 2 * d
    basis = np.zeros((twod - 1, twod))
    for i in range(twod - 1):
        basis[i, i] = 1.0
        basis[i, i + 1] = -1.0
    return basis
