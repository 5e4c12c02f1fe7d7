import math
from fractions import Fraction

import numpy as np
import pytest

from merw.params import ModelParams
from merw.urn import (
    UrnState,
    added_colour_distribution,
    added_colour_distribution_exact,
    init_urn,
    lambda2_eigenspace_basis,
    mean_replacement_matrix,
    pairing_matrix,
    project_counts,
    project_to_walk,
    urn_step,
)
from merw.walk import step_distribution, step_distribution_exact

from tests._oracles import compositions


def rng(seed=0):
    return np.random.default_rng(seed)


# ------------------------------------------------------------- initial ball

def test_init_single_ball():
    params = ModelParams(2, 0.5, "0.7")
    for seed in range(20):
        state = init_urn(params, rng(seed))
        assert state.n == 1
        assert state.counts.sum() == 1


def test_init_law_matches_first_step_law():
    params = ModelParams(2, 0.5, "0.7")
    g = rng(8)
    n_draws = 100_000
    counts = np.zeros(4, dtype=int)
    for _ in range(n_draws):
        counts[int(np.argmax(init_urn(params, g).counts))] += 1
    expected = np.array([0.7, 0.1, 0.1, 0.1])
    se = np.sqrt(expected * (1 - expected) / n_draws)
    assert np.all(np.abs(counts / n_draws - expected) < 4 * se)


def test_init_nearly_degenerate_q():
    params = ModelParams(1, 0.5, 0.999)
    g = rng(77)
    hits = sum(init_urn(params, g).counts[0] for _ in range(5000))
    assert hits / 5000 > 0.99


# ---------------------------------------------------------------- one draw

def test_urn_step_two_ball_example():
    # counts (1,0), p = 3/4: next composition (2,0) w.p. 3/4, (1,1) w.p. 1/4
    params = ModelParams(1, 0.75)
    g = rng(123)
    n_draws = 40_000
    same = 0
    for _ in range(n_draws):
        state = UrnState(n=1, counts=np.array([1, 0], dtype=np.int64))
        nxt = urn_step(state, params, g)
        assert nxt.n == 2 and nxt.counts.sum() == 2
        same += int(nxt.counts[0] == 2)
    assert abs(same / n_draws - 0.75) < 4 * math.sqrt(0.1875 / n_draws)


def test_urn_step_requires_a_ball():
    params = ModelParams(1, 0.5)
    with pytest.raises(ValueError):
        urn_step(UrnState(n=0, counts=np.zeros(2, dtype=np.int64)), params, rng())


def test_added_colour_law_uniform_composition():
    params = ModelParams(3, 0.4)
    law = added_colour_distribution([7] * 6, params)
    assert law == pytest.approx([1 / 6] * 6)


def test_added_colour_law_matches_walk_step_law():
    # the central one-step equality: for every composition the urn's added
    # colour has the same law as the walk's next direction
    for d in (1, 2, 3):
        for p in ("1/10", "1/2", "9/10"):
            params = ModelParams(d, p)
            for n in range(1, 6):
                for counts in compositions(n, 2 * d):
                    urn_law = added_colour_distribution_exact(counts, params)
                    walk_law = step_distribution_exact(counts, params)
                    assert urn_law == walk_law
                    assert sum(urn_law) == 1
    float_params = ModelParams(2, 0.6)
    np.testing.assert_allclose(
        added_colour_distribution([2, 1, 0, 0], float_params),
        step_distribution([2, 1, 0, 0], float_params),
        atol=1e-15,
    )


def test_added_colour_example_value():
    params = ModelParams(2, "3/5")
    assert added_colour_distribution_exact([2, 1, 0, 0], params)[0] == Fraction(4, 9)


# --------------------------------------------------------------- projection

def test_projection_example():
    state = UrnState(n=8, counts=np.array([3, 1, 2, 2], dtype=np.int64))
    assert project_to_walk(state).tolist() == [2, 0]


def test_projection_of_balanced_counts_is_zero():
    state = UrnState(n=12, counts=np.full(4, 3, dtype=np.int64))
    assert project_to_walk(state).tolist() == [0, 0]


def test_projection_is_linear_batch():
    batch = np.array([[1, 0, 0, 2], [4, 1, 1, 1]], dtype=np.int64)
    assert project_counts(batch).tolist() == [[1, -2], [3, 0]]


def test_pairing_matrix_agrees_with_projection():
    P = pairing_matrix(3)
    counts = np.array([5, 2, 0, 1, 4, 4], dtype=np.int64)
    assert np.array_equal(P @ counts, project_counts(counts))


# ----------------------------------------------------------- spectral data

def test_replacement_matrix_d1():
    data = mean_replacement_matrix(ModelParams(1, 0.75))
    assert data.matrix.tolist() == [[0.75, 0.25], [0.25, 0.75]]
    assert data.lambda1 == 1.0
    assert data.lambda2 == pytest.approx(0.5)
    assert data.lambda2_multiplicity == 1


def test_replacement_matrix_rank_one_case():
    # p = 1/(2d) makes the matrix constant and lambda2 = 0
    d = 3
    data = mean_replacement_matrix(ModelParams(d, 1 / (2 * d)))
    assert data.lambda2 == pytest.approx(0.0)
    np.testing.assert_allclose(data.matrix, np.full((2 * d, 2 * d), 1 / (2 * d)))


def test_lambda2_eigenvector_d2():
    data = mean_replacement_matrix(ModelParams(2, 0.5))
    assert data.lambda2 == pytest.approx(1 / 3)
    x = np.array([1.0, -1.0, 0.0, 0.0])
    np.testing.assert_allclose(data.matrix @ x, x / 3, atol=1e-15)


def test_columns_sum_to_one_and_symmetry():
    for d in (1, 2, 4):
        for p in (0.1, 0.5, 0.9):
            A = mean_replacement_matrix(ModelParams(d, p)).matrix
            np.testing.assert_allclose(A.sum(axis=0), 1.0, atol=1e-12)
            assert np.array_equal(A, A.T)


def test_spectral_identities():
    for d in range(1, 6):
        for p in (0.1, 0.5, 0.9):
            data = mean_replacement_matrix(ModelParams(d, p))
            A = data.matrix
            assert np.abs(A @ data.v1 - data.lambda1 * data.v1).max() <= 1e-12
            assert np.abs(data.u1 @ A - data.lambda1 * data.u1).max() <= 1e-12
            basis = lambda2_eigenspace_basis(d)
            assert basis.shape == (2 * d - 1, 2 * d)
            residual = A @ basis.T - data.lambda2 * basis.T
            assert np.abs(residual).max() <= 1e-12


def test_any_zero_sum_vector_is_lambda2_eigenvector():
    data = mean_replacement_matrix(ModelParams(3, 0.7))
    g = rng(42)
    for _ in range(10):
        x = g.normal(size=6)
        x -= x.mean()
        np.testing.assert_allclose(data.matrix @ x, data.lambda2 * x, atol=1e-12)
