import numpy as np
import pytest

from conftest import random_unichain
from inforest import linalg
from inforest.errors import InputError, MultichainError
from inforest.markov import (
    as_stochastic,
    cesaro_average,
    chain_digraph,
    chain_laplacian,
    long_run_matrix,
    parse_stochastic_csv,
    stationary_distribution,
)

P_SMALL = [[0.5, 0.5], [0.25, 0.75]]
SWAP = [[0.0, 1.0], [1.0, 0.0]]


def test_chain_laplacian():
    assert not chain_laplacian(np.eye(3)).any()
    assert np.array_equal(chain_laplacian(SWAP), [[1, -1], [-1, 1]])
    assert np.array_equal(chain_laplacian(P_SMALL), [[0.5, -0.5], [-0.25, 0.25]])


def test_chain_digraph_drops_self_loops():
    g = chain_digraph(P_SMALL)
    assert g.arcs == ((1, 2, 0.5), (2, 1, 0.25))


def test_long_run_matrix():
    assert np.allclose(long_run_matrix(P_SMALL), [[1 / 3, 2 / 3]] * 2, atol=1e-15)
    assert np.allclose(long_run_matrix(SWAP), 0.5, atol=1e-15)
    assert np.array_equal(long_run_matrix(np.eye(2)), np.eye(2))


def test_stationary_distribution():
    assert np.allclose(stationary_distribution(P_SMALL), [1 / 3, 2 / 3], atol=1e-15)
    assert np.allclose(stationary_distribution(SWAP), [0.5, 0.5])
    with pytest.raises(MultichainError):
        stationary_distribution(np.eye(2))


def test_cesaro_average():
    assert np.array_equal(cesaro_average(P_SMALL, 1), np.eye(2))
    assert np.array_equal(cesaro_average(SWAP, 2), np.full((2, 2), 0.5))
    assert linalg.max_abs_norm(cesaro_average(P_SMALL, 10**5) - [[1 / 3, 2 / 3]] * 2) <= 1e-4


def test_cesaro_matches_naive_sum(rng):
    P = random_unichain(rng, 4)
    for k in (1, 2, 3, 7, 16, 37):
        naive = sum(np.linalg.matrix_power(P, t) for t in range(k)) / k
        assert np.allclose(cesaro_average(P, k), naive, atol=1e-14)


@pytest.mark.parametrize(
    "bad",
    [[[0.5, 0.4], [0.5, 0.5]], [[1.2, -0.2], [0, 1]], [[1.0, 0.0]], [[np.nan, 1], [0, 1]]],
)
def test_invalid_stochastic(bad):
    with pytest.raises(InputError):
        as_stochastic(bad)


def test_renormalize_flag():
    P = as_stochastic([[0.5, 0.49], [0.2, 0.8]], renormalize=True)
    assert np.allclose(P.sum(axis=1), 1)


def test_parse_stochastic_csv():
    P = parse_stochastic_csv("# chain\n0.5,0.5\n\n0.25, 0.75\n")
    assert np.array_equal(P, P_SMALL)
    for bad in ("0.5,0.5\n0.25", "a,b\nc,d", "", "0.5,0.6\n0.5,0.5"):
        with pytest.raises(InputError):
            parse_stochastic_csv(bad)


def test_multichain_long_run():
    # two absorbing states reached from a transient one
    P = [[1, 0, 0], [0.3, 0.2, 0.5], [0, 0, 1]]
    M = long_run_matrix(P)
    assert np.allclose(M, [[1, 0, 0], [0.375, 0, 0.625], [0, 0, 1]], atol=1e-14)
    assert linalg.max_abs_norm(M - cesaro_average(P, 10**5)) <= 1e-4


def test_markov_properties(rng):
    for _ in range(50):
        P = random_unichain(rng, int(rng.integers(2, 9)))
        pi = stationary_distribution(P)
        assert np.all(pi >= 0)
        assert abs(pi.sum() - 1) <= 1e-12
        assert linalg.max_abs_norm(pi @ P - pi) <= 1e-10
        M = long_run_matrix(P)
        assert linalg.max_abs_norm(M @ P - M) <= 1e-9
        assert linalg.max_abs_norm(P @ M - M) <= 1e-9
        assert linalg.max_abs_norm(M @ M - M) <= 1e-9
        assert np.all(np.abs(M.sum(axis=1) - 1) <= 1e-10)
        assert linalg.max_abs_norm(M - cesaro_average(P, 10**5)) <= 1e-3
