import numpy as np
import pytest

from inforest.graph import WeightedDigraph, parse_edge_list

SEED = 20240611


def make_fixtures():
    return {
        "G0": WeightedDigraph(2),
        "G1": parse_edge_list("n=2\n1 2 2.0"),
        "G2": parse_edge_list("1 2 1\n2 1 1"),
        "G3": parse_edge_list("n=3\n1 2 1\n2 3 1"),
    }


def random_digraph(rng, n, p=0.5, low=0.1, high=10.0):
    arcs = [
        (i, j, float(rng.uniform(low, high)))
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < p
    ]
    return WeightedDigraph.from_arcs(n, arcs)


def random_suite(count=200, seed=SEED, sizes=(2, 3, 4, 5)):
    rng = np.random.default_rng(seed)
    return [random_digraph(rng, int(rng.choice(sizes))) for _ in range(count)]


def random_symmetric(rng, n, p=0.5):
    arcs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < p:
                w = float(rng.uniform(0.1, 10.0))
                arcs += [(i, j, w), (j, i, w)]
    return WeightedDigraph.from_arcs(n, arcs)


def random_unichain(rng, n, density=0.5):
    """Random row-stochastic matrix whose chain digraph has one closed class."""
    from inforest.markov import chain_digraph
    from inforest.graph import forest_dimension

    while True:
        P = rng.random((n, n)) * (rng.random((n, n)) < density)
        P[np.arange(n), np.arange(n)] += rng.random(n) * 0.2
        if np.any(P.sum(axis=1) == 0):
            continue
        P /= P.sum(axis=1, keepdims=True)
        if forest_dimension(chain_digraph(P)) == 1:
            return P


@pytest.fixture(scope="session")
def fixtures():
    return make_fixtures()


@pytest.fixture(scope="session")
def suite():
    return random_suite()


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)
