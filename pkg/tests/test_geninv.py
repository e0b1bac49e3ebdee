import numpy as np
import pytest

from conftest import random_symmetric
from inforest import linalg
from inforest.errors import DegenerateGraphError, InputError
from inforest.forest import forest_spectrum
from inforest.geninv import (
    axiom_scale,
    dense_forest_matrix,
    eigenprojection_identity,
    generalized_inverses,
    group_axiom_residuals,
    group_inverse_forest,
    group_inverse_perturbation,
    group_inverse_projection,
    group_inverse_tau_limit,
    moore_penrose,
    moore_penrose_axiom_residuals,
    nonnegativity_window,
)
from inforest.graph import reachability
from inforest.spectral import max_forest_projection

G3_GROUP = [[1, 1, -2], [0, 1, -1], [0, 0, 0]]


@pytest.fixture(scope="module")
def spectra(fixtures):
    return {name: forest_spectrum(g) for name, g in fixtures.items()}


def _parts(s):
    return s.laplacian, max_forest_projection(s)


def test_group_inverse_forest(spectra):
    L2 = spectra["G2"].laplacian
    assert np.allclose(group_inverse_forest(spectra["G2"]), L2 / 4, atol=1e-15)
    assert np.array_equal(group_inverse_forest(spectra["G1"]), [[0.5, -0.5], [0, 0]])
    assert np.array_equal(group_inverse_forest(spectra["G3"]), G3_GROUP)
    assert not group_inverse_forest(spectra["G0"]).any()


@pytest.mark.parametrize("name", ["G1", "G2", "G3"])
def test_fixture_group_axioms(spectra, name):
    L = spectra[name].laplacian
    X = group_inverse_forest(spectra[name])
    assert max(group_axiom_residuals(L, X).values()) <= 1e-15


def test_group_inverse_perturbation(spectra):
    L, Jt = _parts(spectra["G2"])
    assert np.allclose(group_inverse_perturbation(L, Jt, 1.0), L / 4, atol=1e-15)
    assert np.allclose(group_inverse_perturbation(L, Jt, 7.0), L / 4, atol=1e-15)
    L0, J0 = _parts(spectra["G0"])
    assert not group_inverse_perturbation(L0, J0, 1.0).any()
    with pytest.raises(InputError):
        group_inverse_perturbation(L, Jt, 0.0)


def test_group_inverse_projection(spectra):
    L0, J0 = _parts(spectra["G0"])
    assert not group_inverse_projection(L0, J0, 2.5).any()
    L, Jt = _parts(spectra["G2"])
    assert np.allclose(group_inverse_projection(L, Jt, 1.0), L / 4, atol=1e-15)
    L, Jt = _parts(spectra["G3"])
    assert np.allclose(group_inverse_projection(L, Jt, 1.0), G3_GROUP, atol=1e-14)


def test_group_inverse_tau_limit(spectra):
    assert not group_inverse_tau_limit(spectra["G0"], 50.0).any()
    L2 = spectra["G2"].laplacian
    assert linalg.max_abs_norm(group_inverse_tau_limit(spectra["G2"], 1e3) - L2 / 4) <= 1e-3
    assert linalg.max_abs_norm(group_inverse_tau_limit(spectra["G2"], 1e4) - L2 / 4) <= 1e-4
    X = group_inverse_forest(spectra["G3"])
    err = linalg.max_abs_norm(group_inverse_tau_limit(spectra["G3"], 1e4) - X)
    assert err <= 1e-3 * linalg.max_abs_norm(X)


def test_eigenprojection_identity(spectra):
    for s in spectra.values():
        L, Jt = _parts(s)
        out = eigenprojection_identity(L, group_inverse_forest(s))
        assert linalg.close(out, Jt, tol=1e-15)
    s3 = spectra["G3"]
    assert np.array_equal(eigenprojection_identity(s3.laplacian, group_inverse_forest(s3)), [[0, 0, 1]] * 3)
    assert np.allclose(eigenprojection_identity(spectra["G2"].laplacian, group_inverse_forest(spectra["G2"])), 0.5)


def test_moore_penrose(spectra):
    L, Jt = _parts(spectra["G2"])
    assert np.allclose(moore_penrose(L, Jt), L / 4, atol=1e-15)
    L, Jt = _parts(spectra["G1"])
    X = moore_penrose(L, Jt)
    assert np.allclose(X, [[0.25, 0], [-0.25, 0]], atol=1e-15)
    assert max(moore_penrose_axiom_residuals(L, X).values()) <= 1e-15
    assert not moore_penrose(*_parts(spectra["G0"])).any()


def test_dense_forest_matrix(spectra):
    s3 = spectra["G3"]
    assert np.allclose(dense_forest_matrix(s3, 0.5), [[1, 1, 0], [0, 1, 1], [0, 0, 2]], atol=1e-14)
    # beta = sigma_1 / (alpha sigma_0) - 1 = 3 at alpha = 0.5
    s2 = spectra["G2"]
    M = dense_forest_matrix(s2, 0.5)
    assert np.allclose(M, [[1.25, 0.75], [0.75, 1.25]], atol=1e-14)
    assert np.allclose(M @ (s2.laplacian + 0.5 * max_forest_projection(s2)), np.eye(2), atol=1e-14)
    assert nonnegativity_window(s2) == 2.0
    assert np.allclose(dense_forest_matrix(s2, 2.0), np.eye(2) / 2, atol=1e-15)
    with pytest.raises(DegenerateGraphError):
        dense_forest_matrix(spectra["G0"], 1.0)
    with pytest.raises(InputError):
        dense_forest_matrix(s2, -1.0)


def test_generalized_inverses_on_suite(suite):
    for g in suite:
        s = forest_spectrum(g)
        L, Jt = _parts(s)
        rep = generalized_inverses(s)
        X, mp = rep.group_inverse, rep.moore_penrose
        for alpha in (0.3, 1.0, 5.0):
            assert linalg.close(group_inverse_perturbation(L, Jt, alpha), X, tol=1e-8)
        bound = 1e-9 * axiom_scale(L, X)
        assert max(group_axiom_residuals(L, X).values()) <= bound
        assert max(moore_penrose_axiom_residuals(L, mp).values()) <= 1e-9 * axiom_scale(L, mp)
        assert rep.residuals["eigenprojection"] <= 1e-9 * max(1.0, linalg.max_abs_norm(L) * linalg.max_abs_norm(X))
        if s.top == 0:
            continue
        window = nonnegativity_window(s)
        for frac in (0.05, 0.5, 0.999):
            assert np.min(dense_forest_matrix(s, frac * window)) >= -1e-12
        small = dense_forest_matrix(s, 0.01 * window)
        positive = small > 1e-9 * linalg.max_abs_norm(small)
        assert np.array_equal(positive, reachability(g))


def test_symmetric_graphs_group_equals_moore_penrose(rng):
    for _ in range(40):
        g = random_symmetric(rng, int(rng.integers(2, 7)))
        s = forest_spectrum(g)
        L, Jt = _parts(s)
        X = group_inverse_forest(s)
        assert linalg.close(X, moore_penrose(L, Jt), tol=1e-8)
