"""Group and Moore-Penrose inverses of a Laplacian, and dense in-forest matrices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DegenerateGraphError, InputError, NumericalInstabilityError
from .forest import ForestSpectrum, normalized_forest_matrix, parametric_forest_matrices
from .spectral import max_forest_projection, perturbed_laplacian

DEFAULT_ALPHA = 1.0
METHODS = ("forest", "perturb", "projection")


def group_inverse_forest(s: ForestSpectrum) -> np.ndarray:
    """``L# = (sigma_{n-d-1} / sigma_{n-d}) (J_{n-d-1} - J~)``.

    An arcless graph has ``L = 0`` and hence ``L# = 0``; that case is
    returned directly because the formula has no ``J_{-1}``.
    """
    if s.top == 0:
        return np.zeros((s.n, s.n))
    ratio = s.sigma[s.top - 1] / s.sigma[s.top]
    return ratio * (normalized_forest_matrix(s, s.top - 1) - max_forest_projection(s))


def _check_alpha(alpha: float) -> None:
    if alpha == 0:
        raise InputError("alpha must be nonzero")


def group_inverse_perturbation(L: np.ndarray, Jt: np.ndarray, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
    """``(L + alpha J~)^-1 - J~ / alpha``; independent of ``alpha``."""
    _check_alpha(alpha)
    return linalg.inverse(perturbed_laplacian(L, Jt, alpha)) - Jt / alpha


def group_inverse_projection(L: np.ndarray, Jt: np.ndarray, alpha: float = DEFAULT_ALPHA) -> np.ndarray:
    """``(L + alpha J~)^-1 (I - J~)``."""
    _check_alpha(alpha)
    n = L.shape[0]
    return linalg.lu_solve(perturbed_laplacian(L, Jt, alpha), np.eye(n) - Jt)


def group_inverse_tau_limit(s: ForestSpectrum, tau: float) -> np.ndarray:
    """``tau (J(tau) - J~)``, which tends to ``L#`` at rate ``O(1/tau)``.

    Diagnostic only; never the reported group inverse.
    """
    if tau < 1:
        raise InputError(f"tau must be >= 1, got {tau}")
    _, _, J = parametric_forest_matrices(s, tau)
    return tau * (J - max_forest_projection(s))


def eigenprojection_identity(L: np.ndarray, group_inv: np.ndarray) -> np.ndarray:
    """``I - L L#``, which reproduces the eigenprojection."""
    return np.eye(L.shape[0]) - linalg.multiply(L, group_inv)


def moore_penrose(L: np.ndarray, Jt: np.ndarray) -> np.ndarray:
    """``L+ = L^T (J~^T J~ + L L^T)^-1``."""
    gram = Jt.T @ Jt + L @ L.T
    # X gram = L^T  <=>  gram^T X^T = L
    return linalg.lu_solve(gram.T, L).T


def group_axiom_residuals(L: np.ndarray, X: np.ndarray) -> dict[str, float]:
    return {
        "LXL-L": linalg.max_abs_norm(L @ X @ L - L),
        "XLX-X": linalg.max_abs_norm(X @ L @ X - X),
        "LX-XL": linalg.max_abs_norm(L @ X - X @ L),
    }


def moore_penrose_axiom_residuals(L: np.ndarray, X: np.ndarray) -> dict[str, float]:
    LX, XL = L @ X, X @ L
    return {
        "LXL-L": linalg.max_abs_norm(LX @ L - L),
        "XLX-X": linalg.max_abs_norm(XL @ X - X),
        "(LX)^T-LX": linalg.max_abs_norm(LX.T - LX),
        "(XL)^T-XL": linalg.max_abs_norm(XL.T - XL),
    }


def axiom_scale(L: np.ndarray, X: np.ndarray) -> float:
    """Scale the axiom residuals are compared against."""
    a, x = linalg.max_abs_norm(L), linalg.max_abs_norm(X)
    return max(1.0, a, x, a * x, a * a * x, a * x * x)


@dataclass(frozen=True, eq=False)
class GeneralizedInverseReport:
    group_inverse: np.ndarray
    methods: dict[str, np.ndarray]
    moore_penrose: np.ndarray
    residuals: dict[str, float] = field(default_factory=dict)


def generalized_inverses(
    s: ForestSpectrum, alpha: float = DEFAULT_ALPHA, tol: float = 1e-8, tau: float = 1e4
) -> GeneralizedInverseReport:
    """All group-inverse routes plus ``L+`` and their axiom residuals.

    The three exact routes must agree within ``tol`` (relative); the
    forest formula is the reported one.
    """
    L = s.laplacian
    Jt = max_forest_projection(s)
    methods = {
        "forest": group_inverse_forest(s),
        "perturb": group_inverse_perturbation(L, Jt, alpha),
        "projection": group_inverse_projection(L, Jt, alpha),
    }
    X = methods["forest"]
    scale = max(linalg.max_abs_norm(m) for m in methods.values())
    for name in ("perturb", "projection"):
        if not linalg.close(X, methods[name], tol=tol, scale=scale):
            raise NumericalInstabilityError(
                f"group inverse by {name} differs from forest formula by "
                f"{linalg.max_abs_norm(X - methods[name]):.3e}"
            )
    tau_limit = group_inverse_tau_limit(s, tau) if s.top > 0 else np.zeros_like(X)
    mp = moore_penrose(L, Jt)
    residuals = {f"group:{k}": v for k, v in group_axiom_residuals(L, X).items()}
    residuals.update({f"mp:{k}": v for k, v in moore_penrose_axiom_residuals(L, mp).items()})
    residuals["eigenprojection"] = linalg.max_abs_norm(eigenprojection_identity(L, X) - Jt)
    residuals[f"tau_limit@{tau:g}"] = linalg.max_abs_norm(tau_limit - X)
    return GeneralizedInverseReport(
        group_inverse=X, methods=methods | {"tau_limit": tau_limit}, moore_penrose=mp, residuals=residuals
    )


def dense_forest_matrix(s: ForestSpectrum, alpha: float, tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    """Matrix of dense in-forests ``(L + alpha J~)^-1``.

    Uses ``(sigma_{n-d-1}/sigma_{n-d}) (J_{n-d-1} + beta J~)`` with
    ``beta = sigma_{n-d} / (alpha sigma_{n-d-1}) - 1`` and checks it against
    a direct solve.  Entrywise nonnegative for
    ``0 < alpha <= sigma_{n-d} / sigma_{n-d-1}``.
    """
    if not alpha > 0:
        raise InputError(f"alpha must be positive, got {alpha}")
    if s.top == 0:
        raise DegenerateGraphError("dense in-forest formula needs n - d >= 1 (graph has no arcs)")
    hi, lo = s.sigma[s.top], s.sigma[s.top - 1]
    beta = hi / (alpha * lo) - 1.0
    Jt = max_forest_projection(s)
    closed = (lo / hi) * (normalized_forest_matrix(s, s.top - 1) + beta * Jt)
    direct = linalg.inverse(perturbed_laplacian(s.laplacian, Jt, alpha))
    if not linalg.close(closed, direct, tol=tol * 10, scale=max(linalg.max_abs_norm(closed), 1.0 / alpha)):
        raise NumericalInstabilityError(
            f"dense in-forest closed form differs from direct inverse by "
            f"{linalg.max_abs_norm(closed - direct):.3e}"
        )
    return closed


def nonnegativity_window(s: ForestSpectrum) -> float:
    """Upper end ``sigma_{n-d} / sigma_{n-d-1}`` of the sufficient nonnegativity window."""
    if s.top == 0:
        raise DegenerateGraphError("window undefined for an arcless graph")
    return float(s.sigma[s.top] / s.sigma[s.top - 1])
