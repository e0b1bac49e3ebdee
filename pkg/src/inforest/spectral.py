"""Eigenprojection, characteristic polynomial and eigenvectors from forests."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import NoEigenvectorError, NumericalInstabilityError, RootFindingError
from .forest import ForestSpectrum, normalized_forest_matrix, parametric_forest_matrices

ROOT_TOL = 1e-9
EIG_TOL = 1e-6
NEWTON_STEPS = 3


@dataclass(frozen=True, eq=False)
class EigenData:
    """Characteristic polynomial of ``-L`` and, once solved, the eigenvalues of ``L``.

    ``coeffs[k]`` multiplies ``lambda^(n-k)``; they coincide with the forest
    weights ``sigma_k``.
    """

    coeffs: np.ndarray
    eigenvalues: np.ndarray | None = None
    residuals: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polyval(self.coeffs, x)


def max_forest_projection(s: ForestSpectrum) -> np.ndarray:
    """Normalized matrix of maximum in-forests; the eigenprojection of ``L`` at 0."""
    return normalized_forest_matrix(s, s.top)


def char_poly(s: ForestSpectrum) -> EigenData:
    return EigenData(coeffs=np.array(s.sigma, dtype=float))


def laplacian_eigenvalues(e: EigenData, root_tol: float = ROOT_TOL) -> EigenData:
    """Fill in the eigenvalues of ``L`` (negated roots of the polynomial).

    Trailing zero coefficients give exact zero eigenvalues; the rest come
    from a companion-matrix eigensolve followed by a few guarded Newton
    steps.  Each root must satisfy
    ``|phi(root)| <= root_tol * sum_k |c_k| |root|^(n-k)``.
    """
    c = np.asarray(e.coeffs, dtype=float)
    n = len(c) - 1
    nz = np.nonzero(c)[0]
    last = int(nz[-1]) if nz.size else 0
    zeros = n - last
    reduced = c[: last + 1]
    try:
        roots = np.roots(reduced).astype(complex) if last > 0 else np.zeros(0, dtype=complex)
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"companion eigensolve failed: {exc}") from exc
    roots = np.array([_polish(reduced, r) for r in roots], dtype=complex)
    all_roots = np.concatenate([np.zeros(zeros, dtype=complex), roots])
    residuals = np.array([_relative_residual(c, r) for r in all_roots])
    bad = np.nonzero(residuals > root_tol)[0]
    if bad.size:
        raise RootFindingError(
            f"root {all_roots[bad[0]]} has relative residual {residuals[bad[0]]:.3e}"
        )
    eig = -all_roots
    eig[eig.imag == 0] = eig[eig.imag == 0].real  # drop signed zeros in imaginary part
    order = np.lexsort((eig.imag, np.round(eig.real, 12)))
    return replace(e, eigenvalues=eig[order], residuals=residuals[order])


def _polish(c: np.ndarray, r: complex) -> complex:
    dc = np.polyder(c)
    best, best_val = r, abs(np.polyval(c, r))
    for _ in range(NEWTON_STEPS):
        slope = np.polyval(dc, r)
        if slope == 0:
            break
        r = r - np.polyval(c, r) / slope
        val = abs(np.polyval(c, r))
        if not val < best_val:
            break
        best, best_val = r, val
    if abs(best.imag) <= 1e-14 * max(1.0, abs(best)):
        best = complex(best.real, 0.0)
    return best


def _relative_residual(c: np.ndarray, r: complex) -> float:
    n = len(c) - 1
    mags = np.abs(c) * np.abs(r) ** np.arange(n, -1, -1)
    denom = float(np.sum(mags))
    return float(abs(np.polyval(c, r)) / denom) if denom > 0 else 0.0


def eigenvalues_of(s: ForestSpectrum) -> EigenData:
    return laplacian_eigenvalues(char_poly(s))


def forest_matrix_at(s: ForestSpectrum, tau: complex) -> np.ndarray:
    """``Q(tau) = sum_k Q_k tau^k`` for a possibly complex ``tau``."""
    Q = np.zeros((s.n, s.n), dtype=complex)
    for k in range(s.top, -1, -1):
        Q = Q * tau + s.q[k]
    return Q


@dataclass(frozen=True, eq=False)
class Eigenvectors:
    eigenvalue: complex
    vectors: tuple[np.ndarray, ...]
    residuals: tuple[float, ...]


def eigenvectors_from_forests(
    s: ForestSpectrum, lam: complex, tol: float = linalg.DEFAULT_TOL, eig_tol: float = EIG_TOL
) -> Eigenvectors:
    """Nonzero columns of ``Q(-1/lam)``, each an eigenvector of ``L`` for ``lam``.

    A column counts as zero when its norm is below ``tol`` times the norm
    the evaluation would have without cancellation.  Residuals are
    ``|L v - lam v| / (|v| max(1, max|L|))``.
    """
    if lam == 0:
        raise ValueError("eigenvalue must be nonzero; use null_space_basis for 0")
    tau = -1.0 / complex(lam)
    Q = forest_matrix_at(s, tau)
    raw = sum(linalg.max_abs_norm(s.q[k]) * abs(tau) ** k for k in range(s.top + 1))
    L = s.laplacian
    scale = max(1.0, linalg.max_abs_norm(L))
    vectors, residuals = [], []
    for j in range(s.n):
        v = Q[:, j]
        if np.max(np.abs(v)) < tol * raw:
            continue
        if np.all(v.imag == 0):
            v = v.real
        res = float(np.linalg.norm(L @ v - lam * v) / (np.linalg.norm(v) * scale))
        if res > eig_tol:
            raise NumericalInstabilityError(
                f"column {j + 1} of Q(-1/lambda) has eigen-residual {res:.3e} for lambda={lam}"
            )
        vectors.append(v)
        residuals.append(res)
    if not vectors:
        raise NoEigenvectorError(f"every column of Q(-1/lambda) vanishes for lambda={lam}")
    return Eigenvectors(complex(lam), tuple(vectors), tuple(residuals))


def distinct_nonzero(eigenvalues, tol: float = 1e-6) -> list[complex]:
    """Nonzero eigenvalues with clustered repeats collapsed, in input order."""
    out: list[complex] = []
    for lam in eigenvalues:
        if lam == 0:
            continue
        if any(abs(lam - mu) <= tol * max(1.0, abs(mu)) for mu in out):
            continue
        out.append(complex(lam))
    return out


def null_space_basis(s: ForestSpectrum, tol: float = linalg.DEFAULT_TOL) -> list[np.ndarray]:
    """``d`` linearly independent columns of the eigenprojection."""
    Jt = max_forest_projection(s)
    basis: list[np.ndarray] = []
    for j in range(s.n):
        col = Jt[:, j]
        if linalg.max_abs_norm(col) <= tol:
            continue
        trial = np.column_stack(basis + [col])
        if linalg.numeric_rank(trial, tol) == len(basis) + 1:
            basis.append(col.copy())
    if len(basis) != s.d:
        raise NumericalInstabilityError(f"found {len(basis)} null vectors, expected d = {s.d}")
    L = s.laplacian
    for v in basis:
        if np.linalg.norm(L @ v) > tol * max(1.0, linalg.max_abs_norm(L)) * np.linalg.norm(v):
            raise NumericalInstabilityError("eigenprojection column is not a null vector of L")
    return basis


def perturbed_laplacian(L: np.ndarray, Jt: np.ndarray, alpha: float) -> np.ndarray:
    return linalg.add(L, linalg.scale(Jt, alpha))


def perturbed_determinant_residual(s: ForestSpectrum, alpha: float) -> float:
    """Relative gap between ``det(L + alpha J~)`` and ``alpha^d sigma_{n-d}``."""
    Jt = max_forest_projection(s)
    det = linalg.determinant(perturbed_laplacian(s.laplacian, Jt, alpha))
    expected = alpha**s.d * s.sigma[s.top]
    return abs(det - expected) / max(abs(expected), np.finfo(float).tiny)


def projection_limit_check(s: ForestSpectrum, tau: float) -> float:
    """``max|J(tau) - J~|``; shrinks like ``1/tau``."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    _, _, J = parametric_forest_matrices(s, tau)
    return linalg.max_abs_norm(J - max_forest_projection(s))


def elementary_symmetric(values) -> np.ndarray:
    """``e_0..e_n`` of the given numbers (complex allowed)."""
    e = np.zeros(len(values) + 1, dtype=complex)
    e[0] = 1.0
    for x in values:
        e[1:] = e[1:] + x * e[:-1]
    return e
