"""Dense real-matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Every
function here is pure and refuses to hand back non-finite entries.
Tolerance comparisons throughout the package use the relative rule
``|x - y| <= tol * max(1, scale)`` where ``scale`` is the max-abs norm of
the quantities compared (see :func:`close`).
"""

from __future__ import annotations

import itertools
import warnings

import numpy as np
import scipy.linalg

from .errors import DimensionError, MatrixOverflowError, SingularMatrixError, SizeLimitError

DEFAULT_TOL = 1e-9
PIVOT_TOL = 1e-12
ADJUGATE_SIZE_LIMIT = 8


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D float64 array."""
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    return checked(m)


def checked(m: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise MatrixOverflowError("non-finite entry in matrix result")
    return m


def _square(a: np.ndarray, what: str = "matrix") -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")
    return a.shape[0]


def identity(n: int) -> np.ndarray:
    return np.eye(n)


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        return checked(a @ b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        return checked(a + b)


def scale(a: np.ndarray, c: float) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return checked(c * a)


def transpose(a: np.ndarray) -> np.ndarray:
    return a.T.copy()


def trace(a: np.ndarray) -> float:
    _square(a)
    return float(np.trace(a))


def max_abs_norm(a) -> float:
    """Largest absolute entry; 0 for an empty matrix."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def close(x, y, tol: float = DEFAULT_TOL, scale: float | None = None) -> bool:
    """Relative comparison ``max|x - y| <= tol * max(1, scale)``.

    ``scale`` defaults to the max-abs norm of both operands.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if scale is None:
        scale = max(max_abs_norm(x), max_abs_norm(y))
    return max_abs_norm(x - y) <= tol * max(1.0, scale)


def _lu(a: np.ndarray):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(a, check_finite=False)


def lu_solve(a: np.ndarray, b: np.ndarray, tol: float = PIVOT_TOL) -> np.ndarray:
    """Solve ``a @ x = b`` by row-pivoted LU.

    Raises
    ------
    SingularMatrixError
        If any pivot magnitude is below ``tol * max_abs_norm(a)``.
    """
    n = _square(a)
    if b.shape[0] != n:
        raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {n}")
    if n == 0:
        return b.copy()
    lu, piv = _lu(a)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) <= tol * max(max_abs_norm(a), np.finfo(float).tiny):
        raise SingularMatrixError(
            f"pivot {np.min(pivots):.3e} below tolerance for matrix of scale {max_abs_norm(a):.3e}"
        )
    with np.errstate(over="ignore", invalid="ignore"):
        return checked(scipy.linalg.lu_solve((lu, piv), b, check_finite=False))


def inverse(a: np.ndarray, tol: float = PIVOT_TOL) -> np.ndarray:
    return lu_solve(a, np.eye(a.shape[0]), tol=tol)


def determinant(a: np.ndarray) -> float:
    """Determinant from the pivoted LU factorization (exactly 0 on a zero pivot)."""
    n = _square(a)
    if n == 0:
        return 1.0
    lu, piv = _lu(a)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    with np.errstate(over="ignore", invalid="ignore"):
        det = float(np.prod(np.diag(lu))) * (-1.0) ** swaps
    if not np.isfinite(det):
        raise MatrixOverflowError("determinant overflowed")
    return det


def minor(a: np.ndarray, rows, cols) -> float:
    """Determinant of ``a`` with the listed rows and columns removed."""
    keep_r = [i for i in range(a.shape[0]) if i not in set(rows)]
    keep_c = [j for j in range(a.shape[1]) if j not in set(cols)]
    return determinant(a[np.ix_(keep_r, keep_c)])


def adjugate(a: np.ndarray, limit: int = ADJUGATE_SIZE_LIMIT) -> np.ndarray:
    """Transposed cofactor matrix, one ``(n-1)``-minor per entry.

    Intended for verification only; the size guard keeps it honest.
    """
    n = _square(a)
    if n > limit:
        raise SizeLimitError(f"adjugate by cofactors limited to n <= {limit}, got n = {n}")
    if n == 1:
        return np.ones((1, 1))
    adj = np.empty((n, n))
    for i, j in itertools.product(range(n), repeat=2):
        # adj[j, i] is the (i, j) cofactor
        adj[j, i] = (-1.0) ** (i + j) * minor(a, [i], [j])
    return adj


def numeric_rank(a: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))


def matrix_power(a: np.ndarray, m: int) -> np.ndarray:
    _square(a)
    with np.errstate(over="ignore", invalid="ignore"):
        return checked(np.linalg.matrix_power(a, m))
