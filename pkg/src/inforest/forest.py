"""Forest matrices of a weighted digraph.

``Q_k[i, j]`` is the total weight of in-forests with ``k`` arcs in which
vertex ``i`` belongs to the tree rooted at ``j``; ``sigma_k`` is the total
weight of all ``k``-arc in-forests.  Both sequences come out of a single
trace recursion on the Laplacian, and everything else in this module is
built from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .errors import InputError, MatrixOverflowError, NumericalInstabilityError
from .graph import WeightedDigraph, check_dimension_against_sigma, forest_dimension, laplacian, validate_laplacian

PARTITION_LIMIT = 20


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ForestSpectrum:
    """Forest weights ``sigma_0..sigma_n`` and forest matrices ``Q_0..Q_n``.

    ``laplacian`` is the matrix the spectrum was computed from; ``d`` is the
    in-forest dimension, so ``sigma_k`` and ``Q_k`` vanish for ``k > n - d``.
    """

    n: int
    d: int
    sigma: np.ndarray
    q: tuple[np.ndarray, ...]
    laplacian: np.ndarray

    @property
    def top(self) -> int:
        """Arc count ``n - d`` of a maximum in-forest."""
        return self.n - self.d

    def Q(self, k: int) -> np.ndarray:
        if 0 <= k <= self.n:
            return self.q[k]
        return np.zeros((self.n, self.n))


def faddeev_recursion(L: np.ndarray, d: int, tol: float = linalg.DEFAULT_TOL) -> ForestSpectrum:
    """Run ``Q_{k+1} = sigma_{k+1} I - L Q_k`` with ``sigma_{k+1} = tr(L Q_k) / (k+1)``.

    Each step is judged against its own cancellation scale
    ``n * max|L| * max|Q_k|``: forest weights up to ``k = n - d`` must stay
    above ``tol`` times that scale, the first weight past it must fall below,
    and negative entries of ``Q_k`` no larger than the same bound are
    clamped to zero.  Anything else raises
    :class:`~inforest.errors.NumericalInstabilityError`.
    """
    L = validate_laplacian(linalg.as_matrix(L), tol=max(tol, 1e-12))
    n = L.shape[0]
    if not 1 <= d <= n:
        raise InputError(f"forest dimension must lie in 1..{n}, got {d}")
    top = n - d
    norm_L = linalg.max_abs_norm(L)
    eye = np.eye(n)
    sigma = [1.0]
    qs = [eye.copy()]
    for k in range(n):
        LQ = linalg.multiply(L, qs[k])
        s = float(np.trace(LQ)) / (k + 1)
        Qn = linalg.checked(s * eye - LQ)
        bound = tol * n * norm_L * linalg.max_abs_norm(qs[k])
        if k + 1 <= top:
            if s <= bound:
                raise NumericalInstabilityError(
                    f"forest weight sigma_{k + 1} = {s:.3e} not positive at tolerance {bound:.3e}"
                )
            low = float(np.min(Qn))
            if low < -bound:
                raise NumericalInstabilityError(
                    f"Q_{k + 1} has entry {low:.3e} below -{bound:.3e}"
                )
            Qn[Qn < 0] = 0.0
        else:
            if abs(s) > bound or linalg.max_abs_norm(Qn) > bound:
                raise NumericalInstabilityError(
                    f"sigma_{k + 1} / Q_{k + 1} should vanish beyond n - d = {top} "
                    f"(|sigma| = {abs(s):.3e}, max|Q| = {linalg.max_abs_norm(Qn):.3e}, bound {bound:.3e})"
                )
            s = 0.0
            Qn = np.zeros((n, n))
        sigma.append(s)
        qs.append(Qn)
    return ForestSpectrum(
        n=n,
        d=d,
        sigma=_frozen(sigma),
        q=tuple(_frozen(Q) for Q in qs),
        laplacian=_frozen(L),
    )


def forest_spectrum(g: WeightedDigraph, tol: float = linalg.DEFAULT_TOL) -> ForestSpectrum:
    """Spectrum of ``g`` with the structural ``d`` cross-checked against ``sigma``."""
    d = forest_dimension(g)
    s = faddeev_recursion(laplacian(g), d, tol=tol)
    check_dimension_against_sigma(d, s.sigma, tol=tol)
    return s


def normalized_forest_matrix(s: ForestSpectrum, k: int) -> np.ndarray:
    """Row-stochastic ``J_k = Q_k / sigma_k`` for ``0 <= k <= n - d``."""
    if not 0 <= k <= s.top:
        raise InputError(f"k must lie in 0..{s.top} (n - d), got {k}")
    return s.q[k] / s.sigma[k]


def total_forest_matrices(s: ForestSpectrum) -> tuple[np.ndarray, float, np.ndarray]:
    """``(Q, sigma, J)`` summed over all arc counts."""
    return parametric_forest_matrices(s, 1.0)


def parametric_forest_matrices(s: ForestSpectrum, tau: float):
    """``(Q(tau), sigma(tau), J(tau))`` with every arc weight scaled by ``tau``.

    ``Q(tau)`` and ``sigma(tau)`` are polynomials and defined for all real
    ``tau``; ``J(tau)`` is returned only for ``tau >= 0`` and is ``None``
    otherwise.
    """
    Q = np.zeros((s.n, s.n))
    sig = 0.0
    for k in range(s.top, -1, -1):
        Q = Q * tau + s.q[k]
        sig = sig * tau + s.sigma[k]
    linalg.checked(Q)
    if not math.isfinite(sig):
        raise MatrixOverflowError("sigma(tau) overflowed")
    J = Q / sig if tau >= 0 else None
    return Q, sig, J


def partial_sums(s: ForestSpectrum, tau: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative forest weights ``s_k`` and ``s_k(tau)`` for ``k = 0..n-d``."""
    sig = np.asarray(s.sigma[: s.top + 1])
    powers = np.array([tau**k for k in range(s.top + 1)])
    return np.cumsum(sig), np.cumsum(sig * powers)


def adjugate_expansion(s: ForestSpectrum, lam: float, tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    """``adj(lam I + L)`` as ``sum_k Q_k lam^(n-k-1)``.

    For ``lam != 0`` the dual expansion in powers of ``-L/lam`` with
    cumulative coefficients is evaluated as well and the two must agree.
    """
    n = s.n
    out = sum(s.q[k] * _pow0(lam, n - k - 1) for k in range(s.top + 1))
    out = linalg.checked(np.asarray(out, dtype=float))
    if lam != 0:
        dual, term_scale = _dual_adjugate(s, lam)
        if not linalg.close(out, dual, tol=tol, scale=max(term_scale, linalg.max_abs_norm(out))):
            raise NumericalInstabilityError(
                f"adjugate expansions disagree at lambda={lam}: "
                f"{linalg.max_abs_norm(out - dual):.3e}"
            )
    return out


def _pow0(x: float, e: int) -> float:
    return 1.0 if e == 0 else x**e


def _dual_adjugate(s: ForestSpectrum, lam: float) -> tuple[np.ndarray, float]:
    n, top = s.n, s.top
    cum = np.cumsum([s.sigma[j] * lam ** (n - j - 1) for j in range(top + 1)])
    step = -s.laplacian / lam
    P = np.eye(n)
    out = np.zeros((n, n))
    term_scale = 0.0
    for k in range(top + 1):
        term = cum[top - k] * P
        term_scale = max(term_scale, linalg.max_abs_norm(term))
        out = out + term
        P = P @ step
    return linalg.checked(out), term_scale


def forest_matrix_from_polynomial(L: np.ndarray, sigma: Sequence[float], k: int) -> np.ndarray:
    """Horner evaluation of ``sum_i sigma_{k-i} (-L)^i``."""
    L = linalg.as_matrix(L)
    n = L.shape[0]
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    eye = np.eye(n)
    Q = _sigma_at(sigma, 0) * eye
    for i in range(1, k + 1):
        Q = linalg.multiply(-L, Q) + _sigma_at(sigma, i) * eye
    return Q


def _sigma_at(sigma: Sequence[float], i: int) -> float:
    return float(sigma[i]) if i < len(sigma) else 0.0


def power_expansion_coefficients(sigma: Sequence[float], m: int) -> np.ndarray:
    """Coefficients ``alpha_0..alpha_m`` with ``(-L)^m = sum_k alpha_k Q_{m-k}``.

    Uses ``alpha_k = sum_{i=1..k} (-sigma_i) alpha_{k-i}``.
    """
    if m < 0:
        raise InputError(f"m must be >= 0, got {m}")
    alpha = np.zeros(m + 1)
    alpha[0] = 1.0
    for k in range(1, m + 1):
        alpha[k] = -sum(_sigma_at(sigma, i) * alpha[k - i] for i in range(1, k + 1))
    return alpha


def _partitions(k: int, largest: int | None = None) -> Iterator[dict[int, int]]:
    """Integer partitions of ``k`` as ``{part: multiplicity}``."""
    if largest is None:
        largest = k
    if k == 0:
        yield {}
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions(k - part, part):
            out = dict(rest)
            out[part] = out.get(part, 0) + 1
            yield out


def alpha_by_partitions(sigma: Sequence[float], k: int, limit: int = PARTITION_LIMIT) -> float:
    """``alpha_k`` summed directly over multiplicity vectors ``p`` with ``sum i p_i = k``.

    Each vector contributes ``(-1)^|p| |p|! / prod(p_i!) * prod sigma_i^p_i``.
    Refuses ``k > limit`` because the number of partitions explodes.
    """
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    if k > limit:
        raise InputError(f"partition evaluator limited to k <= {limit}, got {k}")
    total = 0.0
    for p in _partitions(k):
        count = sum(p.values())
        coef = math.factorial(count)
        for mult in p.values():
            coef //= math.factorial(mult)
        term = float((-1) ** count * coef)
        for part, mult in p.items():
            term *= _sigma_at(sigma, part) ** mult
        total += term
    return total


def laplacian_power_from_forests(s: ForestSpectrum, m: int) -> np.ndarray:
    """``(-L)^m`` as a combination of forest matrices."""
    alpha = power_expansion_coefficients(s.sigma, m)
    out = np.zeros((s.n, s.n))
    for k in range(m + 1):
        if m - k <= s.top:
            out = out + alpha[k] * s.q[m - k]
    return linalg.checked(out)


def forest_digraph_laplacian(s: ForestSpectrum, L: np.ndarray, k: int, tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    """Laplacian ``L Q_k`` of the digraph of ``(k+1)``-arc in-forests.

    Also checked against ``sigma_{k+1} I - Q_{k+1}`` and, for ``k >= 1``,
    against the recurrence ``L_{k+1} = L (-L_k + tr(L_k)/k I)``.
    """
    n = s.n
    if not 0 <= k <= n - 1:
        raise InputError(f"k must lie in 0..{n - 1}, got {k}")
    L = linalg.as_matrix(L)
    Lk1 = linalg.multiply(L, s.q[k])
    bound = tol * max(1.0, n * linalg.max_abs_norm(L) * linalg.max_abs_norm(s.q[k]))
    off = Lk1 - np.diag(np.diag(Lk1))
    if np.max(off, initial=0.0) > bound:
        raise NumericalInstabilityError(f"L_{k + 1} has positive off-diagonal {np.max(off):.3e}")
    Lk1[(Lk1 > 0) & ~np.eye(n, dtype=bool)] = 0.0
    via_q = s.sigma[k + 1] * np.eye(n) - s.q[k + 1]
    if not linalg.close(Lk1, via_q, tol=tol, scale=bound / tol):
        raise NumericalInstabilityError(f"L Q_{k} differs from sigma_{k + 1} I - Q_{k + 1}")
    if k >= 1:
        Lk = linalg.multiply(L, s.q[k - 1])
        rec = linalg.multiply(L, -Lk + (np.trace(Lk) / k) * np.eye(n))
        if not linalg.close(Lk1, rec, tol=tol, scale=bound / tol):
            raise NumericalInstabilityError(f"L_{k + 1} fails the Laplacian recurrence")
    return Lk1
