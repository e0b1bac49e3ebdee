"""Finite Markov chains through their transition digraphs.

``I - P`` is the Laplacian of the loopless digraph whose arc weights are
the off-diagonal transition probabilities, so the normalized matrix of
maximum in-forests of that digraph is the long-run (Cesaro) matrix of the
chain.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from . import linalg
from .errors import InputError, MultichainError
from .forest import forest_spectrum
from .graph import WeightedDigraph, forest_dimension
from .spectral import max_forest_projection

ROW_SUM_TOL = 1e-8
ENTRY_TOL = 1e-12


def as_stochastic(p, renormalize: bool = False) -> np.ndarray:
    """Validate a row-stochastic matrix.

    With ``renormalize`` rows are rescaled to sum to one after the entry
    check; otherwise a row-sum error beyond ``1e-8`` is an input error.
    """
    try:
        P = linalg.as_matrix(p)
    except (ValueError, ArithmeticError) as exc:
        raise InputError(f"invalid transition matrix: {exc}") from exc
    if P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise InputError(f"transition matrix must be square and nonempty, got {P.shape}")
    if np.any(P < -ENTRY_TOL) or np.any(P > 1 + ENTRY_TOL):
        raise InputError("transition probabilities must lie in [0, 1]")
    P = np.clip(P, 0.0, 1.0)
    sums = P.sum(axis=1)
    if renormalize:
        if np.any(sums <= 0):
            raise InputError("cannot renormalize a zero row")
        return P / sums[:, None]
    bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
    if bad.size:
        raise InputError(f"row {bad[0] + 1} sums to {sums[bad[0]]!r}, not 1")
    return P


def parse_stochastic_csv(text: str) -> np.ndarray:
    """Read ``n`` comma-separated rows of ``n`` decimals; ``#`` lines are comments."""
    rows = []
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    for lineno, row in enumerate(csv.reader(io.StringIO("\n".join(lines))), 1):
        try:
            rows.append([float(x) for x in row])
        except ValueError:
            raise InputError(f"row {lineno}: non-numeric entry in {row!r}") from None
    if not rows:
        raise InputError("empty transition matrix")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError(f"expected {n} values on each of {n} rows")
    return as_stochastic(rows)


def chain_digraph(p) -> WeightedDigraph:
    """Loopless digraph with arc ``i -> j`` of weight ``p_ij`` for ``i != j``."""
    P = as_stochastic(p)
    n = P.shape[0]
    arcs = [(i + 1, j + 1, P[i, j]) for i in range(n) for j in range(n) if i != j and P[i, j] > 0]
    return WeightedDigraph.from_arcs(n, arcs)


def chain_laplacian(p) -> np.ndarray:
    """``I - P``; self-loop mass only moves the diagonal."""
    P = as_stochastic(p)
    return np.eye(P.shape[0]) - P


def long_run_matrix(p, tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    """Cesaro limit of ``P^t`` from the maximum in-forests of the chain digraph."""
    return max_forest_projection(forest_spectrum(chain_digraph(p), tol=tol))


def stationary_distribution(p, tol: float = linalg.DEFAULT_TOL) -> np.ndarray:
    """Unique stationary row vector of a chain with one closed class."""
    g = chain_digraph(p)
    d = forest_dimension(g)
    if d != 1:
        raise MultichainError(f"chain has {d} closed classes; use long_run_matrix")
    return max_forest_projection(forest_spectrum(g, tol=tol))[0].copy()


def cesaro_average(p, k: int) -> np.ndarray:
    """``(1/k) sum_{t<k} P^t`` by binary splitting of the partial sums."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    P = as_stochastic(p)
    n, count = P.shape[0], k
    # S(a + b) = S(a) + P^a S(b), with S(m) = sum_{t<m} P^t
    total, total_pow = np.zeros((n, n)), np.eye(n)
    block, block_pow = np.eye(n), P.copy()
    while k:
        if k & 1:
            total = total + total_pow @ block
            total_pow = total_pow @ block_pow
        block = block + block_pow @ block
        block_pow = block_pow @ block_pow
        k >>= 1
    return total / count
