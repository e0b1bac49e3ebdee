"""Weighted digraphs, their Laplacian variants and the in-forest dimension."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import InputError, NumericalInstabilityError

Arc = tuple[int, int, float]


@dataclass(frozen=True)
class WeightedDigraph:
    """Loopless digraph on vertices ``1..n`` with positive arc weights.

    ``arcs`` is kept sorted by ``(tail, head)`` with at most one arc per
    ordered pair; use :meth:`from_arcs` to build one from raw input.
    """

    n: int
    arcs: tuple[Arc, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"vertex count must be >= 1, got {self.n}")
        seen = set()
        for tail, head, w in self.arcs:
            _check_arc(self.n, tail, head, w)
            if (tail, head) in seen:
                raise InputError(f"duplicate arc {tail}->{head}; use from_arcs to merge")
            seen.add((tail, head))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int, float]]) -> "WeightedDigraph":
        """Build a digraph, merging parallel arcs by summing their weights."""
        merged: dict[tuple[int, int], float] = {}
        for tail, head, w in arcs:
            _check_arc(n, tail, head, w)
            merged[(tail, head)] = merged.get((tail, head), 0.0) + float(w)
        return cls(n, tuple((t, h, w) for (t, h), w in sorted(merged.items())))

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for tail, head, w in self.arcs:
            W[tail - 1, head - 1] = w
        return W


def _check_arc(n: int, tail: int, head: int, w: float) -> None:
    if tail == head:
        raise InputError(f"loop arc at vertex {tail} is not allowed")
    for v in (tail, head):
        if not 1 <= v <= n:
            raise InputError(f"vertex id {v} outside 1..{n}")
    if not (w > 0 and np.isfinite(w)):
        raise InputError(f"arc {tail}->{head} has nonpositive or non-finite weight {w}")


def parse_edge_list(text: str) -> WeightedDigraph:
    """Parse the edge-list format.

    Lines are ``# comments``, an optional ``n=<N>`` header before any arc,
    or ``<tail> <head> <weight>``.  Without a header ``n`` is the largest
    vertex id seen.
    """
    n = None
    raw: list[Arc] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            if n is not None:
                raise InputError(f"line {lineno}: repeated n= header")
            if raw:
                raise InputError(f"line {lineno}: n= header must precede all arcs")
            try:
                n = int(line[2:].strip())
            except ValueError:
                raise InputError(f"line {lineno}: bad header {line!r}") from None
            if n < 1:
                raise InputError(f"line {lineno}: vertex count must be >= 1")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"line {lineno}: expected '<tail> <head> <weight>', got {line!r}")
        try:
            tail, head, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise InputError(f"line {lineno}: malformed arc {line!r}") from None
        if tail == head:
            raise InputError(f"line {lineno}: loop arc at vertex {tail} is not allowed")
        if tail < 1 or head < 1:
            raise InputError(f"line {lineno}: vertex ids are 1-based")
        if not (w > 0 and np.isfinite(w)):
            raise InputError(f"line {lineno}: weight must be positive, got {parts[2]}")
        raw.append((tail, head, w))
    if n is None:
        if not raw:
            raise InputError("empty edge list without n= header")
        n = max(max(t, h) for t, h, _ in raw)
    for tail, head, _ in raw:
        if tail > n or head > n:
            raise InputError(f"vertex id {max(tail, head)} exceeds declared n={n}")
    return WeightedDigraph.from_arcs(n, raw)


def laplacian(g: WeightedDigraph) -> np.ndarray:
    """Row Laplacian: off-diagonal ``-w_ij``, zero row sums."""
    W = g.weight_matrix()
    return np.diag(W.sum(axis=1)) - W


def column_laplacian(g: WeightedDigraph) -> np.ndarray:
    """Same off-diagonal as :func:`laplacian`, diagonal chosen for zero column sums."""
    W = g.weight_matrix()
    return np.diag(W.sum(axis=0)) - W


def kirchhoff(g: WeightedDigraph) -> np.ndarray:
    return column_laplacian(g).T.copy()


def column_kirchhoff(g: WeightedDigraph) -> np.ndarray:
    return laplacian(g).T.copy()


def reverse(g: WeightedDigraph) -> WeightedDigraph:
    return WeightedDigraph.from_arcs(g.n, ((h, t, w) for t, h, w in g.arcs))


def validate_laplacian(L: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Check zero row sums and the sign pattern; return ``L`` unchanged."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise InputError(f"Laplacian must be square, got shape {L.shape}")
    scale = max(1.0, float(np.max(np.abs(L))) if L.size else 0.0)
    if np.any(np.abs(L.sum(axis=1)) > tol * scale * L.shape[0]):
        raise InputError("Laplacian rows must sum to zero")
    off = L - np.diag(np.diag(L))
    if np.any(off > 0) or np.any(np.diag(L) < 0):
        raise InputError("Laplacian needs nonpositive off-diagonal and nonnegative diagonal")
    return L


def _adjacency(g: WeightedDigraph) -> csr_matrix:
    rows = [t - 1 for t, _, _ in g.arcs]
    cols = [h - 1 for _, h, _ in g.arcs]
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))


def sink_components(g: WeightedDigraph) -> list[frozenset[int]]:
    """Strong components with no arc leaving them, sorted by smallest vertex."""
    _, labels = connected_components(_adjacency(g), directed=True, connection="strong")
    leaving = set()
    for tail, head, _ in g.arcs:
        if labels[tail - 1] != labels[head - 1]:
            leaving.add(labels[tail - 1])
    comps: dict[int, set[int]] = {}
    for v, c in enumerate(labels, 1):
        comps.setdefault(int(c), set()).add(v)
    sinks = [frozenset(vs) for c, vs in comps.items() if c not in leaving]
    return sorted(sinks, key=min)


def forest_dimension(g: WeightedDigraph) -> int:
    """Minimum number of trees in an in-forest of ``g``."""
    return len(sink_components(g))


def reachability(g: WeightedDigraph) -> np.ndarray:
    """Boolean matrix ``R[i, j]``: vertex ``j+1`` is reachable from ``i+1`` (reflexive)."""
    dist = shortest_path(_adjacency(g), directed=True, unweighted=True)
    return np.isfinite(dist)


def check_dimension_against_sigma(d: int, sigma, tol: float = 1e-9) -> None:
    """Assert the structural ``d`` agrees with where the forest weights vanish."""
    sigma = np.asarray(sigma, dtype=float)
    n = len(sigma) - 1
    scale = max(1.0, float(np.max(np.abs(sigma))))
    positive = np.nonzero(sigma > tol * scale)[0]
    top = int(positive[-1]) if positive.size else 0
    if n - top != d:
        raise NumericalInstabilityError(
            f"structural forest dimension {d} disagrees with forest weights (n - {top})"
        )
