"""Exhaustive in-forest enumeration and the classical minor theorems.

Everything here is computed from the definition (arc subsets with
outdegree at most one and no cycle) and from cofactor determinants, never
from the trace recursion, so it can be used to check that recursion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import SizeLimitError
from .forest import ForestSpectrum, forest_spectrum, parametric_forest_matrices
from .graph import WeightedDigraph, forest_dimension, laplacian

SIZE_LIMIT = 8


@dataclass(frozen=True)
class InForest:
    mask: int
    k: int
    weight: float
    roots: tuple[int, ...]

    @property
    def root_set(self) -> frozenset[int]:
        return frozenset(self.roots)


@dataclass(frozen=True)
class ForestEnumeration:
    n: int
    arcs: tuple[tuple[int, int, float], ...]
    forests: tuple[InForest, ...]

    @property
    def max_arcs(self) -> int:
        return max(f.k for f in self.forests)


def _guard(n: int, limit: int = SIZE_LIMIT) -> None:
    if n > limit:
        raise SizeLimitError(f"exhaustive enumeration limited to n <= {limit}, got n = {n}")


def enumerate_in_forests(g: WeightedDigraph, limit: int = SIZE_LIMIT) -> ForestEnumeration:
    """Every spanning converging forest of ``g``.

    Each vertex picks either no outgoing arc or one of its arcs; choices
    closing a cycle are pruned as soon as they are made.
    """
    _guard(g.n, limit)
    n = g.n
    out: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for idx, (tail, head, _) in enumerate(g.arcs):
        out[tail].append((idx, head))
    succ = [0] * (n + 1)  # 0 means root
    chosen: list[int] = []
    found: list[InForest] = []

    def closes_cycle(v: int, head: int) -> bool:
        u = head
        while u:
            if u == v:
                return True
            u = succ[u]
        return False

    def visit(v: int) -> None:
        if v > n:
            found.append(_record(g, chosen, succ, n))
            return
        visit(v + 1)
        for idx, head in out[v]:
            if closes_cycle(v, head):
                continue
            succ[v] = head
            chosen.append(idx)
            visit(v + 1)
            chosen.pop()
            succ[v] = 0

    visit(1)
    found.sort(key=lambda f: f.mask)
    return ForestEnumeration(n=n, arcs=g.arcs, forests=tuple(found))


def _record(g: WeightedDigraph, chosen: list[int], succ: list[int], n: int) -> InForest:
    ids = sorted(chosen)
    weight = 1.0
    for idx in ids:
        weight *= g.arcs[idx][2]
    roots = []
    for v in range(1, n + 1):
        while succ[v]:
            v = succ[v]
        roots.append(v)
    return InForest(mask=sum(1 << i for i in ids), k=len(ids), weight=weight, roots=tuple(roots))


def oracle_forest_spectrum(g: WeightedDigraph, limit: int = SIZE_LIMIT) -> ForestSpectrum:
    """Forest weights and forest matrices summed straight from the enumeration."""
    return spectrum_from_enumeration(enumerate_in_forests(g, limit), laplacian(g))


def spectrum_from_enumeration(e: ForestEnumeration, L: np.ndarray) -> ForestSpectrum:
    n = e.n
    sigma = np.zeros(n + 1)
    q = np.zeros((n + 1, n, n))
    for f in e.forests:
        sigma[f.k] += f.weight
        for i, r in enumerate(f.roots):
            q[f.k, i, r - 1] += f.weight
    return ForestSpectrum(n=n, d=n - e.max_arcs, sigma=sigma, q=tuple(q), laplacian=np.asarray(L, dtype=float))


def root_set_weights(e: ForestEnumeration) -> dict[frozenset[int], float]:
    """Total weight of forests grouped by their exact set of roots."""
    out: dict[frozenset[int], float] = {}
    for f in e.forests:
        out[f.root_set] = out.get(f.root_set, 0.0) + f.weight
    return out


def check_principal_minor(L: np.ndarray, e: ForestEnumeration, roots) -> tuple[float, float]:
    """Principal minor with the root rows/columns removed, and the matching forest weight."""
    _guard(e.n)
    roots = frozenset(roots)
    idx = [r - 1 for r in roots]
    return linalg.minor(L, idx, idx), root_set_weights(e).get(roots, 0.0)


def check_tree_cofactor(L: np.ndarray, e: ForestEnumeration, i: int, j: int) -> tuple[float, float]:
    """``(i, j)`` cofactor of ``L`` and the weight of spanning trees converging to ``i``."""
    _guard(e.n)
    cof = (-1.0) ** (i + j) * linalg.minor(L, [i - 1], [j - 1])
    trees = sum(f.weight for f in e.forests if f.root_set == {i})
    return cof, trees


def check_adjugate_identity(L: np.ndarray, s: ForestSpectrum, tau: float) -> float:
    """Largest gap between ``adj(I + tau L)``, ``det(I + tau L)`` and ``Q(tau)``, ``sigma(tau)``."""
    _guard(s.n)
    M = np.eye(s.n) + tau * np.asarray(L, dtype=float)
    Q, sig, _ = parametric_forest_matrices(s, tau)
    return max(linalg.max_abs_norm(linalg.adjugate(M) - Q), abs(linalg.determinant(M) - sig))


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.bound


def verify_graph(g: WeightedDigraph, tol: float = linalg.DEFAULT_TOL, taus=(0.0, 0.1, 1.0, 7.3, -1.0)) -> list[Check]:
    """Compare the recursion with the enumeration and the minor theorems.

    Bounds are ``tol * max(1, scale)`` with the scale of the compared values.
    """
    _guard(g.n)
    e = enumerate_in_forests(g)
    s = forest_spectrum(g, tol=tol)
    ref = spectrum_from_enumeration(e, s.laplacian)
    L = s.laplacian
    n = g.n
    checks: list[Check] = []

    def add(name: str, a, b) -> None:
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        scale = max(1.0, linalg.max_abs_norm(a), linalg.max_abs_norm(b))
        checks.append(Check(name, linalg.max_abs_norm(a - b), tol * scale))

    checks.append(Check("forest_dimension", abs(ref.d - forest_dimension(g)), 0.0))
    add("sigma", s.sigma, ref.sigma)
    for k in range(n + 1):
        add(f"Q_{k}", s.q[k], ref.q[k])
    for tau in taus:
        Q, sig, _ = parametric_forest_matrices(s, tau)
        scale = max(1.0, linalg.max_abs_norm(Q), abs(sig))
        checks.append(Check(f"adjugate@tau={tau:g}", check_adjugate_identity(L, s, tau), tol * scale))
    weights = root_set_weights(e)
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        cof = (-1.0) ** (i + j) * linalg.minor(L, [i - 1], [j - 1])
        add(f"tree_cofactor({i},{j})", cof, weights.get(frozenset({i}), 0.0))
    for size in range(1, n + 1):
        for roots in itertools.combinations(range(1, n + 1), size):
            idx = [r - 1 for r in roots]
            add(f"principal_minor{set(roots)}", linalg.minor(L, idx, idx), weights.get(frozenset(roots), 0.0))
        by_size = sum(w for rs, w in weights.items() if len(rs) == size)
        add(f"root_partition(|J|={size})", by_size, ref.sigma[n - size])
    return checks
