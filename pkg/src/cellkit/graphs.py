"""
Connected simple graphs with small spectral radius.

Spectral radius only grows when a connected graph is extended, so every
connected graph below a bound is reached by adding one vertex at a time to
a smaller connected graph below the same bound. Equality with 2cos(pi/n)
is certified exactly: the minimal polynomial of 2cos(pi/n) must divide the
characteristic polynomial and no eigenvalue may exceed it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
import numpy as np
import sympy

__all__ = [
    "Graph", "classify_spectral_graphs", "graphs_below", "ade_census", "ade_name",
    "ade_expected", "minimal_polynomial_2cos", "graphs_to_json",
]

EIG_MARGIN = 1e-9

_x = sympy.Symbol("x")


@dataclass
class Graph:
    """A simple graph with its adjacency matrix and spectral data."""
    adjacency: np.ndarray
    spectral_radius: float
    name: str | None = None
    bicolorings: list[tuple[int, ...]] = field(default_factory=list)
    certificate: dict | None = None

    @property
    def n_vertices(self) -> int:
        return self.adjacency.shape[0]

    def to_networkx(self) -> nx.Graph:
        return nx.from_numpy_array(self.adjacency)

    def graph6(self) -> str:
        return nx.to_graph6_bytes(self.to_networkx(), header=False).decode().strip()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertices": self.n_vertices,
            "graph6": self.graph6(),
            "spectral_radius": self.spectral_radius,
            "bicolorings": [list(c) for c in self.bicolorings],
            "certificate": self.certificate,
        }


def _radius(adj: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(adj.astype(float))[-1])


def graphs_below(bound: float, max_vertices: int, strict: bool = False) -> list[np.ndarray]:
    """
    Adjacency matrices of all connected graphs (up to isomorphism) on at most
    ``max_vertices`` vertices with spectral radius <= bound (< bound - margin
    when ``strict``).
    """
    def ok(r):
        return r < bound - EIG_MARGIN if strict else r <= bound + EIG_MARGIN

    level = [np.zeros((1, 1), dtype=np.int64)] if ok(0.0) else []
    out = list(level)
    for k in range(1, max_vertices):
        buckets: dict[str, list[nx.Graph]] = {}
        nxt = []
        for adj in level:
            for mask in range(1, 1 << k):
                new = np.zeros((k + 1, k + 1), dtype=np.int64)
                new[:k, :k] = adj
                nbrs = [i for i in range(k) if mask >> i & 1]
                new[k, nbrs] = new[nbrs, k] = 1
                if not ok(_radius(new)):
                    continue
                g = nx.from_numpy_array(new)
                key = nx.weisfeiler_lehman_graph_hash(g)
                seen = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(g, h) for h in seen):
                    continue
                seen.append(g)
                nxt.append(new)
        level = nxt
        out.extend(level)
        if not level:
            break
    return out


def ade_name(adj: np.ndarray) -> str | None:
    """Dynkin name of a simply laced Dynkin diagram ("A4", "D5", "E6"), else None."""
    g = nx.from_numpy_array(adj)
    n = g.number_of_nodes()
    if not nx.is_connected(g) or g.number_of_edges() != n - 1:
        return None
    deg = dict(g.degree())
    if max(deg.values(), default=0) <= 2:
        return f"A{n}"
    branch = [v for v, d in deg.items() if d >= 3]
    if len(branch) != 1 or deg[branch[0]] != 3:
        return None
    c = branch[0]
    arms = []
    for nb in g.neighbors(c):
        length, prev, cur = 1, c, nb
        while deg[cur] == 2:
            prev, cur = cur, next(u for u in g.neighbors(cur) if u != prev)
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def ade_expected(max_vertices: int) -> set[str]:
    """Names of all connected simply laced Dynkin diagrams up to a vertex count."""
    names = {f"A{k}" for k in range(1, max_vertices + 1)}
    names |= {f"D{k}" for k in range(4, max_vertices + 1)}
    names |= {f"E{k}" for k in (6, 7, 8) if k <= max_vertices}
    return names


def ade_census(max_vertices: int) -> list[Graph]:
    """Connected graphs with spectral radius < 2 on at most ``max_vertices`` vertices."""
    return [Graph(a, _radius(a), ade_name(a)) for a in graphs_below(2.0, max_vertices, strict=True)]


@lru_cache(maxsize=None)
def minimal_polynomial_2cos(n: int) -> sympy.Poly:
    """Minimal polynomial over Q of 2cos(pi/n)."""
    return sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / n), _x), _x)


def _certify(adj: np.ndarray, n: int) -> dict:
    target = 2 * math.cos(math.pi / n)
    charpoly = sympy.Matrix(adj.tolist()).charpoly(_x)
    minpoly = minimal_polynomial_2cos(n)
    _, rem = sympy.div(charpoly.as_expr(), minpoly.as_expr(), _x)
    divides = sympy.expand(rem) == 0
    top = _radius(adj)
    return {
        "target": f"2cos(pi/{n})",
        "target_value": target,
        "minimal_polynomial": [int(c) for c in minpoly.all_coeffs()],
        "characteristic_polynomial": [int(c) for c in charpoly.all_coeffs()],
        "divides": bool(divides),
        "max_eigenvalue": top,
        "margin": EIG_MARGIN,
        "certified": bool(divides and top <= target + EIG_MARGIN),
    }


def _bicolorings(adj: np.ndarray) -> list[tuple[int, ...]]:
    g = nx.from_numpy_array(adj)
    if not nx.is_bipartite(g):
        return []
    col = nx.bipartite.color(g)
    one = tuple(col[v] for v in range(adj.shape[0]))
    return [one, tuple(1 - c for c in one)]


def classify_spectral_graphs(n: int, max_vertices: int | None = None) -> list[Graph]:
    """
    All connected simple graphs (up to isomorphism, at most ``max_vertices``
    vertices, default n) whose spectral radius is exactly 2cos(pi/n).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if max_vertices is None:
        max_vertices = n
    if max_vertices < n:
        raise ValueError("max_vertices must be at least n")
    target = 2 * math.cos(math.pi / n)
    out = []
    for adj in graphs_below(target, max_vertices):
        if abs(_radius(adj) - target) > 1e-6:
            continue
        cert = _certify(adj, n)
        if not cert["certified"]:
            continue
        out.append(Graph(adj, _radius(adj), ade_name(adj), _bicolorings(adj), cert))
    out.sort(key=lambda g: (g.name or "", g.n_vertices))
    return out


def graphs_to_json(n: int, graphs: list[Graph]) -> str:
    doc = {"n": n, "target": f"2cos(pi/{n})", "note": "decategorified candidates",
           "graphs": [g.to_json() for g in graphs]}
    return json.dumps(doc, indent=1) + "\n"
