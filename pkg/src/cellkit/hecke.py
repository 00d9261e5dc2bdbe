"""
Kazhdan-Lusztig polynomials, mu-coefficients and structure constants of the
Kazhdan-Lusztig basis.

Conventions: P_{x,y} is a polynomial in q with P_{y,y} = 1; structure
constants live in Z[v, v^-1] with v^2 = q and ``C_s C_s = (v + v^-1) C_s``,
so every h_{x,y,z} is bar-invariant and h_{w0,w0,w0} has top degree l(w0).

The polynomial table is computed one column P_{., y} at a time with numpy:
for y = s v > v,

    P_{x,y} = q^(1-c) P_{sx,v} + q^c P_{x,v}
              - sum_{z : sz < z} mu(z, v) q^((l(y) - l(z))/2) P_{x,z}

where c = 1 if sx < x and 0 otherwise; all x are handled at once.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .coxeter import CoxeterSystem, build_system
from .polys import LaurentPoly, Poly

__all__ = [
    "CONVENTION_VERSION", "SizePolicyError", "CacheError", "KLTable", "CExpansion",
    "build_kl_table", "naive_kl_polynomial", "cbasis_product_generator",
    "cbasis_product", "left_products", "a_function", "a_value_of_cell",
    "save_kl_table", "load_kl_table", "MAX_KL_ORDER",
]

log = logging.getLogger(__name__)

CONVENTION_VERSION = "kl1:P(q),C_s^2=(v+v^-1)C_s"

# full KL tables are built for groups up to this order (B5 = 3840)
MAX_KL_ORDER = 4000

# coefficients of an element of the Hecke algebra in the KL basis
CExpansion = dict[int, LaurentPoly]


class SizePolicyError(MemoryError):
    pass


class CacheError(ValueError):
    pass


@dataclass(eq=False)
class KLTable:
    """
    All KL polynomials and mu-coefficients of a finite Coxeter group.

    ``columns[y][x, k]`` is the coefficient of q^k in P_{x,y} (zero rows for
    x not below y). ``mu_lists[y]`` holds ``(z, mu(z, y))`` for z < y with
    nonzero mu, as two aligned arrays.
    """
    system: CoxeterSystem
    columns: list[np.ndarray] = field(repr=False)
    mu_lists: list[tuple[np.ndarray, np.ndarray]] = field(repr=False)
    convention_version: str = CONVENTION_VERSION

    def kl(self, x: int, y: int) -> Poly:
        return Poly(self.columns[y][x].tolist())

    def mu(self, x: int, y: int) -> int:
        zs, ms = self.mu_lists[y]
        hit = np.nonzero(zs == x)[0]
        return int(ms[hit[0]]) if len(hit) else 0

    def nonzero_pairs(self) -> int:
        return sum(int(np.count_nonzero(c.any(axis=1))) for c in self.columns)

    # -- multiplication operators in the C basis -----------------------------

    def _mu_below(self, s: int, side: str) -> list[tuple[np.ndarray, np.ndarray]]:
        """For each w, the (z, mu) pairs with z < w and s a descent of z on ``side``."""
        W = self.system
        table = W.left if side == "left" else W.right
        desc = W.lengths[table[:, s]] < W.lengths
        out = []
        for w in range(W.order):
            zs, ms = self.mu_lists[w]
            keep = desc[zs]
            out.append((zs[keep], ms[keep]))
        return out

    def _operator(self, s: int, side: str):
        """
        Sparse pieces of multiplication by C_s on ``side``: returns (T, D) with
        C_s * C_w = (v + v^-1) C_w if D[w] else sum_z T[z, w] C_z.
        """
        key = (s, side)
        cache = self.__dict__.setdefault("_ops", {})
        if key in cache:
            return cache[key]
        W = self.system
        n = W.order
        table = W.left if side == "left" else W.right
        desc = W.lengths[table[:, s]] < W.lengths
        rows, cols, vals = [], [], []
        below = self._mu_below(s, side)
        for w in np.nonzero(~desc)[0]:
            rows.append(np.array([table[w, s]]))
            cols.append(np.array([w]))
            vals.append(np.array([1]))
            zs, ms = below[w]
            rows.append(zs)
            cols.append(np.full(len(zs), w))
            vals.append(ms)
        T = sp.csr_matrix((np.concatenate(vals).astype(np.int64),
                           (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
        D = sp.diags(desc.astype(np.int64), format="csr")
        cache[key] = (T, D, desc, below)
        return cache[key]


def _column_degree(length: int) -> int:
    return max(0, (length - 1) // 2)


def build_kl_table(system: CoxeterSystem | str, max_order: int = MAX_KL_ORDER) -> KLTable:
    """Compute every P_{x,y} and mu(x,y) for the group."""
    if isinstance(system, str):
        system = build_system(system)
    W = system
    n = W.order
    if n > max_order:
        need = sum(n * (_column_degree(int(l)) + 1) * 4 for l in W.lengths)
        raise SizePolicyError(
            f"KL table for {W.spec} (|W| = {n}) exceeds the size policy "
            f"(max order {max_order}); dense storage would need ~{need / 2**30:.1f} GiB")
    lengths = W.lengths
    columns: list[np.ndarray] = [None] * n
    mu_lists: list[tuple[np.ndarray, np.ndarray]] = [None] * n
    first = np.zeros((n, 1), dtype=np.int32)
    first[0, 0] = 1
    columns[0] = first
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    mu_lists[0] = empty
    desc = [lengths[W.left[:, s]] < lengths for s in range(W.rank)]
    report = max(1, n // 10)
    for y in range(1, n):
        if y % report == 0:
            log.info("KL columns %d/%d", y, n)
        ly = int(lengths[y])
        s = W.words[y][0]
        v = int(W.left[y, s])
        width = _column_degree(ly) + 2
        acc = np.zeros((n, width), dtype=np.int64)
        Pv = columns[v]
        dv = Pv.shape[1]
        c = desc[s]
        sx = W.left[:, s]
        # q^(1-c) P_{sx,v} + q^c P_{x,v}
        gathered = Pv[sx]
        acc[c, :dv] += gathered[c]
        acc[~c, 1:dv + 1] += gathered[~c]
        acc[~c, :dv] += Pv[~c]
        acc[c, 1:dv + 1] += Pv[c]
        zs, ms = mu_lists[v]
        for z, m in zip(zs.tolist(), ms.tolist()):
            if not desc[s][z]:
                continue
            shift = (ly - int(lengths[z])) // 2
            Pz = columns[z]
            acc[:, shift:shift + Pz.shape[1]] -= m * Pz
        if acc[:, -1].any():
            raise ArithmeticError(f"degree bound violated in column {W.label(y)}")
        acc = acc[:, :-1]
        if acc.size and (acc.max() > np.iinfo(np.int32).max or acc.min() < 0):
            raise ArithmeticError(f"coefficient out of range in column {W.label(y)}")
        col = acc.astype(np.int32)
        col.setflags(write=False)
        columns[y] = col
        # mu(x, y): coefficient of q^((l(y)-l(x)-1)/2) when l(y)-l(x) is odd
        diff = ly - lengths
        cand = np.nonzero((diff > 0) & (diff % 2 == 1))[0]
        vals = col[cand, (diff[cand] - 1) // 2].astype(np.int64)
        keep = vals != 0
        mu_lists[y] = (cand[keep], vals[keep])
    return KLTable(W, columns, mu_lists)


def naive_kl_polynomial(system: CoxeterSystem, x: int, y: int, _memo=None) -> Poly:
    """
    Independent KL recursion on single pairs (Bruhat-checked, dict arithmetic,
    recursing on the largest left descent). Slow; used as an oracle.
    """
    W = system

    @lru_cache(maxsize=None)
    def P(x, y):
        if not W.bruhat_leq(x, y):
            return Poly()
        if x == y:
            return Poly([1])
        s = max(W.descents(y, "left"))
        v = int(W.left[y, s])
        sx = int(W.left[x, s])
        ly = W.length(y)
        if W.length(sx) < W.length(x):
            out = P(sx, v) + P(x, v) * Poly({1: 1})
        else:
            out = P(sx, v) * Poly({1: 1}) + P(x, v)
        for z in range(W.order):
            if W.length(z) >= W.length(v) or not (W.bruhat_leq(x, z) and W.bruhat_leq(z, v)):
                continue
            if W.length(int(W.left[z, s])) > W.length(z):
                continue
            m = mu(z, v)
            if m:
                out = out - P(x, z) * Poly({(ly - W.length(z)) // 2: m})
        return out

    def mu(z, v):
        d = W.length(v) - W.length(z)
        if d <= 0 or d % 2 == 0:
            return 0
        return P(z, v)[(d - 1) // 2]

    if _memo is not None:
        _memo.append(P)
    return P(int(x), int(y))


# -- products in the KL basis --------------------------------------------------

def cbasis_product_generator(table: KLTable, s: int, w: int) -> CExpansion:
    """C_s * C_w for a 0-based generator s."""
    W = table.system
    sw = int(W.left[w, s])
    if W.lengths[sw] < W.lengths[w]:
        return {int(w): LaurentPoly({-1: 1, 1: 1})}
    out = {sw: LaurentPoly({0: 1})}
    zs, ms = table.mu_lists[w]
    for z, m in zip(zs.tolist(), ms.tolist()):
        if W.lengths[W.left[z, s]] < W.lengths[z]:
            out[z] = LaurentPoly({0: m})
    return out


def _choose_descent(W, u, how):
    if how == "first":
        return W.words[u][0]
    d = sorted(W.descents(u, "left"))
    if how == "last":
        return d[-1]
    if isinstance(how, random.Random):
        return how.choice(d)
    raise ValueError(f"unknown descent choice {how!r}")


@dataclass
class LeftProducts:
    """
    ``C_x * C_y`` for x in ``xs`` and y in ``ys``: ``matrices[x]`` is a sparse
    |W| x (len(ys) * span) matrix whose entry (z, j*span + e + L) is the
    coefficient of v^e in h_{x, ys[j], z}.
    """
    xs: list[int]
    ys: list[int]
    L: int
    matrices: dict[int, sp.csr_matrix]

    @property
    def span(self):
        return 2 * self.L + 1

    def expansion(self, x: int, y: int) -> CExpansion:
        j = self.ys.index(y)
        block = self.matrices[x][:, j * self.span:(j + 1) * self.span].tocoo()
        out: dict[int, dict[int, int]] = {}
        for z, e, c in zip(block.row.tolist(), block.col.tolist(), block.data.tolist()):
            if c:
                out.setdefault(z, {})[e - self.L] = c
        return {z: LaurentPoly(cs) for z, cs in sorted(out.items())}

    def top_degrees(self, x: int) -> dict[int, int]:
        """For each z in the support: max v-exponent over all y of h_{x,y,z}."""
        m = self.matrices[x].tocoo()
        if m.nnz == 0:
            return {}
        keep = m.data != 0
        rows = m.row[keep]
        exps = (m.col[keep] % self.span) - self.L
        best: dict[int, int] = {}
        order = np.lexsort((exps, rows))
        for z, e in zip(rows[order].tolist(), exps[order].tolist()):
            best[z] = e
        return best


def left_products(table: KLTable, xs: Iterable[int], ys: Sequence[int],
                  descent="first") -> LeftProducts:
    """
    Compute C_x * C_y for all x in ``xs``, y in ``ys`` at once.

    Uses C_u = C_s C_{u'} - sum_{z < u', sz < z} mu(z, u') C_z for u = s u',
    memoising C_u * [C_y ...] over the elements this recursion touches and
    dropping each memo entry once nothing else needs it. ``descent`` picks the
    s used at each step ("first", "last" or a ``random.Random``); the result
    does not depend on it.
    """
    W = table.system
    xs = sorted(set(int(x) for x in xs))
    ys = [int(y) for y in ys]
    L = max((W.length(x) for x in xs), default=0)
    span = 2 * L + 1
    ncols = span * len(ys)

    # dependency closure
    plan: dict[int, tuple[int, int, list[tuple[int, int]]]] = {}
    stack = list(xs)
    while stack:
        u = stack.pop()
        if u in plan or u == 0:
            continue
        s = _choose_descent(W, u, descent)
        up = int(W.left[u, s])
        _, _, _, below = table._operator(s, "left")
        zs, ms = below[up]
        deps = list(zip(zs.tolist(), ms.tolist()))
        plan[u] = (s, up, deps)
        stack.append(up)
        stack.extend(z for z, _ in deps)
    refs: dict[int, int] = {u: 0 for u in plan}
    refs[0] = 0
    for u, (s, up, deps) in plan.items():
        refs[up] += 1
        for z, _ in deps:
            refs[z] += 1
    wanted = set(xs)

    shift = sp.kron(sp.identity(len(ys), dtype=np.int64, format="csr"),
                    sp.diags([np.ones(span - 1, dtype=np.int64)] * 2, [1, -1],
                             shape=(span, span), dtype=np.int64), format="csr")
    start = sp.csr_matrix((np.ones(len(ys), dtype=np.int64),
                           (np.array(ys, dtype=np.int64),
                            np.arange(len(ys)) * span + L)), shape=(W.order, ncols))
    memo: dict[int, sp.csr_matrix] = {0: start}
    result: dict[int, sp.csr_matrix] = {}
    if 0 in wanted:
        result[0] = start

    def release(u):
        refs[u] -= 1
        if refs[u] == 0 and u not in wanted:
            memo.pop(u, None)

    for u in sorted(plan, key=lambda u: W.lengths[u]):
        s, up, deps = plan[u]
        T, D, _, _ = table._operator(s, "left")
        prev = memo[up]
        cur = T @ prev + (D @ prev) @ shift
        for z, m in deps:
            cur = cur - m * memo[z]
        cur.eliminate_zeros()
        memo[u] = cur
        if u in wanted:
            result[u] = cur
        release(up)
        for z, _ in deps:
            release(z)
    return LeftProducts(xs, ys, L, result)


def cbasis_product(table: KLTable, x: int, y: int, descent="first") -> CExpansion:
    """C_x * C_y = sum_z h_{x,y,z} C_z as ``{z: h}``."""
    return left_products(table, [x], [y], descent=descent).expansion(int(x), int(y))


def a_value_of_cell(table: KLTable, cell: Sequence[int], mode: str = "cell") -> int:
    """
    Lusztig's a-value of a two-sided cell.

    ``mode="cell"``: max over x, y, z in the cell of deg h_{x,y,z}.
    ``mode="duflo"``: max over z in the cell of deg h_{x^-1, x, z} for the
    least x of the cell only. Any x works since its left cell contains a
    Duflo involution d with deg h_{x^-1,x,d} = a and the degree never exceeds
    a on the cell; this makes large groups cheap.
    """
    cell = sorted(int(z) for z in cell)
    members = set(cell)
    W = table.system
    if mode == "cell":
        xs, ys = cell, cell
        prods = left_products(table, xs, ys)
        tops = [prods.top_degrees(x) for x in xs]
    elif mode == "duflo":
        x = cell[0]
        prods = left_products(table, [int(W.inverse[x])], [x])
        tops = [prods.top_degrees(int(W.inverse[x]))]
    else:
        raise ValueError(f"unknown a-function mode {mode!r}")
    best = None
    for t in tops:
        for z, e in t.items():
            if z in members and (best is None or e > best):
                best = e
    if best is None:
        raise ArithmeticError("no structure constant lands in the cell")
    return best


def a_function(table: KLTable, z: int, cell: Sequence[int] | None = None,
               scan: str = "cell") -> int:
    """
    a(z): max v-degree of h_{x,y,z} with x, y in the two-sided cell of z
    (``scan="cell"``, the cell must be given) or over all of W
    (``scan="full"``, for small groups only).
    """
    W = table.system
    if scan == "full":
        if W.order > 400:
            raise SizePolicyError("full a-function scan is limited to |W| <= 400")
        xs = list(range(W.order))
    elif scan == "cell":
        if cell is None:
            raise ValueError("scan='cell' needs the two-sided cell of z")
        xs = sorted(int(c) for c in cell)
    else:
        raise ValueError(f"unknown scan {scan!r}")
    prods = left_products(table, xs, xs)
    best = None
    for x in xs:
        m = prods.matrices[x].getrow(int(z)).tocoo()
        keep = m.data != 0
        if keep.any():
            e = int(((m.col[keep] % prods.span) - prods.L).max())
            best = e if best is None else max(best, e)
    if best is None:
        raise ArithmeticError(f"C_{W.label(z)} never occurs in the scanned products")
    return best


# -- persistence ---------------------------------------------------------------

def _payload_digest(records) -> str:
    return hashlib.sha256(json.dumps(records, separators=(",", ":")).encode()).hexdigest()


def save_kl_table(table: KLTable, path: str | Path) -> Path:
    """
    Write the table as one JSON document. Coefficients are decimal strings so
    readers never lose precision.
    """
    W = table.system
    kl = []
    for y, col in enumerate(table.columns):
        rows = np.nonzero(col.any(axis=1))[0]
        for x in rows.tolist():
            coeffs = np.trim_zeros(col[x], "b").tolist()
            kl.append([x, y, [str(c) for c in coeffs]])
    mu = [[int(z), y, str(int(m))] for y, (zs, ms) in enumerate(table.mu_lists)
          for z, m in zip(zs, ms)]
    doc = {
        "format": "cellkit-kl-table",
        "spec": str(W.spec),
        "order": W.order,
        "convention_version": table.convention_version,
        "indexing_checksum": W.indexing_checksum,
        "payload_sha256": _payload_digest([mu, kl]),
        "mu": mu,
        "kl": kl,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(doc, separators=(",", ":")))
    tmp.replace(path)
    return path


def load_kl_table(system: CoxeterSystem, path: str | Path) -> KLTable:
    """Read a table written by :func:`save_kl_table`; refuses stale or foreign files."""
    doc = json.loads(Path(path).read_text())
    W = system
    if doc.get("format") != "cellkit-kl-table":
        raise CacheError(f"{path}: not a KL table cache")
    for key, want in (("spec", str(W.spec)), ("order", W.order),
                      ("convention_version", CONVENTION_VERSION),
                      ("indexing_checksum", W.indexing_checksum)):
        if doc.get(key) != want:
            raise CacheError(f"{path}: {key} mismatch (cache has {doc.get(key)!r}, "
                             f"expected {want!r})")
    if _payload_digest([doc["mu"], doc["kl"]]) != doc.get("payload_sha256"):
        raise CacheError(f"{path}: payload checksum mismatch")
    n = W.order
    columns = [np.zeros((n, _column_degree(int(W.lengths[y])) + 1), dtype=np.int64)
               for y in range(n)]
    for x, y, coeffs in doc["kl"]:
        columns[y][x, :len(coeffs)] = [int(c) for c in coeffs]
    cols = []
    for c in columns:
        c = c.astype(np.int32)
        c.setflags(write=False)
        cols.append(c)
    per_y: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for z, y, m in doc["mu"]:
        per_y[y].append((z, int(m)))
    mu_lists = []
    for entries in per_y:
        entries.sort()
        mu_lists.append((np.array([z for z, _ in entries], dtype=np.int64),
                         np.array([m for _, m in entries], dtype=np.int64)))
    return KLTable(W, cols, mu_lists, doc["convention_version"])
