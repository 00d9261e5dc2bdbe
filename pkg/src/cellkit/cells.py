"""
Kazhdan-Lusztig cells, the two-sided order, cell predicates and reports.

Orientation: z >=_L y when C_z occurs in some C_s C_y, so the identity is
the minimal two-sided cell and {w0} the maximal one; a-values increase
along the two-sided order.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .coxeter import CoxeterSystem
from .hecke import KLTable, a_value_of_cell

__all__ = [
    "CellDecomposition", "CellPredicateReport", "compute_cells", "is_regular",
    "is_strongly_regular", "is_nice", "h_cell", "h_cell_involutions",
    "parabolic_longest_elements", "cell_report", "REPORT_FORMATS",
]

log = logging.getLogger(__name__)

REPORT_FORMATS = ("markdown", "json", "csv")


def _preorder_edges(table: KLTable, side: str, generator_order=None):
    """(src, dst) arrays: dst occurs in C_s C_src (left) or C_src C_s (right)."""
    W = table.system
    srcs, dsts = [], []
    gens = range(W.rank) if generator_order is None else generator_order
    tab = W.left if side == "left" else W.right
    for s in gens:
        T, D, desc, below = table._operator(s, side)
        up = np.nonzero(~desc)[0]
        srcs.append(up)
        dsts.append(tab[up, s])
        for w in up.tolist():
            zs, _ = below[w]
            if len(zs):
                srcs.append(np.full(len(zs), w))
                dsts.append(zs)
    return np.concatenate(srcs), np.concatenate(dsts)


def _components(n, src, dst):
    """Strongly connected components, relabelled by least member, plus the DAG."""
    g = sp.csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, raw = connected_components(g, directed=True, connection="strong")
    first: dict[int, int] = {}
    for x, c in enumerate(raw.tolist()):
        first.setdefault(c, len(first))
    labels = np.array([first[c] for c in raw.tolist()], dtype=np.int64)
    k = len(first)
    blocks: list[list[int]] = [[] for _ in range(k)]
    for x, c in enumerate(labels.tolist()):
        blocks[c].append(x)
    cs, cd = labels[src], labels[dst]
    keep = cs != cd
    succ = [set() for _ in range(k)]
    for a, b in zip(cs[keep].tolist(), cd[keep].tolist()):
        succ[a].add(b)
    return labels, blocks, succ


def _reachability(succ):
    """reach[i] = bitmask of components j >= i (including i)."""
    k = len(succ)
    # reverse topological order by DFS
    order, seen = [], [False] * k
    for root in range(k):
        if seen[root]:
            continue
        stack = [(root, iter(succ[root]))]
        seen[root] = True
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                order.append(node)
                stack.pop()
            elif not seen[nxt]:
                seen[nxt] = True
                stack.append((nxt, iter(succ[nxt])))
    reach = [0] * k
    for node in order:
        r = 1 << node
        for j in succ[node]:
            r |= reach[j]
        reach[node] = r
    return reach


@dataclass(eq=False)
class CellDecomposition:
    """
    Left, right and two-sided cells of W with their orders and a-values.

    Cells are lists of element indices (ascending); ids are positions in
    ``left_cells`` etc. Two-sided cells are sorted by (a-value, least
    element), left and right cells by least element.
    """
    system: CoxeterSystem
    left_cells: list[list[int]]
    right_cells: list[list[int]]
    two_sided_cells: list[list[int]]
    left_of: np.ndarray
    right_of: np.ndarray
    two_sided_of: np.ndarray
    a_values: list[int]
    # reach bitmasks: bit j of *_reach[i] set iff cell i <= cell j
    left_reach: list[int] = field(repr=False)
    right_reach: list[int] = field(repr=False)
    two_sided_reach: list[int] = field(repr=False)

    def cell_of(self, x: int) -> tuple[int, int, int]:
        return int(self.left_of[x]), int(self.right_of[x]), int(self.two_sided_of[x])

    def two_sided_leq(self, i: int, j: int) -> bool:
        return bool(self.two_sided_reach[i] >> j & 1)

    def left_leq(self, i: int, j: int) -> bool:
        return bool(self.left_reach[i] >> j & 1)

    def right_leq(self, i: int, j: int) -> bool:
        return bool(self.right_reach[i] >> j & 1)

    def left_cells_in(self, J: int) -> list[int]:
        return sorted({int(self.left_of[x]) for x in self.two_sided_cells[J]})

    def right_cells_in(self, J: int) -> list[int]:
        return sorted({int(self.right_of[x]) for x in self.two_sided_cells[J]})

    def intersection(self, L: int, R: int) -> list[int]:
        return [x for x in self.left_cells[L] if self.right_of[x] == R]

    def grid(self, J: int) -> list[list[list[int]]]:
        """grid[r][c] = R_r meet L_c; rows are right cells, columns left cells."""
        return [[self.intersection(L, R) for L in self.left_cells_in(J)]
                for R in self.right_cells_in(J)]

    def successors(self, J: int) -> list[int]:
        """Covers of J in the two-sided order."""
        above = [j for j in range(len(self.two_sided_cells))
                 if j != J and self.two_sided_leq(J, j)]
        return [j for j in above
                if not any(k != j and self.two_sided_leq(k, j) for k in above)]

    @cached_property
    def is_linear(self) -> bool:
        k = len(self.two_sided_cells)
        return all(self.two_sided_leq(i, j) or self.two_sided_leq(j, i)
                   for i in range(k) for j in range(i + 1, k))


def compute_cells(system: CoxeterSystem, table: KLTable, a_mode: str | None = None,
                  generator_order=None) -> CellDecomposition:
    """
    Cells from the generator products C_s C_y (left) and C_y C_s (right).

    ``a_mode`` is passed to :func:`cellkit.hecke.a_value_of_cell` ("cell" by
    default, or "duflo"); ``a_mode="skip"`` leaves a-values unset (-1).
    """
    W = system
    n = W.order
    ls, ld = _preorder_edges(table, "left", generator_order)
    rs, rd = _preorder_edges(table, "right", generator_order)
    left_of, left_blocks, left_succ = _components(n, ls, ld)
    right_of, right_blocks, right_succ = _components(n, rs, rd)
    two_of, two_blocks, two_succ = _components(
        n, np.concatenate([ls, rs]), np.concatenate([ld, rd]))
    if a_mode is None:
        a_mode = "cell"
    if a_mode == "skip":
        avals = [-1] * len(two_blocks)
    else:
        avals = []
        for i, block in enumerate(two_blocks):
            avals.append(a_value_of_cell(table, block, mode=a_mode))
            log.info("a-value of cell %d/%d (size %d): %d",
                     i + 1, len(two_blocks), len(block), avals[-1])

    # sort two-sided cells by (a, least element)
    order = sorted(range(len(two_blocks)), key=lambda i: (avals[i], two_blocks[i][0]))
    new = {old: k for k, old in enumerate(order)}
    two_blocks = [two_blocks[i] for i in order]
    avals = [avals[i] for i in order]
    two_succ = [{new[j] for j in two_succ[i]} for i in order]
    two_of = np.array([new[c] for c in two_of.tolist()], dtype=np.int64)

    return CellDecomposition(
        W, left_blocks, right_blocks, two_blocks, left_of, right_of, two_of, avals,
        _reachability(left_succ), _reachability(right_succ), _reachability(two_succ))


# -- predicates ------------------------------------------------------------------

def is_regular(dec: CellDecomposition, J: int) -> bool:
    """No two distinct left (resp. right) cells of J are comparable."""
    for cells, leq in ((dec.left_cells_in(J), dec.left_leq),
                       (dec.right_cells_in(J), dec.right_leq)):
        for a, b in itertools.combinations(cells, 2):
            if leq(a, b) or leq(b, a):
                return False
    return True


def is_strongly_regular(dec: CellDecomposition, J: int) -> bool:
    if not is_regular(dec, J):
        return False
    return all(len(box) == 1 for row in dec.grid(J) for box in row)


def parabolic_longest_elements(system: CoxeterSystem) -> dict[int, tuple[int, ...]]:
    """Longest element of every standard parabolic -> one generating subset (0-based)."""
    out: dict[int, tuple[int, ...]] = {}
    for k in range(system.rank + 1):
        for sub in itertools.combinations(range(system.rank), k):
            out.setdefault(int(system.longest_element(sub)), sub)
    return out


@dataclass
class CellPredicateReport:
    """Outcome of the three niceness clauses for one two-sided cell, with witnesses."""
    cell: int
    is_regular: bool
    is_strongly_regular: bool
    is_nice: bool
    # clause 1: a box with more than two elements, if any: (L, R, size)
    oversized_box: tuple[int, int, int] | None
    # clause 2: per left cell, a right cell meeting it in 1 and one meeting it in 2
    # (None where missing)
    one_two_witnesses: dict[int, tuple[int | None, int | None]]
    # clause 3: a parabolic longest element in the cell and its subset
    parabolic_witness: tuple[int, tuple[int, ...]] | None

    @property
    def clauses(self) -> tuple[bool, bool, bool]:
        return (self.oversized_box is None,
                all(a is not None and b is not None
                    for a, b in self.one_two_witnesses.values()),
                self.parabolic_witness is not None)


def is_nice(dec: CellDecomposition, J: int) -> CellPredicateReport:
    lefts, rights = dec.left_cells_in(J), dec.right_cells_in(J)
    oversized = None
    witnesses = {}
    for L in lefts:
        one = two = None
        for R in rights:
            size = len(dec.intersection(L, R))
            if size > 2 and oversized is None:
                oversized = (L, R, size)
            if size == 1 and one is None:
                one = R
            if size == 2 and two is None:
                two = R
        witnesses[L] = (one, two)
    members = set(dec.two_sided_cells[J])
    parabolic = None
    for w, sub in parabolic_longest_elements(dec.system).items():
        if w in members:
            parabolic = (w, sub)
            break
    report = CellPredicateReport(J, is_regular(dec, J), is_strongly_regular(dec, J),
                                 False, oversized, witnesses, parabolic)
    report.is_nice = all(report.clauses)
    return report


def h_cell(dec: CellDecomposition, L: int) -> list[int]:
    """H = L meet L^-1 (the star of a KL basis element is its inverse)."""
    inv = dec.system.inverse
    members = set(dec.left_cells[L])
    return sorted(x for x in members if int(inv[x]) in members)


def h_cell_involutions(dec: CellDecomposition, L: int) -> list[int]:
    """Involutions of the H-cell: the candidates for its Duflo involution."""
    inv = dec.system.inverse
    return [x for x in h_cell(dec, L) if inv[x] == x]


# -- reports -----------------------------------------------------------------------

def _report_dict(dec: CellDecomposition, convention_version: str) -> dict:
    W = dec.system
    bold = set(parabolic_longest_elements(W))
    cells = []
    for J, members in enumerate(dec.two_sided_cells):
        lab = lambda xs: [W.label(x) for x in xs]
        cells.append({
            "a": dec.a_values[J],
            "left_cells": [lab(dec.left_cells[L]) for L in dec.left_cells_in(J)],
            "right_cells": [lab(dec.right_cells[R]) for R in dec.right_cells_in(J)],
            "grid": [[lab(box) for box in row] for row in dec.grid(J)],
            "parabolic_longest": lab(sorted(x for x in members if x in bold)),
            "order_successors": dec.successors(J),
        })
    return {"spec": str(W.spec), "convention_version": convention_version,
            "cells": cells}


def cell_report(dec: CellDecomposition, format: str = "markdown",
                convention_version: str | None = None) -> str:
    """
    Cell tables: one grid per two-sided cell (rows right cells,
    columns left cells), parabolic longest elements in bold.
    """
    from .hecke import CONVENTION_VERSION
    convention_version = convention_version or CONVENTION_VERSION
    W = dec.system
    if format == "json":
        return json.dumps(_report_dict(dec, convention_version), indent=1) + "\n"
    if format == "csv":
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["label", "length", "L", "R", "J", "a"])
        for x in range(W.order):
            L, R, J = dec.cell_of(x)
            out.writerow([W.label(x), W.length(x), L, R, J, dec.a_values[J]])
        return buf.getvalue()
    if format != "markdown":
        raise ValueError(f"unsupported report format {format!r}; "
                         f"choose from {', '.join(REPORT_FORMATS)}")
    bold = set(parabolic_longest_elements(W))
    lines = [f"# Kazhdan-Lusztig cells of {W.spec}", ""]
    lines.append("Rows are right cells, columns are left cells; bold entries are "
                 "longest elements of parabolic subgroups.")
    lines.append("")
    for J, members in enumerate(dec.two_sided_cells):
        succ = dec.successors(J)
        lines.append(f"## Two-sided cell {J}: a = {dec.a_values[J]}")
        lines.append("")
        lines.append(f"{len(members)} elements; covered by: "
                     f"{', '.join(map(str, succ)) if succ else 'none'}")
        lines.append("")
        lefts = dec.left_cells_in(J)
        lines.append("| | " + " | ".join(f"L{L}" for L in lefts) + " |")
        lines.append("|---" * (len(lefts) + 1) + "|")
        for R, row in zip(dec.right_cells_in(J), dec.grid(J)):
            entries = [", ".join(f"**{W.label(x)}**" if x in bold else W.label(x)
                                 for x in box) for box in row]
            lines.append(f"| R{R} | " + " | ".join(entries) + " |")
        lines.append("")
    return "\n".join(lines)
