"""
Acceptance criteria, one test each. Every test records a PASS/FAIL line that
is printed at the end of the pytest run; ``python3 tests/test_acceptance.py``
runs them all as a script.
"""

import json
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cellkit import (a_function, build_kl_table, build_system, cbasis_product,
                     classify_spectral_graphs, compute_cells, dihedral_small_quotient_ring,
                     enumerate_transitive_modules, h_cell, is_nice, is_strongly_regular,
                     quadratic_ring)
from cellkit.graphs import ade_census, ade_expected
from golden import compare

GOLDEN = json.loads((Path(__file__).parent / "data" / "golden_cells_B3_B4.json").read_text())

RESULTS: list[str] = []


class Check:
    """Collects failed conditions for one criterion."""

    def __init__(self):
        self.failures = []

    def __call__(self, cond, what):
        if not cond:
            self.failures.append(what)


def record(number, title, check, elapsed, budget):
    if elapsed > budget:
        check.failures.append(f"runtime {elapsed:.1f}s over {budget}s")
    status = "PASS" if not check.failures else "FAIL"
    line = f"criterion {number} [{status}] {title} ({elapsed:.2f}s)"
    if check.failures:
        line += ": " + "; ".join(check.failures)
    RESULTS.append(line)
    print(line)
    assert not check.failures, line


def _golden_ok(dec, spec, check):
    results, matched = compare(dec, GOLDEN[spec])
    check(len(matched) == len(GOLDEN[spec]) == len(dec.two_sided_cells),
          f"{spec}: {len(matched)} of {len(GOLDEN[spec])} reference cells matched")
    for i, *oks in results:
        check(all(oks), f"{spec} reference cell {i}: a/boxes/rows/cols = {oks}")


def test_criterion_1_B3_golden():
    c, t0 = Check(), time.perf_counter()
    W = build_system("B3")
    dec = compute_cells(W, build_kl_table(W))
    c(len(dec.two_sided_cells) == 6, "six two-sided cells")
    c([len(x) for x in dec.two_sided_cells] == [1, 14, 9, 9, 14, 1], "cell sizes")
    c(dec.a_values == [0, 1, 2, 3, 4, 9], f"a-values {dec.a_values}")
    c(dec.is_linear, "two-sided order linear")
    _golden_ok(dec, "B3", c)
    record(1, "B3 cells, a-values and reference grids", c, time.perf_counter() - t0, 5)


def test_criterion_2_B4_golden():
    c, t0 = Check(), time.perf_counter()
    W = build_system("B4")
    dec = compute_cells(W, build_kl_table(W))
    c(len(dec.two_sided_cells) == 10, "ten two-sided cells")
    c(dec.a_values == [0, 1, 2, 3, 4, 4, 5, 6, 9, 16], f"a-values {dec.a_values}")
    k = len(dec.two_sided_cells)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)
             if not (dec.two_sided_leq(i, j) or dec.two_sided_leq(j, i))]
    c(len(pairs) == 1 and all(dec.a_values[i] == 4 for i in pairs[0]),
      f"incomparable pairs {pairs}")
    _golden_ok(dec, "B4", c)
    record(2, "B4 cells, incomparable a=4 pair, reference grids", c, time.perf_counter() - t0, 60)


def test_criterion_3_nice_cells():
    c, t0 = Check(), time.perf_counter()
    W3 = build_system("B3")
    d3 = compute_cells(W3, build_kl_table(W3))
    J = d3.a_values.index(4)
    c(is_nice(d3, J).is_nice, "B3 a=4 cell nice")
    W4 = build_system("B4")
    d4 = compute_cells(W4, build_kl_table(W4))
    bad4 = [J for J in range(len(d4.two_sided_cells)) if not is_strongly_regular(d4, J)]
    c(bool(bad4) and all(is_nice(d4, J).is_nice for J in bad4),
      "every non-strongly-regular B4 cell nice")
    W5 = build_system("B5")
    d5 = compute_cells(W5, build_kl_table(W5))
    neither = [J for J in range(len(d5.two_sided_cells))
               if not is_strongly_regular(d5, J) and not is_nice(d5, J).is_nice]
    c(len(neither) == 1, f"B5 cells neither strongly regular nor nice: {neither}")
    c([d5.a_values[J] for J in neither] == [11], f"their a-values {[d5.a_values[J] for J in neither]}")
    record(3, "nice-cell predicates on B3, B4, B5", c, time.perf_counter() - t0, 15 * 60)


def test_criterion_4_hcell_rank_two():
    W = build_system("B3")
    dec = compute_cells(W, build_kl_table(W), a_mode="skip")
    c, t0 = Check(), time.perf_counter()
    H = h_cell(dec, int(dec.left_of[W.element("1")]))
    c(sorted(W.label(x) for x in H) == ["1", "121"], f"H-cell {[W.label(x) for x in H]}")
    res = enumerate_transitive_modules(quadratic_ring(0), 2)
    got = sorted(str(m.matrices[1].tolist()) for m in res.modules)
    c(got == sorted(["[[1]]", "[[0, 1], [1, 0]]"]), f"modules {got}")
    c(res.complete, "search complete")
    record(4, "H-cell of 1 in B3 and the two rank-2 modules", c, time.perf_counter() - t0, 1)


def test_criterion_5_dihedral():
    c, t0 = Check(), time.perf_counter()
    for n in (5, 7, 9):
        F = dihedral_small_quotient_ring(n, "formula")
        H = dihedral_small_quotient_ring(n, "hecke")
        c(F == H, f"I2({n}) formula ring differs from Hecke ring")
        W = build_system(f"I2({n})")
        T = build_kl_table(W)
        trivial = all((T.kl(x, y).to_list() == [1]) == W.bruhat_leq(x, y)
                      and (T.kl(x, y).to_list() in ([], [1]))
                      for x in range(W.order) for y in range(W.order))
        c(trivial, f"I2({n}) has a nontrivial P_x,y")
    record(5, "dihedral formula ring equals Hecke ring; P_x,y = 1", c, time.perf_counter() - t0, 10)


def test_criterion_6_ade():
    c, t0 = Check(), time.perf_counter()
    want = {3: {"A2"}, 5: {"A4"}, 7: {"A6"}, 6: {"A5", "D4"}, 8: {"A7", "D5"},
            10: {"A9", "D6"}, 12: {"A11", "D7", "E6"}}
    for n, names in want.items():
        graphs = classify_spectral_graphs(n)
        got = {g.name for g in graphs}
        c(got == names, f"n={n}: {sorted(got)}")
        c(all(g.certificate["certified"] for g in graphs), f"n={n}: uncertified graph")
    census = ade_census(12)
    c(sorted(g.name or "?" for g in census) == sorted(ade_expected(12)),
      "census below 2 on <= 12 vertices is not the ADE list")
    record(6, "spectral graph classification and ADE census", c, time.perf_counter() - t0, 120)


def test_criterion_7_structure():
    c, t0 = Check(), time.perf_counter()
    for spec in ("B2", "B3", "B4"):
        W = build_system(spec)
        T = build_kl_table(W)
        dec = compute_cells(W, T)
        n = W.order
        for blocks in (dec.left_cells, dec.right_cells, dec.two_sided_cells):
            c(sorted(x for b in blocks for x in b) == list(range(n)), f"{spec}: not a partition")
        for b in dec.left_cells + dec.right_cells:
            c(len({int(dec.two_sided_of[x]) for x in b}) == 1, f"{spec}: cell straddles")
        rights = {frozenset(b) for b in dec.right_cells}
        for L in dec.left_cells:
            img = frozenset(int(W.inverse[x]) for x in L)
            c(img in rights and dec.two_sided_of[next(iter(img))] == dec.two_sided_of[L[0]],
              f"{spec}: inverse of a left cell is not a right cell of the same J")
        k = len(dec.two_sided_cells)
        image = [int(dec.two_sided_of[W.multiply(b[0], W.w0)]) for b in dec.two_sided_cells]
        c(sorted(image) == list(range(k)), f"{spec}: w -> w w0 not a bijection on cells")
        c(all(dec.two_sided_leq(i, j) == dec.two_sided_leq(image[j], image[i])
              for i in range(k) for j in range(k)), f"{spec}: w -> w w0 does not reverse order")
        B = W.bruhat_matrix
        for y, col in enumerate(T.columns):
            c((col >= 0).all(), f"{spec}: negative KL coefficient")
            for x in col.any(axis=1).nonzero()[0]:
                deg = int(col[x].nonzero()[0].max())
                ok = B[x, y] and ((x == y and deg == 0) or 2 * deg <= W.length(y) - W.length(x) - 1)
                if not ok:
                    c(False, f"{spec}: degree bound at {W.label(x)}, {W.label(y)}")
        for J, cell in enumerate(dec.two_sided_cells):
            for z in cell[:3]:
                c(a_function(T, z, cell=cell) == dec.a_values[J], f"{spec}: a not constant on J{J}")
        c(dec.a_values[int(dec.two_sided_of[W.identity])] == 0, f"{spec}: a(e)")
        c(dec.a_values[int(dec.two_sided_of[W.w0])] == W.length(W.w0), f"{spec}: a(w0)")
    W = build_system("B4")
    T = build_kl_table(W)
    rng = random.Random(2024)
    for _ in range(200):
        x, y = rng.randrange(W.order), rng.randrange(W.order)
        ref = cbasis_product(T, x, y, "first")
        c(cbasis_product(T, x, y, "last") == ref == cbasis_product(T, x, y, rng),
          f"product depends on reduced word at {W.label(x)}, {W.label(y)}")
    record(7, "structural property suite", c, time.perf_counter() - t0, math.inf)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
