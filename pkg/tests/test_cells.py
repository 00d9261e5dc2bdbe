import json
import random

import pytest

from cellkit import (cell_report, compute_cells, h_cell, h_cell_involutions, is_nice,
                     is_regular, is_strongly_regular, parabolic_longest_elements)
from cellkit.cells import REPORT_FORMATS

from conftest import cells, system, table
from golden import compare

SPECS = ["A2", "A3", "B2", "B3", "B4", "H3", "I2(5)", "I2(6)", "D4"]


@pytest.mark.parametrize("spec", ["B3", "B4"])
def test_golden_grids(spec, golden):
    dec = cells(spec)
    results, matched = compare(dec, golden[spec])
    assert len(matched) == len(dec.two_sided_cells) == len(golden[spec])
    for i, *oks in results:
        assert all(oks), (spec, i, oks)


def test_B3_shape():
    dec = cells("B3")
    assert [len(c) for c in dec.two_sided_cells] == [1, 14, 9, 9, 14, 1]
    assert dec.a_values == [0, 1, 2, 3, 4, 9]
    assert dec.is_linear


def test_B4_shape():
    dec = cells("B4")
    assert dec.a_values == [0, 1, 2, 3, 4, 4, 5, 6, 9, 16]
    assert not dec.is_linear
    incomparable = [(i, j) for i in range(10) for j in range(i + 1, 10)
                    if not dec.two_sided_leq(i, j) and not dec.two_sided_leq(j, i)]
    assert incomparable == [(4, 5)]


@pytest.mark.parametrize("spec", SPECS)
def test_partition_invariants(spec):
    W, dec = system(spec), cells(spec)
    n = W.order
    for blocks, of in ((dec.left_cells, dec.left_of), (dec.right_cells, dec.right_of),
                       (dec.two_sided_cells, dec.two_sided_of)):
        assert sorted(x for b in blocks for x in b) == list(range(n))
        for i, b in enumerate(blocks):
            assert all(of[x] == i for x in b)
    # left and right cells sit inside a single two-sided cell
    for b in dec.left_cells + dec.right_cells:
        assert len({int(dec.two_sided_of[x]) for x in b}) == 1
    # boxes tile each two-sided cell
    for J, members in enumerate(dec.two_sided_cells):
        assert sorted(x for row in dec.grid(J) for box in row for x in box) == members


@pytest.mark.parametrize("spec", SPECS)
def test_inverse_swaps_left_and_right(spec):
    W, dec = system(spec), cells(spec)
    inv = W.inverse
    rights = {frozenset(c) for c in dec.right_cells}
    for L in dec.left_cells:
        image = frozenset(int(inv[x]) for x in L)
        assert image in rights
        assert {int(dec.two_sided_of[x]) for x in image} == {int(dec.two_sided_of[L[0]])}


@pytest.mark.parametrize("spec", ["B3", "B4", "A3", "H3", "D4"])
def test_multiplication_by_w0_reverses_order(spec):
    W, dec = system(spec), cells(spec)
    k = len(dec.two_sided_cells)
    image = []
    for members in dec.two_sided_cells:
        targets = {int(dec.two_sided_of[W.multiply(x, W.w0)]) for x in members}
        assert len(targets) == 1
        image.append(targets.pop())
    assert sorted(image) == list(range(k))
    for i in range(k):
        for j in range(k):
            assert dec.two_sided_leq(i, j) == dec.two_sided_leq(image[j], image[i])


@pytest.mark.parametrize("spec", SPECS)
def test_a_monotone_along_order(spec):
    dec = cells(spec)
    k = len(dec.two_sided_cells)
    assert dec.two_sided_cells[0] == [system(spec).identity]
    for i in range(k):
        for j in range(k):
            if dec.two_sided_leq(i, j):
                assert dec.a_values[i] <= dec.a_values[j]


def test_generator_order_independence():
    W, T = system("B3"), table("B3")
    ref = cells("B3")
    for order in ([2, 1, 0], [1, 2, 0]):
        dec = compute_cells(W, T, generator_order=order)
        assert dec.left_cells == ref.left_cells
        assert dec.two_sided_cells == ref.two_sided_cells
        assert dec.a_values == ref.a_values


def test_skip_a_values():
    dec = compute_cells(system("B3"), table("B3"), a_mode="skip")
    assert set(dec.a_values) == {-1}


def test_dihedral_cells():
    for n in (5, 6, 8):
        W, dec = system(f"I2({n})"), cells(f"I2({n})")
        assert [len(c) for c in dec.two_sided_cells] == [1, 2 * n - 2, 1]
        assert dec.a_values == [0, 1, n]
        assert len(dec.left_cells_in(1)) == 2


# -- predicates ----------------------------------------------------------------------

def test_B3_predicates():
    dec = cells("B3")
    rep = is_nice(dec, 4)
    assert dec.a_values[4] == 4
    assert rep.is_nice and not rep.is_strongly_regular
    assert all(rep.clauses)
    assert is_strongly_regular(dec, 0) and is_strongly_regular(dec, 5)


def test_B4_nonstrongly_regular_cells_are_nice():
    dec = cells("B4")
    bad = [J for J in range(10) if not is_strongly_regular(dec, J)]
    assert bad
    assert all(is_nice(dec, J).is_nice for J in bad)


@pytest.mark.parametrize("spec", ["B3", "B4", "A3", "H3"])
def test_predicate_witnesses(spec):
    W, dec = system(spec), cells(spec)
    longest = parabolic_longest_elements(W)
    for J in range(len(dec.two_sided_cells)):
        rep = is_nice(dec, J)
        assert rep.is_regular == is_regular(dec, J)
        if rep.is_strongly_regular:
            assert rep.is_regular
        if rep.oversized_box is not None:
            L, R, size = rep.oversized_box
            assert len(dec.intersection(L, R)) == size > 2
        for L, (one, two) in rep.one_two_witnesses.items():
            if one is not None:
                assert len(dec.intersection(L, one)) == 1
            if two is not None:
                assert len(dec.intersection(L, two)) == 2
        if rep.parabolic_witness is not None:
            w, sub = rep.parabolic_witness
            assert int(dec.two_sided_of[w]) == J and W.longest_element(sub) == w
        else:
            assert not any(int(dec.two_sided_of[w]) == J for w in longest)


def test_parabolic_longest_elements():
    W = system("B3")
    labels = sorted(W.label(w) for w in parabolic_longest_elements(W))
    assert len(labels) == 8
    assert {"e", "1", "2", "3", "13", "1212", "232", W.label(W.w0)} == set(labels)


def test_h_cell():
    W, dec = system("B3"), cells("B3")
    L = int(dec.left_of[W.element("1")])
    assert [W.label(x) for x in h_cell(dec, L)] == ["1", "121"]
    assert [W.label(x) for x in h_cell_involutions(dec, L)] == ["1", "121"]
    for L in range(len(dec.left_cells)):
        H = h_cell(dec, L)
        assert H and h_cell_involutions(dec, L)
        assert all(int(dec.left_of[x]) == L for x in H)


# -- reports ----------------------------------------------------------------------------

def test_markdown_report_headers():
    text = cell_report(cells("B3"), "markdown")
    heads = [line for line in text.splitlines() if line.startswith("## ")]
    assert [h.split("a = ")[1] for h in heads] == ["0", "1", "2", "3", "4", "9"]
    assert "**1212**" in text


def test_json_report_schema():
    W, dec = system("B4"), cells("B4")
    doc = json.loads(cell_report(dec, "json"))
    assert set(doc) == {"spec", "convention_version", "cells"}
    assert doc["spec"] == "B4"
    for J, c in enumerate(doc["cells"]):
        assert set(c) == {"a", "left_cells", "right_cells", "grid", "parabolic_longest",
                          "order_successors"}
        assert c["a"] == dec.a_values[J]
        assert c["order_successors"] == dec.successors(J)
        assert sorted(W.element(l) for L in c["left_cells"] for l in L) == \
            dec.two_sided_cells[J]


def test_csv_report():
    W, dec = system("B3"), cells("B3")
    rows = cell_report(dec, "csv").splitlines()
    assert rows[0] == "label,length,L,R,J,a"
    assert len(rows) == W.order + 1
    lab, length, L, R, J, a = rows[-1].split(",")
    assert lab == W.label(W.order - 1) and int(a) == 9


def test_report_deterministic_and_formats():
    dec = cells("A3")
    for fmt in REPORT_FORMATS:
        assert cell_report(dec, fmt) == cell_report(cells("A3"), fmt)
    with pytest.raises(ValueError):
        cell_report(dec, "xml")
