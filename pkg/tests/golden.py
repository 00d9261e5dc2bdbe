"""Comparison of computed cell reports with the reference B3 and B4 cell grids."""

import json

from cellkit import cell_report


def _boxes(grid):
    return {frozenset(box) for row in grid for box in row if box}


def _rows(grid):
    return {frozenset(x for box in row for x in box) for row in grid}


def _cols(grid):
    return {frozenset(x for row in grid for x in row[c]) for c in range(len(grid[0]))}


def _canon(W, grid):
    # reference labels may be any reduced word; map them to canonical labels
    return [[[W.label(W.element(lab)) for lab in box] for box in row] for row in grid]


def compare(dec, golden_cells):
    """
    Match every golden cell with a computed one via its element set; returns a
    list of (index, a_ok, boxes_ok, rows_ok, cols_ok) and the set of computed
    cells that were matched.
    """
    W = dec.system
    report = json.loads(cell_report(dec, "json"))["cells"]
    by_members = {frozenset(x for row in c["grid"] for box in row for x in box): c
                  for c in report}
    out, matched = [], set()
    for i, gold in enumerate(golden_cells):
        grid = _canon(W, gold["grid"])
        members = frozenset(x for row in grid for box in row for x in box)
        ours = by_members.get(members)
        if ours is None:
            out.append((i, False, False, False, False))
            continue
        matched.add(members)
        out.append((i, ours["a"] == gold["a"], _boxes(ours["grid"]) == _boxes(grid),
                    _rows(ours["grid"]) == _rows(grid), _cols(ours["grid"]) == _cols(grid)))
    return out, matched
