"""
Cells of B3 and B4
==================

Left, right and two-sided cells, their a-values, and the predicates
regular, strongly regular and nice.
"""

from cellkit import (build_kl_table, build_system, cell_report, compute_cells, h_cell,
                     is_nice, is_strongly_regular)

W = build_system("B3")
dec = compute_cells(W, build_kl_table(W))
print([len(c) for c in dec.two_sided_cells], dec.a_values, "linear:", dec.is_linear)

# one table per two-sided cell; rows are right cells and columns left cells
print(cell_report(dec, "markdown"))

for J in range(len(dec.two_sided_cells)):
    rep = is_nice(dec, J)
    print(f"J{J} a={dec.a_values[J]} strongly regular={rep.is_strongly_regular} "
          f"nice={rep.is_nice} clauses={rep.clauses}")

# the H-cell of the left cell containing s1
L = int(dec.left_of[W.element("1")])
print("H-cell:", [W.label(x) for x in h_cell(dec, L)])

# B4: two cells with a = 4 that are not comparable
W4 = build_system("B4")
d4 = compute_cells(W4, build_kl_table(W4))
print("B4 a-values:", d4.a_values, "linear:", d4.is_linear)
for J in range(len(d4.two_sided_cells)):
    if not is_strongly_regular(d4, J):
        print(f"  B4 J{J} (a={d4.a_values[J]}) nice: {is_nice(d4, J).is_nice}")
