"""
Dihedral groups and graphs of spectral radius 2cos(pi/n)
========================================================

All KL polynomials of a dihedral group are 1. Based modules of the small
quotient ring of I2(n) are governed by bicolored graphs whose spectral radius
is 2cos(pi/n), which are simply laced Dynkin diagrams.
"""

from cellkit import build_kl_table, build_system, classify_spectral_graphs, dihedral_small_quotient_ring
from cellkit.graphs import ade_census

W = build_system("I2(7)")
T = build_kl_table(W)
print("P_{12,12121} =", T.kl(W.element("12"), W.element("12121")))

# the explicit rules and the Hecke algebra give the same ring
for n in (5, 7, 9):
    same = dihedral_small_quotient_ring(n, "formula") == dihedral_small_quotient_ring(n, "hecke")
    print(f"I2({n}) small quotient, formula == Hecke: {same}")

for n in (5, 6, 8, 12):
    graphs = classify_spectral_graphs(n)
    print(n, [(g.name, g.graph6(), g.certificate["certified"]) for g in graphs])

names = sorted(g.name for g in ade_census(9))
print("connected graphs below 2 on <= 9 vertices:", names)
