"""
H-cell rings and their based modules
====================================

Evaluating the KL structure constants at v = 1 on an H-cell gives a
positively based ring. Its transitive based modules are nonnegative integer
matrix solutions, the decategorified shadow of simple transitive
2-representations.
"""

from cellkit import (build_kl_table, build_system, cell_quotient_ring, compute_cells,
                     enumerate_transitive_modules, nice_reduced_ring, quadratic_ring,
                     special_value)

W = build_system("B3")
T = build_kl_table(W)
dec = compute_cells(W, T)
L = int(dec.left_of[W.element("1")])

ring = cell_quotient_ring(W, T, dec, L)
for i in range(1, ring.rank):
    for j in range(1, ring.rank):
        print(f"{ring.labels[i]} * {ring.labels[j]} = {ring.product(i, j)}")
print("special value:", special_value(ring))

# for a nice cell with |H| = 2 the ring rescales to {1, x} with x^2 = 1 + a x
reduced, info = nice_reduced_ring(W, T, dec, L)
print("reduction:", info)
res = enumerate_transitive_modules(reduced, max_rank=2)
for m in res.modules:
    print("x acts by", m.matrices[1].tolist())

# the Fibonacci ring x^2 = 1 + x has a single module up to rank 3
fib = enumerate_transitive_modules(quadratic_ring(1), 3)
print("x^2 = 1 + x:", [m.matrices[1].tolist() for m in fib.modules],
      "complete:", fib.complete)
