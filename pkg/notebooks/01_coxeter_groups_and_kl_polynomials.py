"""
Coxeter groups and Kazhdan-Lusztig polynomials
==============================================

Elements are numbered in ShortLex order and named by their reduced word,
so "121" in B3 is s1 s2 s1 and "e" is the identity.
"""

from cellkit import build_kl_table, build_system, cbasis_product, naive_kl_polynomial

W = build_system("B3")
print(W.spec, "has", W.order, "elements; w0 =", W.label(W.w0))

# multiplication, inverses and descents work on element indices
x, y = W.element("12"), W.element("3")
print("12 * 3 =", W.label(W.multiply(x, y)))
print("left descents of 1213:", sorted(s + 1 for s in W.descents(W.element("1213"))))

# Bruhat order as a boolean matrix B[x, y] = (x <= y)
B = W.bruhat_matrix
print("elements below w0:", int(B[:, W.w0].sum()))

# the whole KL table in one pass
T = build_kl_table(W)
print("nonzero P_{x,y}:", T.nonzero_pairs())

A3 = build_system("A3")
TA = build_kl_table(A3)
u, v = A3.element("2"), A3.element("2132")
print("P_{2,2132} =", TA.kl(u, v), "| oracle:", naive_kl_polynomial(A3, u, v))
print("mu(2, 2132) =", TA.mu(u, v))

# products in the KL basis: C_x C_y = sum_z h_{x,y,z} C_z
c = W.element("121")
for z, h in cbasis_product(T, c, c).items():
    print(f"  C_121 C_121 contains ({h}) C_{W.label(z)}")
