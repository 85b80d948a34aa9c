"""
Flattenings and their Gram determinants
=======================================

The exact engine works with a generic tensor whose entries are variables.
Each mode gives a flattening matrix; the product of a flattening in the
x variables with one in the y variables has a determinant that is a
polynomial of bidegree (k_i, k_i).
"""

from subspace_degree import FormatProfile, product_power_det
from subspace_degree.flattening import format_flattening, generic_flattening, gram_product, symbolic_determinant

p = FormatProfile((2, 2, 2), (2, 2, 2))

# rows follow the mode index, columns the remaining indices in lex order
for mode in (1, 2, 3):
    print(f"mode {mode} flattening:")
    print(format_flattening(generic_flattening("a", p, mode), p))
    print()

# the Gram product for k = (2,2) and its determinant
q = FormatProfile((2, 2), (3, 3))
G = gram_product(1, q)
det = symbolic_determinant(G)
print("det of the 2 x 2 Gram product:")
print(det.to_text())

# cofactor expansion and fraction-free elimination agree
assert det == symbolic_determinant(G, "fraction-free")

# the product of powered determinants is symmetric under swapping x and y
poly = product_power_det(FormatProfile((1, 2, 2), (3, 3, 3)))
print("terms:", len(poly), " bidegree:", poly.bidegree, " swap symmetric:", poly.swap_blocks() == poly)
