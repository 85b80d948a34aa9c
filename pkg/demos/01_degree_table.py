"""
Degrees of subspace varieties
=============================

A tensor in C^n1 x ... x C^nd lies in the subspace variety X_k when its
i-th flattening has rank at most k_i for every mode. This script computes
deg X_k for a small grid of formats and prints the pieces the degree is
assembled from.
"""

from math import prod

from subspace_degree import FormatProfile, degree_subspace

# one profile in detail: k = (1,2,2) inside 3 x 3 x 3 tensors
p = FormatProfile((1, 2, 2), (3, 3, 3))
print("N, K, D =", p.N, p.K, p.D)

res = degree_subspace(p)
print("Grassmannian degrees:", res.grass_degrees)
print("f =", res.f_value)
print("degree =", res.degree, " dimension =", res.dimension)
print("terms in the expanded determinant product:", res.term_count_of_p)

# the degree is the Grassmannian part times f
assert res.degree == prod(res.grass_degrees) * res.f_value

# a grid of third and fourth order formats
grid = {
    (1, 2, 2): [(3, 3, 3), (3, 3, 4), (3, 4, 4)],
    (2, 2, 2): [(3, 3, 3), (3, 3, 4), (3, 4, 4)],
    (2, 2, 3): [(3, 3, 3), (3, 3, 4), (3, 4, 4)],
    (1, 1, 2, 2): [(2, 2, 3, 3), (2, 3, 3, 3), (3, 3, 3, 3)],
    (1, 2, 2, 2): [(2, 2, 3, 3), (2, 3, 3, 3), (3, 3, 3, 3)],
    (1, 2, 2, 3): [(2, 2, 3, 3), (2, 3, 3, 3), (3, 3, 3, 3)],
}
for k, columns in grid.items():
    # the paired method skips the full expansion and is much faster
    degrees = [degree_subspace(FormatProfile(k, n), method="paired").degree for n in columns]
    print(f"k={k}:", "  ".join(f"{n} -> {deg}" for n, deg in zip(columns, degrees)))

# degrees do not depend on the order of the modes
q = FormatProfile((2, 3, 2), (4, 4, 3))
print("permuted (2,2,3)/(3,4,4):", degree_subspace(q, method="paired").degree)
