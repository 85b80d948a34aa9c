"""
Classical special cases
=======================

Two families of subspace varieties have degrees known in closed form:
rank-one tensors form a Segre variety, and for matrices the subspace
variety is a determinantal variety. The engine is compared with both.
"""

from math import factorial, prod

from subspace_degree import (
    FormatProfile,
    degree_subspace,
    determinantal_degree_oracle,
    grassmannian_degree,
)

# Segre: D! / prod (n_i - 1)!
for n in [(2, 2), (2, 2, 2), (3, 3, 3), (2, 3, 4), (2, 2, 2, 2)]:
    D = sum(ni - 1 for ni in n)
    expected = factorial(D) // prod(factorial(ni - 1) for ni in n)
    got = degree_subspace(FormatProfile((1,) * len(n), n)).degree
    print(f"Segre {n}: {got} (closed form {expected})")

# n x m matrices of rank at most r
print()
print("r  n  m  degree  closed form")
for r, n, m in [(1, 3, 3), (2, 3, 3), (2, 3, 4), (2, 4, 4), (3, 4, 5)]:
    got = degree_subspace(FormatProfile((r, r), (n, m))).degree
    print(f"{r}  {n}  {m}  {got:6d}  {determinantal_degree_oracle(r, n, m)}")

# Grassmannians in the Pluecker embedding, a factor of every degree
print()
print("deg G(2,n) for n = 2..8:", [grassmannian_degree(2, n) for n in range(2, 9)])

# the whole space has degree one
print("k = n = (2,3,2):", degree_subspace(FormatProfile((2, 3, 2), (2, 3, 2))).degree)
