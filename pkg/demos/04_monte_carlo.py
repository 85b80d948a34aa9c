"""
A Monte Carlo check of the exact degrees
========================================

The normalized polynomial f(k, n) is also an expectation over a tensor with
i.i.d. standard complex Gaussian entries:

    E prod_i det(T_(i) T_(i)^*)^(n_i - k_i) = 2^D prod_i (k_i (n_i - k_i))! f(k, n)

so sampling the left side gives an estimate of the degree that shares no
code with the symbolic expansion.
"""

from subspace_degree import FormatProfile, degree_subspace, estimate_f
from subspace_degree.montecarlo import chi_squared_moment, empirical_chi_squared_moment

# E |Z|^2k for Z a sum of n squared complex Gaussians
for n, k in [(1, 1), (2, 2), (3, 3)]:
    mean, se = empirical_chi_squared_moment(n, k, 100_000, seed=1)
    print(f"n={n} k={k}: sampled {mean:9.2f} +- {se:6.2f}, exact {chi_squared_moment(n, k)}")

print()
for k, n in [((1, 2, 2), (3, 3, 3)), ((2, 2, 2), (3, 3, 3)), ((2, 2, 3), (3, 3, 4))]:
    p = FormatProfile(k, n)
    exact = degree_subspace(p, method="paired").degree
    est = estimate_f(p, 1_000_000, seed=42, exact_degree=exact)
    print(f"k={k} n={n}: exact {exact}, sampled {est.derived_degree:.1f} +- {est.degree_std_error:.1f}"
          f" (z = {est.z_score:+.2f})")

# one entry of the published table disagrees with the exact engine:
# the sampled degree sides with the engine by a wide margin
p = FormatProfile((2, 2, 3), (3, 4, 4))
exact = degree_subspace(p, method="paired").degree
est = estimate_f(p, 2_000_000, seed=7, exact_degree=exact)
print()
print(f"k=(2,2,3) n=(3,4,4): engine {exact}, sampled {est.derived_degree:.0f} +- {est.degree_std_error:.0f}")
print(f"distance to the published 19320: {(est.derived_degree - 19320) / est.degree_std_error:.0f} standard errors")

