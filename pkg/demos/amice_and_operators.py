"""
Amice transforms of point masses
================================

A finite sum of Dirac masses has an exact Amice transform, sum w_c (1+T)^c.
The operators gamma_a, phi and psi on measures match the ones on series.
"""
from crystabelian import LocalDistribution, amice, frobenius_phi, gamma_act, psi
from crystabelian.distributions import dist_gamma, dist_phi, dist_psi, dist_norm_LA
from crystabelian.series import rho_radius, sup_norm_r

p, h, M = 3, 2, 8
mu = LocalDistribution.dirac_sum([(1, 2), (4, -1), (9, 3), (22, 1)], p, h, M)

A = amice(mu)
print("A(mu) has degree", A.i_max)
print("first coefficients:", [str(A.coeff(n)) for n in range(5)])

N = M - 1
print("gamma_2 :", amice(dist_gamma(2, mu), N) == gamma_act(2, amice(mu, N), order=N))
print("phi     :", amice(dist_phi(mu), N) == frobenius_phi(amice(mu, N)))
print("psi     :", amice(dist_psi(mu), N) == psi(A).truncate(N))

# the LA_h norm sits between two radii of the transform (as valuations)
v = dist_norm_LA(mu).val
left = sup_norm_r(A, rho_radius(p, h)).val
right = sup_norm_r(A, rho_radius(p, h + 1)).val
print(f"{left} >= {v} >= {right} - 1")
