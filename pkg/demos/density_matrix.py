"""The pair's density matrix evolves linearly even though the pair does not."""

import math

import numpy as np

from nlqm import (Coupling, density_matrix, integrate, purity, random_hermitian, random_orthonormal_pair,
                  schwarz_parameter, spec_from_directions, state_pair_at)

H = random_hermitian(4, seed=42)
A, B = random_orthonormal_pair(4, seed=1)
spec = spec_from_directions(H, A, B, 1.0, 0.3, 0.7, Coupling(1.0, 0.5))

p0, f0 = state_pair_at(spec, -2.0)
h = 1e-4
ts = np.array([0.5 - h, 0.5, 0.5 + h])
tr = integrate(p0, f0, H, spec.g, (-2, 1), t_eval=ts)
rm, r0, rp = (density_matrix(p, f).matrix for p, f in zip(tr.psi, tr.phi))
comm = -1j * (H.matrix @ r0 - r0 @ H.matrix)
print("|d rho/dt + i[H, rho]| =", np.max(np.abs((rp - rm) / (2 * h) - comm)))

rho = density_matrix(tr.psi[1], tr.phi[1])
print("rho eigenvalues:", np.round(rho.eigenvalues, 12))
print("expected       :", np.array([math.sinh(0.3) ** 2, math.cosh(0.3) ** 2]) / math.cosh(0.6))
S = schwarz_parameter(tr.psi[1], tr.phi[1])
print(f"purity {purity(rho):.12f} = 1 - 2S/N^2 = {1 - 2 * S / tr.N[1] ** 2:.12f}")
