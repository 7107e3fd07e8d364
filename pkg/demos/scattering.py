"""Asymptotic in/out states and the 2x2 scattering matrix.

Far from t0 the overlap vanishes and each vector becomes a free solution in
one channel. The map from the past pair to the future pair is unitary and
carries the phase theta_hat = theta - (a/b) ln 2.
"""

import numpy as np

from nlqm import (Coupling, asymptotic_pair, integrate, interaction_picture, random_hermitian,
                  random_orthonormal_pair, s_matrix, spec_from_directions, state_pair_at)

H = random_hermitian(4, seed=42)
A, B = random_orthonormal_pair(4, seed=1)
spec = spec_from_directions(H, A, B, 1.0, 0.3, 0.7, Coupling(1.0, 0.5))

S = s_matrix(spec)
print("theta_hat =", spec.theta_hat)
print("S =\n", np.round(S.entries, 6), "\nunitary:", S.is_unitary)

# integrate outwards from a moderate time, where the problem is well conditioned
p0, f0 = state_pair_at(spec, -2.0)
back = integrate(p0, f0, H, spec.g, (-2, -20))
fwd = integrate(p0, f0, H, spec.g, (-2, 20))
past = [interaction_picture(H, v[-1], -20) for v in (back.psi, back.phi)]
future = [interaction_picture(H, v[-1], 20) for v in (fwd.psi, fwd.phi)]
mapped = S.apply(*past)
print("|S(past) - future| =", max(np.linalg.norm(m - f) for m, f in zip(mapped, future)))

lim = asymptotic_pair(spec, "future")
print(f"future: psi ~ {lim.psi_weight:.4f} |{lim.psi_channel}>,  phi ~ {lim.phi_weight:.4f} |{lim.phi_channel}>")
