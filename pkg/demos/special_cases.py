"""Special cases: one self-coupled state, and the pair with real coupling."""

import numpy as np

from nlqm import Coupling, integrate, random_hermitian, random_orthonormal_pair
from nlqm.appendix import integrate_single, real_g_spec, real_g_state_pair, single_vector_complex_g_norm

H = random_hermitian(3, seed=5)

# complex g: the norm follows -1/(2b(t - t0)) and only exists on one side of t0
b = -0.5
ts = np.linspace(1, 3, 5)
law = np.array([single_vector_complex_g_norm(b, 0.0, t) for t in ts])
v = np.array([1.0, 1j, 0.5])
tr = integrate_single(v / np.linalg.norm(v) * np.sqrt(law[0]), H, Coupling(0.8, b), (1, 3), t_eval=ts)
for t, n, m in zip(ts, tr.norm_sq, law):
    print(f"t={t:.1f}  <psi|psi>={n:.10f}  law={m:.10f}")
try:
    single_vector_complex_g_norm(b, 0.0, -1.0)
except ValueError as exc:
    print("before t0:", exc)

# real g: tau and delta are frozen and gamma just rotates
H4 = random_hermitian(4, seed=42)
A, B = random_orthonormal_pair(4, seed=1)
spec = real_g_spec(A, B, tau0=0.7, gamma0=0.8 + 0.3j, g_real=1.3, H=H4)
p0, f0 = real_g_state_pair(spec, 0.0)
run = integrate(p0, f0, H4, Coupling(1.3, 0.0), (0, spec.period), t_eval=np.linspace(0, spec.period, 50))
print(f"\nk = {spec.k:.6f}, period = {spec.period:.6f}")
print("tau drift  ", np.max(np.abs(run.tau - spec.tau0)))
print("delta drift", np.max(np.abs(run.delta - spec.delta0)))
