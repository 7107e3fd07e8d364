"""Reduced dynamics: four scalars carry the whole nonlinearity.

The overlap gamma = <phi|psi> and the norm difference tau obey a closed
system that does not involve H. We integrate it numerically, compare with
the tanh/sech closed form, and show which branches of the first integral
are rejected.
"""

import numpy as np

from nlqm import Coupling, ReducedParams, ReducedState, classify_branch, gamma_analytic, integrate_reduced
from nlqm.reduced import tau_delta_analytic

g = Coupling(1.0, 0.5)
p = ReducedParams(omega0=1.0, theta=0.7, g=g)
ts = np.linspace(-4, 4, 9)

tau0, _ = tau_delta_analytic(p, ts[0])
init = ReducedState.from_scalars(2.0, tau0, gamma_analytic(p, ts[0]))
rt = integrate_reduced(init, g, (ts[0], ts[-1]), t_eval=ts)
tau_a, delta_a = tau_delta_analytic(p, ts)

print("    t      tau(num)   tau(exact)   |gamma|    w0^2")
for t, a, b, gam, w2 in zip(ts, rt.tau, tau_a, rt.gamma, rt.omega0_sq):
    print(f"{t:6.2f}  {a:10.6f}  {b:10.6f}  {abs(gam):9.6f}  {w2:.12f}")

# tau saturates at +-2 w0 while the overlap dies off: the pair separates
print("\nmax |gamma_num - gamma_exact| =", np.max(np.abs(rt.gamma - gamma_analytic(p, ts))))

for lam2, branch in [(-1.0, "tanh"), (4.0, "coth"), (4.0, "tanh")]:
    r = classify_branch(lam2, branch)
    print(f"lambda^2={lam2:+.0f} {branch:>4}: {r.branch_kind:<22} physical={r.physical}")
