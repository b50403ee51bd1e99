"""Half-line heat kernels: Dirichlet, Neumann and Robin.

Run with ``python demos/01_halfline_kernels.py``.
"""

import numpy as np

from zaremba.halfline import dirichlet_kernel, neumann_kernel, robin_w

# %% The Robin kernel interpolates between the two classical ones.
# s = 0 is Neumann, s -> +inf is Dirichlet.
t, rho2 = 0.5, 1.0
rho = np.linspace(0.0, 3.0, 7)
print("rho       Dirichlet      Robin(s=2)     Neumann")
for r, d, w, n in zip(rho, dirichlet_kernel(t, rho, rho2), robin_w(t, rho, rho2, 2.0), neumann_kernel(t, rho, rho2)):
    print(f"{r:4.1f}  {d:13.6e}  {w:13.6e}  {n:13.6e}")

# %% Very large s: exp(t s^2) erfc(...) would overflow if evaluated as written,
# the library pairs the exponentials so the Dirichlet limit is reached smoothly.
for s in (1e2, 1e4, 1e6):
    print(f"s={s:8.0e}: w={robin_w(t, 1.0, 1.0, s):.12f}  dirichlet={dirichlet_kernel(t, 1.0, 1.0):.12f}")

# %% Negative s carries the bound state exp(s rho); the kernel grows like exp(t s^2).
for tt in (1.0, 10.0, 100.0):
    print(f"t={tt:6.1f}: w(0, 0; s=-0.5) = {robin_w(tt, 0.0, 0.0, -0.5):.6e}")

# %% The boundary condition (d/drho - s) w = 0 at rho = 0, checked by a one-sided difference.
h, s = 1e-6, 2.0
f0, f1, f2 = (robin_w(t, k * h, rho2, s) for k in range(3))
print("(d/drho - s) w at the boundary:", (-3 * f0 + 4 * f1 - f2) / (2 * h) - s * f0)
