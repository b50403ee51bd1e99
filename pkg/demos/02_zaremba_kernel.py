"""The two-dimensional heat kernel of the Dirichlet/Neumann half plane.

Polar angle theta runs over [-pi/2, pi/2]; Dirichlet at +pi/2, Neumann at -pi/2.
The origin needs its own condition: Regular() or Robin(s).
"""

import math

from zaremba.wedge import REGULAR, PolarPoint, Robin, WedgeConfig, mixed_parametrix, psi

# %% Closed form versus the angular eigenfunction expansion.
pt = (0.3, 0.8, 0.4, 1.1, -0.7)
for vertex in (REGULAR, Robin(0.0), Robin(3.0)):
    closed = psi(*pt, vertex)
    modes = psi(*pt, vertex, method="modes")
    print(f"{vertex!s:16} closed={closed:.15f} modes={modes:.15f} diff={closed - modes:.1e}")

# %% Boundary conditions: zero on the Dirichlet side, flat across the Neumann side.
print("Psi on theta=+pi/2:", psi(0.3, 0.8, math.pi / 2, 1.1, -0.7, Robin(1.0)))
h = 1e-5
f = [psi(0.3, 0.8, -math.pi / 2 + k * h, 1.1, -0.7, Robin(1.0)) for k in range(3)]
print("d/dtheta on theta=-pi/2:", (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h))

# %% The vertex condition matters near the origin and is invisible far from it.
for rho in (0.05, 0.5, 5.0):
    diff = psi(0.1, rho, 0.0, rho, 0.0, Robin(1.0)) - psi(0.1, rho, 0.0, rho, 0.0, REGULAR)
    print(f"rho={rho:4}: Robin(1) - Regular on the diagonal = {diff:.3e}")

# %% In m dimensions the interface directions add a free Gaussian factor.
cfg = WedgeConfig(m=3, vertex=Robin(1.0))
p, q = PolarPoint(0.6, 0.1, (0.0,)), PolarPoint(0.9, -0.5, (0.4,))
print("m=3 parametrix:", mixed_parametrix(0.2, p, q, cfg))
print("Psi * Gaussian:", psi(0.2, 0.6, 0.1, 0.9, -0.5, Robin(1.0)) * math.exp(-0.16 / 0.8) / math.sqrt(0.8 * math.pi))
