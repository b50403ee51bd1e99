"""Interface heat trace coefficient from the integrated diagonal.

Integrating the diagonal of the kernel over a half disc of radius eps gives
(4 pi t)^{-1} {pi eps^2/2 + t [-pi/4 + 2 pi Theta(s sqrt t)] + X(t)}.
The t^1 bracket tends to 7 pi/4 for every finite s and to -pi/4 for a regular
vertex: the coefficient is 7/16 or -1/16, and jumps at s = infinity.
"""

import math

import numpy as np

from zaremba.wedge import REGULAR, Robin, WedgeConfig, fit_strip_trace, strip_trace

# %% Small-t fits of the bracket.
for vertex in (Robin(0.5), Robin(2.0), Robin(10.0), Robin(100.0), REGULAR):
    fit = fit_strip_trace(WedgeConfig(m=2, vertex=vertex))
    c1 = fit.coefficient(1.0)
    print(f"{vertex!s:14} t^1 bracket = {c1: .10f}  ->  b2 = {c1 / (4 * math.pi): .8f}")
print("expected: 7/16 =", 7 / 16, " -1/16 =", -1 / 16)

# %% Why the limit is not uniform in s: the crossover sits at t ~ 1/s^2.
s = 100.0
cfg = WedgeConfig(m=2, vertex=Robin(s))
for t in np.geomspace(1e-8, 1e-2, 7):
    bracket = (strip_trace(t, 1.0, cfg) * 4 * math.pi * t - math.pi / 2) / t
    print(f"t={t:8.1e}  t s^2={t * s * s:8.1e}  bracket/pi = {bracket / math.pi: .6f}")
