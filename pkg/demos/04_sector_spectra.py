"""Check the interface constant against exact eigenvalues of disc sectors.

Sector eigenvalues are squared Bessel zeros, so heat traces are exact up to a
truncation bound.  Fitting B0/t + B1/sqrt(t) + B2 + B3 sqrt(t) and removing
the known area, edge and curvature parts leaves a sum of corner constants,
which three sectors are enough to disentangle.

Takes a couple of seconds.
"""

import math

from zaremba.spectra import run_corner_pipeline

res = run_corner_pipeline()

# %% Fitted coefficients against the standard predictions.
for name, run in res.runs.items():
    est = run.estimate
    pred = est.prediction
    print(
        f"{name:8} B0 {est.B0:.8f} (pred {pred.B0:.8f})  B1 {est.B1:.6f} (pred {pred.B1:.6f})"
        f"  constant {est.constant:.6f} +- {est.stderr:.1e}"
    )

# %% Corner constants.
print()
print(f"DD corner at pi/2          {res.corner_dd_right: .5f}   (1/16 = {1 / 16:.5f})")
print(f"DN corner at pi/2          {res.corner_dn_right: .5f}")
print(f"D/N junction, regular      {res.interface_b2: .5f}   (-1/16 = {-1 / 16:.5f})")
print(f"DD corner at pi/2 (alone)  {res.corner_dd_right_check: .5f}   from the DD half disc")
alpha = math.pi / 3
print(f"DD corner at pi/3          {res.corner_dd_third: .5f}   ((pi^2-a^2)/(24 pi a) = {(math.pi**2 - alpha**2) / (24 * math.pi * alpha):.5f})")
