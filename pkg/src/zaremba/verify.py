"""Acceptance checks: every numerical claim of the library against an independent oracle.

Each check returns one or more :class:`CheckResult` rows.  The checks are
grouped in suites (``specfun``, ``kernels``, ``coeff-pipeline``) that the
``verify`` command runs; ``all`` runs the three in that order.

Oracles used here never share code paths with the quantity under test:
mpmath for the Omega mode sum, adaptive quadrature of Bessel/erfcx integral
representations, finite differences for the PDE and boundary conditions,
tensor Gauss-Legendre rules for semigroup and delta checks, and the exact
sector spectra for the heat trace constants.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import halfline, specfun, spectra, wedge
from .numerics import QuadratureSpec, gauss_legendre_2d, integrate_adaptive
from .wedge import REGULAR, PolarPoint, Robin, WedgeConfig

__all__ = [
    "CheckResult",
    "Tolerances",
    "SUITES",
    "run_suite",
    "all_passed",
]


@dataclass(frozen=True)
class CheckResult:
    """One measured quantity compared with its target."""

    criterion: str
    name: str
    measured: float
    target: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class Tolerances:
    """Pass thresholds of the acceptance checks (all overridable from the CLI)."""

    omega: float = 1e-10
    hankel: float = 1e-8
    heat_residual: float = 1e-4
    dirichlet_bc: float = 1e-12
    neumann_bc: float = 1e-5
    robin_bc: float = 1e-4
    semigroup: float = 1e-6
    delta_slope: float = 0.2
    strip_rel: float = 1e-8
    robin_constant: float = 1e-3
    b0_rel: float = 1e-3
    b1_rel: float = 1e-2
    b2_abs: float = 5e-3
    corner_abs: float = 5e-3
    erfcx_rel: float = 1e-12
    zero_abs: float = 1e-10
    symmetry: float = 1e-12
    parity: float = 1e-14

    def with_overrides(self, overrides: dict) -> "Tolerances":
        names = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})


def _within(criterion, name, measured, target, tol, detail=""):
    measured = float(measured)
    ok = math.isfinite(measured) and abs(measured - target) <= tol
    return CheckResult(criterion, name, measured, float(target), float(tol), bool(ok), detail)


def _below(criterion, name, measured, tol, detail=""):
    return _within(criterion, name, measured, 0.0, tol, detail)


# Fixed sample points; the suites are deterministic by construction.
_VERTICES = (REGULAR, Robin(-1.0), Robin(0.0), Robin(0.5), Robin(2.0))


def _sample_points(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        t = float(rng.uniform(0.2, 1.0))
        rho, rho2 = (float(v) for v in rng.uniform(0.5, 2.0, 2))
        th, th2 = (float(v) for v in rng.uniform(-1.3, 1.3, 2))
        out.append((t, rho, th, rho2, th2, _VERTICES[k % len(_VERTICES)]))
    return out


# -- specfun suite -------------------------------------------------------------


def check_omega_series(tol: Tolerances):
    """AC-1: closed form of Omega against its Bessel mode sum.

    The sum is taken in extended precision: near ``gamma = +-pi`` it is
    ``exp(z (1 - cos gamma))`` times smaller than its largest term, so the
    working precision grows with that ratio.
    """
    worst, where = 0.0, None
    for z in (0.1, 0.5, 1.0, 3.0, 10.0, 30.0):
        for g in (-3.0, -1.5, 0.0, 0.8, 1.5, 3.0):
            closed = wedge.omega(z, g)
            dps = 30 + int(math.ceil(z * (1.0 - math.cos(g)) / math.log(10.0)))
            series = wedge.omega_series(z, g, dps=dps)
            err = abs(series - closed) / max(abs(closed), math.exp(z * math.cos(g)) * 1e-3)
            if err > worst:
                worst, where = err, (z, g)
    return [_below("AC-1", "omega_series_vs_closed", worst, tol.omega, f"worst at (z, gamma)={where}")]


def _erfcx_oracle(z):
    # (2/sqrt(pi)) int_0^inf exp(-v^2 - 2 z v) dv, cut where the exponent reaches 45
    upper = -z + math.sqrt(z * z + 45.0)
    spec = QuadratureSpec(abs_tol=1e-300, rel_tol=2e-14, max_depth=200)
    val = integrate_adaptive(lambda v: math.exp(-v * (v + 2.0 * z)), 0.0, upper, spec)
    return 2.0 / math.sqrt(math.pi) * val


def check_special_functions(tol: Tolerances):
    """AC-8: erfcx against its integral representation, and the zeros of ``J_{1/2}``."""
    zs = np.linspace(0.0, 30.0, 61)
    rel = max(abs(specfun.erfcx(z) - _erfcx_oracle(z)) / _erfcx_oracle(z) for z in zs)
    zeros = specfun.bessel_j_zeros(0.5, 100.0 * math.pi)
    count_ok = len(zeros) == 100
    dev = max(abs(x - (k + 1) * math.pi) for k, x in enumerate(zeros)) if count_ok else math.inf
    return [
        _below("AC-8", "erfcx_rel_error", rel, tol.erfcx_rel, "61 points on [0, 30]"),
        _within("AC-8", "j_half_zero_count", len(zeros), 100, 0.0, "zeros up to 100 pi"),
        _below("AC-8", "j_half_zero_position", dev, tol.zero_abs, "max |x_k - k pi|"),
    ]


# -- kernels suite ------------------------------------------------------------

_HANKEL_TUPLES = (
    (0, 0.5, 1.0, 1.2),
    (1, 0.2, 0.7, 0.9),
    (2, 1.0, 1.5, 2.0),
    (3, 0.3, 2.0, 1.8),
    (5, 0.5, 1.0, 3.0),
    (0, 0.1, 0.5, 0.6),
)


def _hankel_integral(n, t, rho, rho2):
    nu = n + 0.5
    # the Gaussian is below exp(-40) past mu_max
    mu_max = math.sqrt(40.0 / t)
    period = math.pi / max(rho, rho2)
    points = list(np.arange(period, mu_max, period))

    def f(mu):
        if mu <= 0.0:
            return 0.0
        return mu * math.exp(-t * mu * mu) * specfun.bessel_j(nu, mu * rho) * specfun.bessel_j(nu, mu * rho2)

    spec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11, max_depth=5000)
    return integrate_adaptive(f, 0.0, mu_max, spec, points=points)


def check_hankel(tol: Tolerances):
    """AC-2: closed-form radial modes against the Hankel-transform integral."""
    worst = 0.0
    for n, t, rho, rho2 in _HANKEL_TUPLES:
        worst = max(worst, abs(wedge.radial_mode(n, t, rho, rho2) - _hankel_integral(n, t, rho, rho2)))
    return [_below("AC-2", "radial_mode_vs_hankel", worst, tol.hankel, f"{len(_HANKEL_TUPLES)} tuples")]


def _heat_residual(t, rho, th, rho2, th2, vertex):
    h_t, h = 1e-4, 1e-3

    def P(tt=t, r=rho, a=th):
        return wedge.psi(tt, r, a, rho2, th2, vertex)

    p0 = P()
    d_t = (P(tt=t + h_t) - P(tt=t - h_t)) / (2.0 * h_t)
    p_rp, p_rm = P(r=rho + h), P(r=rho - h)
    d_rr = (p_rp - 2.0 * p0 + p_rm) / (h * h)
    d_r = (p_rp - p_rm) / (2.0 * h)
    d_aa = (P(a=th + h) - 2.0 * p0 + P(a=th - h)) / (h * h)
    lap = d_rr + d_r / rho + d_aa / (rho * rho)
    scale = max(abs(p0), abs(d_t), abs(d_rr), abs(d_aa / rho**2))
    return abs(d_t - lap) / scale


def check_pde_and_bcs(tol: Tolerances):
    """AC-3: heat equation, Dirichlet and Neumann sides, and the vertex Robin condition."""
    pts = _sample_points(10, seed=3)
    residual = max(_heat_residual(*p) for p in pts)

    dirichlet = max(abs(wedge.psi(t, rho, 0.5 * math.pi, rho2, th2, v)) for t, rho, _, rho2, th2, v in pts)

    h = 1e-4
    neumann = 0.0
    for t, rho, _, rho2, th2, v in pts:
        f = [wedge.psi(t, rho, -0.5 * math.pi + k * h, rho2, th2, v) for k in range(3)]
        slope = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        neumann = max(neumann, abs(slope) / max(abs(f[0]), 1e-300))

    robin = 0.0
    h = 1e-5
    for s in (-1.0, 0.0, 2.0):
        for t, rho2 in ((0.3, 0.8), (1.0, 1.5), (0.5, 0.2)):
            f = [halfline.robin_w(t, k * h, rho2, s) for k in range(3)]
            slope = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            scale = max(abs(f[0]), abs(slope))
            robin = max(robin, abs(slope - s * f[0]) / scale)

    return [
        _below("AC-3", "heat_equation_residual", residual, tol.heat_residual, "relative, 10 points"),
        _below("AC-3", "dirichlet_side", dirichlet, tol.dirichlet_bc, "|Psi| at theta = pi/2"),
        _below("AC-3", "neumann_side", neumann, tol.neumann_bc, "relative one-sided d/dtheta at -pi/2"),
        _below("AC-3", "robin_vertex", robin, tol.robin_bc, "relative (d/drho - s) w at 0, s in {-1, 0, 2}"),
    ]


def _compose(t1, t2, x, x2, vertex=REGULAR):
    # substitute rho = u^2 to remove the sqrt(rho) behaviour at the vertex
    u_max = math.sqrt(12.0)

    def f(u, th):
        rho = u * u
        a = wedge.psi(t1, x[0], x[1], rho, th, vertex)
        b = wedge.psi(t2, rho, th, x2[0], x2[1], vertex)
        return a * b * 2.0 * u**3

    u_br = np.linspace(0.0, u_max, 13)
    th_br = np.linspace(-0.5 * math.pi, 0.5 * math.pi, 5)
    return gauss_legendre_2d(f, u_br, th_br, order=24)


def _delta_error(t, sigma=0.5, center=3.0):
    def f_cart(rho, th):
        x, y = rho * np.cos(th), rho * np.sin(th)
        return np.exp(-((x - center) ** 2 + y * y) / (2.0 * sigma * sigma))

    def integrand(rho, th):
        return wedge.psi(t, center, 0.0, rho, th, REGULAR) * f_cart(rho, th) * rho

    reach = 12.0 * math.sqrt(t)
    rho_br = np.linspace(max(0.0, center - reach), center + reach, 17)
    w = min(0.5 * math.pi, reach / center)
    th_br = np.unique(np.concatenate(([-0.5 * math.pi], np.linspace(-w, w, 13), [0.5 * math.pi])))
    return abs(gauss_legendre_2d(integrand, rho_br, th_br, order=24) - 1.0)


def check_semigroup_and_delta(tol: Tolerances):
    """AC-4: ``Psi(t) * Psi(t') = Psi(t + t')`` and first-order approach to the initial data."""
    x, x2 = (1.0, 0.3), (1.2, -0.4)
    results = []
    for t1, t2 in ((0.2, 0.2), (0.3, 0.3), (0.2, 0.3)):
        err = abs(_compose(t1, t2, x, x2) - wedge.psi(t1 + t2, x[0], x[1], x2[0], x2[1], REGULAR))
        results.append(_below("AC-4", f"semigroup_t{t1}_t{t2}", err, tol.semigroup))
    ts = np.geomspace(1e-3, 1e-1, 7)
    errs = [_delta_error(float(t)) for t in ts]
    slope = float(np.polyfit(np.log(ts), np.log(errs), 1)[0])
    results.append(_within("AC-4", "delta_error_slope", slope, 1.0, tol.delta_slope, "t in [1e-3, 1e-1]"))
    return results


def _strip_quadrature(t, eps3, cfg):
    spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-12, max_depth=400)

    def radial(rho):
        inner = integrate_adaptive(
            lambda th: float(wedge.mixed_diagonal(t, rho, th, cfg)), -0.5 * math.pi, 0.5 * math.pi, spec
        )
        return rho * inner

    return integrate_adaptive(radial, 0.0, eps3, spec)


def check_strip_trace(tol: Tolerances):
    """AC-5: closed-form strip trace against 2D quadrature of the diagonal."""
    worst, where = 0.0, None
    for t in (0.05, 0.1):
        for vertex in (Robin(0.5), Robin(2.0), REGULAR):
            cfg = WedgeConfig(m=2, vertex=vertex)
            closed = wedge.strip_trace(t, 1.0, cfg)
            quad = _strip_quadrature(t, 1.0, cfg)
            err = abs(closed - quad) / abs(quad)
            if err > worst:
                worst, where = err, (t, vertex)
    return [_below("AC-5", "strip_trace_vs_quadrature", worst, tol.strip_rel, f"worst at {where}")]


def check_robin_constant(tol: Tolerances):
    """AC-6: the ``t**1`` coefficient of the strip trace, from a small-``t`` fit ending at ``t = 1e-4``."""
    results = []
    for s in (0.5, 2.0, 10.0):
        fit = wedge.fit_strip_trace(WedgeConfig(m=2, vertex=Robin(s)), t_max=1e-4)
        results.append(_within("AC-6", f"robin_s{s:g}", fit.coefficient(1.0), 1.75 * math.pi, tol.robin_constant))
    fit = wedge.fit_strip_trace(WedgeConfig(m=2, vertex=REGULAR), t_max=1e-4)
    results.append(_within("AC-6", "regular", fit.coefficient(1.0), -0.25 * math.pi, tol.robin_constant))
    return results


def check_symmetries(tol: Tolerances):
    """AC-9: exchange symmetry, period 4 pi and mirror symmetry of ``L``, parity of half-line kernels."""
    pts = _sample_points(12, seed=9)
    exchange = max(
        abs(wedge.psi(t, r, a, r2, a2, v) - wedge.psi(t, r2, a2, r, a, v)) for t, r, a, r2, a2, v in pts
    )
    period = mirror = 0.0
    for k, (t, r, a, r2, a2, v) in enumerate(pts):
        cfg = WedgeConfig(m=2 + k % 2, vertex=v)
        xh = (0.1,) * (cfg.m - 2)
        xh2 = (-0.2,) * (cfg.m - 2)
        base = wedge.l_kernel(t, r, a, xh, r2, a2, xh2, cfg)
        period = max(
            period,
            abs(wedge.l_kernel(t, r, a + 4.0 * math.pi, xh, r2, a2, xh2, cfg) - base),
            abs(wedge.l_kernel(t, r, a, xh, r2, a2 - 4.0 * math.pi, xh2, cfg) - base),
        )
        p, p2 = PolarPoint(r, a, xh), PolarPoint(r2, a2, xh2)
        p2m = PolarPoint(r2, -a2 - math.pi, xh2)
        mirror = max(mirror, abs(wedge.mixed_parametrix(t, p, p2m, cfg) - wedge.mixed_parametrix(t, p, p2, cfg)))
    parity = 0.0
    for t, r, r2 in ((0.3, 0.4, 1.1), (1.0, 2.0, 0.5), (0.05, 0.1, 0.2)):
        parity = max(
            parity,
            abs(halfline.dirichlet_kernel(t, -r, r2) + halfline.dirichlet_kernel(t, r, r2)),
            abs(halfline.dirichlet_kernel(t, r, -r2) + halfline.dirichlet_kernel(t, r, r2)),
            abs(halfline.neumann_kernel(t, -r, r2) - halfline.neumann_kernel(t, r, r2)),
            abs(halfline.neumann_kernel(t, r, -r2) - halfline.neumann_kernel(t, r, r2)),
        )
    return [
        _below("AC-9", "psi_exchange", exchange, tol.symmetry),
        _below("AC-9", "l_period_4pi", period, tol.symmetry),
        _below("AC-9", "parametrix_mirror", mirror, tol.symmetry),
        _below("AC-9", "halfline_parity", parity, tol.parity),
    ]


# -- coefficient pipeline ---------------------------------------------------


def _dd_corner(alpha):
    # classical Dirichlet polygon corner constant (pi^2 - alpha^2) / (24 pi alpha)
    return (math.pi**2 - alpha**2) / (24.0 * math.pi * alpha)


def check_corner_pipeline(tol: Tolerances, threads=None):
    """AC-7: sector spectra to the interface constant of a regular vertex."""
    res = spectra.run_corner_pipeline(threads=threads)
    results = []
    for name in ("DD@pi/2", "DN@pi/2", "DN@pi"):
        est = res.runs[name].estimate
        pred = est.prediction
        results.append(
            _within("AC-7", f"B0_rel_{name}", (est.B0 - pred.B0) / pred.B0, 0.0, tol.b0_rel, f"predicted {pred.B0!r}")
        )
        results.append(
            _within("AC-7", f"B1_rel_{name}", (est.B1 - pred.B1) / pred.B1, 0.0, tol.b1_rel, f"predicted {pred.B1!r}")
        )
    results.append(
        _within("AC-7", "interface_b2_regular", res.interface_b2, -1.0 / 16.0, tol.b2_abs, "straight D/N junction")
    )
    results.append(_within("AC-7", "corner_DD_right", res.corner_dd_right, 1.0 / 16.0, tol.corner_abs))
    results.append(
        _within(
            "AC-7",
            "corner_DD_right_check",
            res.corner_dd_right_check,
            1.0 / 16.0,
            tol.corner_abs,
            "from the DD half disc alone",
        )
    )
    results.append(
        _within(
            "AC-7",
            "corner_DD_third",
            res.corner_dd_third,
            _dd_corner(math.pi / 3.0),
            tol.corner_abs,
            "DD sector of opening pi/3 added to the system",
        )
    )
    return results


SUITES = {
    "specfun": (check_omega_series, check_special_functions),
    "kernels": (
        check_hankel,
        check_pde_and_bcs,
        check_semigroup_and_delta,
        check_strip_trace,
        check_robin_constant,
        check_symmetries,
    ),
    "coeff-pipeline": (check_corner_pipeline,),
}


def run_suite(name: str, tolerances: Tolerances | None = None, threads=None) -> list[CheckResult]:
    """Run one suite (or ``"all"``) and return its rows in a fixed order."""
    tol = tolerances or Tolerances()
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    out: list[CheckResult] = []
    for n in names:
        for check in SUITES[n]:
            if check is check_corner_pipeline:
                out.extend(check(tol, threads=threads))
            else:
                out.extend(check(tol))
    return out


def all_passed(results) -> bool:
    return all(r.passed for r in results)
