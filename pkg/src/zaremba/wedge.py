"""Leading heat kernel near a Dirichlet/Neumann interface.

Normal planes to the interface carry polar coordinates ``(rho, theta)`` with
``theta in [-pi/2, pi/2]``: the Dirichlet half-line sits at ``theta = pi/2``,
the Neumann half-line at ``theta = -pi/2``.  Along the interface, flat
coordinates ``xhat`` of dimension ``m - 2`` contribute a plain Gaussian.

At ``rho = 0`` an extra condition has to be chosen (:class:`Regular` or
:class:`Robin`); the kernel, and the codimension-two heat trace
coefficient, depend on it.

Exponentials that are individually huge (``exp(rho rho' / 2t)``,
``exp(t s^2 + ...)``) are always combined with their Gaussian partners
before evaluation, so the functions below stay finite for
``rho rho' / t`` up to ~1e8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .halfline import NonpositiveTime, dirichlet_kernel, robin_w
from .numerics import AsymptoticFit, fit_powers
from .specfun import bessel_i_half_scaled_seq, erf, erfc, erfcx, gauss_erfcx

__all__ = [
    "Regular",
    "Robin",
    "VertexCondition",
    "REGULAR",
    "WedgeConfig",
    "PolarPoint",
    "DimensionMismatch",
    "angular_eigenvalue",
    "angular_eigenfunction",
    "radial_mode",
    "radial_mode_0",
    "omega",
    "omega_series",
    "phi",
    "psi",
    "l_kernel",
    "mixed_parametrix",
    "mixed_diagonal",
    "strip_remainder",
    "strip_trace",
    "fit_strip_trace",
    "STRIP_FIT_EXPONENTS",
]

HALF_PI = 0.5 * math.pi
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class Regular:
    """``sqrt(rho rho') Psi -> 0`` at the vertex (the ``s -> +inf`` limit)."""


@dataclass(frozen=True)
class Robin:
    """``(d/drho - s) [sqrt(rho rho') Psi] = 0`` at the vertex."""

    s: float

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise ValueError("Robin parameter must be finite; use Regular() for s -> inf")


VertexCondition = Union[Regular, Robin]
REGULAR = Regular()


def _check_vertex(vertex):
    if not isinstance(vertex, (Regular, Robin)):
        raise TypeError(f"vertex must be Regular() or Robin(s), got {vertex!r}")
    return vertex


@dataclass(frozen=True)
class WedgeConfig:
    """Ambient dimension ``m``, fibre dimension ``dim_v`` and the vertex condition.

    The vertex condition has no default on purpose: the data on the two
    boundary pieces do not fix it.
    """

    m: int
    vertex: VertexCondition
    dim_v: int = 1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError("m must be an integer >= 2")
        if int(self.dim_v) != self.dim_v or self.dim_v < 1:
            raise ValueError("dim_v must be an integer >= 1")
        _check_vertex(self.vertex)


@dataclass(frozen=True)
class PolarPoint:
    rho: float
    theta: float
    xhat: tuple = field(default=())

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be >= 0")
        object.__setattr__(self, "xhat", tuple(float(v) for v in self.xhat))


class DimensionMismatch(ValueError):
    pass


def _check_time(t):
    if np.any(np.asarray(t) <= 0):
        raise NonpositiveTime(f"heat kernel needs t > 0, got {t!r}")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_wedge_angle(theta):
    th = np.asarray(theta, dtype=float)
    if np.any(np.abs(th) > HALF_PI + _ANGLE_SLACK):
        raise ValueError("theta must lie in [-pi/2, pi/2]; use l_kernel for mirror arguments")


# -- angular problem ----------------------------------------------------------


def angular_eigenvalue(n: int) -> float:
    """``(n + 1/2)**2``: Dirichlet at ``pi/2``, Neumann at ``-pi/2``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return (n + 0.5) ** 2


def angular_eigenfunction(n: int, theta):
    if n < 0:
        raise ValueError("n must be >= 0")
    th = np.asarray(theta, dtype=float)
    return _out(math.sqrt(2.0 / math.pi) * np.cos((n + 0.5) * (th + HALF_PI)))


# -- radial problem -----------------------------------------------------------


def radial_mode(n: int, t: float, rho: float, rho2: float) -> float:
    """``(1/2t) exp(-(rho^2 + rho'^2)/4t) I_{n+1/2}(rho rho'/2t)``.

    Evaluated as ``(1/2t) exp(-(rho - rho')^2/4t) [exp(-z) I_{n+1/2}(z)]``.
    """
    _check_time(t)
    if n < 0:
        raise ValueError("n must be >= 0")
    if rho <= 0 or rho2 <= 0:
        return 0.0
    z = rho * rho2 / (2.0 * t)
    scaled = bessel_i_half_scaled_seq(n, z)[n]
    return math.exp(-((rho - rho2) ** 2) / (4.0 * t)) * scaled / (2.0 * t)


def radial_mode_0(t, rho, rho2, vertex: VertexCondition):
    """Lowest radial mode ``u_0 = w / sqrt(rho rho')``.

    ``w`` is the half-line Robin kernel for ``Robin(s)`` and the Dirichlet
    kernel for ``Regular``; the latter equals :func:`radial_mode` with
    ``n = 0``.
    """
    _check_time(t)
    vertex = _check_vertex(vertex)
    rho, rho2 = np.asarray(rho, dtype=float), np.asarray(rho2, dtype=float)
    if np.any(rho <= 0) or np.any(rho2 <= 0):
        raise ValueError("rho and rho' must be positive")
    if isinstance(vertex, Regular):
        w = dirichlet_kernel(t, rho, rho2)
    else:
        w = robin_w(t, rho, rho2, vertex.s)
    return _out(w / np.sqrt(rho * rho2))


# -- Omega --------------------------------------------------------------------


def omega(z, gamma, shift=0.0):
    """``exp(z cos(gamma) - shift) * erf(sqrt(2z) cos(gamma/2))``.

    ``shift`` lets callers fold their Gaussian envelope into the exponent;
    with ``shift = 0`` this is the plain closed form, which overflows once
    ``z cos(gamma)`` exceeds ~709.
    """
    z = np.asarray(z, dtype=float)
    g = np.asarray(gamma, dtype=float)
    if np.any(z < 0):
        raise ValueError("z must be >= 0")
    return _out(np.exp(z * np.cos(g) - shift) * erf(np.sqrt(2.0 * z) * np.cos(0.5 * g)))


def _mode_count(z: float) -> int:
    return int(math.ceil(z + 12.0 * math.sqrt(z + 1.0) + 40.0))


def _scaled_i_modes(z: float, rel_tail: float = 1e-17) -> np.ndarray:
    """``exp(-z) I_{n+1/2}(z)`` up to an order where the tail is negligible.

    For ``n > z`` successive terms shrink by more than 2, so the neglected
    tail is below twice the last kept term.
    """
    nmax = _mode_count(z)
    while True:
        seq = bessel_i_half_scaled_seq(nmax, z)
        if seq[-1] <= rel_tail * seq.max() or seq[-1] == 0.0:
            return seq
        nmax *= 2


def omega_series(z: float, gamma: float, shift: float = 0.0, dps: int | None = None) -> float:
    """Mode sum ``2 sum_n I_{n+1/2}(z) cos((n+1/2) gamma)``, times ``exp(-shift)``.

    In double precision the absolute error is about ``1e-16 exp(z - shift)``,
    so when the sum is far below its largest term (``cos(gamma)`` near -1,
    large ``z``) few digits survive.  Passing ``dps`` evaluates the same sum
    with ``mpmath`` at that many decimal digits instead.
    """
    z = float(z)
    if z < 0:
        raise ValueError("z must be >= 0")
    if z == 0.0:
        return 0.0
    if dps is not None:
        return _omega_series_mp(z, float(gamma), float(shift), int(dps))
    seq = _scaled_i_modes(z)
    n = np.arange(seq.size)
    terms = seq * np.cos((n + 0.5) * gamma)
    return 2.0 * math.fsum(terms) * math.exp(z - shift)


def _omega_series_mp(z, gamma, shift, dps):
    import mpmath

    with mpmath.workdps(dps):
        zz, gg = mpmath.mpf(z), mpmath.mpf(gamma)
        total = mpmath.mpf(0)
        bound = mpmath.mpf(10) ** (-dps) * mpmath.exp(zz)
        n = 0
        while True:
            term = mpmath.besseli(n + mpmath.mpf(1) / 2, zz)
            total += term * mpmath.cos((n + mpmath.mpf(1) / 2) * gg)
            # past n = z the terms at least halve, so the tail is below 2 * term
            if n > z and 2 * term < bound:
                break
            n += 1
        return float(2 * total * mpmath.exp(-mpmath.mpf(shift)))


# -- assembled two-dimensional kernel ----------------------------------------


def phi(t, rho, rho2, vertex: VertexCondition):
    """Vertex part of the kernel: zero for ``Regular``, for ``Robin(s)``

    ``(4/sqrt(pi)) sqrt(t/(rho rho')) [exp(-(rho+rho')^2/4t)
    - sqrt(pi t) s exp(t s^2 + (rho+rho') s) erfc((rho+rho')/2sqrt(t) + s sqrt(t))]``.
    """
    _check_time(t)
    vertex = _check_vertex(vertex)
    rho, rho2 = np.asarray(rho, dtype=float), np.asarray(rho2, dtype=float)
    if isinstance(vertex, Regular):
        return _out(np.zeros(np.broadcast(rho, rho2, np.asarray(t)).shape))
    if np.any(rho <= 0) or np.any(rho2 <= 0):
        raise ValueError("rho and rho' must be positive for a Robin vertex")
    sqt = np.sqrt(t)
    a = (rho + rho2) / (2.0 * sqt)
    c = vertex.s * sqt
    bracket = np.exp(-a * a) - math.sqrt(math.pi) * c * gauss_erfcx(a, c)
    return _out(4.0 / math.sqrt(math.pi) * np.sqrt(t / (rho * rho2)) * bracket)


def _image_term(t, rho, rho2, gamma):
    # exp(-|x - x'_gamma|^2/4t) erf(sqrt(rho rho'/t) cos(gamma/2)), with
    # |x - x'_gamma|^2 = (rho - rho')^2 + 4 rho rho' sin^2(gamma/2)
    half = 0.5 * gamma
    dist2 = (rho - rho2) ** 2 + 4.0 * rho * rho2 * np.sin(half) ** 2
    return np.exp(-dist2 / (4.0 * t)) * erf(np.sqrt(rho * rho2 / t) * np.cos(half))


def psi(t, rho, theta, rho2, theta2, vertex: VertexCondition, method: str = "closed"):
    """Two-dimensional heat kernel of the Dirichlet/Neumann half plane.

    ``method="closed"`` (default) uses the error-function closed form;
    ``method="modes"`` sums the angular eigenfunction expansion with Bessel
    radial modes and serves as an independent check (scalars only).
    """
    _check_time(t)
    vertex = _check_vertex(vertex)
    _check_wedge_angle(theta)
    _check_wedge_angle(theta2)
    if method == "modes":
        return _psi_modes(float(t), float(rho), float(theta), float(rho2), float(theta2), vertex)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    rho, rho2 = np.asarray(rho, dtype=float), np.asarray(rho2, dtype=float)
    theta, theta2 = np.asarray(theta, dtype=float), np.asarray(theta2, dtype=float)
    g1 = theta - theta2
    g2 = theta + theta2 + math.pi
    images = _image_term(t, rho, rho2, g1) + _image_term(t, rho, rho2, g2)
    val = images
    if isinstance(vertex, Robin):
        val = val + phi(t, rho, rho2, vertex) * (np.cos(0.5 * g1) + np.cos(0.5 * g2))
    return _out(val / (4.0 * math.pi * t))


def _psi_modes(t, rho, theta, rho2, theta2, vertex):
    if rho <= 0 or rho2 <= 0:
        raise ValueError("mode sum needs rho, rho' > 0")
    z = rho * rho2 / (2.0 * t)
    seq = _scaled_i_modes(z)
    envelope = math.exp(-((rho - rho2) ** 2) / (4.0 * t)) / (2.0 * t)
    n = np.arange(seq.size)
    ang = (2.0 / math.pi) * np.cos((n + 0.5) * (theta + HALF_PI)) * np.cos((n + 0.5) * (theta2 + HALF_PI))
    u = envelope * seq
    u[0] = radial_mode_0(t, rho, rho2, vertex)
    return math.fsum(ang * u)


def l_kernel(t, rho, theta, xhat, rho2, theta2, xhat2, cfg: WedgeConfig):
    """Building block ``L`` of the mixed parametrix, for arbitrary real angles.

    ``L`` is 4*pi periodic in each angle; the mixed parametrix is
    ``L(theta') + L(-theta' - pi)``.
    """
    _check_time(t)
    xh, xh2 = np.atleast_1d(np.asarray(xhat, dtype=float)), np.atleast_1d(np.asarray(xhat2, dtype=float))
    if xh.size != cfg.m - 2 or xh2.size != cfg.m - 2:
        raise DimensionMismatch(f"xhat must have {cfg.m - 2} components")
    dx2 = float(np.sum((xh - xh2) ** 2))
    rho, rho2 = np.asarray(rho, dtype=float), np.asarray(rho2, dtype=float)
    gamma = np.asarray(theta, dtype=float) - np.asarray(theta2, dtype=float)
    pref = (4.0 * math.pi * t) ** (-cfg.m / 2.0)
    val = np.exp(-dx2 / (4.0 * t)) * _image_term(t, rho, rho2, gamma)
    if isinstance(cfg.vertex, Robin):
        val = val + np.exp(-dx2 / (4.0 * t)) * phi(t, rho, rho2, cfg.vertex) * np.cos(0.5 * gamma)
    return _out(pref * val)


def mixed_parametrix(t, p: PolarPoint, p2: PolarPoint, cfg: WedgeConfig) -> float:
    """Leading ``m``-dimensional parametrix near the interface."""
    _check_time(t)
    if len(p.xhat) != cfg.m - 2 or len(p2.xhat) != cfg.m - 2:
        raise DimensionMismatch(f"xhat must have {cfg.m - 2} components for m = {cfg.m}")
    direct = l_kernel(t, p.rho, p.theta, p.xhat, p2.rho, p2.theta, p2.xhat, cfg)
    mirror = l_kernel(t, p.rho, p.theta, p.xhat, p2.rho, -p2.theta - math.pi, p2.xhat, cfg)
    return direct + mirror


def mixed_diagonal(t, rho, theta, cfg: WedgeConfig):
    """Diagonal value of :func:`mixed_parametrix` (per fibre component).

    ``(4 pi t)^{-m/2} {1 - erfc(rho/sqrt t) - exp(-rho^2 cos^2 theta / t)
    erf(rho sin theta / sqrt t) + (1 - sin theta) Phi(t|rho, rho)}``;
    the last term is absent for a regular vertex.
    """
    _check_time(t)
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    sqt = np.sqrt(t)
    a = rho / sqt
    val = erf(a) - np.exp(-(a * np.cos(theta)) ** 2) * erf(a * np.sin(theta))
    if isinstance(cfg.vertex, Robin):
        c = cfg.vertex.s * sqt
        vertex_part = 4.0 / math.sqrt(math.pi) / a * (np.exp(-a * a) - math.sqrt(math.pi) * c * gauss_erfcx(a, c))
        val = val + (1.0 - np.sin(theta)) * vertex_part
    return _out(val * (4.0 * math.pi * t) ** (-cfg.m / 2.0))


# -- integrated diagonal over a half disc ------------------------------------


def strip_remainder(t: float, eps3: float, vertex: VertexCondition) -> float:
    """Exponentially small part ``X(t)`` of the half-disc integral of the diagonal.

    ``X = (1/2) sqrt(pi t) eps exp(-eps^2/t) + (pi t/4 - pi eps^2/2) erfc(eps/sqrt t)
    - 2 pi t exp(t s^2 + 2 s eps) erfc(eps/sqrt t + s sqrt t)``,
    the last term only for a Robin vertex.  ``|X| = O(exp(-eps^2/t))``.
    """
    _check_time(t)
    vertex = _check_vertex(vertex)
    if eps3 <= 0:
        raise ValueError("eps3 must be positive")
    sqt = math.sqrt(t)
    a = eps3 / sqt
    x = 0.5 * math.sqrt(math.pi * t) * eps3 * math.exp(-a * a)
    x += (0.25 * math.pi * t - 0.5 * math.pi * eps3 * eps3) * float(erfc(a))
    if isinstance(vertex, Robin):
        x -= 2.0 * math.pi * t * gauss_erfcx(a, vertex.s * sqt)
    return x


def strip_trace(t: float, eps3: float, cfg: WedgeConfig) -> float:
    """Integral of the traced diagonal over ``rho < eps3`` (per unit interface volume).

    ``(4 pi t)^{-m/2} dim V {pi eps^2/2 + t [-pi/4 + 2 pi Theta(s sqrt t)] + X(t)}``
    with ``Theta(z) = exp(z^2) erfc(z)``; a regular vertex drops the
    ``Theta`` term.
    """
    _check_time(t)
    if eps3 <= 0:
        raise ValueError("eps3 must be positive")
    bracket = -0.25 * math.pi
    if isinstance(cfg.vertex, Robin):
        bracket += 2.0 * math.pi * erfcx(cfg.vertex.s * math.sqrt(t))
    total = 0.5 * math.pi * eps3 * eps3 + t * bracket + strip_remainder(t, eps3, cfg.vertex)
    return (4.0 * math.pi * t) ** (-cfg.m / 2.0) * cfg.dim_v * total


STRIP_FIT_EXPONENTS = (1.0, 1.5, 2.0, 2.5, 3.0)


def fit_strip_trace(
    cfg: WedgeConfig,
    eps3: float = 1.0,
    t_max: float = 1e-4,
    decades: float = 2.0,
    n_points: int = 16,
    exponents=STRIP_FIT_EXPONENTS,
) -> AsymptoticFit:
    """Small-``t`` expansion of the strip trace with the area term removed.

    Fits ``(4 pi t)^{m/2} strip_trace / dim V - pi eps^2/2`` on a log grid in
    ``[t_max 10^-decades, t_max]``; the ``t**1`` coefficient times
    ``(4 pi)^{-m/2} dim V`` is the interface heat trace coefficient.
    """
    ts = np.geomspace(t_max * 10.0 ** (-decades), t_max, n_points)
    area = 0.5 * math.pi * eps3 * eps3
    samples = []
    for tt in ts:
        y = strip_trace(tt, eps3, cfg) * (4.0 * math.pi * tt) ** (cfg.m / 2.0) / cfg.dim_v - area
        samples.append((tt, y))
    return fit_powers(samples, exponents)
