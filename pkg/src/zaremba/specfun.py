"""Error functions and the Bessel functions needed by the closed-form kernels.

Only real arguments are supported.  Bessel orders are restricted to
non-negative integers and half-integers, which is all the wedge kernels and
the sector spectra ever need.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import special as _sp

from .numerics import find_root

__all__ = [
    "erf",
    "erfc",
    "erfcx",
    "gauss_erfcx",
    "bessel_i_half_scaled",
    "bessel_i_half_scaled_seq",
    "bessel_j",
    "bessel_j_zeros",
    "check_order",
    "interlaces",
]

# below this erfcx(z) = 2 exp(z^2) - erfcx(-z) overflows
ERFCX_NEG_LIMIT = -26.62


def erf(x):
    return _sp.erf(x)


def erfc(x):
    return _sp.erfc(x)


def erfcx(z):
    """Scaled complementary error function ``exp(z**2) * erfc(z)``.

    Raises:
        OverflowError: for ``z`` so negative that ``exp(z**2)`` is not
            representable.
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < ERFCX_NEG_LIMIT):
        raise OverflowError(f"erfcx overflows for z < {ERFCX_NEG_LIMIT}")
    out = _sp.erfcx(z_arr)
    return float(out) if out.ndim == 0 else out


def gauss_erfcx(a, c):
    """``exp(-a**2) * erfcx(a + c)``, i.e. ``exp(c**2 + 2 a c) * erfc(a + c)``.

    This is the product that appears with Robin data; it is finite whenever
    ``c**2 + 2ac`` is, even when ``erfcx(a + c)`` itself would overflow.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    b = a + c
    pos = b >= 0
    out = np.empty(np.broadcast(a, b).shape)
    a_b, b_b = np.broadcast_arrays(a, b)
    bp = np.where(pos, b_b, 0.0)
    out[...] = np.exp(-a_b * a_b) * _sp.erfcx(bp)
    neg = ~pos
    if np.any(neg):
        bn, an = b_b[neg], a_b[neg]
        # erfcx(b) = 2 exp(b^2) - erfcx(-b) for b < 0
        expo = (bn - an) * (bn + an)
        if np.any(expo > 709.0):
            raise OverflowError("exp(c^2 + 2ac) is not representable")
        out[neg] = 2.0 * np.exp(expo) - np.exp(-an * an) * _sp.erfcx(-bn)
    return float(out) if out.ndim == 0 else out


# -- modified Bessel I of half-integer order, scaled by exp(-z) -------------


def _i_half_lowest(z):
    """exp(-z) I_{1/2}(z) and exp(-z) I_{-1/2}(z) from the sinh/cosh forms."""
    pref = math.sqrt(2.0 / (math.pi * z))
    e2 = math.exp(-2.0 * z)
    return pref * (-math.expm1(-2.0 * z)) * 0.5, pref * (1.0 + e2) * 0.5


def _i_ratio_cf(nu, z, tol=1e-16, max_iter=10_000_000):
    # I_{nu+1}/I_nu = 1/(2(nu+1)/z + 1/(2(nu+2)/z + ...)), modified Lentz
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    for j in range(1, max_iter):
        b = 2.0 * (nu + j) / z
        d = b + d
        d = tiny if d == 0.0 else d
        c = b + 1.0 / c
        c = tiny if c == 0.0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < tol:
            return f
    raise ArithmeticError("continued fraction for I_{nu+1}/I_nu did not converge")


def bessel_i_half_scaled_seq(nmax: int, z: float) -> np.ndarray:
    """``exp(-z) I_{n+1/2}(z)`` for ``n = 0 .. nmax`` at a single ``z > 0``.

    Large ``z`` (``z >= max(1, nmax**2 / 2)``) recurs upward from the closed
    forms of orders -1/2 and 1/2; there the error growth of the upward
    recurrence is bounded by ``exp(n**2 / z)``.  Otherwise the ratio
    ``I_{nmax+3/2} / I_{nmax+1/2}`` is taken from its continued fraction,
    the recurrence is run downward and normalised to the closed form of
    ``I_{1/2}``.
    """
    nmax = int(nmax)
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    z = float(z)
    if not z > 0:
        raise ValueError("z must be positive")
    i_half, i_mhalf = _i_half_lowest(z)
    out = np.empty(nmax + 1)
    out[0] = i_half
    if nmax == 0:
        return out
    if z >= max(1.0, 0.5 * nmax * nmax):
        prev, cur = i_mhalf, i_half
        for k in range(1, nmax + 1):
            nu = k - 0.5
            prev, cur = cur, prev - (2.0 * nu / z) * cur
            out[k] = cur
        return out

    nu_top = nmax + 0.5
    ratio = _i_ratio_cf(nu_top, z)
    upper, cur = ratio, 1.0
    out[nmax] = cur
    for k in range(nmax, 0, -1):
        nu = k + 0.5
        lower = upper + (2.0 * nu / z) * cur
        upper, cur = cur, lower
        out[k - 1] = cur
        if abs(cur) > 1e250:
            out[k - 1 :] *= 1e-250
            upper *= 1e-250
            cur *= 1e-250
    return out * (i_half / out[0])


def bessel_i_half_scaled(n: int, z):
    """``exp(-z) * I_{n+1/2}(z)`` for integer ``n >= 0`` and ``z > 0``.

    Accepts array ``z`` (evaluated element by element).
    """
    if int(n) != n or n < 0:
        raise ValueError("order index n must be a non-negative integer")
    n = int(n)
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0):
        raise ValueError("z must be positive")
    if z_arr.ndim == 0:
        return float(bessel_i_half_scaled_seq(n, float(z_arr))[n])
    flat = [bessel_i_half_scaled_seq(n, zz)[n] for zz in z_arr.ravel()]
    return np.asarray(flat).reshape(z_arr.shape)


# -- Bessel J ----------------------------------------------------------------


def check_order(nu) -> Fraction:
    """Validate a Bessel order: non-negative integer or half-integer."""
    frac = Fraction(nu).limit_denominator(4) if not isinstance(nu, Fraction) else nu
    if frac.denominator not in (1, 2) or abs(float(frac) - float(nu)) > 1e-12:
        raise ValueError(f"Bessel order {nu!r} is not an integer or half-integer")
    if frac < 0:
        raise ValueError("Bessel order must be non-negative")
    return frac


def _spherical_j_scalar(n: int, x: float) -> float:
    s, c = math.sin(x), math.cos(x)
    j0 = s / x
    if n == 0:
        return j0
    j1 = s / (x * x) - c / x
    if x > n:
        prev, cur = j0, j1
        for k in range(1, n):
            prev, cur = cur, (2 * k + 1) / x * cur - prev
        return cur
    # Miller: downward from well above n, normalised at j0 or j1
    top = n + 20 + int(math.sqrt(40.0 * (n + 1)))
    upper, cur = 0.0, 1e-300
    val_n = 0.0
    for k in range(top, 0, -1):
        lower = (2 * k + 1) / x * cur - upper
        upper, cur = cur, lower
        if k - 1 == n:
            val_n = cur
        if abs(cur) > 1e250:
            cur *= 1e-250
            upper *= 1e-250
            val_n *= 1e-250
    # cur = trial j0, upper = trial j1
    if abs(j0) >= abs(j1):
        return val_n * (j0 / cur)
    return val_n * (j1 / upper)


def _spherical_j(n: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    s, c = np.sin(x), np.cos(x)
    j0 = s / x
    if n == 0:
        return j0
    j1 = s / (x * x) - c / x
    fwd = x > n
    if np.any(fwd):
        xf = x[fwd]
        prev, cur = j0[fwd], j1[fwd]
        for k in range(1, n):
            prev, cur = cur, (2 * k + 1) / xf * cur - prev
        out[fwd] = cur
    bwd = ~fwd
    if np.any(bwd):
        out[bwd] = [_spherical_j_scalar(n, float(xx)) for xx in x[bwd]]
    return out


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``x > 0``.

    Half-integer orders use ``J_{n+1/2}(x) = sqrt(2x/pi) j_n(x)`` with the
    spherical Bessel function from its sine/cosine closed forms (upward
    recurrence for ``x > n``, Miller's downward recurrence otherwise).
    Integer orders are delegated to ``scipy.special.jv``.
    """
    order = check_order(nu)
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise ValueError("x must be positive")
    if order.denominator == 1:
        out = _sp.jv(float(order), x_arr)
    else:
        n = int(order - Fraction(1, 2))
        if x_arr.ndim == 0:
            xf = float(x_arr)
            return math.sqrt(2.0 * xf / math.pi) * _spherical_j_scalar(n, xf)
        out = np.sqrt(2.0 * x_arr / np.pi) * _spherical_j(n, x_arr)
    return float(out) if np.ndim(out) == 0 else out


def _bessel_j_scalar(order: Fraction):
    if order.denominator == 1:
        nu = float(order)
        return lambda x: float(_sp.jv(nu, x))
    n = int(order - Fraction(1, 2))
    return lambda x: math.sqrt(2.0 * x / math.pi) * _spherical_j_scalar(n, x)


# step well below the smallest gap between consecutive zeros (> 2.4 for nu >= 0)
_SCAN_STEP = 0.5
ZERO_INCLUSION_SLACK = 1e-10


def bessel_j_zeros(nu, x_max: float, tol: float = 1e-13) -> list[float]:
    """All positive zeros of ``J_nu`` up to ``x_max``.

    Every zero of ``J_nu`` (``nu >= 0``) exceeds ``nu`` and consecutive zeros
    are more than 2.4 apart, so a sign scan from ``nu`` with step 0.5 sees
    each zero exactly once; every bracket is then refined by
    :func:`find_root`.  Zeros within ``1e-10`` above ``x_max`` are kept so
    that exact end points (``x_max = k*pi`` for ``nu = 1/2``) are not lost to
    rounding.
    """
    order = check_order(nu)
    x_max = float(x_max)
    start = max(float(order), 1e-3)
    limit = x_max + ZERO_INCLUSION_SLACK
    if limit <= start:
        return []
    n_steps = int(math.ceil((limit - start) / _SCAN_STEP))
    grid = start + _SCAN_STEP * np.arange(n_steps + 1)
    grid[-1] = limit
    vals = np.asarray(bessel_j(order, grid), dtype=float)
    f = _bessel_j_scalar(order)
    zeros: list[float] = []
    for i in range(len(grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            if i > 0:
                zeros.append(float(grid[i]))
            continue
        if va * vb < 0:
            zeros.append(find_root(f, float(grid[i]), float(grid[i + 1]), tol))
    if vals[-1] == 0.0:
        zeros.append(float(grid[-1]))
    return [z for z in zeros if z <= limit]


def interlaces(lower: list[float], upper: list[float]) -> bool:
    """True if zeros of ``J_{nu+1}`` (``upper``) strictly interlace those of ``J_nu``.

    Both lists must cover the same range; the merged order has to read
    ``j_{nu,1} < j_{nu+1,1} < j_{nu,2} < j_{nu+1,2} < ...``.
    """
    merged = sorted([(z, 0) for z in lower] + [(z, 1) for z in upper])
    for k, (z, tag) in enumerate(merged):
        if tag != k % 2:
            return False
        if k and merged[k - 1][0] == z:
            return False
    return True
