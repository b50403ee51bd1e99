"""One-dimensional heat kernels on the line and on the half line.

All functions broadcast over NumPy arrays.  The Robin kernel is written
with the Gaussian factored out of the ``exp * erfc`` product, so it stays
finite in the large-``s`` regime where the textbook form overflows.
"""

from __future__ import annotations

import math

import numpy as np

from .specfun import gauss_erfcx

__all__ = [
    "NonpositiveTime",
    "RobinParam",
    "free_kernel",
    "dirichlet_kernel",
    "neumann_kernel",
    "robin_w",
    "ROBIN_GROWTH_LIMIT",
]

# Largest t*s**2 accepted for s < 0 (the kernel grows like exp(t s^2)).
ROBIN_GROWTH_LIMIT = 700.0


class NonpositiveTime(ValueError):
    pass


class RobinParam(float):
    """Robin parameter ``s`` (inverse length) of ``(d/drho - s) w = 0``."""

    def __new__(cls, s):
        value = float(s)
        if not math.isfinite(value):
            raise ValueError("Robin parameter must be finite")
        return super().__new__(cls, value)


def _check_time(t):
    if np.any(np.asarray(t) <= 0):
        raise NonpositiveTime(f"heat kernel needs t > 0, got {t!r}")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _gauss(t, d):
    return np.exp(-(d * d) / (4.0 * t)) / np.sqrt(4.0 * np.pi * t)


def free_kernel(t, x, x2):
    """``(4 pi t)^{-1/2} exp(-(x - x2)^2 / 4t)``."""
    _check_time(t)
    return _out(_gauss(t, np.subtract(x, x2)))


def dirichlet_kernel(t, r, r2):
    """Half-line kernel vanishing at ``r = 0``: direct minus image Gaussian."""
    _check_time(t)
    r, r2 = np.asarray(r, dtype=float), np.asarray(r2, dtype=float)
    # exp(-(r-r2)^2/4t) (1 - exp(-r r2 / t)), written to keep small r r2/t exact
    val = _gauss(t, r - r2) * -np.expm1(-(r * r2) / t)
    return _out(val)


def neumann_kernel(t, r, r2):
    """Half-line kernel with vanishing derivative at ``r = 0``."""
    _check_time(t)
    r, r2 = np.asarray(r, dtype=float), np.asarray(r2, dtype=float)
    return _out(_gauss(t, r - r2) + _gauss(t, r + r2))


def robin_w(t, rho, rho2, s):
    """Half-line kernel with ``(d/drho - s) w = 0`` at ``rho = 0``.

    .. math::

        w = (4\\pi t)^{-1/2}\\{e^{-(\\rho-\\rho')^2/4t} + e^{-(\\rho+\\rho')^2/4t}
            - 2\\sqrt{\\pi t}\\, s\\, e^{ts^2+(\\rho+\\rho')s}
              \\mathrm{erfc}(\\tfrac{\\rho+\\rho'}{2\\sqrt t} + s\\sqrt t)\\}

    ``s = 0`` is the Neumann kernel and ``s -> +inf`` the Dirichlet one.
    For ``s < 0`` the kernel carries the bound state ``exp(s rho)`` and grows
    like ``exp(t s**2)``; inputs with ``t s**2 > ROBIN_GROWTH_LIMIT`` are
    rejected with ``OverflowError``.
    """
    _check_time(t)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any((s < 0) & (t * s * s > ROBIN_GROWTH_LIMIT)):
        raise OverflowError("t*s^2 above the representable growth limit for s < 0")
    rho, rho2 = np.asarray(rho, dtype=float), np.asarray(rho2, dtype=float)
    sqt = np.sqrt(t)
    a = (rho + rho2) / (2.0 * sqt)
    c = s * sqt
    robin = np.exp(-a * a) - 2.0 * np.sqrt(np.pi) * c * gauss_erfcx(a, c)
    val = (np.exp(-((rho - rho2) ** 2) / (4.0 * t)) + robin) / np.sqrt(4.0 * np.pi * t)
    return _out(val)
