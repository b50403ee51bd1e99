"""Quadrature, bracketed root finding and power-law least squares.

These are thin, deterministic wrappers around SciPy/NumPy with the error
contracts the rest of the package relies on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "QuadratureSpec",
    "AsymptoticFit",
    "NonConvergence",
    "InvalidBracket",
    "IllConditioned",
    "integrate_adaptive",
    "find_root",
    "fit_powers",
    "gauss_legendre_2d",
    "DEFAULT_CONDITION_CAP",
]

DEFAULT_CONDITION_CAP = 1e12


class NonConvergence(ArithmeticError):
    """Adaptive quadrature ran out of refinement depth."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error!r})")
        self.estimate = estimate
        self.error = error


class InvalidBracket(ValueError):
    pass


class IllConditioned(UserWarning):
    """Emitted by :func:`fit_powers` when the normal system is badly conditioned."""


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_depth: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if int(self.max_depth) < 1:
            raise ValueError("max_depth must be >= 1")


@dataclass(frozen=True)
class AsymptoticFit:
    """Result of a weighted fit ``y ~ sum_k c_k t**e_k``."""

    exponents: np.ndarray
    coefficients: np.ndarray
    stderr: np.ndarray
    max_rel_residual: float
    condition: float
    ill_conditioned: bool = False
    n_samples: int = field(default=0, compare=False)

    def __post_init__(self):
        if not (len(self.exponents) == len(self.coefficients) == len(self.stderr)):
            raise ValueError("exponents, coefficients and stderr must have equal length")
        if self.max_rel_residual < 0:
            raise ValueError("residual must be non-negative")

    def coefficient(self, exponent: float) -> float:
        """Coefficient attached to ``t**exponent``."""
        idx = np.flatnonzero(np.isclose(self.exponents, exponent, rtol=0, atol=1e-12))
        if idx.size == 0:
            raise KeyError(f"exponent {exponent} not in fit")
        return float(self.coefficients[idx[0]])

    def error(self, exponent: float) -> float:
        idx = np.flatnonzero(np.isclose(self.exponents, exponent, rtol=0, atol=1e-12))
        if idx.size == 0:
            raise KeyError(f"exponent {exponent} not in fit")
        return float(self.stderr[idx[0]])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return sum(c * t**e for c, e in zip(self.coefficients, self.exponents))


def _semi_infinite(f, a):
    # x = a + u/(1-u), dx = du/(1-u)^2, u in [0, 1)
    def g(u):
        one_minus = 1.0 - u
        if one_minus <= 0.0:
            return 0.0
        val = f(a + u / one_minus) / (one_minus * one_minus)
        return val if math.isfinite(val) else 0.0

    return g


def integrate_adaptive(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    points: Sequence[float] | None = None,
) -> float:
    """Adaptive Gauss-Kronrod integration of ``f`` over ``[a, b]``.

    ``b`` may be ``math.inf``; the half line is then mapped onto ``[0, 1)``
    with ``x = a + u / (1 - u)`` before integrating.  ``points`` lists interior
    break points (finite intervals only) where the integrand is known to be
    less smooth.

    Raises:
        NonConvergence: the error estimate is above
            ``max(abs_tol, rel_tol * |I|)`` once ``spec.max_depth``
            subintervals have been used.
    """
    spec = spec or QuadratureSpec()
    if math.isinf(b):
        if b < 0:
            raise ValueError("only [a, +inf) is supported")
        g, lo, hi = _semi_infinite(f, a), 0.0, 1.0
        if points:
            u_pts = [(p - a) / (1.0 + p - a) for p in points if p > a]
        else:
            u_pts = None
    else:
        g, lo, hi = f, a, b
        u_pts = [p for p in points if a < p < b] if points else None

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info = integrate.quad(
            g,
            lo,
            hi,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=int(spec.max_depth),
            points=u_pts,
            full_output=1,
        )[:3]
    if err > max(spec.abs_tol, spec.rel_tol * abs(value)):
        raise NonConvergence("adaptive quadrature did not converge", value, err)
    return value


def gauss_legendre_2d(f, x_breaks, y_breaks, order: int = 24) -> float:
    """Composite tensor Gauss-Legendre rule for a vectorised ``f(x, y)``.

    ``x_breaks`` and ``y_breaks`` are the panel edges; each panel pair gets
    an ``order x order`` product rule.  Exact for polynomials of degree
    ``2 order - 1`` in each variable on every panel.
    """
    nodes, weights = np.polynomial.legendre.leggauss(int(order))

    def expand(breaks):
        b = np.asarray(breaks, dtype=float)
        lo, hi = b[:-1, None], b[1:, None]
        pts = 0.5 * (hi - lo) * nodes[None, :] + 0.5 * (hi + lo)
        wts = 0.5 * (hi - lo) * weights[None, :]
        return pts.ravel(), wts.ravel()

    xs, wx = expand(x_breaks)
    ys, wy = expand(y_breaks)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    vals = np.asarray(f(X, Y), dtype=float)
    return float(wx @ vals @ wy)


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13) -> float:
    """Zero of ``f`` inside a sign-changing bracket (Brent's method).

    The bracket is normalised to ``lo < hi`` first, so the result does not
    depend on the order of the end points.
    """
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise InvalidBracket(f"f({lo})={flo!r} and f({hi})={fhi!r} have the same sign")
    return optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def fit_powers(
    samples,
    exponents: Sequence[float],
    condition_cap: float = DEFAULT_CONDITION_CAP,
) -> AsymptoticFit:
    """Weighted linear least squares for ``y ~ sum_k c_k t**e_k``.

    Args:
        samples: iterable of ``(t, y)`` or ``(t, y, weight)``.  A weight
            multiplies the residual of its row (think ``1/sigma``).  Missing
            weights default to ``t**(-min(exponents))``, which flattens the
            dominant term across the window.
        exponents: powers of ``t`` in the model.
        condition_cap: condition numbers above this flag the fit (an
            :class:`IllConditioned` warning is emitted, the fit is still
            returned).

    Standard errors come from the residual covariance
    ``s**2 (A^T W^2 A)^{-1}`` with ``s**2 = RSS / (n - p)``.
    """
    exps = np.asarray(sorted(float(e) for e in exponents))
    if exps.size == 0:
        raise ValueError("need at least one exponent")
    rows = [tuple(s) for s in samples]
    if len(rows) < exps.size + 2:
        raise ValueError(f"need at least {exps.size + 2} samples, got {len(rows)}")
    t = np.array([r[0] for r in rows], dtype=float)
    y = np.array([r[1] for r in rows], dtype=float)
    if np.any(t <= 0):
        raise ValueError("all sample abscissae must be positive")
    if all(len(r) >= 3 for r in rows):
        w = np.array([r[2] for r in rows], dtype=float)
    else:
        w = t ** (-exps[0])
    if np.any(w <= 0):
        raise ValueError("weights must be positive")

    design = t[:, None] ** exps[None, :]
    A = design * w[:, None]
    rhs = y * w
    # column scaling keeps the condition estimate meaningful
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    As = A / norms
    coef_s, _, rank, sv = np.linalg.lstsq(As, rhs, rcond=None)
    coef = coef_s / norms
    # condition of the (scaled) normal system A^T W A
    cond = float((sv[0] / sv[-1]) ** 2) if sv[-1] > 0 else math.inf

    resid = rhs - A @ coef
    dof = len(rows) - exps.size
    s2 = float(resid @ resid) / dof
    # (As^T As)^{-1} via the SVD, then undo the scaling
    _, _, vt = np.linalg.svd(As, full_matrices=False)
    cov_s = (vt.T / sv**2) @ vt
    cov = cov_s / np.outer(norms, norms) * s2
    stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    fitted = design @ coef
    scale = np.maximum(np.abs(y), np.finfo(float).tiny)
    max_rel = float(np.max(np.abs(y - fitted) / scale))

    flagged = cond > condition_cap
    if flagged:
        warnings.warn(f"fit condition estimate {cond:.3g} exceeds cap {condition_cap:.3g}", IllConditioned)
    return AsymptoticFit(
        exponents=exps,
        coefficients=coef,
        stderr=stderr,
        max_rel_residual=max_rel,
        condition=max(cond, 1.0),
        ill_conditioned=flagged,
        n_samples=len(rows),
    )
