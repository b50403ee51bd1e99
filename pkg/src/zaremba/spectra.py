"""Exact heat traces of flat disc sectors with a Dirichlet arc.

Separation of variables on the sector ``0 < r < R, 0 < phi < alpha`` gives
eigenvalues ``(j_{nu,k} / R)**2`` where ``nu`` runs over the angular orders
allowed by the two side conditions and ``j_{nu,k}`` are Bessel zeros.  Sums
of ``exp(-t lambda)`` over this list are the reference traces against which
the asymptotic coefficients are checked.

Only opening angles that make every angular order an integer or a
half-integer are supported (``alpha = pi/q`` or ``2 pi/q`` for the usual
cases).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coeffs import BC, GeometryData, CornerSlot, predict_sector_coeffs, SectorPrediction
from .numerics import AsymptoticFit, fit_powers
from .specfun import bessel_j_zeros, check_order

__all__ = [
    "SectorSpec",
    "HeatTraceSample",
    "IncompleteEnumeration",
    "angular_orders",
    "eigenvalues",
    "heat_trace",
    "heat_traces",
    "default_t_grid",
    "ConstantEstimate",
    "extract_constant",
    "CornerRun",
    "CornerSolution",
    "solve_corners",
    "CornerPipelineResult",
    "run_corner_pipeline",
    "TRACE_EXPONENTS",
]

TRACE_EXPONENTS = (-1.0, -0.5, 0.0, 0.5)
# O(1) slack on top of the perimeter term in the Weyl sanity check
WEYL_SLACK = 3.0


class IncompleteEnumeration(RuntimeError):
    pass


@dataclass(frozen=True)
class SectorSpec:
    """Disc sector of opening ``alpha`` and radius ``radius``; the arc is Dirichlet.

    ``side_lo_bc`` applies on ``phi = 0``, ``side_hi_bc`` on ``phi = alpha``.
    """

    alpha: float
    radius: float = 1.0
    side_lo_bc: BC = BC.DIRICHLET
    side_hi_bc: BC = BC.NEUMANN

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0 * math.pi:
            raise ValueError("alpha must lie in (0, 2 pi)")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "side_lo_bc", BC.parse(self.side_lo_bc))
        object.__setattr__(self, "side_hi_bc", BC.parse(self.side_hi_bc))

    @property
    def area(self) -> float:
        return 0.5 * self.alpha * self.radius**2

    @property
    def perimeter(self) -> float:
        return self.radius * (2.0 + self.alpha)

    @property
    def kind(self) -> str:
        return self.side_lo_bc.value + self.side_hi_bc.value


@dataclass(frozen=True)
class HeatTraceSample:
    t: float
    value: float
    tail_bound: float

    def __post_init__(self):
        if self.tail_bound < 0 or not math.isfinite(self.value):
            raise ValueError("invalid heat trace sample")


def angular_orders(spec: SectorSpec, n: int) -> float:
    """Bessel order of the ``n``-th angular mode (``n >= 0``).

    DD: ``(n+1) pi/alpha``; NN: ``n pi/alpha``; mixed: ``(n+1/2) pi/alpha``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    kind = spec.kind
    if kind == "DD":
        k = n + 1.0
    elif kind == "NN":
        k = float(n)
    else:
        k = n + 0.5
    return k * math.pi / spec.alpha


def _resolve_threads(threads) -> int:
    if threads is None:
        threads = os.environ.get("ZAREMBA_THREADS", "1")
    threads = int(threads)
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def _orders_up_to(spec: SectorSpec, x_max: float) -> list[Fraction]:
    orders = []
    n = 0
    while True:
        nu = angular_orders(spec, n)
        if nu >= x_max:
            return orders
        twice = round(2.0 * nu)
        if abs(2.0 * nu - twice) > 1e-9 * max(1.0, nu):
            raise ValueError(f"opening angle {spec.alpha!r} gives the non-half-integer Bessel order {nu!r}")
        orders.append(check_order(Fraction(twice, 2)))
        n += 1


def eigenvalues(spec: SectorSpec, lambda_max: float, threads: int | None = None) -> np.ndarray:
    """All Laplace eigenvalues ``<= lambda_max``, ascending.

    Zeros are enumerated order by order (optionally on a thread pool; the
    result does not depend on the thread count).  The count is checked
    against the two-term Weyl law ``area L/4pi -+ perimeter sqrt(L)/4pi``.

    Raises:
        IncompleteEnumeration: the eigenvalue count is outside the Weyl
            window.
    """
    if not lambda_max > 0:
        raise ValueError("lambda_max must be positive")
    x_max = spec.radius * math.sqrt(lambda_max)
    orders = _orders_up_to(spec, x_max)
    threads = _resolve_threads(threads)

    def zeros_for(order):
        return bessel_j_zeros(order, x_max)

    if threads > 1 and len(orders) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_order = list(pool.map(zeros_for, orders))
    else:
        per_order = [zeros_for(o) for o in orders]
    if not any(per_order):
        raise ValueError("lambda_max is below the first eigenvalue")

    lam = np.sort(np.concatenate([np.asarray(z) for z in per_order if z]) ** 2 / spec.radius**2)
    # zeros kept within the inclusion slack of x_max may sit a hair above lambda_max
    lam = lam[lam <= lambda_max * (1.0 + 1e-12)]

    weyl = spec.area * lambda_max / (4.0 * math.pi)
    margin = spec.perimeter * math.sqrt(lambda_max) / (4.0 * math.pi) + WEYL_SLACK
    if abs(lam.size - weyl) > margin:
        raise IncompleteEnumeration(
            f"found {lam.size} eigenvalues below {lambda_max}, Weyl estimate {weyl:.1f} +- {margin:.1f}"
        )
    return lam


def _tail_bound(spec: SectorSpec, t: float, lambda_max: float) -> float:
    # t * int_L^inf exp(-t l) N(l) dl with N(l) <= area l/4pi + perimeter sqrt(l)/4pi + slack
    e = math.exp(-t * lambda_max)
    a_term = spec.area * (lambda_max + 1.0 / t) / (4.0 * math.pi)
    p_term = spec.perimeter * (math.sqrt(lambda_max) + 0.5 / (t * math.sqrt(lambda_max))) / (4.0 * math.pi)
    return e * (a_term + p_term + WEYL_SLACK)


def _trace_sum(lam: np.ndarray, t: float) -> float:
    return math.fsum(np.exp(-t * lam))


def heat_traces(spec: SectorSpec, ts, lambda_max: float, threads: int | None = None) -> list[HeatTraceSample]:
    """Truncated traces ``sum exp(-t lambda)`` on a grid, sharing one enumeration."""
    lam = eigenvalues(spec, lambda_max, threads)
    return [HeatTraceSample(float(t), _trace_sum(lam, float(t)), _tail_bound(spec, float(t), lambda_max)) for t in ts]


def heat_trace(spec: SectorSpec, t: float, lambda_max: float, threads: int | None = None) -> HeatTraceSample:
    if not t > 0:
        raise ValueError("t must be positive")
    return heat_traces(spec, [t], lambda_max, threads)[0]


def default_t_grid(t_min: float = 0.002, t_max: float = 0.02, points: int = 16) -> np.ndarray:
    return np.geomspace(t_min, t_max, points)


@dataclass(frozen=True)
class ConstantEstimate:
    constant: float
    stderr: float
    fit: AsymptoticFit
    prediction: SectorPrediction
    samples: tuple = field(repr=False, default=())

    @property
    def B0(self) -> float:
        return self.fit.coefficient(-1.0)

    @property
    def B1(self) -> float:
        return self.fit.coefficient(-0.5)


def extract_constant(
    spec: SectorSpec,
    t_grid=None,
    g: GeometryData | None = None,
    lambda_max: float | None = None,
    exponents=TRACE_EXPONENTS,
    threads: int | None = None,
) -> ConstantEstimate:
    """Fit sector traces to ``sum_k c_k t**e_k`` and return the ``t**0`` coefficient.

    Defaults: 16 log-spaced times in ``[0.002, 0.02]`` and
    ``lambda_max = 40 / t_min``.
    """
    ts = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if ts.max() / ts.min() < 10.0 - 1e-9:
        raise ValueError("t_grid must span at least one decade")
    lambda_max = 40.0 / ts.min() if lambda_max is None else float(lambda_max)
    samples = heat_traces(spec, ts, lambda_max, threads)
    fit = fit_powers([(s.t, s.value) for s in samples], exponents)
    prediction = predict_sector_coeffs(spec, g)
    return ConstantEstimate(
        constant=fit.coefficient(0.0),
        stderr=fit.error(0.0),
        fit=fit,
        prediction=prediction,
        samples=tuple(samples),
    )


# -- corner bookkeeping -------------------------------------------------------


@dataclass(frozen=True)
class CornerRun:
    """A sector run reduced to ``constant - B2_known = sum of its corner slots``."""

    spec: SectorSpec
    estimate: ConstantEstimate

    @property
    def corner_total(self) -> float:
        return self.estimate.constant - self.estimate.prediction.B2_known

    @property
    def slots(self) -> tuple[CornerSlot, ...]:
        return self.estimate.prediction.corner_slots


@dataclass(frozen=True)
class CornerSolution:
    values: dict
    labels: dict
    rank: int
    n_unknowns: int

    def __getitem__(self, key):
        kind, angle = key
        return self.values[(kind, round(angle, 12))]


def solve_corners(runs) -> CornerSolution:
    """Solve the linear system ``corner_total(run) = sum of slot values`` over ``runs``."""
    keys: list = []
    labels: dict = {}
    for run in runs:
        for slot in run.slots:
            if slot.key not in labels:
                keys.append(slot.key)
                labels[slot.key] = slot.label()
    A = np.zeros((len(runs), len(keys)))
    b = np.zeros(len(runs))
    for i, run in enumerate(runs):
        for slot in run.slots:
            A[i, keys.index(slot.key)] += 1.0
        b[i] = run.corner_total
    sol, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < len(keys):
        raise ValueError(f"corner system is underdetermined (rank {rank} < {len(keys)} unknowns)")
    return CornerSolution(dict(zip(keys, map(float, sol))), labels, int(rank), len(keys))


QUARTER_DD = SectorSpec(alpha=0.5 * math.pi, side_lo_bc=BC.DIRICHLET, side_hi_bc=BC.DIRICHLET)
QUARTER_DN = SectorSpec(alpha=0.5 * math.pi, side_lo_bc=BC.DIRICHLET, side_hi_bc=BC.NEUMANN)
HALF_DN = SectorSpec(alpha=math.pi, side_lo_bc=BC.DIRICHLET, side_hi_bc=BC.NEUMANN)
HALF_DD = SectorSpec(alpha=math.pi, side_lo_bc=BC.DIRICHLET, side_hi_bc=BC.DIRICHLET)
THIRD_DD = SectorSpec(alpha=math.pi / 3.0, side_lo_bc=BC.DIRICHLET, side_hi_bc=BC.DIRICHLET)


@dataclass(frozen=True)
class CornerPipelineResult:
    runs: dict
    main: CornerSolution
    check: CornerSolution
    extended: CornerSolution

    @property
    def corner_dd_right(self) -> float:
        return self.main[("DD", 0.5 * math.pi)]

    @property
    def corner_dn_right(self) -> float:
        return self.main[("DN", 0.5 * math.pi)]

    @property
    def interface_b2(self) -> float:
        """Constant of the straight Dirichlet/Neumann junction (the half disc's vertex)."""
        return self.main[("DN", math.pi)]

    @property
    def corner_dd_right_check(self) -> float:
        return self.check[("DD", 0.5 * math.pi)]

    @property
    def corner_dd_third(self) -> float:
        return self.extended[("DD", math.pi / 3.0)]


def run_corner_pipeline(t_grid=None, lambda_max: float = 2e4, threads: int | None = None) -> CornerPipelineResult:
    """Three sector runs (DD and DN quarter discs, DN half disc) solved for their corners.

    Two more runs feed the cross-checks: the DD half disc, whose vertex is not
    a corner, fixes the right-angle DD constant on its own; the DD sector of
    opening ``pi/3`` adds one unknown and one equation.
    """
    specs = {
        "DD@pi/2": QUARTER_DD,
        "DN@pi/2": QUARTER_DN,
        "DN@pi": HALF_DN,
        "DD@pi": HALF_DD,
        "DD@pi/3": THIRD_DD,
    }
    runs = {
        name: CornerRun(spec, extract_constant(spec, t_grid, lambda_max=lambda_max, threads=threads))
        for name, spec in specs.items()
    }
    main = solve_corners([runs["DD@pi/2"], runs["DN@pi/2"], runs["DN@pi"]])
    check = solve_corners([runs["DD@pi"]])
    extended = solve_corners([runs["DD@pi/2"], runs["DN@pi/2"], runs["DN@pi"], runs["DD@pi/3"]])
    return CornerPipelineResult(runs=runs, main=main, check=check, extended=extended)
