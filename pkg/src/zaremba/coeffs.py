"""Heat trace coefficient formulas and their assembly for flat disc sectors."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

from .wedge import Regular, Robin, VertexCondition

__all__ = [
    "BC",
    "GeometryData",
    "UnsupportedGeometry",
    "interior_b0",
    "interior_b2",
    "boundary_b1",
    "boundary_b2",
    "sigma0_b2",
    "CornerSlot",
    "SectorPrediction",
    "predict_sector_coeffs",
]


class BC(str, Enum):
    DIRICHLET = "D"
    NEUMANN = "N"

    @classmethod
    def parse(cls, value) -> "BC":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        aliases = {"D": cls.DIRICHLET, "DIRICHLET": cls.DIRICHLET, "N": cls.NEUMANN, "NEUMANN": cls.NEUMANN}
        if key not in aliases:
            raise ValueError(f"unknown boundary condition {value!r}")
        return aliases[key]


class UnsupportedGeometry(ValueError):
    pass


@dataclass(frozen=True)
class GeometryData:
    """Local geometric input of the coefficient formulas.

    ``tr_Q`` is the fibre trace of the potential and ``K_trace`` the trace
    of the boundary extrinsic curvature.  Scalar curvature enters traced,
    as ``R * dim_v / 6``.
    """

    m: int
    dim_v: int = 1
    tr_Q: float = 0.0
    R_scalar: float = 0.0
    K_trace: float = 0.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if self.dim_v < 1:
            raise ValueError("dim_v must be >= 1")


def interior_b0(g: GeometryData) -> float:
    return (4.0 * math.pi) ** (-g.m / 2.0) * g.dim_v


def interior_b2(g: GeometryData) -> float:
    """``(4 pi)^{-m/2} tr_V(Q - R/6)``."""
    return (4.0 * math.pi) ** (-g.m / 2.0) * (g.tr_Q - g.R_scalar * g.dim_v / 6.0)


def boundary_b1(g: GeometryData, side) -> float:
    """``-/+ (4 pi)^{-(m-1)/2} dim V / 4`` for Dirichlet / Neumann, per unit area of boundary."""
    sign = -1.0 if BC.parse(side) is BC.DIRICHLET else 1.0
    return sign * (4.0 * math.pi) ** (-(g.m - 1) / 2.0) * g.dim_v / 4.0


def boundary_b2(g: GeometryData, side) -> float:
    # same for both conditions at this order (no Robin endomorphism)
    BC.parse(side)
    return (4.0 * math.pi) ** (-g.m / 2.0) * g.dim_v * g.K_trace / 3.0


def sigma0_b2(g: GeometryData, vertex: VertexCondition) -> float:
    """Interface coefficient: ``7/16`` for any Robin vertex, ``-1/16`` for the regular one.

    Both scaled by ``(4 pi)^{-(m-2)/2} dim V``.
    """
    pref = (4.0 * math.pi) ** (-(g.m - 2) / 2.0) * g.dim_v
    if isinstance(vertex, Regular):
        return -pref / 16.0
    if isinstance(vertex, Robin):
        return 7.0 * pref / 16.0
    raise TypeError(f"vertex must be Regular() or Robin(s), got {vertex!r}")


@dataclass(frozen=True)
class CornerSlot:
    """An unresolved corner contribution: boundary pair ``kind`` meeting at ``angle``."""

    kind: str
    angle: float
    location: str

    @property
    def key(self) -> tuple[str, float]:
        return (self.kind, round(self.angle, 12))

    def label(self) -> str:
        frac = self.angle / math.pi
        return f"{self.kind}@{frac:.6g}pi"


def _corner_kind(a: BC, b: BC) -> str:
    return "".join(sorted((a.value, b.value)))


@dataclass(frozen=True)
class SectorPrediction:
    B0: float
    B1: float
    B2_known: float
    corner_slots: tuple[CornerSlot, ...]


def predict_sector_coeffs(spec, g: GeometryData | None = None, arc_bc=BC.DIRICHLET) -> SectorPrediction:
    """Known parts of ``Tr exp(-tF) ~ B0/t + B1/sqrt(t) + B2 + ...`` for a flat sector.

    ``spec`` is a :class:`zaremba.spectra.SectorSpec`.  The spectral oracle
    only knows Dirichlet arcs; ``arc_bc`` exists for bookkeeping.  Corner
    contributions are not evaluated; they come back as ``corner_slots``:
    the vertex (omitted when ``alpha = pi`` with equal side conditions,
    where the boundary is straight) and the two arc junctions at right
    angles.
    """
    g = g or GeometryData(m=2)
    if g.m != 2 or g.R_scalar != 0.0:
        raise UnsupportedGeometry("sector predictions need a flat two-dimensional geometry")
    alpha, R = float(spec.alpha), float(spec.radius)
    lo, hi = BC.parse(spec.side_lo_bc), BC.parse(spec.side_hi_bc)
    arc_bc = BC.parse(arc_bc)
    area = 0.5 * alpha * R * R
    arc = alpha * R
    flat = dataclasses.replace(g, K_trace=0.0)
    curved = dataclasses.replace(g, K_trace=1.0 / R)

    B0 = interior_b0(g) * area
    B1 = (boundary_b1(g, lo) + boundary_b1(g, hi)) * R + boundary_b1(g, arc_bc) * arc
    B2 = interior_b2(g) * area + boundary_b2(flat, lo) * R + boundary_b2(flat, hi) * R
    B2 += boundary_b2(curved, arc_bc) * arc

    slots = []
    straight = math.isclose(alpha, math.pi, rel_tol=0, abs_tol=1e-12)
    if not (straight and lo is hi):
        slots.append(CornerSlot(_corner_kind(lo, hi), alpha, "vertex"))
    slots.append(CornerSlot(_corner_kind(lo, arc_bc), 0.5 * math.pi, "arc-lo"))
    slots.append(CornerSlot(_corner_kind(hi, arc_bc), 0.5 * math.pi, "arc-hi"))
    return SectorPrediction(B0=B0, B1=B1, B2_known=B2, corner_slots=tuple(slots))
