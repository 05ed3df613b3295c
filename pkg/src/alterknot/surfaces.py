"""Checkerboard surfaces, the augmented family and their Euler data.

The checkerboard surface of a color is built from the faces of that color
joined by one twisted band per crossing, so its Euler characteristic is
``F_color - cr``.  The band at a crossing meets the cusp torus in a curve
that runs twice around the meridian direction; summing these contributions
gives the integral boundary slope ``sigma = sum(sign(c) + t(c))`` where
``t(c)`` is +1 when the color fills the even corners of ``c`` and -1 when it
fills the odd ones.  On an alternating diagram every crossing adds +2 or -2 to
exactly one of the two slopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diagram import BLUE, RED, KnotDiagram, is_prime
from .dt import canonical_dt, dt_string
from .errors import DomainError, NotAlternating, NotTwistReduced, ThresholdViolation
from .twist import (
    DartMap,
    detect_twist_regions,
    is_twist_reduced,
    tw_N,
    twist_reduce,
)

N_ESSENTIAL = 91
N_HOMOTOPY = 121

FOURTH_ROOT_2 = 2 ** 0.25
TWO_FIVE_FOURTHS = 2 ** 1.25

# canonical DT codes of the two knots excepted from the sharper cusp bounds
EXCEPTIONAL_DT = {
    (4, 6, 8, 2): "figure-eight",
    (4, 8, 10, 2, 6): "5_2",
}


@dataclass(frozen=True)
class SurfaceSummary:
    color: str
    euler: int
    pleated_area: float
    boundary_slope: int
    twisted: bool = False

    def as_dict(self) -> dict:
        return {
            "color": self.color,
            "euler": self.euler,
            "pleated_area": self.pleated_area,
            "boundary_slope": self.boundary_slope,
            "twisted": self.twisted,
        }


@dataclass(frozen=True)
class CrossingCircle:
    region: int
    c: int
    r: int

    @property
    def n(self) -> int:
        return (self.c - self.r) // 2

    def as_dict(self) -> dict:
        return {"region": self.region, "c": self.c, "r": self.r, "n": self.n}


@dataclass(frozen=True)
class AugmentedFamily:
    base: KnotDiagram
    threshold: int
    crossing_circles: tuple[CrossingCircle, ...]
    K2: KnotDiagram
    twisted_euler_abs: int
    k2_faces: dict = field(default_factory=dict)

    @property
    def tw_N(self) -> int:
        return len(self.crossing_circles)

    @property
    def euler_formula(self) -> int:
        return len(self.K2) + 2 * self.tw_N - 2

    def as_dict(self) -> dict:
        k2_code = dt_string(canonical_dt(self.K2)) if self.K2.is_knot else None
        return {
            "threshold": self.threshold,
            "crossing_circles": [c.as_dict() for c in self.crossing_circles],
            "K2_crossings": len(self.K2),
            "K2_components": len(self.K2.components),
            "K2_dt": k2_code,
            "K2_pd": None if k2_code else self.K2.pd_string(),
            "K2_faces": dict(self.k2_faces),
            "twisted_euler_abs": self.twisted_euler_abs,
            "euler_formula": self.euler_formula,
        }


def _require_alternating(d: KnotDiagram) -> None:
    if not d.is_alternating:
        raise NotAlternating("checkerboard data is defined here for alternating diagrams")


def boundary_slope(d: KnotDiagram, color: str) -> int:
    total = 0
    for c, sign in enumerate(d.signs):
        t = 1 if d.color_parity(c, color) == 0 else -1
        total += sign + t
    return total


def checkerboards(d: KnotDiagram) -> tuple[SurfaceSummary, SurfaceSummary]:
    """Red and blue checkerboard surfaces of an alternating diagram."""
    _require_alternating(d)
    n = len(d)
    out = []
    for color in (RED, BLUE):
        faces = sum(1 for f in d.faces if f.color == color)
        chi = faces - n
        out.append(SurfaceSummary(color, chi, 2 * math.pi * abs(chi), boundary_slope(d, color)))
    return out[0], out[1]


def union_pleated_area(d: KnotDiagram) -> float:
    red, blue = checkerboards(d)
    return 2 * math.pi * abs(red.euler + blue.euler)


def union_cusp_area_lower(sigma1: int, sigma2: int, exceptional: bool) -> float:
    diff = abs(sigma1 - sigma2)
    return float(diff) if exceptional else FOURTH_ROOT_2 * diff


def checkerboard_cusp_lower(cr: int, exceptional: bool) -> float:
    if cr < 3:
        raise DomainError("crossing number must be at least 3")
    return 2.0 * cr if exceptional else TWO_FIVE_FOURTHS * cr


def twisted_cusp_lower(tw: int, exceptional: bool) -> float:
    if tw < 2:
        raise DomainError("twist number must be at least 2")
    return 2.0 * tw if exceptional else TWO_FIVE_FOURTHS * tw


def max_homotopic_arcs(N: int, twisted: bool) -> int:
    """Cap on pairwise homotopic disjoint arcs: 3N - 1 plain, 2(3N - 2) twisted."""
    if N < 1:
        raise DomainError("N must be at least 1")
    if twisted:
        if N < N_HOMOTOPY:
            raise ThresholdViolation(f"twisted surfaces need N >= {N_HOMOTOPY}, got {N}")
        return 2 * (3 * N - 2)
    return 3 * N - 1


def exceptional_name(d: KnotDiagram) -> str | None:
    """'figure-eight' or '5_2' when the twist-reduced diagram is one of them."""
    if not d.is_knot or len(d) not in (4, 5):
        return None
    if not d.is_alternating or not is_prime(d):
        return None
    return EXCEPTIONAL_DT.get(canonical_dt(twist_reduce(d)))


def is_exceptional(d: KnotDiagram) -> bool:
    return exceptional_name(d) is not None


def remove_full_twists(d: KnotDiagram, chains: dict[tuple[int, ...], int]) -> KnotDiagram:
    """Delete ``k`` full twists from the start of each listed bigon chain.

    Each full twist is a pair of consecutive crossings sharing a bigon.  The
    strands through the pair are reconnected straight across, which keeps
    the diagram planar and alternating.
    """
    m = DartMap.from_diagram(d)
    p = m.partner
    removed: set[int] = set()
    for chain, k in chains.items():
        for t in range(k):
            x, y = chain[2 * t], chain[2 * t + 1]
            shared = [i for i in range(4) if p[4 * x + i] >> 2 == y]
            outer = [i for i in range(4) if p[4 * x + i] >> 2 != y]
            if len(shared) != 2:
                raise NotTwistReduced(f"crossings {x} and {y} do not share a bigon")
            ends = []
            for i in outer:
                through = p[4 * x + (i + 2) % 4]
                far = p[(through & ~3) | ((through + 2) & 3)]
                ends.append((p[4 * x + i], far))
            for a, b in ends:
                p[a] = b
                p[b] = a
            removed |= {x, y}
    keep = [c for c in range(len(d)) if c not in removed]
    index = {c: i for i, c in enumerate(keep)}
    slots = [
        [tuple(sorted((4 * index[c] + i, 4 * index[p[4 * c + i] >> 2] + (p[4 * c + i] & 3))))
         for i in range(4)]
        for c in keep
    ]
    return KnotDiagram._from_map(slots, [m.under[c] for c in keep], allow_links=True)


def augment(d: KnotDiagram, N: int = N_HOMOTOPY) -> AugmentedFamily:
    """Encircle every twist region with at least ``N`` crossings and untwist it.

    Each encircled region of ``c`` crossings keeps ``r = 1`` or ``2``
    crossings (matching the parity of ``c``) in ``K2``; the rest are removed
    ``n = (c - r) / 2`` full twists at a time.
    """
    if N < 1:
        raise DomainError("N must be at least 1")
    _require_alternating(d)
    if not is_twist_reduced(d):
        raise NotTwistReduced("augmentation needs a twist-reduced diagram")
    circles = []
    chains = {}
    for i, region in enumerate(detect_twist_regions(d)):
        c = region.length
        if c < N:
            continue
        r = 1 if c % 2 else 2
        circle = CrossingCircle(i, c, r)
        circles.append(circle)
        if circle.n:
            chains[region.crossing_ids] = circle.n
    k2 = remove_full_twists(d, chains) if chains else d
    red = sum(1 for f in k2.faces if f.color == RED)
    blue = len(k2.faces) - red
    # two disks leave each surface pair per crossing circle
    chi = (len(k2.faces) - 2 * len(k2)) - 2 * len(circles)
    family = AugmentedFamily(
        base=d,
        threshold=N,
        crossing_circles=tuple(circles),
        K2=k2,
        twisted_euler_abs=abs(chi),
        k2_faces={RED: red, BLUE: blue},
    )
    return family


__all__ = [
    "N_ESSENTIAL",
    "N_HOMOTOPY",
    "SurfaceSummary",
    "CrossingCircle",
    "AugmentedFamily",
    "checkerboards",
    "boundary_slope",
    "union_pleated_area",
    "union_cusp_area_lower",
    "checkerboard_cusp_lower",
    "twisted_cusp_lower",
    "max_homotopic_arcs",
    "exceptional_name",
    "is_exceptional",
    "remove_full_twists",
    "augment",
    "tw_N",
]
