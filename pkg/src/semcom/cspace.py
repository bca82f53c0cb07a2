"""Conceptual-space geometry.

A two-domain space for colored shapes: one shape dimension (the ratio of
the maximum to the minimum center-to-boundary distance) and the three
color dimensions (hue, saturation, brightness). Points live in this space,
concepts are prototype points with implicit Voronoi regions, and decoding
is minimum distance to a prototype.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidParameterError

DEFAULT_RHO = 50.0


@dataclass(frozen=True)
class QualityDimension:
    """One measurable axis of a domain.

    kind is "linear" (bounded by lo/hi) or "circular" (period 1, lo/hi
    ignored). Weights over a space must sum to 1.
    """

    name: str
    kind: str
    lo: float = 0.0
    hi: float = 1.0
    weight: float = 0.25

    def __post_init__(self):
        if self.kind not in ("linear", "circular"):
            raise InvalidParameterError(f"unknown dimension kind {self.kind!r}")
        if self.kind == "linear" and not self.lo < self.hi:
            raise InvalidParameterError(f"dimension {self.name}: lo must be < hi")
        if not self.weight > 0:
            raise InvalidParameterError(f"dimension {self.name}: weight must be > 0")


#: The four-dimension space used throughout: shape ratio plus the color spindle.
SPACE_DIMENSIONS = (
    QualityDimension("ratio", "linear", 1.0, 2.5),
    QualityDimension("hue", "circular"),
    QualityDimension("saturation", "linear", 0.0, 1.0),
    QualityDimension("brightness", "linear", 0.0, 1.0),
)


@dataclass(frozen=True)
class SemanticPoint:
    """Coordinates (r, h, s, b) of a point in the conceptual space."""

    r: float
    h: float
    s: float
    b: float

    def __post_init__(self):
        for v in (self.r, self.h, self.s, self.b):
            if not math.isfinite(v):
                raise InvalidParameterError("semantic point coordinates must be finite")
        if self.r < 1.0:
            raise InvalidParameterError(f"shape ratio must be >= 1, got {self.r}")
        if not 0.0 <= self.h < 1.0:
            raise InvalidParameterError(f"hue must be in [0, 1), got {self.h}")
        if not 0.0 <= self.s <= 1.0:
            raise InvalidParameterError(f"saturation must be in [0, 1], got {self.s}")
        if not 0.0 <= self.b <= 1.0:
            raise InvalidParameterError(f"brightness must be in [0, 1], got {self.b}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.r, self.h, self.s, self.b)


@dataclass(frozen=True)
class Concept:
    """A labeled concept represented by its prototype point."""

    label: str
    prototype: SemanticPoint


def circular_distance(h1: float, h2: float) -> float:
    """Exact distance on the unit hue circle, in [0, 0.5].

    Out-of-range inputs are wrapped modulo 1, never rejected.
    """
    d = (h1 - h2) % 1.0
    return min(d, 1.0 - d)


def gamma(h1: float, h2: float, rho: float = DEFAULT_RHO) -> float:
    """Smooth approximation of the circular hue distance.

    Soft-min of the two arc lengths with sharpness rho; always within
    [circular_distance, circular_distance + ln(2)/rho].
    """
    if rho <= 0:
        raise InvalidParameterError(f"rho must be > 0, got {rho}")
    d1 = (h1 - h2) % 1.0
    d2 = 1.0 - d1
    # -(1/rho) * ln(0.5*exp(-rho*d1) + 0.5*exp(-rho*d2)), stabilized
    m = min(d1, d2)
    return m - math.log(0.5 * math.exp(-rho * (d1 - m)) + 0.5 * math.exp(-rho * (d2 - m))) / rho


def semantic_loss(p: SemanticPoint, q: SemanticPoint, rho: float = DEFAULT_RHO,
                  smooth: bool = False) -> float:
    """Mean of squared per-dimension differences (the training-style loss).

    With smooth on, the hue term uses gamma; otherwise the exact circular
    distance, making the loss zero iff p == q.
    """
    hue = gamma(p.h, q.h, rho) if smooth else circular_distance(p.h, q.h)
    return 0.25 * ((p.r - q.r) ** 2 + (p.s - q.s) ** 2 + (p.b - q.b) ** 2 + hue ** 2)


def semantic_metric(p: SemanticPoint, q: SemanticPoint) -> float:
    """True metric on the space: sqrt of the exact-mode loss.

    An L2 combination of per-dimension metrics, so the triangle
    inequality holds (the raw squared loss does not satisfy it).
    """
    return math.sqrt(semantic_loss(p, q, smooth=False))


def decode_concept(p_hat: SemanticPoint, concepts: Iterable[Concept]) -> Concept:
    """Minimum-distance decoding; ties broken by ascending label."""
    concepts = list(concepts)
    if not concepts:
        raise InvalidParameterError("concept set must be non-empty")
    return min(concepts, key=lambda c: (semantic_metric(c.prototype, p_hat), c.label))


def polygon_ratio(n_sides: int | None) -> float:
    """Max/min center-to-boundary distance ratio of a regular n-gon.

    None denotes a circle (ratio 1). For an n-gon the minimum distance is
    the apothem, giving 1/cos(pi/n).
    """
    if n_sides is None:
        return 1.0
    if n_sides < 3:
        raise InvalidParameterError(f"polygon needs >= 3 sides, got {n_sides}")
    return 1.0 / math.cos(math.pi / n_sides)


def distortion_bound_holds(p_star: SemanticPoint, p: SemanticPoint,
                           p_hat: SemanticPoint) -> bool:
    """Triangle-inequality decomposition of the end-to-end distortion."""
    lhs = semantic_metric(p_star, p_hat)
    rhs = semantic_metric(p_star, p) + semantic_metric(p, p_hat)
    return lhs <= rhs + 1e-12


# Canonical hues: red 0, yellow 1/6, blue 2/3. Saturation and brightness
# copy the yellow-square reference prototype.
_PROTO_S = 1.0
_PROTO_B = 0.9714

_PROTOTYPE_SPECS = (
    ("yellow-square", 4, 1.0 / 6.0),
    ("red-triangle", 3, 0.0),
    ("red-octagon", 8, 0.0),
    ("red-circle", None, 0.0),
    ("blue-circle", None, 2.0 / 3.0),
)


def default_concepts() -> list[Concept]:
    """The five-concept set, in ascending label order."""
    concepts = [
        Concept(label, SemanticPoint(polygon_ratio(n), hue, _PROTO_S, _PROTO_B))
        for label, n, hue in _PROTOTYPE_SPECS
    ]
    return sorted(concepts, key=lambda c: c.label)


def concept_by_label(label: str, concepts: Sequence[Concept] | None = None) -> Concept:
    for c in concepts or default_concepts():
        if c.label == label:
            return c
    raise InvalidParameterError(f"unknown concept label {label!r}")


def prototypes_csv(concepts: Sequence[Concept] | None = None) -> str:
    """Prototype table as CSV text: label,r,h,s,b at 6 decimal places."""
    lines = ["label,r,h,s,b"]
    for c in concepts or default_concepts():
        p = c.prototype
        lines.append(f"{c.label},{p.r:.6f},{p.h:.6f},{p.s:.6f},{p.b:.6f}")
    return "\n".join(lines) + "\n"
