"""Exact angle arithmetic and chord/cell geometry on the closed unit disk.

Angles are stored as ``q*pi + r`` with rational ``q`` and ``r``.  Every
breakpoint manipulated by this package is of that shape (rational multiples
of pi, or dyadic offsets from pi/2), and because pi is irrational two such
angles are equal iff their components are equal.  Ordering is decided through
a 75-digit rational enclosure of pi, which is overwhelmingly tighter than any
denominator this package produces.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union


class DomainError(ValueError):
    """An argument left the documented domain of an operation."""


Rational = Union[int, Fraction]

# Rational enclosure of pi. PI_LO < pi < PI_HI with a gap of 1e-75.
_PI_DIGITS = (
    "3.141592653589793238462643383279502884197169399375105820974944592307816406286"
)
PI_LO = Fraction(_PI_DIGITS)
PI_HI = PI_LO + Fraction(1, 10**75)


def _sign(pi_mult: Fraction, offset: Fraction) -> int:
    """Exact sign of pi_mult*pi + offset."""
    if pi_mult == 0:
        return (offset > 0) - (offset < 0)
    lo = pi_mult * (PI_LO if pi_mult > 0 else PI_HI) + offset
    hi = pi_mult * (PI_HI if pi_mult > 0 else PI_LO) + offset
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    # pi_mult != 0 means the value cannot be exactly zero; reaching this point
    # would need rational parts with ~1e75 denominators.
    raise ArithmeticError("pi enclosure too coarse for this comparison")


@dataclass(frozen=True)
class Angle:
    """Exact angle ``pi_mult*pi + offset`` (both parts rational)."""

    pi_mult: Fraction
    offset: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pi_mult", Fraction(self.pi_mult))
        object.__setattr__(self, "offset", Fraction(self.offset))

    # -- constructors -------------------------------------------------
    @classmethod
    def of_pi(cls, q: Rational) -> "Angle":
        """q * pi."""
        return cls(Fraction(q), Fraction(0))

    @classmethod
    def of_radians(cls, r: Union[Rational, float]) -> "Angle":
        """An exact rational number of radians (floats are exact binary rationals)."""
        return cls(Fraction(0), Fraction(r))

    # -- numeric views ------------------------------------------------
    @property
    def radians(self) -> float:
        # Single correctly rounded conversion through the rational enclosure.
        return float(self.pi_mult * PI_LO + self.offset)

    def __float__(self) -> float:
        return self.radians

    def point(self) -> Tuple[float, float]:
        """The boundary point (cos, sin) of this angle."""
        r = self.radians
        return (math.cos(r), math.sin(r))

    # -- exact arithmetic ----------------------------------------------
    def __add__(self, other: "Angle") -> "Angle":
        return Angle(self.pi_mult + other.pi_mult, self.offset + other.offset)

    def __sub__(self, other: "Angle") -> "Angle":
        return Angle(self.pi_mult - other.pi_mult, self.offset - other.offset)

    def __neg__(self) -> "Angle":
        return Angle(-self.pi_mult, -self.offset)

    def __mul__(self, k: Rational) -> "Angle":
        k = Fraction(k)
        return Angle(self.pi_mult * k, self.offset * k)

    __rmul__ = __mul__

    def __truediv__(self, k: Rational) -> "Angle":
        return self.__mul__(Fraction(1) / Fraction(k))

    def sign(self) -> int:
        return _sign(self.pi_mult, self.offset)

    # -- exact order ----------------------------------------------------
    def __lt__(self, other: "Angle") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "Angle") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "Angle") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "Angle") -> bool:
        return (self - other).sign() >= 0

    def normalized(self) -> "Angle":
        """The equivalent angle in [0, 2*pi)."""
        k = math.floor(self.radians / math.tau)
        cand = Angle(self.pi_mult - 2 * k, self.offset)
        while cand.sign() < 0:
            cand = Angle(cand.pi_mult + 2, cand.offset)
        while (cand - TWO_PI).sign() >= 0:
            cand = Angle(cand.pi_mult - 2, cand.offset)
        return cand

    def __repr__(self) -> str:
        return f"Angle({self.pi_mult!s}*pi + {self.offset!s})"


ZERO = Angle(0, 0)
TWO_PI = Angle(2, 0)


def ccw_measure(a: Angle, b: Angle) -> Angle:
    """Counterclockwise arc measure from a to b, in [0, 2*pi)."""
    return (b - a).normalized()


@dataclass(frozen=True)
class Arc:
    """Half-open arc [start, end) traversed counterclockwise on the unit circle.

    start == end denotes the empty arc; a full circle is not representable.
    """

    start: Angle
    end: Angle

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", self.start.normalized())
        object.__setattr__(self, "end", self.end.normalized())

    @property
    def measure(self) -> Angle:
        return ccw_measure(self.start, self.end)

    @property
    def measure_radians(self) -> float:
        return self.measure.radians

    def midpoint(self) -> Angle:
        return (self.start + self.measure * Fraction(1, 2)).normalized()

    def contains(self, angle: Angle) -> bool:
        if self.start == self.end:
            return False
        pos = ccw_measure(self.start, angle)
        return (pos - self.measure).sign() < 0


# ---------------------------------------------------------------------------
# chord and segment formulas

def _theta_radians(theta: Union[float, Angle], op: str) -> float:
    t = theta.radians if isinstance(theta, Angle) else float(theta)
    if not (0.0 <= t <= math.tau):
        raise DomainError(f"{op}: arc measure {t!r} outside [0, 2*pi]")
    return t


def chord_length(theta: Union[float, Angle]) -> float:
    """Length of the chord subtending an arc of the given measure: 2*sin(theta/2)."""
    t = _theta_radians(theta, "chord_length")
    return 2.0 * math.sin(0.5 * t)


def segment_area(theta: Union[float, Angle]) -> float:
    """Area of the circular segment cut off by that chord: (theta - sin theta)/2."""
    t = _theta_radians(theta, "segment_area")
    return 0.5 * (t - math.sin(t))


# ---------------------------------------------------------------------------
# cells: closed cycles of boundary arcs and chords

@dataclass(frozen=True)
class ArcEdge:
    """Counterclockwise arc of the unit circle from start to end."""

    start: Angle
    end: Angle

    def endpoints(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return (self.start.point(), self.end.point())


@dataclass(frozen=True)
class ChordEdge:
    """Straight segment between the boundary points of start and end."""

    start: Angle
    end: Angle

    def endpoints(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return (self.start.point(), self.end.point())


Edge = Union[ArcEdge, ChordEdge]


@dataclass(frozen=True)
class Cell:
    """A face of a chord arrangement: a closed ccw cycle of edges.

    Every vertex lies on the unit circle, so closure is checked exactly on
    the endpoint angles.
    """

    edges: Tuple[Edge, ...]

    def __post_init__(self) -> None:
        if len(self.edges) < 2:
            raise DomainError("a cell needs at least two edges")
        for e, nxt in zip(self.edges, self.edges[1:] + self.edges[:1]):
            if e.end.normalized() != nxt.start.normalized():
                raise DomainError("cell edge cycle is not closed")

    def arc_edges(self) -> Tuple[ArcEdge, ...]:
        return tuple(e for e in self.edges if isinstance(e, ArcEdge))


def _seg_intersect_proper(p1, p2, q1, q2) -> bool:
    """Do open segments (p1,p2) and (q1,q2) cross properly?"""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2 and d3 != d4


def _check_simple(cell: Cell) -> None:
    chords = [e for e in cell.edges if isinstance(e, ChordEdge)]
    for i in range(len(chords)):
        a = chords[i]
        pa = a.endpoints()
        for b in chords[i + 1:]:
            pb = b.endpoints()
            if _seg_intersect_proper(pa[0], pa[1], pb[0], pb[1]):
                raise DomainError("self-intersecting cell: crossing chords")
    arcs = cell.arc_edges()
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            a, b = arcs[i], arcs[j]
            ma, mb = ccw_measure(a.start, a.end), ccw_measure(b.start, b.end)
            # open angular intervals must not overlap
            for probe_base, probe_m, other_start, other_m in (
                (a.start, ma, b.start, mb),
                (b.start, mb, a.start, ma),
            ):
                pos = ccw_measure(other_start, probe_base)
                mid = (probe_base + probe_m * Fraction(1, 2)).normalized()
                posm = ccw_measure(other_start, mid)
                if (pos - other_m).sign() < 0 and pos.sign() > 0:
                    raise DomainError("self-intersecting cell: overlapping arcs")
                if (posm - other_m).sign() < 0 and posm.sign() > 0:
                    raise DomainError("self-intersecting cell: overlapping arcs")


def cell_area(cell: Cell) -> float:
    """Area enclosed by the cell: vertex shoelace plus a circular segment
    correction for every arc edge.  Raises DomainError for self-intersecting
    edge cycles."""
    _check_simple(cell)
    verts = [e.endpoints()[0] for e in cell.edges]
    shoelace = 0.0
    for (x0, y0), (x1, y1) in zip(verts, verts[1:] + verts[:1]):
        shoelace += x0 * y1 - y0 * x1
    area = 0.5 * shoelace
    for e in cell.edges:
        if isinstance(e, ArcEdge):
            area += segment_area(ccw_measure(e.start, e.end))
    return area


# -- point membership -------------------------------------------------------

_ON_EDGE_TOL = 1e-12


def _dist_point_segment(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    t = 0.0 if den == 0.0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / den))
    cx, cy = ax + t * dx, ay + t * dy
    return math.hypot(px - cx, py - cy)


def _dist_point_arc(p, start_rad: float, measure: float) -> float:
    """Distance from an interior point to a ccw arc of the unit circle."""
    px, py = p
    ang = math.atan2(py, px) % math.tau
    rel = (ang - start_rad) % math.tau
    if rel <= measure:
        return abs(1.0 - math.hypot(px, py))
    ex, ey = math.cos(start_rad), math.sin(start_rad)
    fx, fy = math.cos(start_rad + measure), math.sin(start_rad + measure)
    return min(math.hypot(px - ex, py - ey), math.hypot(px - fx, py - fy))


def _arc_monotone_pieces(start_rad: float, measure: float):
    """Split a ccw arc into y-monotone pieces at angles pi/2 and 3pi/2."""
    end = start_rad + measure
    cuts = [start_rad]
    k = math.floor((start_rad - math.pi / 2) / math.pi) + 1
    s = math.pi / 2 + k * math.pi
    while s < end:
        if s > start_rad:
            cuts.append(s)
        s += math.pi
    cuts.append(end)
    return list(zip(cuts[:-1], cuts[1:]))


def point_in_cell(cell: Cell, p: Sequence[float]) -> bool:
    """Strict interior membership.  Points on an edge (within 1e-12) are out;
    points not strictly inside the disk are a domain error."""
    px, py = float(p[0]), float(p[1])
    if math.hypot(px, py) >= 1.0:
        raise DomainError("point_in_cell: point must lie strictly inside the disk")
    # on-edge check first
    for e in cell.edges:
        a, b = e.endpoints()
        if isinstance(e, ChordEdge):
            if _dist_point_segment((px, py), a, b) <= _ON_EDGE_TOL:
                return False
        else:
            srad = e.start.normalized().radians
            meas = ccw_measure(e.start, e.end).radians
            if _dist_point_arc((px, py), srad, meas) <= _ON_EDGE_TOL:
                return False
    # ray cast in +x direction
    crossings = 0
    for e in cell.edges:
        if isinstance(e, ChordEdge):
            (x0, y0), (x1, y1) = e.endpoints()
            if (y0 > py) != (y1 > py):
                xc = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
                if xc > px:
                    crossings += 1
        else:
            srad = e.start.normalized().radians
            meas = ccw_measure(e.start, e.end).radians
            for t0, t1 in _arc_monotone_pieces(srad, meas):
                y0, y1 = math.sin(t0), math.sin(t1)
                if (y0 > py) != (y1 > py):
                    xc = math.sqrt(max(0.0, 1.0 - py * py))
                    if math.cos(0.5 * (t0 + t1)) < 0.0:
                        xc = -xc
                    if xc > px:
                        crossings += 1
    return crossings % 2 == 1


def index_of_angle(sorted_angles: Sequence[Angle], x: Angle) -> int:
    """Rightmost index i with sorted_angles[i] <= x, cyclically (-1 wraps to last)."""
    i = bisect_right(sorted_angles, x) - 1
    return i if i >= 0 else len(sorted_angles) - 1
