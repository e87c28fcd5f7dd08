import math
from fractions import Fraction

import numpy as np
import pytest

from lglab.circle_geometry import (
    Angle,
    Arc,
    ArcEdge,
    Cell,
    ChordEdge,
    DomainError,
    ccw_measure,
    cell_area,
    chord_length,
    index_of_angle,
    point_in_cell,
    segment_area,
)


class TestAngle:
    def test_exact_arithmetic(self):
        a = Angle.of_pi(Fraction(1, 3))
        b = Angle.of_pi(Fraction(2, 3))
        assert (a + b) == Angle.of_pi(1)
        assert (a + b).normalized() == Angle.of_pi(1)
        assert (b - a) == Angle.of_pi(Fraction(1, 3))
        assert (-a).normalized() == Angle.of_pi(Fraction(5, 3))
        assert (a * 2) == b
        assert (b / 2) == a

    def test_mixed_pi_and_rational_offset(self):
        # pi is irrational, so (pi_mult, offset) pairs compare exactly
        a = Angle(Fraction(1, 2), Fraction(1, 4))
        b = Angle(Fraction(1, 2), Fraction(-1, 4))
        assert (a - b) == Angle(0, Fraction(1, 2))
        assert a > b
        assert (a - b).sign() == 1
        assert (b - a).sign() == -1
        assert Angle(0, 0).sign() == 0

    def test_normalized_range(self):
        for q in [Fraction(-7, 3), Fraction(0), Fraction(2), Fraction(13, 6)]:
            n = Angle.of_pi(q).normalized()
            assert 0.0 <= n.radians < math.tau
        assert Angle.of_pi(2).normalized() == Angle.of_pi(0)
        assert Angle.of_pi(Fraction(-1, 2)).normalized() == Angle.of_pi(Fraction(3, 2))

    def test_radians_and_point(self):
        a = Angle(Fraction(1, 2), Fraction(1, 8))
        assert a.radians == pytest.approx(math.pi / 2 + 0.125, abs=0)
        x, y = a.point()
        assert math.hypot(x, y) == pytest.approx(1.0, abs=1e-15)

    def test_of_radians_roundtrip(self):
        x = 2.174528345
        assert Angle.of_radians(x).radians == x

    def test_ordering_near_ties(self):
        # offsets that differ by far less than float epsilon at this scale
        a = Angle(Fraction(1, 3), Fraction(1, 10**20))
        b = Angle(Fraction(1, 3), 0)
        assert b < a
        assert not a < b


def test_ccw_measure_wraps():
    a = Angle.of_pi(Fraction(7, 4))
    b = Angle.of_pi(Fraction(1, 4))
    assert ccw_measure(a, b) == Angle.of_pi(Fraction(1, 2))
    assert ccw_measure(b, a) == Angle.of_pi(Fraction(3, 2))
    assert ccw_measure(a, a) == Angle.of_pi(0)


class TestArc:
    def test_measure_and_midpoint(self):
        arc = Arc(Angle.of_pi(Fraction(1, 4)), Angle.of_pi(Fraction(3, 4)))
        assert arc.measure == Angle.of_pi(Fraction(1, 2))
        assert arc.midpoint() == Angle.of_pi(Fraction(1, 2))

    def test_contains_half_open(self):
        arc = Arc(Angle.of_pi(Fraction(1, 4)), Angle.of_pi(Fraction(3, 4)))
        assert arc.contains(arc.start)
        assert not arc.contains(arc.end)
        assert arc.contains(Angle.of_pi(Fraction(1, 2)))
        assert not arc.contains(Angle.of_pi(Fraction(7, 8)))

    def test_wrapping_arc(self):
        arc = Arc(Angle.of_pi(Fraction(7, 4)), Angle.of_pi(Fraction(1, 4)))
        assert arc.measure == Angle.of_pi(Fraction(1, 2))
        assert arc.contains(Angle.of_pi(0))
        assert not arc.contains(Angle.of_pi(1))

    def test_empty_arc(self):
        a = Angle.of_pi(Fraction(1, 3))
        empty = Arc(a, a)
        assert empty.measure.sign() == 0
        assert not empty.contains(a)


@pytest.mark.parametrize(
    "theta,expected",
    [
        (0.0, 0.0),
        (math.pi, 2.0),
        (math.pi / 3, 1.0),  # chord of a 60-degree arc equals the radius
    ],
)
def test_chord_length_values(theta, expected):
    assert chord_length(theta) == pytest.approx(expected, abs=1e-15)


def test_chord_length_accepts_angle():
    assert chord_length(Angle.of_pi(1)) == pytest.approx(2.0, abs=1e-15)


def test_chord_length_monotone_on_0_pi():
    th = np.linspace(0.0, math.pi, 2001)
    vals = [chord_length(t) for t in th]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_chord_length_domain():
    with pytest.raises(DomainError):
        chord_length(-0.1)
    with pytest.raises(DomainError):
        chord_length(math.tau + 0.1)


def test_segment_area_values():
    assert segment_area(0.0) == 0.0
    assert segment_area(math.pi) == pytest.approx(math.pi / 2, abs=1e-15)
    assert segment_area(math.tau) == pytest.approx(math.pi, abs=1e-12)
    # complementarity: the two segments cut by one chord tile the disk
    for t in (0.3, 1.1, 2.9):
        assert segment_area(t) + segment_area(math.tau - t) == pytest.approx(
            math.pi, abs=1e-12
        )


def _half_disk_cell():
    a0 = Angle.of_pi(0)
    a1 = Angle.of_pi(1)
    return Cell((ArcEdge(a0, a1), ChordEdge(a1, a0)))


def _quarter_cell():
    a0 = Angle.of_pi(0)
    a1 = Angle.of_pi(Fraction(1, 2))
    return Cell((ArcEdge(a0, a1), ChordEdge(a1, a0)))


class TestCell:
    def test_closure_validated(self):
        a0, a1, a2 = Angle.of_pi(0), Angle.of_pi(Fraction(1, 2)), Angle.of_pi(1)
        with pytest.raises(DomainError):
            Cell((ArcEdge(a0, a1), ChordEdge(a2, a0)))
        with pytest.raises(DomainError):
            Cell((ArcEdge(a0, a1),))

    def test_half_disk_area(self):
        assert cell_area(_half_disk_cell()) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_quarter_cell_area(self):
        # circular segment over a quarter arc
        assert cell_area(_quarter_cell()) == pytest.approx(
            segment_area(math.pi / 2), abs=1e-12
        )

    def test_point_in_cell_against_ray_casting(self):
        cells = [_half_disk_cell(), _quarter_cell()]
        rng = np.random.default_rng(7)
        for cell in cells:
            poly = _polygonalize(cell, 512)
            pts = rng.uniform(-1.0, 1.0, size=(400, 2))
            pts = pts[np.hypot(pts[:, 0], pts[:, 1]) < 0.999]
            for p in pts:
                if _dist_to_polyline(p, poly) < 2e-3:
                    continue  # too close to the boundary for the reference
                assert point_in_cell(cell, p) == _ray_cast(p, poly)


def _polygonalize(cell, n):
    pts = []
    for edge in cell.edges:
        a = edge.start.normalized().radians
        b = edge.end.normalized().radians
        if isinstance(edge, ArcEdge):
            meas = (b - a) % math.tau
            ts = a + meas * np.linspace(0.0, 1.0, n, endpoint=False)
            pts.extend(np.column_stack([np.cos(ts), np.sin(ts)]))
        else:
            p, q = edge.endpoints()
            pts.append(np.asarray(p))
    return np.asarray(pts)


def _ray_cast(p, poly):
    x, y = p
    n = len(poly)
    inside = False
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xx = x1 + (y - y1) / (y2 - y1) * (x2 - x1)
            if xx > x:
                inside = not inside
    return inside


def _dist_to_polyline(p, poly):
    q = np.roll(poly, -1, axis=0)
    d = q - poly
    t = np.clip(np.einsum("ij,ij->i", p - poly, d) / np.einsum("ij,ij->i", d, d), 0, 1)
    proj = poly + t[:, None] * d
    return float(np.min(np.hypot(*(p - proj).T)))


def test_index_of_angle():
    angles = [Angle.of_pi(Fraction(k, 4)) for k in range(0, 8, 2)]
    assert index_of_angle(angles, Angle.of_pi(Fraction(1, 8))) == 0
    assert index_of_angle(angles, Angle.of_pi(Fraction(1, 2))) == 1
    assert index_of_angle(angles, Angle.of_pi(Fraction(15, 8))) == 3
    # angles before the first breakpoint wrap to the last slot
    assert index_of_angle(angles[1:], Angle.of_pi(Fraction(1, 8))) == 2


def test_domain_error_is_value_error():
    assert issubclass(DomainError, ValueError)
