"""Exact solver for binary boundary data on the disk.

Solutions of the two-valued problem are in bijection with non-crossing
perfect matchings of the data's transition points: every level boundary in
the disk is a straight chord, each chord joins a rising transition to a
falling one, and the chords of one solution never cross.  The solver is an
interval dynamic program over the cyclically ordered transitions with a
composite objective (total chord length, then a signed label-area term, then
the smallest split index), so minimal- and maximal-area optima are selected
deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .circle_geometry import (
    Angle,
    ArcEdge,
    Cell,
    ChordEdge,
    DomainError,
    chord_length,
    point_in_cell,
)

MAX_TRANSITIONS = 2000
ENERGY_REL_TOL = 1e-12
AREA_TOL = 1e-12


@dataclass(frozen=True)
class Transition:
    """A boundary angle where binary data steps 0->1 (rising) or 1->0."""

    angle: Angle
    rising: bool


def transitions_of(data) -> Tuple[Tuple[Transition, ...], int]:
    """Transition list (ccw order) and the value held across angle 0."""
    if not data.is_binary:
        raise DomainError("solver needs binary data with values in {0, 1}")
    if data.is_constant:
        return (), int(data.values[0])
    trans = tuple(
        Transition(bp, v == 1.0) for bp, v in zip(data.breakpoints, data.values)
    )
    base = int(data.values[-1])
    return trans, base


def _validate_matching(n: int, matching: Sequence[Tuple[int, int]]) -> Tuple[Tuple[int, int], ...]:
    pairs = tuple(sorted((min(i, j), max(i, j)) for i, j in matching))
    partner = [-1] * n
    for i, j in pairs:
        if not (0 <= i < j < n):
            raise DomainError("matching index out of range")
        if partner[i] != -1 or partner[j] != -1:
            raise DomainError("matching is not a perfect pairing")
        if (j - i) % 2 == 0:
            raise DomainError("matching pairs transitions of equal type")
        partner[i], partner[j] = j, i
    if n and -1 in partner:
        raise DomainError("matching is not perfect")
    stack: List[int] = []
    for i in range(n):
        if partner[i] > i:
            stack.append(partner[i])
        else:
            if not stack or stack.pop() != i:
                raise DomainError("matching has crossing chords")
    return pairs


class ChordConfiguration:
    """A non-crossing chord matching of binary-data transition points along
    with the induced two-coloring of the disk."""

    def __init__(
        self,
        transitions: Sequence[Transition],
        matching: Sequence[Tuple[int, int]],
        base_value: int,
    ):
        transitions = tuple(transitions)
        n = len(transitions)
        if n % 2:
            raise DomainError("transition count must be even")
        for a, b in zip(transitions, transitions[1:]):
            if not a.angle.normalized() < b.angle.normalized():
                raise DomainError("transitions must be strictly increasing in [0, 2*pi)")
            if a.rising == b.rising:
                raise DomainError("transitions must alternate rising/falling")
        if n and transitions[0].rising == transitions[-1].rising:
            raise DomainError("transitions must alternate rising/falling")
        if base_value not in (0, 1):
            raise DomainError("base value must be 0 or 1")
        # the wrap arc holds value 1 exactly when the last transition is rising
        if n and base_value != int(transitions[-1].rising):
            raise DomainError("base value inconsistent with transition types")
        self.transitions = transitions
        self.matching = _validate_matching(n, matching)
        self.base_value = int(base_value)
        self._u = np.array([t.angle.normalized().radians for t in transitions])

    # -- scalar invariants ------------------------------------------------
    @cached_property
    def energy(self) -> float:
        """Total chord length, summed canonically (index order, exact fsum)."""
        u = self._u
        return math.fsum(chord_length(u[j] - u[i]) for i, j in self.matching)

    @cached_property
    def label_area(self) -> float:
        """Area of the label-1 region (boundary arcs plus chord terms)."""
        u = self._u
        n = len(self.transitions)
        if n == 0:
            return math.pi * self.base_value
        terms = []
        for i, t in enumerate(self.transitions):
            if t.rising:
                nxt = u[(i + 1) % n] + (math.tau if i + 1 == n else 0.0)
                terms.append(nxt - u[i])
        for i, j in self.matching:
            s = math.sin(u[j] - u[i])
            terms.append(s if not self.transitions[i].rising else -s)
        return 0.5 * math.fsum(terms)

    @property
    def n_chords(self) -> int:
        return len(self.matching)

    def chords(self) -> Tuple[ChordEdge, ...]:
        return tuple(
            ChordEdge(self.transitions[i].angle, self.transitions[j].angle)
            for i, j in self.matching
        )

    def chord_segments(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Chord endpoints as planar points, aligned with ``matching``."""
        out = []
        for i, j in self.matching:
            p = np.array(self.transitions[i].angle.point())
            q = np.array(self.transitions[j].angle.point())
            out.append((p, q))
        return out

    def chord_angle_pairs(self) -> List[frozenset]:
        """Unordered endpoint angle pairs (for exact coincidence tests)."""
        return [
            frozenset((self.transitions[i].angle.normalized(), self.transitions[j].angle.normalized()))
            for i, j in self.matching
        ]

    # -- cells --------------------------------------------------------------
    @cached_property
    def _forest(self):
        """Children lists of the chord nesting forest plus the root list."""
        partner = {}
        for i, j in self.matching:
            partner[i] = j
            partner[j] = i
        roots: List[Tuple[int, int]] = []
        children: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        stack: List[Tuple[int, int]] = []
        i = 0
        n = len(self.transitions)
        while i < n:
            j = partner[i]
            node = (i, j)
            children[node] = []
            if stack:
                children[stack[-1]].append(node)
            else:
                roots.append(node)
            stack.append(node)
            # advance: either descend just after i, or climb past closed nodes
            i += 1
            while stack and stack[-1][1] == i:
                i += 1
                stack.pop()
        return roots, children

    def cells(self) -> Tuple[Tuple[Cell, int], ...]:
        """All faces of the chord arrangement with their labels.

        Empty for the trivial (constant) configuration.
        """
        n = len(self.transitions)
        if n == 0:
            return ()
        roots, children = self._forest
        ang = [t.angle for t in self.transitions]
        out: List[Tuple[Cell, int]] = []

        def node_cell(node) -> Cell:
            i, j = node
            edges = []
            cursor = i
            for (a, b) in children[node]:
                edges.append(ArcEdge(ang[cursor], ang[a]))
                edges.append(ChordEdge(ang[a], ang[b]))
                cursor = b
            edges.append(ArcEdge(ang[cursor], ang[j]))
            edges.append(ChordEdge(ang[j], ang[i]))
            return Cell(tuple(edges))

        for node in children:
            out.append((node_cell(node), int(self.transitions[node[0]].rising)))
        # root cell wraps across the cut between the last and first transition
        edges = []
        cursor = roots[-1][1]
        for (a, b) in roots:
            edges.append(ArcEdge(ang[cursor], ang[a]))
            edges.append(ChordEdge(ang[a], ang[b]))
            cursor = b
        out.append((Cell(tuple(edges)), self.base_value))
        return tuple(out)

    # -- pointwise labels ------------------------------------------------
    @cached_property
    def _chord_tests(self):
        """Per chord: endpoint points, and the orientation sign of its arc side."""
        tests = []
        u = self._u
        for i, j in self.matching:
            p = np.array(self.transitions[i].angle.point())
            q = np.array(self.transitions[j].angle.point())
            mid = 0.5 * (u[i] + u[j])
            r = np.array([math.cos(mid), math.sin(mid)])
            ref = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
            tests.append((p, q - p, 1.0 if ref > 0 else -1.0))
        return tests

    def evaluate_points(self, pts: np.ndarray) -> np.ndarray:
        """Labels (0/1) at planar points, shape (n, 2).  Points on a chord get
        the label of the side the strict test leaves them on (a null set)."""
        pts = np.asarray(pts, dtype=float)
        flip = np.zeros(len(pts), dtype=np.int64)
        for p, d, ref in self._chord_tests:
            cross = d[0] * (pts[:, 1] - p[1]) - d[1] * (pts[:, 0] - p[0])
            flip += (cross * ref > 0)
        return (self.base_value + flip) % 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChordConfiguration):
            return NotImplemented
        return (
            self.transitions == other.transitions
            and self.matching == other.matching
            and self.base_value == other.base_value
        )

    def __hash__(self):
        return hash((self.transitions, self.matching, self.base_value))

    def __repr__(self):
        return (
            f"ChordConfiguration({len(self.transitions)} transitions, "
            f"{self.matching!r}, base={self.base_value})"
        )


class BinaryDiskFunction:
    """Callable 0/1 disk function realized by a chord configuration."""

    def __init__(self, config: ChordConfiguration):
        self.config = config

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            return float(self.config.evaluate_points(pts[None, :])[0])
        return self.config.evaluate_points(pts).astype(float)


def config_energy(config: ChordConfiguration) -> float:
    return config.energy


def config_to_function(config: ChordConfiguration) -> BinaryDiskFunction:
    return BinaryDiskFunction(config)


# ---------------------------------------------------------------------------
# the interval DP

def _improves(e: float, a: float, best_e: float, best_a: float) -> bool:
    """Strict improvement in the (energy, area-term) composite; on ties the
    earlier candidate (smaller split index) survives."""
    tol = ENERGY_REL_TOL * max(1.0, abs(best_e))
    if e < best_e - tol:
        return True
    if e > best_e + tol:
        return False
    return a < best_a - AREA_TOL


def solve_binary(data, mode: str = "minimal") -> ChordConfiguration:
    """Minimum-total-chord-length configuration for binary boundary data.

    ``mode`` picks the representative among energy ties: "minimal" prefers
    the smallest label-1 area, "maximal" the largest.  O(m^3) time and
    O(m^2) space in the number of chords; refuses more than 2000 transitions.
    """
    if mode not in ("minimal", "maximal"):
        raise DomainError(f"unknown mode {mode!r}")
    trans, base = transitions_of(data)
    n = len(trans)
    if n == 0:
        return ChordConfiguration((), (), base)
    if n > MAX_TRANSITIONS:
        raise DomainError(f"too many transitions ({n} > {MAX_TRANSITIONS})")

    u = np.array([t.angle.normalized().radians for t in trans])
    rising = [t.rising for t in trans]
    area_sign = 1.0 if mode == "minimal" else -1.0

    def cost(i: int, k: int) -> float:
        return 2.0 * math.sin(0.5 * (u[k] - u[i]))

    def aterm(i: int, k: int) -> float:
        s = math.sin(u[k] - u[i])
        return area_sign * (s if not rising[i] else -s)

    E = np.zeros((n + 1, n + 1))
    A = np.zeros((n + 1, n + 1))
    K = np.zeros((n + 1, n + 1), dtype=np.int32)
    for span in range(2, n + 1, 2):
        for i in range(0, n - span + 1):
            j = i + span
            be = ba = math.inf
            bk = -1
            for k in range(i + 1, j, 2):
                e = cost(i, k) + E[i + 1, k] + E[k + 1, j]
                a = aterm(i, k) + A[i + 1, k] + A[k + 1, j]
                if bk < 0 or _improves(e, a, be, ba):
                    be, ba, bk = e, a, k
            E[i, j], A[i, j], K[i, j] = be, ba, bk

    matching: List[Tuple[int, int]] = []
    work = [(0, n)]
    while work:
        i, j = work.pop()
        if i >= j:
            continue
        k = int(K[i, j])
        matching.append((i, k))
        work.append((i + 1, k))
        work.append((k + 1, j))
    return ChordConfiguration(trans, matching, base)


# ---------------------------------------------------------------------------
# exhaustive enumeration (the oracle for the DP)

ENUMERATION_CAP = 16


def _all_matchings(n: int):
    memo: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], ...]]] = {}

    def rec(i: int, j: int) -> List[Tuple[Tuple[int, int], ...]]:
        if i >= j:
            return [()]
        key = (i, j)
        if key not in memo:
            outs = []
            for k in range(i + 1, j, 2):
                for inner in rec(i + 1, k):
                    for outer in rec(k + 1, j):
                        outs.append(((i, k),) + inner + outer)
            memo[key] = outs
        return memo[key]

    return rec(0, n)


def select_optimal(
    configs: Sequence[ChordConfiguration], mode: str = "minimal"
) -> ChordConfiguration:
    """The representative the DP tie-breaking selects, from an explicit list."""
    area_sign = 1.0 if mode == "minimal" else -1.0
    ordered = sorted(configs, key=lambda c: c.matching)
    best = ordered[0]
    for c in ordered[1:]:
        if _improves(c.energy, area_sign * c.label_area, best.energy, area_sign * best.label_area):
            best = c
    return best


def enumerate_optimal(data, cap: int = ENUMERATION_CAP) -> Tuple[ChordConfiguration, ...]:
    """All energy-optimal configurations (within 1e-12 relative), smallest
    area first.  Exhaustive over the Catalan family; refuses more than
    ``cap`` (default 16) transitions."""
    trans, base = transitions_of(data)
    n = len(trans)
    if n > cap:
        raise DomainError(f"enumeration capped at {cap} transitions (got {n})")
    if n == 0:
        return (ChordConfiguration((), (), base),)
    configs = [ChordConfiguration(trans, m, base) for m in _all_matchings(n)]
    emin = min(c.energy for c in configs)
    tol = ENERGY_REL_TOL * max(1.0, emin)
    best = [c for c in configs if c.energy <= emin + tol]
    best.sort(key=lambda c: (c.energy, c.label_area, c.matching))
    return tuple(best)


# ---------------------------------------------------------------------------
# exact region containment

_PARAM_GUARD = 1e-12


def _proper_params(p: np.ndarray, q: np.ndarray, segs, self_pair=None, seg_pairs=None) -> List[float]:
    """Parameters t in (0,1) where segment p->q properly crosses any of segs.

    Chords sharing an exact endpoint angle with p->q only touch there, so
    they are skipped outright; that keeps roundoff from promoting an
    endpoint contact to a crossing.
    """
    out = []
    d = q - p
    for idx, (a, b) in enumerate(segs):
        if self_pair is not None and seg_pairs is not None and (self_pair & seg_pairs[idx]):
            continue
        e = b - a
        den = d[0] * e[1] - d[1] * e[0]
        if den == 0.0:
            continue  # parallel; distinct chords of one circle never overlap
        w = a - p
        t = (w[0] * e[1] - w[1] * e[0]) / den
        s = (w[0] * d[1] - w[1] * d[0]) / den
        if _PARAM_GUARD < t < 1.0 - _PARAM_GUARD and _PARAM_GUARD < s < 1.0 - _PARAM_GUARD:
            out.append(t)
    return sorted(out)


def region_subset(inner: ChordConfiguration, outer: ChordConfiguration) -> bool:
    """Is the label-1 region of ``inner`` contained in that of ``outer``?

    Exact up to double-precision geometric predicates:  (a) every inner
    1-cell carries a verified interior witness that must be labeled 1 by
    ``outer``; (b) since every outer chord separates outer labels, any outer
    chord sub-segment interior to the inner 1-region witnesses escape, so
    outer chords are cut at proper crossings with inner chords and midpoint
    tested.  Exactly coincident chords lie on the shared boundary and are
    skipped.
    """
    if inner.n_chords == 0:
        if inner.base_value == 0:
            return True
        return outer.n_chords == 0 and outer.base_value == 1
    if outer.n_chords == 0:
        return bool(outer.base_value)

    # (a) one witness per inner 1-cell
    for cell, label in inner.cells():
        if label != 1:
            continue
        witness = _cell_witness(cell)
        if outer.evaluate_points(witness[None, :])[0] != 1:
            return False

    # (b) no outer chord may enter the open inner 1-region
    inner_segs = inner.chord_segments()
    inner_pair_list = inner.chord_angle_pairs()
    inner_pairs = set(inner_pair_list)
    for pair, (p, q) in zip(outer.chord_angle_pairs(), outer.chord_segments()):
        if pair in inner_pairs:
            continue
        ts = _proper_params(p, q, inner_segs, self_pair=pair, seg_pairs=inner_pair_list)
        knots = [0.0] + ts + [1.0]
        mids = np.array([p + 0.5 * (a + b) * (q - p) for a, b in zip(knots[:-1], knots[1:])])
        if np.any(inner.evaluate_points(mids) == 1):
            return False
    return True


def _cell_witness(cell: Cell) -> np.ndarray:
    """A point strictly inside the cell, found under its largest arc edge."""
    arcs = sorted(
        cell.arc_edges(),
        key=lambda e: (e.end.normalized() - e.start.normalized()).normalized().radians,
        reverse=True,
    )
    for edge in arcs:
        meas = (edge.end.normalized() - edge.start.normalized()).normalized().radians
        mid = edge.start.normalized().radians + 0.5 * meas
        sagitta = 1.0 - math.cos(0.5 * meas)
        for depth in (0.5 * sagitta, 0.25 * sagitta, 0.0625 * sagitta, min(0.5 * sagitta, 1e-6)):
            if depth <= 0.0:
                continue
            p = np.array([(1.0 - depth) * math.cos(mid), (1.0 - depth) * math.sin(mid)])
            try:
                if point_in_cell(cell, p):
                    return p
            except DomainError:
                continue
    raise RuntimeError("could not place a witness point inside a cell")
