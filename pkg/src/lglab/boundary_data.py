"""Boundary data on the unit circle.

Piecewise-constant data with exact rational breakpoints, the fat Cantor
construction driving the verification scenarios, linear ramp approximants,
a discrete convolution smoother with a piecewise-linear partition of unity,
and quantization back to piecewise-constant form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .circle_geometry import (
    Angle,
    Arc,
    DomainError,
    ccw_measure,
    index_of_angle,
)

TAU = math.tau


class PiecewiseConstantBoundary:
    """Right-continuous piecewise-constant function on the circle.

    ``values[i]`` holds on the half-open arc ``[breakpoints[i],
    breakpoints[i+1])`` (cyclically); a constant function has no breakpoints
    and a single value.  Construction normalizes: breakpoints are sorted,
    zero-length arcs are rejected, adjacent arcs with equal values merge.
    """

    __slots__ = ("breakpoints", "values", "_rad", "_knots", "_prefix", "_segvals")

    def __init__(self, breakpoints: Sequence[Angle], values: Sequence[float]):
        bps = [b.normalized() for b in breakpoints]
        vals = [float(v) for v in values]
        if len(bps) == 0:
            if len(vals) != 1:
                raise DomainError("constant data needs exactly one value")
        elif len(bps) != len(vals):
            raise DomainError("need one value per breakpoint")
        else:
            order = sorted(range(len(bps)), key=lambda i: bps[i].radians)
            # float sort then exact fixup for near-ties
            for a in range(1, len(order)):
                b = a
                while b > 0 and bps[order[b]] < bps[order[b - 1]]:
                    order[b], order[b - 1] = order[b - 1], order[b]
                    b -= 1
            bps = [bps[i] for i in order]
            vals = [vals[i] for i in order]
            for i in range(1, len(bps)):
                if bps[i] == bps[i - 1]:
                    raise DomainError("duplicate breakpoints")
            # merge adjacent equal values (cyclically)
            changed = True
            while changed and bps:
                changed = False
                if all(v == vals[0] for v in vals):
                    bps, vals = [], [vals[0]]
                    break
                for i in range(len(bps)):
                    if vals[i] == vals[i - 1]:
                        del bps[i]
                        del vals[i]
                        changed = True
                        break
        self.breakpoints: Tuple[Angle, ...] = tuple(bps)
        self.values: Tuple[float, ...] = tuple(vals)
        self._rad: Optional[np.ndarray] = None
        self._knots = None
        self._prefix = None
        self._segvals = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, c: float) -> "PiecewiseConstantBoundary":
        return cls((), (float(c),))

    @classmethod
    def from_arcs(
        cls,
        arcs: Iterable[Arc],
        inside: float = 1.0,
        outside: float = 0.0,
    ) -> "PiecewiseConstantBoundary":
        """Indicator-style data: ``inside`` on the given disjoint arcs."""
        arcs = sorted(arcs, key=lambda a: a.start.radians)
        for i in range(1, len(arcs)):  # exact fixup of float sort near-ties
            j = i
            while j > 0 and arcs[j].start < arcs[j - 1].start:
                arcs[j], arcs[j - 1] = arcs[j - 1], arcs[j]
                j -= 1
        if not arcs:
            return cls.constant(outside)
        for a in arcs:
            if a.measure.sign() <= 0:
                raise DomainError("from_arcs: empty arc")
        for a, b in zip(arcs, arcs[1:] + arcs[:1]):
            # each arc must end strictly before the next one starts
            if len(arcs) > 1 and (ccw_measure(a.start, b.start) - a.measure).sign() <= 0:
                raise DomainError("from_arcs: arcs must be pairwise disjoint")
        bps: List[Angle] = []
        vals: List[float] = []
        for a in arcs:
            bps.extend((a.start, a.end))
            vals.extend((inside, outside))
        return cls(bps, vals)

    # -- structure ------------------------------------------------------
    @property
    def is_constant(self) -> bool:
        return not self.breakpoints

    @property
    def is_binary(self) -> bool:
        return set(self.values) <= {0.0, 1.0}

    def distinct_values(self) -> Tuple[float, ...]:
        return tuple(sorted(set(self.values)))

    def support_arcs(self, level: float = 1.0) -> Tuple[Arc, ...]:
        """Maximal arcs on which the data equals ``level`` (empty for constants)."""
        if self.is_constant:
            if self.values[0] == level:
                raise DomainError("support is the full circle")
            return ()
        out = []
        n = len(self.breakpoints)
        for i, v in enumerate(self.values):
            if v == level:
                out.append(Arc(self.breakpoints[i], self.breakpoints[(i + 1) % n]))
        return tuple(out)

    def complement(self) -> "PiecewiseConstantBoundary":
        if not self.is_binary:
            raise DomainError("complement needs binary data")
        return PiecewiseConstantBoundary(self.breakpoints, [1.0 - v for v in self.values])

    def scaled(self, s: float) -> "PiecewiseConstantBoundary":
        return PiecewiseConstantBoundary(self.breakpoints, [s * v for v in self.values])

    def shifted(self, c: float) -> "PiecewiseConstantBoundary":
        return PiecewiseConstantBoundary(self.breakpoints, [v + c for v in self.values])

    # -- evaluation -----------------------------------------------------
    def value_at(self, angle: Union[Angle, float]) -> float:
        if self.is_constant:
            return self.values[0]
        if isinstance(angle, Angle):
            return self.values[index_of_angle(self.breakpoints, angle.normalized())]
        return float(self.value_at_many(np.array([angle]))[0])

    def _rad_array(self) -> np.ndarray:
        if self._rad is None:
            self._rad = np.array([b.radians for b in self.breakpoints])
        return self._rad

    def value_at_many(self, theta: np.ndarray) -> np.ndarray:
        th = np.asarray(theta, dtype=float) % TAU
        vals = np.asarray(self.values)
        if self.is_constant:
            return np.full(th.shape, vals[0])
        idx = np.searchsorted(self._rad_array(), th, side="right") - 1
        return vals[idx]  # idx == -1 wraps to the last arc

    def __call__(self, theta):
        return self.value_at_many(np.asarray(theta, dtype=float))

    def superlevel(self, t: float) -> "PiecewiseConstantBoundary":
        """Indicator of {data > t}."""
        if self.is_constant:
            return PiecewiseConstantBoundary.constant(1.0 if self.values[0] > t else 0.0)
        return PiecewiseConstantBoundary(
            self.breakpoints, [1.0 if v > t else 0.0 for v in self.values]
        )

    # -- integrals --------------------------------------------------------
    def arc_measures(self) -> np.ndarray:
        """Float measure of each arc, aligned with ``values``."""
        if self.is_constant:
            return np.array([TAU])
        r = self._rad_array()
        return np.diff(np.append(r, r[0] + TAU))

    def integral(self) -> float:
        return float(np.dot(self.arc_measures(), np.asarray(self.values)))

    def abs_integral(self) -> float:
        return float(np.dot(self.arc_measures(), np.abs(self.values)))

    def _cumulative_tables(self):
        if self._knots is None:
            if self.is_constant:
                knots = np.array([0.0, TAU])
                segvals = np.array([self.values[0]])
            else:
                r = self._rad_array()
                knots = np.concatenate(([0.0], r, [TAU]))
                segvals = np.concatenate(([self.values[-1]], self.values))
            widths = np.diff(knots)
            prefix = np.concatenate(([0.0], np.cumsum(segvals * widths)))
            self._knots, self._segvals, self._prefix = knots, segvals, prefix
        return self._knots, self._segvals, self._prefix

    def cumulative(self, x: np.ndarray) -> np.ndarray:
        """Integral of the data over [0, x] for x in [0, 2*pi]."""
        knots, segvals, prefix = self._cumulative_tables()
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(knots, x, side="right") - 1, 0, len(segvals) - 1)
        return prefix[idx] + segvals[idx] * (x - knots[idx])

    def integral_over(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Integral over ccw windows [lo, hi] with hi - lo in [0, 2*pi]."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        width = hi - lo
        lo_m = lo % TAU
        hi_m = lo_m + width
        total = self.cumulative(np.array([TAU]))[0]
        wrapped = hi_m > TAU
        out = np.where(
            wrapped,
            total - self.cumulative(lo_m) + self.cumulative(np.minimum(hi_m - TAU, TAU)),
            self.cumulative(np.minimum(hi_m, TAU)) - self.cumulative(lo_m),
        )
        return out

    # -- exact comparisons ------------------------------------------------
    def is_leq(self, other: "PiecewiseConstantBoundary") -> bool:
        """Pointwise <= decided exactly on the merged breakpoint set."""
        probes = list(self.breakpoints) + list(other.breakpoints)
        if not probes:
            return self.values[0] <= other.values[0]
        return all(self.value_at(p) <= other.value_at(p) for p in probes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseConstantBoundary):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.values))

    def __repr__(self) -> str:
        if self.is_constant:
            return f"PiecewiseConstantBoundary(constant {self.values[0]})"
        return f"PiecewiseConstantBoundary({len(self.breakpoints)} breakpoints)"

    # -- serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "breakpoints": [
                [str(b.pi_mult), str(b.offset)] for b in self.breakpoints
            ],
            "values": [format(v, ".17g") for v in self.values],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PiecewiseConstantBoundary":
        bps = [Angle(Fraction(p), Fraction(r)) for p, r in d["breakpoints"]]
        vals = [float(v) for v in d["values"]]
        return cls(bps, vals)


class EvaluableBoundary:
    """Boundary function given by a vectorized evaluator on angles (radians)."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], corner_angles=()):
        self._fn = fn
        self.corner_angles = tuple(corner_angles)

    def value_at_many(self, theta: np.ndarray) -> np.ndarray:
        return np.asarray(self._fn(np.asarray(theta, dtype=float)), dtype=float)

    def value_at(self, theta: float) -> float:
        return float(self.value_at_many(np.array([float(theta)]))[0])

    def __call__(self, theta):
        return self.value_at_many(np.asarray(theta, dtype=float))


BoundaryData = Union[PiecewiseConstantBoundary, EvaluableBoundary]


# ---------------------------------------------------------------------------
# fat Cantor construction

REFERENCE_CENTER = Angle(Fraction(1, 2), Fraction(0))  # pi/2


@dataclass(frozen=True)
class CantorStage:
    """Stage ``n`` of the fat Cantor construction on the base arc of measure 1
    centered at pi/2.  Stage j removes the centered open arc of measure
    ``removal**j`` from each of the 2**(j-1) arcs kept so far."""

    n: int
    removal: Fraction
    kept: Tuple[Arc, ...]
    removed_by_stage: Tuple[Tuple[Arc, ...], ...]

    @property
    def removed(self) -> Tuple[Arc, ...]:
        flat = [a for stage in self.removed_by_stage for a in stage]
        return tuple(sorted(flat, key=lambda a: a.start.radians))

    @property
    def kept_arc_measure(self) -> Fraction:
        """Exact radian measure of each kept arc (all are equal)."""
        length = Fraction(1)
        for j in range(1, self.n + 1):
            length = (length - self.removal**j) / 2
        return length

    @property
    def kept_total(self) -> Fraction:
        return self.kept_arc_measure * 2**self.n


def cantor_stage(n: int, removal: Union[int, Fraction] = Fraction(1, 4)) -> CantorStage:
    """Construct stage ``n`` (0 <= n <= 24) of the fat Cantor set.

    The base arc is [pi/2 - 1/2, pi/2 + 1/2].  All endpoints are exact
    rational offsets from pi/2; note the arc count grows as 2**n.
    """
    if not isinstance(n, int) or n < 0 or n > 24:
        raise DomainError("cantor_stage: n must be an integer in [0, 24]")
    r = Fraction(removal)
    if not 0 < r < Fraction(1, 2):
        raise DomainError("cantor_stage: removal ratio must lie in (0, 1/2)")
    half = Fraction(1, 2)
    kept: List[Tuple[Fraction, Fraction]] = [(-half, half)]  # offsets from pi/2
    removed_stages: List[Tuple[Arc, ...]] = []
    for j in range(1, n + 1):
        cut = r**j
        if cut >= kept[0][1] - kept[0][0]:
            raise DomainError("cantor_stage: removal ratio too large for this depth")
        next_kept: List[Tuple[Fraction, Fraction]] = []
        stage_removed: List[Arc] = []
        for a, b in kept:
            mid = (a + b) / 2
            lo, hi = mid - cut / 2, mid + cut / 2
            stage_removed.append(
                Arc(REFERENCE_CENTER + Angle.of_radians(lo), REFERENCE_CENTER + Angle.of_radians(hi))
            )
            next_kept.append((a, lo))
            next_kept.append((hi, b))
        kept = next_kept
        removed_stages.append(tuple(stage_removed))
    kept_arcs = tuple(
        Arc(REFERENCE_CENTER + Angle.of_radians(a), REFERENCE_CENTER + Angle.of_radians(b))
        for a, b in kept
    )
    return CantorStage(n=n, removal=r, kept=kept_arcs, removed_by_stage=tuple(removed_stages))


def cantor_measure_limit(removal: Union[int, Fraction] = Fraction(1, 4)) -> Fraction:
    """Exact limit of the kept measure: 1 - sum_j 2**(j-1) * removal**j."""
    r = Fraction(removal)
    if not 0 < r < Fraction(1, 2):
        raise DomainError("removal ratio must lie in (0, 1/2)")
    return 1 - r / (1 - 2 * r)


def build_fn(n: int) -> PiecewiseConstantBoundary:
    """Indicator of the stage-n kept arcs."""
    return PiecewiseConstantBoundary.from_arcs(cantor_stage(n).kept, 1.0, 0.0)


def build_gn(n: int) -> PiecewiseConstantBoundary:
    """0 exactly on the arcs removed through stage n, 1 elsewhere."""
    stage = cantor_stage(n)
    return PiecewiseConstantBoundary.from_arcs(stage.removed, 0.0, 1.0)


# ---------------------------------------------------------------------------
# linear ramps toward an arc union

def _coerce_arcs(F) -> Tuple[Optional[bool], Tuple[Arc, ...]]:
    """Returns (constant_truth, arcs): constant_truth is True/False when the
    set is the full circle / empty, else None with the arcs."""
    if isinstance(F, PiecewiseConstantBoundary):
        if not F.is_binary:
            raise DomainError("indicator data must be binary")
        if F.is_constant:
            return (F.values[0] == 1.0), ()
        return None, F.support_arcs(1.0)
    arcs = tuple(F)
    if not arcs:
        return False, ()
    return None, arcs


def _sorted_disjoint(arcs: Sequence[Arc]) -> Tuple[Arc, ...]:
    arcs = tuple(sorted(arcs, key=lambda a: a.start.radians))
    for a, b in zip(arcs, arcs[1:] + arcs[:1]):
        if len(arcs) > 1 and ccw_measure(a.end, b.start).sign() <= 0:
            raise DomainError("arcs must be pairwise disjoint")
    return arcs


def _dist_to_arcs_fn(arcs: Sequence[Arc]) -> Callable[[np.ndarray], np.ndarray]:
    starts = np.array([a.start.radians for a in arcs])
    meas = np.array([a.measure_radians for a in arcs])

    def dist(theta: np.ndarray) -> np.ndarray:
        th = np.asarray(theta, dtype=float) % TAU
        pos = (th[..., None] - starts) % TAU
        beyond = pos - meas
        d = np.where(beyond <= 0.0, 0.0, np.minimum(beyond, TAU - pos))
        return d.min(axis=-1)

    return dist


def eta_plus(F, eps: float) -> EvaluableBoundary:
    """Outer ramp max(1 - dist(x, F)/eps, 0); dist is intrinsic arc length."""
    if eps <= 0:
        raise DomainError("eta_plus: eps must be positive")
    const, arcs = _coerce_arcs(F)
    if const is not None:
        return EvaluableBoundary(lambda th: np.full(np.shape(th), 1.0 if const else 0.0))
    arcs = _sorted_disjoint(arcs)
    dist = _dist_to_arcs_fn(arcs)
    corners = [a.start.radians for a in arcs] + [a.end.radians for a in arcs]
    return EvaluableBoundary(
        lambda th: np.maximum(1.0 - dist(th) / eps, 0.0), corner_angles=corners
    )


def eta_minus(F, eps: float) -> EvaluableBoundary:
    """Inner ramp min(dist(x, complement of F on the circle)/eps, 1)."""
    if eps <= 0:
        raise DomainError("eta_minus: eps must be positive")
    const, arcs = _coerce_arcs(F)
    if const is not None:
        return EvaluableBoundary(lambda th: np.full(np.shape(th), 1.0 if const else 0.0))
    arcs = _sorted_disjoint(arcs)
    gaps = [Arc(a.end, b.start) for a, b in zip(arcs, arcs[1:] + arcs[:1])]
    dist = _dist_to_arcs_fn(gaps)
    corners = [a.start.radians for a in arcs] + [a.end.radians for a in arcs]
    return EvaluableBoundary(
        lambda th: np.minimum(dist(th) / eps, 1.0), corner_angles=corners
    )


# ---------------------------------------------------------------------------
# discrete convolution

class DiscreteConvolution(EvaluableBoundary):
    """Smoothing of boundary data by locally averaged hat functions.

    Centers are ``n_centers`` evenly spaced angles with spacing at most
    ``2*eps/5``; each carries the average of the data over the arc of angular
    half-width ``eps`` about it, blended by a piecewise-linear partition of
    unity whose hats are supported on arcs of half-width ``2*eps``.
    """

    def __init__(self, data: BoundaryData, eps: float):
        if not (0.0 < eps < math.pi / 4):
            raise DomainError("discrete_convolution: eps must lie in (0, pi/4)")
        self.eps = float(eps)
        self.n_centers = math.ceil(TAU / (2 * eps / 5))
        self.spacing = TAU / self.n_centers
        self.centers = np.arange(self.n_centers) * self.spacing
        lo = self.centers - eps
        hi = self.centers + eps
        if isinstance(data, PiecewiseConstantBoundary):
            sums = data.integral_over(lo, hi)
        else:
            K = 129
            offs = (np.arange(K) + 0.5) * (2 * eps / K)
            nodes = lo[:, None] + offs[None, :]
            sums = data.value_at_many(nodes).mean(axis=1) * (2 * eps)
        self.averages = sums / (2 * eps)
        self._window = int(math.ceil(2 * eps / self.spacing)) + 1
        super().__init__(self._evaluate)

    def _hat_weights(self, theta: np.ndarray):
        th = np.asarray(theta, dtype=float) % TAU
        i0 = np.rint(th / self.spacing).astype(np.int64)
        offs = np.arange(-self._window, self._window + 1)
        idx = i0[..., None] + offs
        d = np.abs(th[..., None] - idx * self.spacing)
        psi = np.maximum(1.0 - d / (2 * self.eps), 0.0)
        return psi, idx % self.n_centers

    def _evaluate(self, theta: np.ndarray) -> np.ndarray:
        psi, idx = self._hat_weights(theta)
        s = psi.sum(axis=-1)
        return (psi * self.averages[idx]).sum(axis=-1) / s

    def partition_sum(self, theta: np.ndarray) -> np.ndarray:
        """Sum of the normalized partition of unity (identically 1)."""
        psi, _ = self._hat_weights(theta)
        s = psi.sum(axis=-1)
        return (psi / s[..., None]).sum(axis=-1)

    def overlap_count(self, theta: np.ndarray) -> np.ndarray:
        psi, _ = self._hat_weights(theta)
        return (psi > 0.0).sum(axis=-1)

    def abs_integral(self, grid: int = 200_001) -> float:
        th = np.linspace(0.0, TAU, grid)
        vals = np.abs(self._evaluate(th))
        return float(np.trapezoid(vals, th))


def discrete_convolution(data: BoundaryData, eps: float) -> DiscreteConvolution:
    return DiscreteConvolution(data, eps)


# ---------------------------------------------------------------------------
# quantization

def _project_indices(vals: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Nearest-level index, ties resolved to the upper level."""
    if len(levels) == 1:
        return np.zeros(np.shape(vals), dtype=np.int64)
    mids = (levels[:-1] + levels[1:]) / 2.0
    return np.searchsorted(mids, vals, side="right")


def quantize(
    f: BoundaryData,
    levels: Sequence[float],
    resolution: int = 8192,
    _retried: bool = False,
) -> PiecewiseConstantBoundary:
    """Pointwise projection of ``f`` onto the given levels.

    Piecewise-constant inputs are projected exactly.  Evaluable inputs are
    sampled on a uniform grid and every level crossing is located by bisection
    to angular tolerance 1e-12; an offset-grid probe verifies the result and
    triggers one refined retry (with a warning) if a feature was missed.
    """
    lv = np.asarray(sorted(levels), dtype=float)
    if lv.size == 0:
        raise DomainError("quantize: need at least one level")
    if np.any(np.diff(lv) <= 0):
        raise DomainError("quantize: levels must be strictly increasing")

    if isinstance(f, PiecewiseConstantBoundary):
        idx = _project_indices(np.asarray(f.values), lv)
        if f.is_constant:
            return PiecewiseConstantBoundary.constant(lv[idx[0]])
        return PiecewiseConstantBoundary(f.breakpoints, lv[idx])

    h = TAU / resolution
    grid = np.arange(resolution) * h
    gidx = _project_indices(f.value_at_many(grid), lv)

    # locate crossings between adjacent grid points (cyclically)
    jumps = []
    for j in range(resolution):
        a, b = int(gidx[j]), int(gidx[(j + 1) % resolution])
        if a != b:
            step = 1 if b > a else -1
            for t in range(a, b, step):
                # crossing of the midpoint threshold between t and t+step
                thr_idx = t if step == 1 else t - 1
                jumps.append((grid[j], grid[j] + h, thr_idx, step))
    if not jumps:
        result = PiecewiseConstantBoundary.constant(lv[gidx[0]])
    else:
        lo = np.array([j[0] for j in jumps])
        hi = np.array([j[1] for j in jumps])
        thr = (lv[:-1] + lv[1:])[np.array([j[2] for j in jumps])] / 2.0
        s_lo = f.value_at_many(lo) < thr
        while float(np.max(hi - lo)) > 1e-12:
            mid = 0.5 * (lo + hi)
            below = f.value_at_many(mid) < thr
            take_lo = below == s_lo
            lo = np.where(take_lo, mid, lo)
            hi = np.where(take_lo, hi, mid)
        cross = 0.5 * (lo + hi)

        # assemble: sort crossings, track the level index after each
        order = np.argsort(cross, kind="stable")
        bps: List[Angle] = []
        vals: List[float] = []
        current = int(gidx[0])
        steps = [jumps[i][3] for i in order]
        for pos, step in zip(cross[order], steps):
            current += step
            bps.append(Angle.of_radians(Fraction(float(pos))))
            vals.append(float(lv[current]))
        result = PiecewiseConstantBoundary(bps, vals)

    probe = grid + 0.5 * h
    want = lv[_project_indices(f.value_at_many(probe), lv)]
    got = result.value_at_many(probe)
    if np.any(want != got):
        if not _retried:
            warnings.warn(
                "quantize: grid resolution missed a feature; retrying refined",
                RuntimeWarning,
            )
            return quantize(f, levels, resolution=resolution * 4, _retried=True)
        warnings.warn("quantize: unresolved feature after refinement", RuntimeWarning)
    return result
