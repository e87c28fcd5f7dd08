"""Multi-level solutions assembled from binary slices.

General piecewise constant data is solved one superlevel set at a time:
thresholds sit at midpoints between consecutive distinct data values, each
binary slice gets the chord solver, and the solution evaluates a point by
counting how many slices contain it.  The coarea formula turns the slice
energies into the total variation of the stack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from scipy.stats import qmc

from .circle_geometry import DomainError
from .chord_solver import BinaryDiskFunction, ChordConfiguration, solve_binary

DEFAULT_SEED = 0xC0FFEE
NESTED_TOL = 1e-3


def disk_samples(n: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """n quasirandom points equidistributed in the open unit disk."""
    if n < 1:
        raise DomainError("need at least one sample")
    halton = qmc.Halton(d=2, scramble=True, seed=seed)
    uv = halton.random(n)
    r = np.sqrt(uv[:, 0])
    th = 2.0 * math.pi * uv[:, 1]
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


class NestednessError(RuntimeError):
    """Consecutive superlevel slices failed to nest."""

    def __init__(self, t_low: float, t_high: float, excess: float):
        self.t_low = t_low
        self.t_high = t_high
        self.excess = excess
        super().__init__(
            f"slice at threshold {t_high} exceeds slice at {t_low} "
            f"by measure {excess:.3e}"
        )


@dataclass(frozen=True)
class LevelSlice:
    """One binary slice of a stack: the region where the solution exceeds
    ``threshold``, carrying ``gap`` of the solution's value."""

    threshold: float
    gap: float
    config: ChordConfiguration


class LevelSetStack:
    """A solved multi-level problem: nested binary slices over sorted values."""

    def __init__(self, values: Sequence[float], slices: Sequence[LevelSlice]):
        values = tuple(float(v) for v in values)
        if len(values) != len(slices) + 1:
            raise DomainError("a stack over k+1 values needs exactly k slices")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError("stack values must be strictly increasing")
        self.values = values
        self.slices = tuple(slices)

    @property
    def base_value(self) -> float:
        return self.values[0]

    @property
    def n_slices(self) -> int:
        return len(self.slices)

    def evaluate_many(self, pts: np.ndarray) -> np.ndarray:
        """Solution values at interior points; every result is a data value."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if np.any(np.hypot(pts[:, 0], pts[:, 1]) >= 1.0):
            raise DomainError("evaluation points must lie strictly inside the disk")
        count = np.zeros(len(pts), dtype=np.int64)
        for sl in self.slices:
            count += sl.config.evaluate_points(pts)
        return np.asarray(self.values)[count]

    def evaluate(self, pt) -> float:
        return float(self.evaluate_many(np.asarray(pt, dtype=float)[None, :])[0])

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            return self.evaluate(pts)
        return self.evaluate_many(pts)

    def __repr__(self):
        return f"LevelSetStack({len(self.values)} values, {len(self.slices)} slices)"


def solve_general(
    data,
    mode: str = "minimal",
    check_nested: bool = True,
    samples: int = 20000,
    seed: int = DEFAULT_SEED,
) -> LevelSetStack:
    """Solve piecewise constant data by stacking binary superlevel slices.

    Each threshold halfway between consecutive distinct data values is solved
    independently; nestedness of the resulting regions is then spot-checked
    by quasirandom sampling (one-sided excess below 1e-3) because it is a
    consequence of optimality, not an input constraint.
    """
    values = sorted(set(float(v) for v in data.values))
    if len(values) == 1:
        return LevelSetStack(values, ())
    slices: List[LevelSlice] = []
    for lo, hi in zip(values, values[1:]):
        t = 0.5 * (lo + hi)
        cfg = solve_binary(data.superlevel(t), mode)
        slices.append(LevelSlice(t, hi - lo, cfg))
    if check_nested and len(slices) > 1:
        check_nestedness(slices, disk_samples(samples, seed))
    return LevelSetStack(values, slices)


def check_nestedness(slices: Sequence[LevelSlice], pts: np.ndarray) -> None:
    """Raise NestednessError if a higher slice escapes the one below it."""
    labels = [sl.config.evaluate_points(pts) for sl in slices]
    for j in range(len(slices) - 1):
        excess = math.pi * float(np.mean((labels[j + 1] == 1) & (labels[j] == 0)))
        if excess >= NESTED_TOL:
            raise NestednessError(slices[j].threshold, slices[j + 1].threshold, excess)


def bv_energy(stack: LevelSetStack) -> float:
    """Total variation of the stack via the coarea formula."""
    return math.fsum(sl.gap * sl.config.energy for sl in stack.slices)


@dataclass(frozen=True)
class L1Estimate:
    value: float
    stderr: float
    n_samples: int


DiskFunction = Union[LevelSetStack, BinaryDiskFunction, Callable[[np.ndarray], np.ndarray]]


def _as_callable(f: DiskFunction) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, LevelSetStack):
        return f.evaluate_many
    if callable(f):
        return f
    raise DomainError(f"not a disk function: {f!r}")


def l1_distance(
    f: DiskFunction,
    g: DiskFunction,
    samples: int = 200_000,
    seed: int = DEFAULT_SEED,
) -> L1Estimate:
    """Monte Carlo L1 distance between two disk functions.

    The sample average of |f-g| over quasirandom disk points, scaled by the
    disk area; the reported standard error uses the iid formula, which is
    conservative for a low-discrepancy sequence.
    """
    if samples < 1000:
        raise DomainError("l1_distance needs at least 1000 samples")
    pts = disk_samples(samples, seed)
    d = np.abs(np.asarray(_as_callable(f)(pts), dtype=float)
               - np.asarray(_as_callable(g)(pts), dtype=float))
    value = math.pi * float(np.mean(d))
    stderr = math.pi * float(np.std(d)) / math.sqrt(samples)
    return L1Estimate(value, stderr, samples)
