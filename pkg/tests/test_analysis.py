import math
import random
from fractions import Fraction

import numpy as np
import pytest

from lglab.circle_geometry import DomainError
from lglab.boundary_data import PiecewiseConstantBoundary, build_fn, build_gn
from lglab.chord_solver import config_to_function, solve_binary
from lglab import analysis
from lglab.analysis import (
    ENERGY_THRESHOLD,
    VLimitFunction,
    cantor_nonexistence_demo,
    cap_config,
    collect_trace_points,
    crofton_length,
    cut_config,
    kept_arc_measure,
    minmax_check,
    monotone_pipeline,
    nonlin_demo,
    nonlocality_demo,
    oracle_check,
    random_arc_union,
    random_binary_data,
    sin_meanval_check,
    trace,
    trapezoid_check,
    u_energy,
    v_energy,
)

PCB = PiecewiseConstantBoundary

# closed-form values recomputed independently of the implementation
U_ORACLE = {
    0: 0.958851077208406,
    1: 0.7456131870490795,
    2: 0.6243644111197385,
    3: 0.5623841357309796,
    4: 0.5312255972013057,
}
V_ORACLE = {
    1: 0.24934946677045539,
    2: 0.3743291227117597,
    3: 0.4368284869308224,
    6: 0.491515966422327,
    12: 0.4992063961092011,
}


class TestClosedForms:
    def test_kept_arc_measure(self):
        for n in range(10):
            assert kept_arc_measure(n) == Fraction(2**n + 1, 2 ** (2 * n + 1))

    @pytest.mark.parametrize("n,expected", sorted(U_ORACLE.items()))
    def test_u_energy(self, n, expected):
        assert u_energy(n) == expected

    @pytest.mark.parametrize("n,expected", sorted(V_ORACLE.items()))
    def test_v_energy(self, n, expected):
        assert v_energy(n) == expected

    def test_threshold_constant(self):
        assert ENERGY_THRESHOLD == 2.0 * math.sin(5.0 / 16.0)
        assert ENERGY_THRESHOLD == 0.6148770291607617
        assert ENERGY_THRESHOLD > 0.5

    def test_named_configs_match_solver(self):
        for n in range(4):
            assert cap_config(n) == solve_binary(build_fn(n))
            assert cap_config(n).energy == u_energy(n)
        for n in range(1, 4):
            assert cut_config(n) == solve_binary(build_gn(n))
            assert cut_config(n).energy == v_energy(n)


class TestTrace:
    def test_constant_function(self):
        est = trace(lambda p: np.full(len(p), 3.75), 1.0)
        assert abs(est.limit - 3.75) < 1e-12
        assert est.residual < 1e-12
        assert not est.starved
        assert len(est.radii) == 4

    def test_binary_solution_is_exact_on_arc_interior(self, caps):
        u = config_to_function(solve_binary(caps))
        assert trace(u, math.pi / 2).limit == 1.0
        assert trace(u, math.pi).limit == 0.0

    def test_deterministic(self, caps):
        u = config_to_function(solve_binary(caps))
        assert trace(u, 2.0, seed=9) == trace(u, 2.0, seed=9)

    def test_starvation_flag(self, caps):
        u = config_to_function(solve_binary(caps))
        est = trace(u, math.pi / 2, samples=16)
        assert est.starved

    def test_validation(self, caps):
        u = config_to_function(solve_binary(caps))
        with pytest.raises(DomainError):
            trace(u, 1.0, r0=2.0)
        with pytest.raises(DomainError):
            trace(u, 1.0, levels=2)

    def test_levels_halve_radius(self, caps):
        u = config_to_function(solve_binary(caps))
        est = trace(u, 0.5, r0=1e-2, levels=5)
        assert est.radii == tuple(1e-2 * 2.0**-k for k in range(5))


class TestCollectTracePoints:
    def test_count_and_values(self, caps):
        pts = collect_trace_points(caps, count=20)
        assert len(pts) == 20
        assert {v for _, v in pts} == {0.0, 1.0}
        for ang, v in pts:
            assert caps.value_at(ang) == v

    def test_narrow_arcs_are_skipped(self):
        f4 = build_fn(4)
        pts = collect_trace_points(f4, count=10)
        # kept arcs at stage 4 are narrower than the 0.2 radian floor
        assert all(v == 0.0 for _, v in pts)

    def test_no_wide_arc_raises(self):
        skinny = PCB.from_arcs(
            [a for a in __import__("lglab").cantor_stage(4).kept][:1], 1.0, 0.0
        )
        # the complement arc is wide; restrict the floor instead
        with pytest.raises(DomainError):
            collect_trace_points(skinny, count=5, min_measure=7.0)


class TestVLimit:
    def test_center_and_cap_values(self):
        v = VLimitFunction()
        pts = np.array([[0.0, 0.0], [0.0, -0.999], [0.0, 0.999]])
        out = v(pts)
        assert out[0] == 1.0  # far from every removed segment
        assert out[1] == 1.0  # opposite the Cantor window
        assert out[2] == 0.0  # inside the first removed segment

    def test_agrees_with_deep_cut_solution(self):
        v = VLimitFunction()
        u8 = config_to_function(solve_binary(build_gn(8)))
        pts = np.array(
            [[math.cos(t) * r, math.sin(t) * r] for t in np.linspace(0, 6.2, 40) for r in (0.3, 0.9)]
        )
        assert np.array_equal(v(pts), u8(pts))


class TestInequalities:
    def test_trapezoid_report(self):
        rep = trapezoid_check(3)
        assert rep.passed
        names = [v.name for v in rep.verdicts]
        assert any("min" in n for n in names)
        assert all(v.tolerance is not None for v in rep.verdicts)

    def test_trapezoid_validation(self):
        with pytest.raises(DomainError):
            trapezoid_check(0)
        with pytest.raises(DomainError):
            trapezoid_check(25)

    def test_sin_meanval_report(self):
        rep = sin_meanval_check(range(6, 9))
        assert rep.passed

    def test_sin_meanval_needs_deep_k(self):
        with pytest.raises(DomainError):
            sin_meanval_check(range(4, 8))


class TestScenarios:
    def test_nonexistence(self):
        rep = cantor_nonexistence_demo(4)
        assert rep.passed
        first = next(v for v in rep.verdicts if v.name.startswith("first stage"))
        assert first.value == 3

    def test_nonlinearity(self):
        rep = nonlin_demo(4)
        assert rep.passed
        with pytest.raises(DomainError):
            nonlin_demo(3)

    def test_nonlocality(self):
        rep = nonlocality_demo(1, 1)
        assert rep.passed
        rep2 = nonlocality_demo(2, 2)
        assert rep2.passed

    def test_nonlocality_validation(self):
        with pytest.raises(DomainError):
            nonlocality_demo(1, 3)
        with pytest.raises(DomainError):
            nonlocality_demo(0, 1)

    def test_oracle_small(self):
        rep = oracle_check(n_random=40, seed=99)
        assert rep.passed
        mm = next(v for v in rep.verdicts if "mismatches" in v.name)
        assert mm.value == 0


class TestMonotonePipeline:
    def test_fixed_instance(self, caps):
        rep = monotone_pipeline(caps, 3, samples=20_000)
        assert rep.passed
        kind = next(v for v in rep.verdicts if "classified" in v.name)
        assert kind.value == "maximal"

    def test_generic_instance(self):
        rng = random.Random(2)
        F = random_arc_union(rng, n_arcs=3)
        rep = monotone_pipeline(F, 3, samples=20_000)
        assert rep.passed
        kind = next(v for v in rep.verdicts if "classified" in v.name)
        assert kind.value == "minimal"
        dists = rep.details["l1_to_minimal"]
        assert dists[-1] < 1e-2

    def test_requires_binary(self):
        with pytest.raises(DomainError):
            monotone_pipeline(PCB.constant(0.5).shifted(0.1), 2)

    def test_eps_validation(self, caps):
        with pytest.raises(DomainError):
            monotone_pipeline(caps, 2, eps0=2.0)


class TestMinMax:
    def test_nested_cantor_pair(self):
        rep = minmax_check(build_fn(1), build_gn(1), samples=8000)
        assert rep.passed

    def test_identical_data(self, caps):
        rep = minmax_check(caps, caps, samples=8000)
        assert rep.passed
        assert rep.details["pairs"] == 4

    def test_order_violation(self, caps):
        with pytest.raises(DomainError):
            minmax_check(caps, caps.complement())


class TestRandomGenerators:
    def test_random_binary_data(self):
        rng = random.Random(7)
        for _ in range(50):
            data = random_binary_data(rng, max_pairs=6)
            assert data.is_binary
            assert 2 <= len(data.breakpoints) <= 12

    def test_random_arc_union_respects_floors(self):
        rng = random.Random(8)
        for _ in range(20):
            F = random_arc_union(rng, min_len=0.15, min_gap=0.12)
            arcs = F.support_arcs()
            assert all(a.measure_radians >= 0.15 - 1e-12 for a in arcs)
            gaps = F.support_arcs(0.0)
            assert all(g.measure_radians >= 0.12 - 1e-12 for g in gaps)


def test_crofton_on_a_diameter():
    segs = [(np.array([0.0, 0.0]), 2.0, np.array([0.0, 1.0]))]
    val, err = crofton_length(segs, samples=40_000)
    assert val == pytest.approx(2.0, abs=4 * err + 1e-3)


def test_report_structure():
    rep = trapezoid_check(2)
    d = {"scenario": rep.scenario, "n": len(rep.verdicts)}
    assert d["scenario"] == "trapezoid"
    assert rep.seed == analysis.DEFAULT_SEED
    for v in rep.verdicts:
        assert isinstance(v.passed, bool)
