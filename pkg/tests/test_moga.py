import numpy as np
import pytest

from ferrylink import moga
from ferrylink.errors import ConfigInvalid, EvaluationFailed
from ferrylink.ferry import FerryParams


def unit_bounds():
    return moga.Bounds(d_load=(0.0, 1.0), d_offload=(0.0, 1.0))


def quad_tradeoff(ind):
    """Known convex front: delay = delivered^2 at the optimum."""
    off_front = ((ind.d_offload - 0.5) ** 2 + (ind.alpha - 0.5) ** 2
                 + (ind.beta - 0.25) ** 2)
    return moga.ObjectiveVector(ind.d_load, ind.d_load ** 2 + off_front)


class TestDominance:
    def test_better_both(self):
        a = moga.ObjectiveVector(100e9, 300.0)
        b = moga.ObjectiveVector(90e9, 400.0)
        assert moga.dominates(a, b)
        assert not moga.dominates(b, a)

    def test_non_comparable(self):
        a = moga.ObjectiveVector(100e9, 400.0)
        b = moga.ObjectiveVector(90e9, 300.0)
        assert not moga.dominates(a, b)
        assert not moga.dominates(b, a)

    def test_equal_is_not_dominance(self):
        a = moga.ObjectiveVector(100e9, 300.0)
        assert not moga.dominates(a, a)


class TestBoxIndex:
    def _archive(self):
        arch = moga.EpsArchive(n_box=10)
        arch.lo = np.array([0.0, 0.0])
        arch.hi = np.array([200e9, 1000.0])
        return arch

    def test_floor_arithmetic(self):
        arch = self._archive()
        assert arch.box_of(moga.ObjectiveVector(57e9, 430.0)) == (2, 4)

    def test_range_edges_clamped(self):
        arch = self._archive()
        assert arch.box_of(moga.ObjectiveVector(0.0, 0.0)) == (0, 0)
        assert arch.box_of(moga.ObjectiveVector(200e9, 1000.0)) == (9, 9)


class TestVariation:
    def test_crossover_midpoint(self):
        bounds = moga.Bounds(d_load=(0.0, 4000.0), d_offload=(0.0, 4000.0))
        rp = moga.Individual(1000.0, 600.0, 0.5, 0.1)
        ra = moga.Individual(2000.0, 800.0, 0.9, 0.3)
        c1, c2 = moga.crossover(rp, ra, 0.5, bounds)
        assert c1 == c2 == moga.Individual(1500.0, 700.0, 0.7, 0.2)

    def test_crossover_identity_weight(self):
        bounds = moga.Bounds(d_load=(0.0, 4000.0), d_offload=(0.0, 4000.0))
        rp = moga.Individual(1000.0, 600.0, 0.5, 0.1)
        ra = moga.Individual(2000.0, 800.0, 0.9, 0.3)
        c1, c2 = moga.crossover(rp, ra, 1.0, bounds)
        assert c1 == rp and c2 == ra

    def test_extended_weight_clamped_into_box(self):
        bounds = moga.Bounds(d_load=(500.0, 8000.0), d_offload=(500.0, 8000.0))
        rp = moga.Individual(600.0, 600.0, 0.2, 0.1)
        ra = moga.Individual(7000.0, 7000.0, 0.9, 0.3)
        for omega in (-0.25, 1.25):
            for child in moga.crossover(rp, ra, omega, bounds):
                arr = child.as_array()
                assert np.all(arr >= bounds.lo() - 1e-12)
                assert np.all(arr <= bounds.hi() + 1e-12)
                assert child.beta < child.alpha

    def test_mutation_zero_sigma_identity(self):
        bounds = unit_bounds()
        params = moga.MogaParams(mutation_sigma=0.0)
        ind = moga.Individual(0.4, 0.6, 0.8, 0.2)
        rng = np.random.default_rng(0)
        assert moga.mutate(ind, params, bounds, rng) == ind

    def test_mutation_reproducible_and_boxed(self):
        bounds = unit_bounds()
        params = moga.MogaParams(mutation_sigma=0.3)
        ind = moga.Individual(0.4, 0.6, 0.8, 0.2)
        m1 = moga.mutate(ind, params, bounds, np.random.default_rng(5))
        m2 = moga.mutate(ind, params, bounds, np.random.default_rng(5))
        assert m1 == m2
        arr = m1.as_array()
        assert np.all(arr >= bounds.lo()) and np.all(arr <= bounds.hi())
        assert m1.beta < m1.alpha

    def test_repair_swaps_inverted_fractions(self):
        bounds = unit_bounds()
        fixed = bounds.repair(np.array([0.5, 0.5, 0.2, 0.9]))
        assert fixed.alpha == 0.9 and fixed.beta == 0.2
        equal = bounds.repair(np.array([0.5, 0.5, 0.4, 0.4]))
        assert equal.beta < equal.alpha


class TestArchive:
    def test_constant_evaluator_keeps_one(self):
        params = moga.MogaParams(population=12, generations=8, offspring=4, seed=3)
        arch = moga.run(unit_bounds(), params,
                        lambda ind: moga.ObjectiveVector(1.0, 1.0))
        assert len(arch) == 1

    def test_mutual_nondominance_and_box_capacity(self):
        params = moga.MogaParams(population=30, generations=30, offspring=8,
                                 n_box=12, seed=11)
        arch = moga.run(unit_bounds(), params, quad_tradeoff)
        members = arch.members
        for a in members:
            for b in members:
                if a is not b:
                    assert not moga.dominates(a.objectives, b.objectives)
        boxes = [arch.box_of(e.objectives) for e in members]
        assert len(set(boxes)) == len(boxes)
        assert len(members) <= 12 ** 2

    def test_archive_objectives_are_fresh(self):
        params = moga.MogaParams(population=20, generations=15, offspring=6, seed=9)
        arch = moga.run(unit_bounds(), params, quad_tradeoff)
        for e in arch.members:
            again = quad_tradeoff(e.individual)
            assert again == e.objectives

    def test_seeded_reproducibility(self):
        params = moga.MogaParams(population=20, generations=20, offspring=6, seed=21)
        a = moga.run(unit_bounds(), params, quad_tradeoff)
        b = moga.run(unit_bounds(), params, quad_tradeoff)
        assert a.to_records() == b.to_records()

    def test_hypervolume_non_decreasing_with_stable_ranges(self):
        # Ranges stop moving after the first generations; afterwards the
        # dominated hypervolume may shrink by at most one cell per offspring
        # (a same-cell swap), never more.
        params = moga.MogaParams(population=30, generations=40, offspring=8,
                                 n_box=16, seed=2)
        history = []

        def hv(archive):
            pts = sorted((e.objectives.delivered_bits, e.objectives.delay_s)
                         for e in archive.members)
            ref_delay = 3.0
            total, prev = 0.0, 0.0
            for delivered, delay in pts:
                total += (delivered - prev) * max(ref_delay - delay, 0.0)
                prev = delivered
            return total

        def cell_area(archive):
            w = archive._widths()
            return float(w[0] * max(3.0 / archive.n_box, w[1]))

        moga.run(unit_bounds(), params, quad_tradeoff,
                 on_generation=lambda g, a: history.append(
                     (hv(a), cell_area(a), tuple(a.lo), tuple(a.hi))))
        for (h1, area, lo1, hi1), (h2, _, lo2, hi2) in zip(history, history[1:]):
            if lo1 == lo2 and hi1 == hi2:
                assert h2 >= h1 - params.offspring * area

    def test_evaluation_failure_carries_individual(self):
        def broken(ind):
            raise ValueError("boom")

        params = moga.MogaParams(population=4, generations=2, offspring=2, seed=0)
        with pytest.raises(EvaluationFailed) as exc_info:
            moga.run(unit_bounds(), params, broken)
        assert exc_info.value.individual is not None

    def test_param_validation(self):
        with pytest.raises(ConfigInvalid):
            moga.MogaParams(offspring=3)
        with pytest.raises(ConfigInvalid):
            moga.MogaParams(population=1)
        with pytest.raises(ConfigInvalid):
            moga.MogaParams(n_box=1)


class TestFerryEvaluator:
    def test_matches_direct_run(self):
        template = FerryParams(big_d=25000.0, d_load=500.0, d_offload=500.0,
                               alpha=1.0, beta=0.0, buffer_bits=32e9,
                               t_total_s=3000.0, rate_floor_bps=2.2032e7)
        evaluate = moga.ferry_evaluator(template)
        obj = evaluate(moga.Individual(500.0, 500.0, 1.0, 0.0))
        from ferrylink.ferry import run

        _, metrics = run(template)
        assert obj.delivered_bits == metrics.delivered_total_bits
        assert obj.delay_s == metrics.delay_to_rate_floor_s

    def test_unreachable_floor_penalized_beyond_horizon(self):
        template = FerryParams(big_d=25000.0, d_load=500.0, d_offload=500.0,
                               alpha=1.0, beta=0.0, buffer_bits=32e9,
                               t_total_s=400.0, rate_floor_bps=2.2032e7)
        evaluate = moga.ferry_evaluator(template)
        obj = evaluate(moga.Individual(7500.0, 7500.0, 1.0, 0.0))
        assert obj.delay_s > template.t_total_s

    def test_route_overflow_gets_worst_corner(self):
        template = FerryParams(big_d=8500.0, d_load=500.0, d_offload=500.0,
                               alpha=1.0, beta=0.0, buffer_bits=32e9,
                               t_total_s=600.0, rate_floor_bps=1e7)
        evaluate = moga.ferry_evaluator(template)
        obj = evaluate(moga.Individual(8000.0, 8000.0, 0.9, 0.1))
        assert obj.delivered_bits == 0.0
        assert obj.delay_s > 2 * template.t_total_s
