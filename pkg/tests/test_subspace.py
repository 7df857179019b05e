import math
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rrtplus.cspace import CSpaceBounds, clip_line_to_box, make_rng, sample_uniform
from rrtplus.subspace import (
    PrioritizedStage,
    affine_sample,
    expand_prioritized,
    find_sample_size,
    make_affine_stage,
    make_prioritized_stage,
    overhead_bound,
    prioritized_sample,
    release_next,
    single_stage_schedule,
    worst_case_overhead,
)


def decimal_budgets(q_total, n):
    """High-precision reference for the geometric schedule."""
    getcontext().prec = 50
    v = Decimal(q_total) ** (Decimal(1) / Decimal(n))
    out = []
    for s in range(1, n + 1):
        k = int((v ** s + Decimal("0.5")).to_integral_value(rounding="ROUND_FLOOR"))
        out.append(max(1, k))
    return out


def line_residual(q, a, b):
    """Distance of q from the line through a and b."""
    d = (b - a) / np.linalg.norm(b - a)
    w = q - a
    return float(np.linalg.norm(w - (w @ d) * d))


def lstsq_residual(basis, origin, q):
    coef, *_ = np.linalg.lstsq(basis, q - origin, rcond=None)
    return float(np.linalg.norm(basis @ coef - (q - origin)))


class TestSchedule:
    def test_three_stage_case(self):
        s = find_sample_size(512, 3)
        assert list(s.budgets) == [8, 64, 512]
        assert s.growth == pytest.approx(8.0)
        assert sum(s.budgets) == 584

    def test_two_stage_case(self):
        s = find_sample_size(1024, 2)
        assert list(s.budgets) == [32, 1024]
        assert s.growth == pytest.approx(32.0)

    @pytest.mark.parametrize("q", [1, 7, 100, 4096])
    def test_one_stage(self, q):
        assert list(find_sample_size(q, 1).budgets) == [q]

    @pytest.mark.parametrize("q", [64, 512, 2000, 4096])
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 17, 30])
    def test_matches_high_precision(self, q, n):
        assert list(find_sample_size(q, n).budgets) == decimal_budgets(q, n)

    @pytest.mark.parametrize("q", [64, 512, 4096])
    def test_nondecreasing_and_last(self, q):
        for n in range(1, 31):
            b = find_sample_size(q, n).budgets
            assert all(x <= y for x, y in zip(b, b[1:]))
            assert abs(b[-1] - q) <= 1

    def test_overhead_values(self):
        s = find_sample_size(512, 3)
        assert worst_case_overhead(s) == pytest.approx(584 / 512)
        assert overhead_bound(s) == pytest.approx(8 / 7)
        assert worst_case_overhead(s) < overhead_bound(s)
        assert worst_case_overhead(find_sample_size(300, 1)) == 1.0

    def test_overhead_decreases_with_growth(self):
        for n in (2, 3, 4):
            vals = [worst_case_overhead(find_sample_size(int(v**n), n)) for v in (4, 8, 16, 32)]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_invalid(self):
        with pytest.raises(ValueError):
            find_sample_size(0, 3)
        with pytest.raises(ValueError):
            find_sample_size(10, 0)

    def test_time_quotas_follow_budgets(self):
        s = find_sample_size(512, 3).with_time_budget(5.84)
        assert s.mode == "time"
        np.testing.assert_allclose(s.time_quotas, [0.08, 0.64, 5.12])

    def test_single_stage(self):
        s = single_stage_schedule(99)
        assert s.budgets == (99,) and s.num_stages == 1


def _stage(n, order, constrained=None, lo=0.0, hi=1.0):
    b = CSpaceBounds.uniform(n, lo, hi)
    return b, PrioritizedStage(frozenset(order if constrained is None else constrained),
                               tuple(order), (0.0, 1.0))


class TestRelease:
    def test_pops_in_order(self):
        _, st0 = _stage(3, [1, 0, 2])
        st1 = release_next(st0)
        assert st1.constrained == frozenset({0, 2})
        assert st1.release_order == st0.release_order and st1.r_range == st0.r_range

    def test_n_releases_empty_the_set(self):
        _, s = _stage(5, [4, 2, 0, 1, 3])
        for _ in range(5):
            s = release_next(s)
        assert s.constrained == frozenset()
        with pytest.raises(ValueError):
            release_next(s)

    def test_pure(self):
        _, s = _stage(4, [3, 1, 2, 0])
        assert release_next(s) == release_next(s)

    def test_dims_grow_by_one(self):
        _, s = _stage(6, [5, 0, 3, 1, 4, 2])
        dims = [s.dim]
        while s.constrained:
            s = expand_prioritized(s)
            dims.append(s.dim)
        assert dims == [1, 2, 3, 4, 5, 6]

    def test_suffix_invariant_enforced(self):
        with pytest.raises(ValueError):
            PrioritizedStage(frozenset({0}), (0, 1, 2), (0.0, 1.0))

    def test_random_order_is_permutation(self):
        b = CSpaceBounds.uniform(7, -1, 1)
        s = make_prioritized_stage(np.zeros(7), np.full(7, 0.5), b, rng=make_rng(5))
        assert sorted(s.release_order) == list(range(7))
        assert s.r_range == pytest.approx(clip_line_to_box(np.zeros(7), np.full(7, 0.5), b))


class TestPrioritizedSample:
    def test_all_constrained_is_collinear(self):
        rng = make_rng(0)
        n = 6
        b = CSpaceBounds.uniform(n, -math.pi, math.pi)
        a, g = sample_uniform(b, rng), sample_uniform(b, rng)
        st0 = make_prioritized_stage(a, g, b, rng=rng)
        for _ in range(10_000 // 10):
            q = prioritized_sample(a, g, st0, b, rng)
            assert line_residual(q, a, g) < 1e-9
            assert b.contains(q)

    def test_shared_scalar_reconstructs(self):
        rng = make_rng(1)
        b = CSpaceBounds.uniform(5, -2, 2)
        a = np.array([-1.0, 0.5, 0.0, 1.0, -0.2])
        g = np.array([1.0, -0.5, 0.3, 1.5, 0.9])
        st0 = make_prioritized_stage(a, g, b, rng=rng)
        for _ in range(1000):
            q = prioritized_sample(a, g, st0, b, rng)
            r = (q[0] - a[0]) / (g[0] - a[0])
            assert np.max(np.abs((g - a) * r + a - q)) < 1e-9
            assert st0.r_range[0] - 1e-12 <= r <= st0.r_range[1] + 1e-12

    def test_unconstrained_matches_uniform_stream(self):
        b = CSpaceBounds.uniform(4, -1, 3)
        _, s = _stage(4, [0, 1, 2, 3], constrained=[])
        r1, r2 = make_rng(9), make_rng(9)
        for _ in range(100):
            assert np.array_equal(prioritized_sample(np.zeros(4), np.ones(4), s, b, r1),
                                  sample_uniform(b, r2))

    def test_unconstrained_ks(self):
        n = 3
        b = CSpaceBounds.uniform(n, -math.pi, math.pi)
        _, s = _stage(n, [0, 1, 2], constrained=[])
        rng = make_rng(21)
        qs = np.array([prioritized_sample(np.zeros(n), np.ones(n), s, b, rng) for _ in range(10_000)])
        for i in range(n):
            u = (qs[:, i] + math.pi) / (2 * math.pi)
            assert stats.kstest(u, "uniform").statistic < 0.05

    def test_one_free_one_line(self):
        b = CSpaceBounds.uniform(2, 0, 1)
        a, g = np.zeros(2), np.ones(2)
        s = PrioritizedStage(frozenset({0}), (1, 0), clip_line_to_box(a, g, b))
        assert s.r_range == pytest.approx((0.0, 1.0))
        rng = make_rng(4)
        qs = np.array([prioritized_sample(a, g, s, b, rng) for _ in range(10_000)])
        for i in range(2):
            assert stats.kstest(qs[:, i], "uniform").statistic < 0.05
        assert abs(np.corrcoef(qs[:, 0], qs[:, 1])[0, 1]) < 0.05

    def test_dimension_mismatch(self):
        b, s = _stage(3, [0, 1, 2])
        with pytest.raises(ValueError):
            prioritized_sample(np.zeros(2), np.ones(2), s, b, make_rng(0))


class TestAffine:
    def test_line_basis(self):
        a, g = np.array([0.0, 1.0, 2.0]), np.array([1.0, 1.0, 0.0])
        st1 = make_affine_stage(a, g, 1, make_rng(0))
        np.testing.assert_array_equal(st1.basis[:, 0], g - a)
        assert st1.basis.shape == (3, 1)

    def test_full_rank(self):
        st_ = make_affine_stage(np.zeros(5), np.ones(5), 5, make_rng(2))
        assert np.linalg.matrix_rank(st_.basis) == 5

    def test_too_many_columns(self):
        with pytest.raises(ValueError):
            make_affine_stage(np.zeros(3), np.ones(3), 4, make_rng(0))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**31), st.data())
    def test_flat_contains_endpoints(self, n, seed, data):
        s = data.draw(st.integers(1, n))
        rng = make_rng(seed)
        b = CSpaceBounds.uniform(n, -math.pi, math.pi)
        a, g = sample_uniform(b, rng), sample_uniform(b, rng)
        fl = make_affine_stage(a, g, s, rng)
        assert lstsq_residual(fl.basis, fl.origin, a) < 1e-9
        assert lstsq_residual(fl.basis, fl.origin, g) < 1e-9
        e1 = np.zeros(s)
        e1[0] = 1.0
        np.testing.assert_allclose(fl.origin + fl.basis @ e1, g, atol=1e-12)

    def test_line_samples_collinear(self):
        b = CSpaceBounds.uniform(2, 0, 1)
        a, g = np.array([0.25, 0.25]), np.array([0.75, 0.75])
        rng = make_rng(3)
        fl = make_affine_stage(a, g, 1, rng)
        for _ in range(500):
            q = affine_sample(fl, b, rng)
            assert q is not None and line_residual(q, a, g) < 1e-9

    @pytest.mark.parametrize("n,s", [(3, 2), (6, 3), (10, 4), (17, 9)])
    def test_on_flat_and_in_box(self, n, s):
        rng = make_rng(n * 100 + s)
        b = CSpaceBounds.uniform(n, -math.pi, math.pi)
        a, g = sample_uniform(b, rng), sample_uniform(b, rng)
        fl = make_affine_stage(a, g, s, rng)
        got = 0
        for _ in range(2000):
            q = affine_sample(fl, b, rng)
            if q is None:
                continue
            got += 1
            assert b.contains(q)
            assert lstsq_residual(fl.basis, fl.origin, q) < 1e-9
        assert got > 0

    def test_half_widths_cover_box_slice(self):
        # every in-box point of the flat needs coefficients inside the sampling cube
        rng = make_rng(8)
        n, s = 4, 2
        b = CSpaceBounds.uniform(n, -1, 1)
        fl = make_affine_stage(np.zeros(n), np.full(n, 0.5), s, rng)
        hw = fl.coefficient_half_widths(b)
        for _ in range(5000):
            coef = rng.uniform(-50, 50, size=s)
            q = fl.origin + fl.basis @ coef
            if b.contains(q):
                assert np.all(np.abs(coef) <= hw + 1e-12)

    def test_exhaustion_signal(self):
        # a flat that barely clips the box: rejection gives up and returns None
        b = CSpaceBounds.uniform(2, 0, 1)
        a, g = np.array([0.0, 0.0]), np.array([1e-3, 1e-3])
        fl = make_affine_stage(a, g, 1, make_rng(0))
        outs = [affine_sample(fl, b, make_rng(k), max_rejects=1) for k in range(50)]
        assert any(o is None for o in outs)
        assert all(o is None or b.contains(o) for o in outs)

    def test_near_coincident_endpoints(self):
        with pytest.raises(ValueError):
            make_affine_stage(np.zeros(3), np.full(3, 1e-9), 2, make_rng(0))

    def test_full_dimension_is_uniform(self):
        n = 3
        b = CSpaceBounds.uniform(n, 0, 1)
        fl = make_affine_stage(np.full(n, 0.2), np.full(n, 0.7), n, make_rng(0))
        rng = make_rng(1)
        qs = np.array([affine_sample(fl, b, rng) for _ in range(10_000)])
        for i in range(n):
            assert stats.kstest(qs[:, i], "uniform").statistic < 0.05
