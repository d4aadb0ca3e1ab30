import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gtbias.errors import InvalidArgument, InvalidBeta
from gtbias.indices import evaluate
from gtbias.paircounts import ContingencyTable, pair_counts, product_contingency
from gtbias.partition import ClusterDistribution
from gtbias.theory import (
    BiasStatus, VerdictSource, gt1_verdict, gt2_quadratic, gt2_threshold, gt2_verdict,
    havrda_charvat_entropy, independent_vi2, joint_quadratic_entropy, predict_gt1, predict_gt2,
    predict_nc_bias, predict_nc_bias_h2, predict_nc_bias_sorted, quadratic_entropy,
    vi2_from_contingency, vi2_from_ri,
)

NCinc, NCdec, NCneu = BiasStatus.NCinc, BiasStatus.NCdec, BiasStatus.NCneu
SKEW = ClusterDistribution((0.8, 0.05, 0.05, 0.05, 0.05))
CROSS = ContingencyTable([[1, 1], [1, 1]])


def random_distribution(rng, r):
    p = rng.dirichlet(np.full(r, rng.uniform(0.2, 3.0)))
    p = np.clip(p, 1e-9, None)
    return ClusterDistribution(tuple(p / p.sum()))


def random_product_table(rng):
    xs = rng.integers(1, 6, size=rng.integers(1, 7))
    ys = rng.integers(1, 6, size=rng.integers(1, 7))
    m = int(rng.integers(1, 4))
    return product_contingency(xs * ys.sum() * m, ys * xs.sum() * m)


class TestEntropies:
    def test_examples(self):
        half = ClusterDistribution((0.5, 0.5))
        assert havrda_charvat_entropy(half, 2) == pytest.approx(1.0, abs=1e-15)
        assert havrda_charvat_entropy(half, 1) == pytest.approx(1.0, abs=1e-15)
        for beta in (0.5, 1, 2, 3):
            assert havrda_charvat_entropy(ClusterDistribution((1.0,)), beta) == 0.0
        assert quadratic_entropy(half) == pytest.approx(1.0)
        assert quadratic_entropy(ClusterDistribution.balanced(5)) == pytest.approx(1.6, abs=1e-12)
        assert quadratic_entropy(SKEW) == pytest.approx(0.7, abs=1e-12)

    @pytest.mark.parametrize("beta", [0, -1])
    def test_invalid_beta(self, beta):
        with pytest.raises(InvalidBeta):
            havrda_charvat_entropy(ClusterDistribution((0.5, 0.5)), beta)

    def test_shannon_is_continuity_limit(self):
        p = ClusterDistribution((0.6, 0.3, 0.1))
        shannon = havrda_charvat_entropy(p, 1)
        assert shannon == pytest.approx(-sum(x * math.log2(x) for x in p.probs), rel=1e-12)
        assert havrda_charvat_entropy(p, 1 + 1e-7) == pytest.approx(shannon, rel=1e-5)

    def test_quadratic_is_beta_two(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            p = random_distribution(rng, int(rng.integers(1, 12)))
            assert quadratic_entropy(p) == pytest.approx(havrda_charvat_entropy(p, 2), abs=1e-12)

    @pytest.mark.parametrize("table,expected", [
        ([[1, 1], [1, 1]], 1.5), ([[2, 0], [0, 2]], 1.0), ([[3]], 0.0),
    ])
    def test_joint(self, table, expected):
        assert joint_quadratic_entropy(ContingencyTable(table)) == pytest.approx(expected, abs=1e-15)


class TestVI2:
    def test_examples(self):
        assert vi2_from_contingency(CROSS) == pytest.approx(1.0, abs=1e-15)
        assert vi2_from_contingency(ContingencyTable([[2, 0], [0, 2]])) == pytest.approx(0.0, abs=1e-15)
        assert vi2_from_ri(1.0, 17) == 0.0
        assert vi2_from_ri(1 / 3, 4) == pytest.approx(1.0, rel=1e-12)
        assert vi2_from_ri(0.0, 10**9) == pytest.approx(2.0, rel=1e-8)

    @pytest.mark.parametrize("ri,n", [(-0.1, 4), (1.1, 4), (0.5, 1)])
    def test_invalid(self, ri, n):
        with pytest.raises(InvalidArgument):
            vi2_from_ri(ri, n)

    @given(st.lists(st.lists(st.integers(0, 30), min_size=1, max_size=6), min_size=1, max_size=6))
    def test_matches_ri(self, rows):
        width = max(len(r) for r in rows)
        counts = np.array([r + [0] * (width - len(r)) for r in rows])
        counts = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
        if counts.sum() < 2:
            return
        t = ContingencyTable(counts)
        ri = evaluate("RI", pair_counts(t)).value
        assert vi2_from_contingency(t) == pytest.approx(vi2_from_ri(ri, t.total), rel=1e-9, abs=1e-12)

    def test_independent_vi2_on_product_tables(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            t = random_product_table(rng)
            h_u = quadratic_entropy(t.row_sums / t.total)
            h_v = quadratic_entropy(t.col_sums / t.total)
            assert vi2_from_contingency(t) == pytest.approx(independent_vi2(h_u, h_v), abs=1e-12)

    @pytest.mark.parametrize("beta", [0.5, 2, 3])
    def test_generalised_independence(self, beta):
        rng = np.random.default_rng(2)
        for _ in range(100):
            t = random_product_table(rng)
            joint = havrda_charvat_entropy((t.counts / t.total).ravel(), beta)
            hu = havrda_charvat_entropy(t.row_sums / t.total, beta)
            hv = havrda_charvat_entropy(t.col_sums / t.total, beta)
            expected = hu + hv - (1 - 2 ** (1 - beta)) * hu * hv
            assert joint == pytest.approx(expected, abs=1e-10)


class TestPredictors:
    @pytest.mark.parametrize("probs,status", [
        ((0.8, 0.05, 0.05, 0.05, 0.05), NCdec),
        ((0.5, 0.5), NCneu),
        ((0.1, 0.225, 0.225, 0.225, 0.225), NCinc),
        ((2 / 3, 1 / 4, 1 / 12), NCdec),
        ((1.0,), NCdec),
    ])
    def test_examples(self, probs, status):
        p = ClusterDistribution(probs)
        for fn in (predict_nc_bias, predict_nc_bias_h2, predict_nc_bias_sorted):
            assert fn(p).status is status, fn.__name__

    def test_verdict_fields(self):
        v = predict_nc_bias(SKEW)
        assert v.discriminant == pytest.approx(0.15, abs=1e-12)
        assert v.h2 == pytest.approx(0.7, abs=1e-12)
        assert v.source is VerdictSource.Corollary
        assert predict_nc_bias_sorted(SKEW).source is VerdictSource.TheoremSorted

    def test_equivalence_chain(self):
        rng = np.random.default_rng(3)
        for _ in range(10_000):
            p = random_distribution(rng, int(rng.integers(1, 15)))
            v = predict_nc_bias(p)
            assert np.sign(1 - v.h2) == np.sign(v.discriminant)
            assert predict_nc_bias_sorted(p).status is v.status
            assert predict_nc_bias_h2(p).status is v.status

    @pytest.mark.parametrize("r", [2, 3, 4, 10, 50])
    def test_gt1(self, r):
        expected = NCneu if r == 2 else NCinc
        assert predict_gt1(r) is expected
        assert predict_nc_bias(ClusterDistribution.balanced(r)).status is expected
        assert gt1_verdict(r).source is VerdictSource.GT1

    @given(st.integers(3, 60), st.floats(0.01, 0.99))
    def test_gt2_matches_sum_of_squares_rule(self, r, p1):
        if abs(p1 - gt2_threshold(r)) < 1e-9:
            return
        assert predict_gt2(r, p1) is predict_nc_bias(ClusterDistribution.skewed(r, p1)).status

    def test_gt2_examples(self):
        assert predict_gt2(5, 0.8) is NCdec
        assert predict_gt2(5, 0.1) is NCinc
        assert predict_gt2(4, gt2_threshold(4)) is NCneu
        # the three-decimal value sits just below the exact threshold
        assert predict_gt2(4, 0.683) is NCinc
        assert predict_gt2(2, 0.5) is NCneu and predict_gt2(2, 0.3) is NCdec
        assert gt2_verdict(5, 0.8).source is VerdictSource.GT2

    @pytest.mark.parametrize("r,p1", [(1, 0.5), (4, 0.0), (4, 1.0)])
    def test_gt2_invalid(self, r, p1):
        with pytest.raises(InvalidArgument):
            predict_gt2(r, p1)
        with pytest.raises(InvalidArgument):
            predict_gt1(1)


class TestThreshold:
    def test_values(self):
        assert gt2_threshold(4) == pytest.approx((1 + math.sqrt(3)) / 4, abs=1e-15)
        assert gt2_threshold(4) == pytest.approx(0.68301, abs=1e-5)
        assert gt2_threshold(2) == 0.5
        assert abs(gt2_threshold(10**6) - 1 / math.sqrt(2)) < 1e-3
        with pytest.raises(InvalidArgument):
            gt2_threshold(1)

    def test_root_residual(self):
        for r in range(2, 1001):
            assert abs(gt2_quadratic(r, gt2_threshold(r))) < 1e-12

    def test_quadratic_matches_distribution(self):
        for r in (3, 5, 9):
            for p1 in (0.2, 0.5, 0.9):
                disc = predict_nc_bias(ClusterDistribution.skewed(r, p1)).discriminant
                assert gt2_quadratic(r, p1) == pytest.approx(disc, abs=1e-12)

    def test_monotone_and_bounded(self):
        ps = np.array([gt2_threshold(r) for r in range(3, 5000)])
        assert np.all(np.diff(ps) > 0)
        assert np.all(ps < 1 / math.sqrt(2))
