import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genmetrics.errors import InputError, NumericalConsistencyError
from genmetrics.fidelity import (
    Verdict,
    aog,
    compare_fid,
    density,
    fid,
    nearest_centroid_fit,
    nearest_centroid_predict,
    precision,
)
from genmetrics.latent_stats import GaussianStats, estimate_gaussian
from oracles import density_loop, precision_loop, random_spd
import toy_configs as toy


def _stats(mean, cov):
    return GaussianStats(np.asarray(mean, float), np.atleast_2d(np.asarray(cov, float)))


class TestFid:
    def test_identical(self):
        s = _stats([1.0, 2.0], [[2.0, 0.3], [0.3, 1.0]])
        assert fid(s, s) <= 1e-6

    def test_scalar_closed_form(self):
        # N(0, 1) vs N(1.2, 1.8)
        expected = math.sqrt(1.2**2 + (1 - math.sqrt(1.8)) ** 2)
        assert fid(_stats([0.0], [1.0]), _stats([1.2], [1.8])) == pytest.approx(expected, abs=1e-12)

    def test_diagonal(self):
        got = fid(_stats([0, 0], np.eye(2)), _stats([0, 0], 4 * np.eye(2)))
        assert got == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_from_raw_latents(self):
        rng = np.random.default_rng(0)
        a, b = rng.standard_normal((40, 3)), rng.standard_normal((30, 3)) + 1
        assert fid(a, b) == fid(estimate_gaussian(a), estimate_gaussian(b))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            fid(_stats([0.0], [1.0]), _stats([0.0, 0.0], np.eye(2)))

    def test_negative_square_raises(self, monkeypatch):
        import genmetrics.fidelity as mod

        monkeypatch.setattr(mod, "trace_sqrt_product", lambda a, b: 10.0)
        with pytest.raises(NumericalConsistencyError):
            fid(_stats([0.0], [1.0]), _stats([0.0], [1.0]))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_symmetry_and_translation(self, seed):
        rng = np.random.default_rng(seed)
        f = 5
        a = _stats(rng.standard_normal(f), random_spd(rng, f))
        b = _stats(rng.standard_normal(f), random_spd(rng, f))
        assert fid(a, b) == pytest.approx(fid(b, a), abs=1e-8)
        t = rng.standard_normal(f)
        moved = fid(_stats(a.mean + t, a.covariance), _stats(b.mean + t, b.covariance))
        assert moved == pytest.approx(fid(a, b), abs=1e-8)
        shifted = fid(a, _stats(a.mean + t, a.covariance))
        assert shifted == pytest.approx(np.linalg.norm(t), abs=1e-8)


class TestCompareFid:
    @pytest.mark.parametrize(
        "args, verdict",
        [
            ((1.0, 2.0, 0.5), Verdict.GEN1),
            ((0.3, 2.0, 0.5), Verdict.NO_VERDICT),
            ((2.0, 2.0, 0.5), Verdict.TIE),
            ((2.0, 1.0, 0.5), Verdict.GEN2),
            ((0.5, 2.0, 0.5), Verdict.GEN1),
        ],
    )
    def test_rule(self, args, verdict):
        assert compare_fid(*args) == verdict


class TestAog:
    conditioned = [0, 0, 1, 1, 2, 2]

    def test_all_correct(self):
        assert aog(self.conditioned, self.conditioned) == 1.0

    def test_half_correct(self):
        assert aog([0, 1, 1, 2, 2, 0], self.conditioned) == 0.5

    def test_none_correct(self):
        assert aog([1, 1, 2, 2, 0, 0], self.conditioned) == 0.0

    def test_errors(self):
        with pytest.raises(InputError):
            aog([0], [0, 1])
        with pytest.raises(InputError):
            aog([], [])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=40))
    def test_matches_count(self, pairs):
        pred, cond = zip(*pairs)
        assert aog(pred, cond) == sum(p == c for p, c in pairs) / len(pairs)

    def test_nearest_centroid(self):
        x = np.array([[0.0], [0.2], [5.0], [5.2]])
        model = nearest_centroid_fit(x, [3, 3, 7, 7])
        assert nearest_centroid_predict(model, [[0.4], [4.0]]).tolist() == [3, 7]


class TestDensityPrecision:
    def test_outlier_configuration(self):
        assert density(toy.OUTLIER_REAL, toy.OUTLIER_GEN, 2) == toy.OUTLIER_DENSITY
        assert precision(toy.OUTLIER_REAL, toy.OUTLIER_GEN, 2) == toy.OUTLIER_PRECISION

    def test_two_balls(self):
        assert density([[0.0], [1.0]], [[0.0]], 1) == 2.0

    def test_far_away(self):
        real = np.random.default_rng(1).standard_normal((10, 2))
        far = real + 100.0
        assert density(real, far, 3) == 0.0
        assert precision(real, far, 3) == 0.0

    def test_coincident(self):
        real = np.random.default_rng(2).standard_normal((10, 2))
        assert precision(real, real, 1) == 1.0

    @pytest.mark.parametrize("k", [0, 5])
    def test_k_range(self, k):
        with pytest.raises(InputError):
            density(np.zeros((5, 2)) + np.arange(5)[:, None], np.zeros((2, 2)), k)

    @pytest.mark.parametrize("seed", range(6))
    def test_against_loops(self, seed):
        rng = np.random.default_rng(seed)
        real, gen = rng.standard_normal((15, 2)), rng.standard_normal((11, 2)) * 1.5
        for k in (1, 2, 4):
            assert density(real, gen, k) == pytest.approx(density_loop(real, gen, k))
            assert precision(real, gen, k) == pytest.approx(precision_loop(real, gen, k))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 6))
    def test_bounds(self, seed, k):
        rng = np.random.default_rng(seed)
        real, gen = rng.standard_normal((8, 3)), rng.standard_normal((9, 3)) * 2
        d, p = density(real, gen, k), precision(real, gen, k)
        assert 0.0 <= d <= len(real) / k
        assert 0.0 <= p <= 1.0
        if p == 0.0:
            assert d == 0.0
