import math

import mpmath as mp
import numpy as np
import pytest

from cherednik import DomainError, JCParams, SampledFunction1D
from cherednik.ucp import (
    classify_regime,
    cowling_price_certify,
    gaussian_envelope_fit,
    hardy_extremal_check,
    morgan_threshold,
    super_gaussian_envelope_fit,
)
from cherednik.windowed import GaussianKernel, WindowedRules, default_window, window_context

P = JCParams(1.0, 0.25)
mp.mp.dps = 40


class TestRegimes:
    @pytest.mark.parametrize("a,b", [(1.0, 0.25), (0.5, 0.6), (2.0, 1.0)])
    def test_vanishing(self, a, b):
        assert classify_regime(a, b) == "vanishing"

    def test_hardy_labels(self):
        assert classify_regime(0.5, 0.5, "hardy") == "extremal"
        assert classify_regime(0.5, 0.6, "hardy") == "vanishing"
        assert classify_regime(0.5, 0.4, "hardy") == "nonvanishing"

    def test_cowling_price_boundary_is_vanishing(self):
        assert classify_regime(0.5, 0.5) == "vanishing"
        assert classify_regime(0.25, 0.5) == "nonvanishing"

    def test_pure_function(self):
        a, b = np.meshgrid(np.linspace(0.1, 2, 7), np.linspace(0.1, 2, 7))
        for x, y in zip(a.ravel(), b.ravel()):
            label = classify_regime(x, y)
            assert (label == "vanishing") == (x * y >= 0.25)


class TestMorgan:
    def test_known_case(self):
        lhs, rhs, vanishing = morgan_threshold(1.0, 1.0, 4.0, 4.0 / 3.0)
        ref_lhs = mp.power(4, mp.mpf(1) / 4) * mp.power(mp.mpf(4) / 3, mp.mpf(3) / 4)
        ref_rhs = mp.power(mp.mpf(1) / 2, mp.mpf(3) / 4)
        assert abs(lhs - float(ref_lhs)) <= 1e-14 * lhs
        assert abs(rhs - float(ref_rhs)) <= 1e-14
        assert vanishing

    def test_beta_two_limit(self):
        for alpha in (2 + 1e-6, 2 + 1e-9):
            _, rhs, _ = morgan_threshold(1.0, 1.0, alpha, alpha / (alpha - 1))
            assert abs(rhs - 1.0) <= 1e-9

    def test_conjugacy_violation(self):
        with pytest.raises(DomainError):
            morgan_threshold(1.0, 1.0, 4.0, 1.3)

    @pytest.mark.parametrize("args", [(1.0, 1.0, 2.0, 2.0), (0.0, 1.0, 4.0, 4 / 3), (1.0, -1.0, 4.0, 4 / 3)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            morgan_threshold(*args)

    def test_monotone(self):
        al, be = 3.0, 1.5
        grid = [0.2, 0.7, 1.5]
        vals = np.array([[morgan_threshold(a, b, al, be)[0] for b in grid] for a in grid])
        assert np.all(np.diff(vals, axis=0) > 0)
        assert np.all(np.diff(vals, axis=1) > 0)

    def test_homogeneity(self):
        al, be, c = 5.0, 1.25, 3.7
        base = morgan_threshold(0.4, 0.9, al, be)[0]
        scaled = morgan_threshold(0.4 * c, 0.9, al, be)[0]
        assert abs(scaled - c ** (1 / al) * base) <= 1e-14 * scaled


class TestCowlingPrice:
    def test_zero_signal(self):
        rep = cowling_price_certify(P, lambda x: 0 * np.asarray(x, float), a=0.25, b=0.5)
        assert rep.x_norm == 0 and rep.tf_norm == 0
        assert rep.growth_flags == {"x": False, "tf": False}

    def test_positive_control(self):
        # e^{-x^2} with slack in both decay conditions
        rep = cowling_price_certify(P, default_window, a=0.25, b=0.02)
        assert rep.growth_flags == {"x": False, "tf": False}
        assert rep.regime == "nonvanishing"
        d = rep.to_dict()
        assert d["detail"]["radii"]["x"] == [5.0, 10.0]

    def test_slow_weight_trips_tf_flag(self):
        E = GaussianKernel(P, 0.25)
        rep = cowling_price_certify(P, E, a=0.25, b=0.5)
        assert rep.growth_flags["tf"]
        assert "0.125 < 1/4" in rep.notes

    def test_both_exponents_infinite(self):
        with pytest.raises(DomainError):
            cowling_price_certify(P, default_window, a=0.1, b=0.1, p_exp=math.inf, q_exp=math.inf)


class TestHardy:
    @pytest.mark.xfail(
        strict=True,
        reason="W_g(E_t) is the projection of the Gaussian symbol onto the range of W_g; "
        "measured sup relative residual 0.97 at t = 0.5",
    )
    def test_extremal_identity(self):
        assert hardy_extremal_check(P, a=0.5).residual <= 5e-2

    def test_scaling_in_a(self):
        assert hardy_extremal_check(P, a=1.0).t == 0.25

    def test_constant_scaling(self):
        r1 = hardy_extremal_check(P, a=0.5)
        r3 = hardy_extremal_check(P, a=0.5, scale=3.0)
        assert abs(r1.residual - r3.residual) <= 1e-12
        np.testing.assert_allclose(r3.values, 3 * r1.values, rtol=1e-12)

    def test_refinement(self):
        coarse = hardy_extremal_check(P, a=0.5, rules=WindowedRules.coarse(1.0)).residual
        fine = hardy_extremal_check(P, a=0.5, rules=WindowedRules.coarse(1.5)).residual
        assert fine <= coarse or abs(fine - coarse) <= 0.1 * coarse


class TestEnvelopeFits:
    x = np.linspace(-4, 4, 161)

    def test_exact_gaussian(self):
        fit = gaussian_envelope_fit((self.x, np.exp(-0.7 * self.x**2)))
        assert abs(fit.a_hat - 0.7) <= 1e-6
        assert abs(fit.c_hat - 1.0) <= 1e-6
        assert not fit.flagged

    def test_kernel_rate(self):
        E = GaussianKernel(P, 0.5).sample(self.x)
        assert abs(gaussian_envelope_fit(E).a_hat - 0.5) <= 0.1 * 0.5

    def test_exponential_flagged(self):
        assert gaussian_envelope_fit((self.x, np.exp(-np.abs(self.x)))).flagged

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            gaussian_envelope_fit((self.x, np.cos(self.x)))

    def test_sampled_input(self):
        s = SampledFunction1D(self.x, np.exp(-2 * self.x**2))
        assert abs(gaussian_envelope_fit(s).a_hat - 2.0) <= 1e-6

    def test_super_gaussian(self):
        fit = super_gaussian_envelope_fit((self.x, np.exp(-0.3 * self.x**4)), 4)
        assert abs(fit.a_hat - 0.3) <= 1e-6

    def test_super_gaussian_flags_gaussian(self):
        assert super_gaussian_envelope_fit((self.x, np.exp(-self.x**2)), 4).flagged

    def test_cubic(self):
        fit = super_gaussian_envelope_fit((self.x, np.exp(-0.2 * np.abs(self.x) ** 3)), 3)
        assert abs(fit.a_hat - 0.2) <= 1e-4
