import numpy as np
import pytest

from cherednik import BoundViolation, DomainError, JCParams, SampledFunction1D, weight_A
from cherednik.windowed import (
    GaussianKernel,
    WindowedContext,
    default_window,
    gaussian_kernel,
    heat_window,
    modulation,
    sandwich_check,
    sandwich_ratio,
    tf_shift,
    window_context,
    wo_inverse,
    wo_transform,
)

P = JCParams(1.0, 0.25)
HEAT = heat_window(P)


@pytest.fixture(scope="module")
def ctx():
    return window_context(P)


@pytest.fixture(scope="module")
def heat_ctx():
    return window_context(P, HEAT)


def l2A(ctx, values):
    r = ctx.rules.s
    return float(np.sum(np.abs(values) ** 2 * weight_A(P, r.nodes) * r.weights))


class TestModulation:
    def test_heat_window_spectrum_nonnegative(self, heat_ctx):
        lam = np.linspace(-15, 15, 301)
        hg = heat_ctx.Hg(lam)
        assert np.max(np.abs(hg - np.exp(-lam**2))) <= 1e-6

    def test_identity_at_zero_for_nonnegative_spectrum(self, heat_ctx):
        x = np.linspace(-2, 2, 21)
        assert np.max(np.abs(modulation(P, HEAT, 0.0, x, ctx=heat_ctx).values - HEAT(x))) <= 1e-3

    def test_default_window_spectrum_changes_sign(self, ctx):
        # sqrt(|Hg|^2) = |Hg| differs from Hg, so M_0 g != g for this window
        hg = ctx.Hg(ctx.rules.lam.nodes).real
        assert hg.min() < -1e-3

    def test_norm_at_zero(self, ctx):
        vals = modulation(P, default_window, 0.0, ctx.rules.s.nodes, ctx=ctx).values
        assert abs(l2A(ctx, vals) / ctx.g_norm2 - 1.0) <= 1e-2

    @pytest.mark.xfail(
        strict=True,
        reason="spectral-variable translation of |Hg|^2 is not norm preserving: "
        "measured ||M_xi g||^2/||g||^2 = 0.905 (xi=0.5), 0.633 (xi=1)",
    )
    @pytest.mark.parametrize("xi", [0.5, 1.0])
    def test_norm_preservation(self, ctx, xi):
        vals = modulation(P, default_window, xi, ctx.rules.s.nodes, ctx=ctx).values
        assert abs(l2A(ctx, vals) / ctx.g_norm2 - 1.0) <= 1e-2

    def test_prefactor(self):
        two_g = lambda x: 2.0 * default_window(x)
        c2 = window_context(P, two_g)
        c1 = window_context(P)
        x = np.linspace(-1, 1, 5)
        a = modulation(P, two_g, 0.7, x, ctx=c2).values
        b = modulation(P, default_window, 0.7, x, ctx=c1).values
        np.testing.assert_allclose(a, 2 * b, rtol=1e-10)

    def test_clamp_and_violation(self):
        class Fake(WindowedContext):
            def __init__(self, worst):
                self._psi_cache = {}
                self.rules = window_context(P).rules
                self.worst = worst

            def tau_spectral(self, xi, lam):
                out = np.ones(np.broadcast(xi, lam).shape)
                out[0, 0] = self.worst
                return out

        assert Fake(-1e-11).psi([0.3])[0, 0] == 0.0
        with pytest.raises(BoundViolation):
            Fake(-1e-9).psi([0.3])


class TestTfShift:
    def test_origin_is_window(self, heat_ctx):
        y = np.linspace(-2, 2, 9)
        assert np.max(np.abs(tf_shift(P, HEAT, 0.0, 0.0, y, ctx=heat_ctx).values - HEAT(y))) <= 1e-3

    @pytest.mark.parametrize("xy", [(0.8, 1.1), (0.5, -0.3), (-1.2, 0.4)])
    def test_translation_symmetry(self, ctx, xy):
        x, y = xy
        a = tf_shift(P, default_window, x, 0.7, [y], ctx=ctx).values[0]
        b = tf_shift(P, default_window, y, 0.7, [x], ctx=ctx).values[0]
        assert abs(a - b) <= 1e-6

    def test_direct_matches_spectral(self, ctx):
        a = tf_shift(P, default_window, 0.8, 0.7, [-0.4, 1.1], ctx=ctx).values
        b = tf_shift(P, default_window, 0.8, 0.7, [-0.4, 1.1], ctx=ctx, method="direct").values
        assert np.max(np.abs(a - b)) <= 1e-5

    def test_real_for_symmetric_spectral_data(self, ctx):
        psi = ctx.psi([0.0])[:, 0]
        np.testing.assert_allclose(psi, psi[::-1], rtol=0, atol=1e-12 * psi.max())
        y = np.linspace(-2, 2, 9)
        assert np.max(np.abs(tf_shift(P, default_window, 0.5, 0.0, y, ctx=ctx).values.imag)) <= 1e-8

    def test_unknown_method(self, ctx):
        with pytest.raises(DomainError):
            tf_shift(P, default_window, 0.5, 0.0, [0.0], ctx=ctx, method="fft")


class TestTransform:
    grid = np.linspace(-1, 1, 5)

    def test_zero_signal(self, ctx):
        W = wo_transform(P, lambda s: 0 * s, default_window, self.grid, self.grid, ctx=ctx)
        assert np.all(W.values == 0)

    def test_linearity(self, ctx):
        f1 = default_window
        f2 = lambda s: s * np.exp(-2 * s * s)
        c = 0.5 - 2j
        W = lambda f: wo_transform(P, f, default_window, self.grid, self.grid, ctx=ctx).values
        np.testing.assert_allclose(W(lambda s: f1(s) + c * f2(s)), W(f1) + c * W(f2), atol=1e-13)

    def test_direct_route_agrees(self, ctx):
        f = default_window
        a = wo_transform(P, f, default_window, [0.5], [0.7], ctx=ctx).values
        b = wo_transform(P, f, default_window, [0.5], [0.7], ctx=ctx, method="direct").values
        assert abs(a - b)[0, 0] <= 1e-5

    @pytest.mark.xfail(
        strict=True,
        reason="reconstruction needs the windowed Plancherel identity, which fails "
        "with the spectral modulation (measured sup error 0.38 on [-1, 1])",
    )
    def test_roundtrip(self, ctx):
        r = ctx.rules
        F = wo_transform(P, default_window, default_window, r.x.nodes, r.xi.nodes, ctx=ctx)
        s = np.linspace(-1, 1, 9)
        rec = wo_inverse(P, F, default_window, s, ctx=ctx).values
        assert np.max(np.abs(rec - default_window(s))) <= 1e-1

    def test_prefactor_reconstruction_unchanged(self, ctx):
        two_g = lambda x: 2.0 * default_window(x)
        c2 = window_context(P, two_g)
        r = ctx.rules
        f = lambda s: np.exp(-2 * s * s)
        W1 = wo_transform(P, f, default_window, r.x.nodes, r.xi.nodes, ctx=ctx)
        W2 = wo_transform(P, f, two_g, r.x.nodes, r.xi.nodes, ctx=c2)
        np.testing.assert_allclose(W2.values, 2 * W1.values, rtol=1e-10, atol=1e-14)
        s = np.linspace(-1, 1, 5)
        rec1 = wo_inverse(P, W1, default_window, s, ctx=ctx).values
        rec2 = wo_inverse(P, W2, two_g, s, ctx=c2).values
        np.testing.assert_allclose(rec2, rec1, rtol=1e-10)

    def test_inverse_inputs_agree(self, ctx):
        # callable, separable pair and sampled symbol give the same function
        r = ctx.rules
        gx = lambda v: np.exp(-0.5 * v**2)
        s = np.linspace(-1, 1, 3)
        a = wo_inverse(P, (gx, gx), default_window, s, ctx=ctx).values
        b = wo_inverse(P, lambda X, XI: gx(X) * gx(XI), default_window, s, ctx=ctx).values
        np.testing.assert_allclose(a, b, rtol=1e-10)


class TestGaussianKernel:
    @pytest.mark.parametrize("t", [0.25, 0.5, 1.0])
    def test_even_real_positive(self, ctx, t):
        x = np.linspace(-3, 3, 61)
        E = gaussian_kernel(P, default_window, t, x, ctx=ctx)
        v = E.values.real
        assert np.max(np.abs(v - v[::-1])) <= 1e-6 * np.max(np.abs(v))
        assert np.all(E.values.imag == 0)
        assert np.all(v > 0)

    def test_rejects_nonpositive_t(self, ctx):
        with pytest.raises(DomainError):
            GaussianKernel(P, 0.0, ctx=ctx)

    def test_sandwich_report(self, ctx):
        x = np.linspace(-3, 3, 61)
        E = gaussian_kernel(P, default_window, 0.5, x, ctx=ctx)
        rep = sandwich_check(P, E, 0.5)
        assert 0 < rep.ratio_min <= rep.ratio_max
        assert rep.mu1_hat <= rep.mu2_hat

    def test_sandwich_rejects_nonpositive(self):
        x = np.linspace(-1, 1, 5)
        with pytest.raises(BoundViolation):
            sandwich_check(P, SampledFunction1D(x, [1, 1, 0, 1, 1]), 0.5)

    def test_sandwich_ratio_of_envelope(self):
        # the envelope itself gives the constant prefactor
        x = np.linspace(-3, 3, 13)
        from cherednik import weight_B
        env = np.exp(-x * x / 2.0) / np.sqrt(weight_B(P, x))
        r = sandwich_ratio(P, x, env, 0.5)
        np.testing.assert_allclose(r, r[0], rtol=1e-12)
