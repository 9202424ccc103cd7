import math

import numpy as np
import pytest

from rotcmc.errors import DomainError, SingularityError
from rotcmc.surface import (
    ProfilePoint,
    ProfilePolyline,
    SurfaceParams,
    c_min,
    fundamental_piece,
    g_eval,
    g_squared_extrema,
    immersion_phi,
    ode_residual,
    period,
    principal_curvatures,
    profile_alpha,
    profile_beta,
    radius_squared,
    sample_beta,
    theta_cumulative,
    theta_integrand_alpha,
    theta_integrand_beta,
    theta_period,
)

RNG_SEED = 20240809


def random_params(rng, n, h_lo=-5.0, h_hi=5.0, off_hi=100.0):
    out = []
    for _ in range(n):
        H = rng.uniform(h_lo, h_hi)
        C = c_min(H) + off_hi * (1.0 - rng.random())   # offset in (0, off_hi]
        out.append(SurfaceParams(H, C))
    return out


class TestParams:
    def test_c_min_values(self):
        assert c_min(0.0) == pytest.approx(2.0, abs=1e-15)
        assert c_min(-1.0) == pytest.approx(2.0 * (math.sqrt(2) - 1), abs=1e-15)

    def test_c_min_below_axis_hyperbola(self):
        for H in np.linspace(-10, -0.05, 40):
            assert c_min(H) < -1.0 / H

    def test_period_values(self):
        assert period(0.0) == pytest.approx(math.pi)
        assert period(math.sqrt(3.0)) == pytest.approx(math.pi / 2)
        assert period(-1.0) == pytest.approx(math.pi / math.sqrt(2))

    def test_existence_bound(self):
        with pytest.raises(DomainError):
            SurfaceParams(0.0, 1.999)
        SurfaceParams(0.0, 2.0)   # boundary itself is fine

    def test_flags(self):
        assert SurfaceParams(0.7, c_min(0.7)).is_isoparametric
        assert not SurfaceParams(0.7, c_min(0.7) + 1e-6).is_isoparametric
        assert SurfaceParams(-1.0, 1.0).contains_axis
        assert not SurfaceParams(-1.0, 1.0 + 1e-7).contains_axis
        assert not SurfaceParams(1.0, 6.0).contains_axis


class TestG:
    def test_isoparametric_constant(self):
        for H in (-1.3, 0.0, 2.0):
            p = SurfaceParams(H, c_min(H))
            want = (1.0 + H * H) ** -0.25
            for t in np.linspace(0, 3 * p.period, 7):
                s = g_eval(p, t)
                assert s.g == pytest.approx(want, abs=1e-14)
                assert s.g_prime == pytest.approx(0.0, abs=1e-14)

    def test_axis_case_gmax(self):
        # C = -1/H: g_max^2 = -1/H, so g(T/4) = 1 at H = -1, C = 1
        p = SurfaceParams(-1.0, 1.0)
        assert g_eval(p, p.period / 4).g == pytest.approx(1.0, abs=1e-14)

    def test_axis_case_gmin_follows_closed_form(self):
        # g_min^2 = -H/(1+H^2); at H=-1 that is 1/2
        p = SurfaceParams(-1.0, 1.0)
        s = g_eval(p, 3 * p.period / 4)
        assert s.g ** 2 == pytest.approx(0.5, abs=1e-14)

    def test_extrema_locations(self):
        rng = np.random.default_rng(RNG_SEED)
        for p in random_params(rng, 10):
            gmin2, gmax2 = g_squared_extrema(p)
            T = p.period
            assert g_eval(p, T / 4).g ** 2 == pytest.approx(gmax2, rel=1e-12)
            assert g_eval(p, 3 * T / 4).g ** 2 == pytest.approx(
                gmin2, rel=1e-9)
            # product identity g_min^2 g_max^2 = 1/(1+H^2)
            assert gmin2 * gmax2 == pytest.approx(
                1.0 / (1.0 + p.H ** 2), rel=1e-12)

    def test_ode_residual_randomized(self):
        rng = np.random.default_rng(RNG_SEED)
        for p in random_params(rng, 25):
            for t in rng.uniform(-3 * p.period, 3 * p.period, size=20):
                assert abs(ode_residual(p, t)) < 1e-10

    def test_perturbed_g_breaks_residual(self):
        p = SurfaceParams(0.5, 5.0)
        s = g_eval(p, 0.3)
        g_bad = s.g + 1e-4
        lam = p.H + 1.0 / (g_bad * g_bad)
        bad = s.g_prime ** 2 + g_bad ** 2 * (1 + lam * lam) - p.C
        assert abs(bad) > 1e-6


class TestCurvatures:
    def test_mean_and_difference(self):
        rng = np.random.default_rng(RNG_SEED + 1)
        for p in random_params(rng, 10):
            for t in rng.uniform(0, p.period, 5):
                lam, mu = principal_curvatures(p, t)
                assert 0.5 * (lam + mu) == pytest.approx(p.H, rel=1e-12,
                                                         abs=1e-12)
                assert lam - mu > 0
                g = g_eval(p, t).g
                assert lam - mu == pytest.approx(2.0 / g ** 2, rel=1e-12)

    def test_isoparametric_curvatures_constant(self):
        p = SurfaceParams(0.8, c_min(0.8))
        vals = {principal_curvatures(p, t) for t in np.linspace(0, 2, 5)}
        lams = {round(v[0], 13) for v in vals}
        mus = {round(v[1], 13) for v in vals}
        assert len(lams) == 1 and len(mus) == 1


class TestIntegrands:
    def test_alpha_positive_h_nonneg(self):
        for H in (0.0, 0.5, 2.0):
            p = SurfaceParams(H, c_min(H) + 3.0)
            for t in np.linspace(0, p.period, 17):
                assert theta_integrand_alpha(p, t) > 0

    def test_alpha_positive_below_axis(self):
        for H in (-0.5, -1.5):
            C = 0.5 * (c_min(H) + (-1.0 / H))
            p = SurfaceParams(H, C)
            for t in np.linspace(0, p.period, 17):
                assert theta_integrand_alpha(p, t) > 0

    def test_alpha_changes_sign_above_axis(self):
        p = SurfaceParams(-1.0, 1.5)
        T = p.period
        assert theta_integrand_alpha(p, T / 4) < 0     # g = g_max
        assert theta_integrand_alpha(p, 3 * T / 4) > 0  # g = g_min

    def test_alpha_singular_on_axis(self):
        p = SurfaceParams(-1.0, 1.0)
        with pytest.raises(SingularityError):
            theta_integrand_alpha(p, p.period / 4)

    def test_beta_denominator_bound(self):
        rng = np.random.default_rng(RNG_SEED + 2)
        for p in random_params(rng, 8):
            gmin2, _ = g_squared_extrema(p)
            for t in rng.uniform(0, p.period, 8):
                s = g_eval(p, t)
                assert s.g_prime ** 2 + s.g ** 2 >= gmin2 * (1 - 1e-12)

    def test_beta_finite_on_axis(self):
        p = SurfaceParams(-1.0, 1.0)
        v = theta_integrand_beta(p, p.period / 4)
        assert math.isfinite(v)

    def test_beta_negative_for_minimal(self):
        p = SurfaceParams(0.0, 5.0)
        for t in np.linspace(0, p.period, 17):
            assert theta_integrand_beta(p, t) < 0


class TestThetaCumulative:
    def test_zero_at_zero(self):
        p = SurfaceParams(0.4, 4.0)
        assert theta_cumulative(p, 0.0, "alpha") == 0.0
        assert theta_cumulative(p, 0.0, "beta") == 0.0

    def test_quasi_periodicity(self):
        p = SurfaceParams(-0.7, 2.0)
        T = p.period
        thT = theta_cumulative(p, T, "beta", 1e-10)
        base = theta_cumulative(p, 0.37, "beta", 1e-10)
        for q in (1, 2, 7, 25, 50):
            lhs = theta_cumulative(p, 0.37 + q * T, "beta", 1e-10)
            assert abs(lhs - base - q * thT) < 1e-10 * (1 + abs(q * thT))

    def test_period_increment_independent_of_t(self):
        p = SurfaceParams(1.1, 6.0)
        T = p.period
        incs = [theta_cumulative(p, t + T, "alpha", 1e-10)
                - theta_cumulative(p, t, "alpha", 1e-10)
                for t in (0.0, 0.4, 1.1)]
        assert max(incs) - min(incs) < 1e-9

    def test_alpha_refuses_axis(self):
        p = SurfaceParams(-2.0, 0.5)
        with pytest.raises(SingularityError):
            theta_cumulative(p, 0.3, "alpha")

    def test_theta_alpha_period_matches_K(self):
        from rotcmc.angles import K
        for H, off in ((0.0, 2.0), (1.0, 0.7), (-0.6, 4.0)):
            p = SurfaceParams(H, c_min(H) + off)
            th = theta_cumulative(p, p.period, "alpha", 1e-10)
            assert abs(th - K(p).value) < 1e-8


class TestProfiles:
    def test_alpha_radius_identity(self):
        rng = np.random.default_rng(RNG_SEED + 3)
        for p in random_params(rng, 6):
            for t in rng.uniform(-p.period, 2 * p.period, 4):
                pt = profile_alpha(p, t)
                assert pt.x ** 2 + pt.y ** 2 == pytest.approx(
                    radius_squared(p, t), abs=1e-10)

    def test_alpha_extreme_radii(self):
        p = SurfaceParams(0.3, 4.0)
        T = p.period
        ts = np.linspace(-T / 4, 3 * T / 4, 41)
        radii = [math.hypot(profile_alpha(p, t).x, profile_alpha(p, t).y)
                 for t in ts]
        assert np.argmin(radii) == 20     # t = T/4
        assert min(np.argmax(radii), 40 - np.argmax(radii)) == 0

    def test_isoparametric_circle_radius(self):
        for H in (0.0, -0.8, 1.5):
            p = SurfaceParams(H, c_min(H))
            want = 1.0 / math.sqrt(2 + 2 * H * (H - math.sqrt(1 + H * H)))
            for t in (0.0, 0.7):
                pt = profile_alpha(p, t)
                assert math.hypot(pt.x, pt.y) == pytest.approx(want,
                                                               abs=1e-12)

    def test_beta_radius_identity(self):
        rng = np.random.default_rng(RNG_SEED + 4)
        for p in random_params(rng, 6):
            for t in rng.uniform(-p.period, 2 * p.period, 4):
                pt = profile_beta(p, t)
                assert pt.x ** 2 + pt.y ** 2 == pytest.approx(
                    radius_squared(p, t), abs=1e-10)

    def test_beta_axis_passages(self):
        p = SurfaceParams(-1.0, 1.0)
        T = p.period
        for t in (T / 4, 5 * T / 4):
            pt = profile_beta(p, t)
            assert math.hypot(pt.x, pt.y) < 1e-8

    def test_alpha_beta_same_curve_up_to_rotation(self):
        # compare polar angles: the offset must be t-independent
        p = SurfaceParams(-0.5, 3.0)
        offs = []
        for t in (0.1, 0.5, 0.9, 1.3):
            a = profile_alpha(p, t)
            bpt = profile_beta(p, t)
            assert math.hypot(a.x, a.y) == pytest.approx(
                math.hypot(bpt.x, bpt.y), abs=1e-10)
            off = (math.atan2(bpt.y, bpt.x) - math.atan2(a.y, a.x)) \
                % (2 * math.pi)
            offs.append(off)
        assert max(offs) - min(offs) < 1e-7

    def test_beta_polar_rate_is_alpha_integrand(self):
        p = SurfaceParams(-1.0, 1.3)
        h = 1e-6
        for t in (0.2, 0.5, 1.1):
            p1 = profile_beta(p, t - h, tol=1e-12)
            p2 = profile_beta(p, t + h, tol=1e-12)
            d = math.atan2(p2.y, p2.x) - math.atan2(p1.y, p1.x)
            d = (d + math.pi) % (2 * math.pi) - math.pi
            assert d / (2 * h) == pytest.approx(
                theta_integrand_alpha(p, t), abs=1e-5)


class TestImmersion:
    def test_unit_norm(self):
        rng = np.random.default_rng(RNG_SEED + 5)
        for p in random_params(rng, 5):
            for s, t in rng.uniform(0, 3, size=(4, 2)):
                assert abs(np.linalg.norm(immersion_phi(p, s, t)) - 1.0) \
                    < 1e-12

    def test_axis_great_circle(self):
        p = SurfaceParams(-1.0, 1.0)
        T = p.period
        for s in (0.0, 1.0, 2.5):
            phi = immersion_phi(p, s, T / 4)
            assert np.allclose(phi, [math.cos(s), math.sin(s), 0, 0],
                               atol=1e-8)

    def test_ring_radius(self):
        p = SurfaceParams(0.5, 4.0)
        t = 0.6
        pt = profile_beta(p, t)
        want = math.sqrt(1 - pt.x ** 2 - pt.y ** 2)
        ring = [immersion_phi(p, s, t)[:2] for s in np.linspace(0, 5, 7)]
        for v in ring:
            assert np.hypot(*v) == pytest.approx(want, abs=1e-12)

    def test_coordinate_curves_orthogonal(self):
        p = SurfaceParams(-0.4, 3.0)
        h = 1e-5
        for s, t in ((0.3, 0.2), (1.5, 0.9)):
            ds = (immersion_phi(p, s + h, t) - immersion_phi(p, s - h, t)) \
                / (2 * h)
            dt = (immersion_phi(p, s, t + h) - immersion_phi(p, s, t - h)) \
                / (2 * h)
            assert abs(float(np.dot(ds, dt))) < 1e-8


class TestFundamentalPiece:
    def test_shape_and_extremes(self):
        p = SurfaceParams(-0.5, 2.5)
        n = 201
        piece = fundamental_piece(p, n)
        assert len(piece) == n
        radii = np.hypot(piece.xy()[:, 0], piece.xy()[:, 1])
        assert radii[0] == pytest.approx(radii[-1], abs=1e-10)
        assert np.argmin(radii) == n // 2
        from rotcmc.moduli import region_bounds
        m_hc, big_m = region_bounds(p)
        assert radii.min() >= math.sqrt(m_hc) - 1e-10
        assert radii.max() <= math.sqrt(big_m) + 1e-10

    def test_endpoint_angle_equals_K_mod_2pi(self):
        from rotcmc.angles import K
        for H, off in ((0.9, 2.0), (-0.5, 0.4), (-0.5, 4.0)):
            p = SurfaceParams(H, c_min(H) + off)
            piece = fundamental_piece(p, 401, tol=1e-10)
            first, last = piece.points[0], piece.points[-1]
            swept = math.atan2(last.y, last.x) - math.atan2(first.y, first.x)
            want = K(p).value
            assert math.remainder(swept - want, 2 * math.pi) == pytest.approx(
                0.0, abs=1e-8)

    def test_axis_endpoint_angle_is_b_plus_pi_mod_2pi(self):
        # the axis-case piece runs through the origin, flipping the polar
        # angle by pi: endpoints subtend b(H) + pi, not b(H)
        from rotcmc.angles import b
        p = SurfaceParams(-1.0, 1.0)
        piece = fundamental_piece(p, 401, tol=1e-10)
        first, last = piece.points[0], piece.points[-1]
        swept = math.atan2(last.y, last.x) - math.atan2(first.y, first.x)
        want = b(-1.0).value + math.pi
        assert math.remainder(swept - want, 2 * math.pi) == pytest.approx(
            0.0, abs=1e-8)

    def test_sample_count_validation(self):
        p = SurfaceParams(0.0, 3.0)
        with pytest.raises(DomainError):
            fundamental_piece(p, 1)


class TestPolyline:
    def test_validation(self):
        p = SurfaceParams(0.0, 3.0)
        with pytest.raises(DomainError):
            ProfilePolyline((), p)
        pts = (ProfilePoint(0.0, 0.1, 0.2), ProfilePoint(0.0, 0.2, 0.3))
        with pytest.raises(DomainError):
            ProfilePolyline(pts, p)

    def test_sample_beta_matches_pointwise(self):
        p = SurfaceParams(-0.8, 2.2)
        ts, xy = sample_beta(p, 0.1, 0.1 + p.period, 9, tol=1e-10)
        for t, (x, y) in zip(ts, xy):
            pt = profile_beta(p, float(t), tol=1e-10)
            assert (x, y) == pytest.approx((pt.x, pt.y), abs=1e-9)

    def test_theta_period_window_independence(self):
        p = SurfaceParams(-1.2, 0.9)
        thT = theta_period(p, "beta", 1e-10)
        ts, xy = sample_beta(p, 0.3, 0.3 + p.period, 3, tol=1e-10)
        # rotation by -theta(T) carries each sample one period forward
        om = -thT
        rot = np.array([[math.cos(om), -math.sin(om)],
                        [math.sin(om), math.cos(om)]])
        nxt = profile_beta(p, float(ts[0]) + p.period, tol=1e-10)
        assert np.allclose(rot @ xy[0], [nxt.x, nxt.y], atol=1e-9)
