import math

import numpy as np
import pytest

from conftest import valid_grid
from kcbs_lab import (
    BinaryTest,
    CanonicalContextParams,
    DomainError,
    NotAContext,
    Z_STATE,
    chi1_of,
    chi2_of,
    context_joint_qm,
    gauge_fix,
    inner,
    make_ray,
    rotate_z,
    solve_omega,
    validate_domain,
)

HALF_PI = math.pi / 2


def closed_form_chi2(z, t, rho):
    """-(cos t / tan z) * (1, e^{i rho} sqrt(tan^2 z tan^2 t - 1), -tan z)"""
    root = math.sqrt(max(0.0, math.tan(z) ** 2 * math.tan(t) ** 2 - 1))
    k = -math.cos(t) / math.tan(z)
    return np.array([k, k * np.exp(1j * rho) * root, -k * math.tan(z)])


def random_orthogonal_pair(rng):
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    a /= np.linalg.norm(a)
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = v - np.vdot(a, v) * a
    return make_ray(*a), make_ray(*b)


class TestChi1:
    def test_values(self):
        assert chi1_of(0).isclose(Z_STATE, 0)
        assert chi1_of(HALF_PI).isclose(make_ray(1, 0, 0), 1e-15)
        r = chi1_of(math.pi / 3)
        assert r.c0.real == pytest.approx(0.8660254038, abs=1e-10)
        assert r.c1 == 0
        assert r.c2.real == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("z", [-0.1, 1.6])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            chi1_of(z)


class TestSolveOmega:
    def test_upper_boundary(self):
        assert solve_omega(math.pi / 4, 3 * math.pi / 4) == pytest.approx(0.0, abs=1e-7)

    def test_equator(self):
        assert solve_omega(math.pi / 4, HALF_PI) == HALF_PI

    def test_interior(self):
        # cos w = -1 / (sqrt 3 * -sqrt 3) = 1/3
        w = solve_omega(math.pi / 3, 2 * math.pi / 3)
        assert w == pytest.approx(1.2309594173, abs=1e-10)
        t = 2 * math.pi / 3
        b = make_ray(math.sin(t) * math.cos(w), math.sin(t) * math.sin(w), math.cos(t))
        assert abs(inner(chi1_of(math.pi / 3), b)) < 1e-12

    def test_matches_formula(self):
        for z, t in valid_grid(12):
            w = solve_omega(z, t)
            assert 0 <= w <= HALF_PI
            assert math.cos(w) == pytest.approx(-1 / (math.tan(z) * math.tan(t)), abs=1e-12)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            solve_omega(math.pi / 4, 3 * math.pi / 4 + 0.01)
        with pytest.raises(DomainError):
            solve_omega(0.0, 2.0)


class TestChi2:
    def test_boundary_example(self):
        r = chi2_of(math.pi / 4, 3 * math.pi / 4, 0.0)
        s = math.sqrt(0.5)
        assert r.isclose(make_ray(s, 0, -s), 1e-7)
        assert abs(inner(r, make_ray(s, 0, s))) < 1e-10

    @pytest.mark.parametrize("rho", [0.0, 1.0, 4.0])
    def test_equator(self, rho):
        assert chi2_of(math.pi / 4, HALF_PI, rho).isclose(make_ray(0, 1, 0), 1e-15)

    def test_closed_form_agreement(self, rng):
        for z, t in valid_grid(15):
            rho = rng.uniform(0, 2 * math.pi)
            got = np.array(chi2_of(z, t, rho).components)
            ref = closed_form_chi2(z, t, rho)
            assert abs(np.linalg.norm(ref) - 1) < 1e-9
            assert abs(abs(np.vdot(ref, got)) - 1) < 1e-9

    def test_orthogonal_and_born(self, rng):
        for z, t in valid_grid(30):
            rho = rng.uniform(0, 2 * math.pi)
            b = chi2_of(z, t, rho)
            assert abs(inner(chi1_of(z), b)) < 1e-10
            assert abs(abs(inner(b, Z_STATE)) ** 2 - math.cos(t) ** 2) < 1e-12
            assert abs(b.c2) == pytest.approx(-math.cos(t), abs=1e-12)

    def test_mu_is_zero(self):
        # first component is real and nonnegative, no extra phase
        for z, t in valid_grid(10):
            c0 = chi2_of(z, t, 0.7).c0
            assert c0.imag == 0 and c0.real >= 0


class TestValidateDomain:
    @pytest.mark.parametrize(
        "z,t,ok",
        [
            (math.pi / 4, 3 * math.pi / 4, True),
            (math.pi / 4, 3 * math.pi / 4 + 0.01, False),
            (0.0, HALF_PI, True),
            (HALF_PI, math.pi, True),
            (-0.01, HALF_PI, False),
            (1.0, HALF_PI - 0.01, False),
            (float("nan"), HALF_PI, False),
        ],
    )
    def test_cases(self, z, t, ok):
        assert validate_domain(z, t) is ok

    def test_params_reject_invalid(self):
        with pytest.raises(DomainError):
            CanonicalContextParams(math.pi / 4, 3.0)
        with pytest.raises(DomainError):
            CanonicalContextParams(math.pi / 4, 2.0, rho=7.0)


class TestGaugeFix:
    def test_pentagram_pair(self, pentagram):
        params = gauge_fix(Z_STATE, pentagram.vectors[0], pentagram.vectors[1])
        # |<chi_i|psi>|^2 = 1/sqrt 5 for both tests
        assert params.zeta_canon == pytest.approx(math.acos(5 ** -0.25), abs=1e-12)
        assert params.zeta_canon == pytest.approx(0.8382831192, abs=1e-10)
        assert params.theta == pytest.approx(math.pi - params.zeta_canon, abs=1e-12)
        assert params.theta == pytest.approx(2.3033095344, abs=1e-10)
        assert params.rho == 0

    def test_all_pentagram_contexts_equivalent(self, pentagram):
        ps = [gauge_fix(Z_STATE, pentagram.vectors[i], pentagram.vectors[j]) for i, j in pentagram.contexts()]
        for p in ps[1:]:
            assert p.zeta_canon == pytest.approx(ps[0].zeta_canon, abs=1e-12)
            assert p.theta == pytest.approx(ps[0].theta, abs=1e-12)

    def test_trivial_pairs(self):
        p = gauge_fix(Z_STATE, make_ray(1, 0, 0), make_ray(0, 1, 0))
        assert (p.zeta_canon, p.theta) == pytest.approx((HALF_PI, HALF_PI), abs=1e-15)
        p = gauge_fix(Z_STATE, Z_STATE, make_ray(1, 0, 0))
        assert (p.zeta_canon, p.theta) == pytest.approx((0.0, HALF_PI), abs=1e-15)

    def test_order_sensitive(self):
        a, b = chi1_of(0.4), chi2_of(0.4, 1.8)
        p, q = gauge_fix(Z_STATE, a, b), gauge_fix(Z_STATE, b, a)
        da = context_joint_qm(Z_STATE, BinaryTest(a), BinaryTest(b))
        db = context_joint_qm(Z_STATE, BinaryTest(b), BinaryTest(a))
        assert (da.p_mp, da.p_pm) == pytest.approx((db.p_pm, db.p_mp), abs=1e-15)
        assert p != q

    def test_not_a_context(self):
        with pytest.raises(NotAContext):
            gauge_fix(Z_STATE, chi1_of(0.3), chi1_of(0.5))

    def test_requires_aligned_state(self):
        with pytest.raises(DomainError):
            gauge_fix(make_ray(1, 0, 0), Z_STATE, make_ray(0, 1, 0))

    def test_round_trip_grid(self, rng):
        for z, t in valid_grid(40):
            for rho in rng.uniform(0, 2 * math.pi, 2):
                p = gauge_fix(Z_STATE, chi1_of(z), chi2_of(z, t, rho))
                assert abs(p.zeta_canon - z) < 1e-10
                assert abs(p.theta - t) < 1e-10

    def test_domain_closure(self, rng):
        for _ in range(10_000):
            a, b = random_orthogonal_pair(rng)
            p = gauge_fix(Z_STATE, a, b)
            assert validate_domain(p.zeta_canon, p.theta)

    def test_domain_closure_span_edge(self, rng):
        # state inside span(a, b): theta sits exactly on pi/2 + zeta
        for z in rng.uniform(0, HALF_PI, 500):
            a = make_ray(math.sin(z), 0, math.cos(z))
            b = make_ray(math.cos(z), 0, -math.sin(z))
            p = gauge_fix(Z_STATE, a, b)
            assert validate_domain(p.zeta_canon, p.theta)
            assert p.theta <= HALF_PI + p.zeta_canon

    def test_gauge_invariance(self, rng):
        for _ in range(500):
            a, b = random_orthogonal_pair(rng)
            alpha = rng.uniform(0, 2 * math.pi)
            p = gauge_fix(Z_STATE, a, b)
            q = gauge_fix(Z_STATE, rotate_z(a, alpha), rotate_z(b, alpha))
            assert abs(p.zeta_canon - q.zeta_canon) < 1e-12
            assert abs(p.theta - q.theta) < 1e-12

    def test_distribution_preserved(self, rng):
        for _ in range(500):
            a, b = random_orthogonal_pair(rng)
            p = gauge_fix(Z_STATE, a, b)
            d = context_joint_qm(Z_STATE, BinaryTest(a), BinaryTest(b))
            e = context_joint_qm(Z_STATE, BinaryTest(chi1_of(p.zeta_canon)), BinaryTest(chi2_of(p.zeta_canon, p.theta)))
            assert d.max_abs_diff(e) < 1e-10
