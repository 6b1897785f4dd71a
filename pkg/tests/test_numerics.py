"""Unit tests for the special-function / root-finding / quadrature substrate."""
import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resdelay.errors import (
    MaxDepthExceeded,
    NoConvergence,
    PoleOfGamma,
    ZeroArgument,
)
from resdelay.numerics import (
    Curve,
    bessel_j,
    complex_gamma,
    find_extrema,
    integrate,
    newton_complex,
    sph_bessel,
)

mpmath.mp.dps = 30


# ---------------------------------------------------------------------------
# complex_gamma
# ---------------------------------------------------------------------------

class TestComplexGamma:
    @pytest.mark.parametrize("z, expected", [(1.0, 1.0), (5.0, 24.0)])
    def test_integer_values(self, z, expected):
        assert complex_gamma(z) == pytest.approx(expected, rel=1e-12)

    def test_half(self):
        assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    @pytest.mark.parametrize(
        "z", [2.5 + 1.5j, -3.2 + 0.7j, 0.1 - 4.0j, 10.0 + 10.0j, -0.5 - 0.5j]
    )
    def test_against_mpmath(self, z):
        ref = complex(mpmath.gamma(z))
        assert complex_gamma(z) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("z", [0.0, -1.0, -7.0, -3.0 + 1e-13j])
    def test_pole_rejection(self, z):
        with pytest.raises(PoleOfGamma):
            complex_gamma(z)

    @given(
        st.complex_numbers(
            min_magnitude=0.05, max_magnitude=20.0, allow_nan=False
        )
    )
    @settings(max_examples=200)
    def test_recurrence(self, z):
        # Gamma(z+1) = z Gamma(z); skip draws too close to the poles
        if abs(z.imag) < 1e-3 and z.real < 0.5:
            return
        lhs = complex_gamma(z + 1)
        rhs = z * complex_gamma(z)
        assert abs(lhs - rhs) <= 1e-11 * max(abs(lhs), abs(rhs))


# ---------------------------------------------------------------------------
# bessel_j
# ---------------------------------------------------------------------------

class TestBesselJ:
    def test_origin(self):
        v, d = bessel_j(0.0, 0.0)
        assert v == pytest.approx(1.0)
        assert d == pytest.approx(0.0)

    def test_first_zero_of_j0(self):
        v, _ = bessel_j(0.0, 2.404825557695773)
        assert abs(v) < 1e-9

    def test_small_argument_j1(self):
        v, _ = bessel_j(1.0, 0.001)
        assert v == pytest.approx(0.0005, abs=1e-9)

    @pytest.mark.parametrize(
        "nu, z",
        [
            (0.5, 1.0),
            (-1.3 + 0.4j, 2.5),
            (2.0 - 3.0j, 0.7 + 0.1j),
            (-2j * 1.31 * cmath.sqrt(0.0445), 2.62),  # reflectometry regime
            (3.7, 4.0),
        ],
    )
    def test_value_and_derivative_against_mpmath(self, nu, z):
        v, d = bessel_j(nu, z)
        ref_v = complex(mpmath.besselj(nu, z))
        ref_d = complex(mpmath.besselj(nu, z, derivative=1))
        assert v == pytest.approx(ref_v, rel=1e-10, abs=1e-12)
        assert d == pytest.approx(ref_d, rel=1e-9, abs=1e-11)

    @given(
        nu_re=st.floats(-3.0, 3.0),
        nu_im=st.floats(-2.0, 2.0),
        z=st.floats(0.5, 5.0),
    )
    @settings(max_examples=100)
    def test_cross_order_wronskian(self, nu_re, nu_im, z):
        # J_nu J'_-nu - J'_nu J_-nu = -2 sin(nu pi)/(pi z)
        nu = complex(nu_re, nu_im)
        if abs(nu - round(nu.real)) < 0.05 and abs(nu.imag) < 0.05:
            return  # identity degenerates at integer order
        jp, dp = bessel_j(nu, z)
        jm, dm = bessel_j(-nu, z)
        lhs = jp * dm - dp * jm
        rhs = -2.0 * cmath.sin(nu * cmath.pi) / (cmath.pi * z)
        assert abs(lhs - rhs) <= 1e-8 * max(1e-30, abs(rhs))

    def test_branch_ambiguity_at_origin(self):
        from resdelay.errors import BranchAmbiguity

        with pytest.raises(BranchAmbiguity):
            bessel_j(-0.5, 0.0)

    def test_argument_cap(self):
        with pytest.raises(ValueError):
            bessel_j(0.0, 60.0)


# ---------------------------------------------------------------------------
# sph_bessel
# ---------------------------------------------------------------------------

class TestSphBessel:
    def test_l0_at_half_pi(self):
        j, jp, n, np_, h1, h1p = sph_bessel(0, math.pi / 2)
        assert j == pytest.approx(2 / math.pi, abs=1e-12)
        assert n == pytest.approx(0.0, abs=1e-12)

    def test_small_argument_l1(self):
        # j_1(z) = z/3 (1 - z^2/10 + ...), so the linear limit holds to z^2/10
        j, *_ = sph_bessel(1, 0.01)
        assert j == pytest.approx(0.01 / 3, rel=2e-5)
        assert j == pytest.approx(0.01 / 3 * (1 - 0.01**2 / 10), rel=1e-8)

    def test_zero_argument_rejected(self):
        with pytest.raises(ZeroArgument):
            sph_bessel(3, 0.0)

    @pytest.mark.parametrize("l, z", [(5, 3.7), (9, 1.2), (10, 22.0), (2, 0.3)])
    def test_against_mpmath(self, l, z):
        j, jp, n, np_, h1, h1p = sph_bessel(l, z)
        ref_j = complex(mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.besselj(l + 0.5, z))
        ref_n = complex(mpmath.sqrt(mpmath.pi / (2 * z)) * mpmath.bessely(l + 0.5, z))
        assert j == pytest.approx(ref_j, rel=1e-9, abs=1e-12)
        assert n == pytest.approx(ref_n, rel=1e-9, abs=1e-12)
        assert h1 == pytest.approx(ref_j + 1j * ref_n, rel=1e-9, abs=1e-12)

    @given(
        l=st.integers(0, 10),
        re=st.floats(0.1, 20.0),
        im=st.floats(-3.0, 3.0),
    )
    @settings(max_examples=150)
    def test_wronskian(self, l, re, im):
        z = complex(re, im)
        if not 0.1 <= abs(z) <= 20.0:
            return
        j, jp, n, np_, _, _ = sph_bessel(l, z)
        w = j * np_ - jp * n
        ref = 1.0 / (z * z)
        assert abs(w - ref) <= 1e-9 * abs(ref)

    def test_hankel_derivative_consistency(self):
        # h1' must equal j' + i n'
        for l, z in ((0, 1.0), (4, 2.5 + 0.5j), (10, 8.0)):
            j, jp, n, np_, h1, h1p = sph_bessel(l, z)
            assert h1p == pytest.approx(jp + 1j * np_, rel=1e-12, abs=1e-14)


# ---------------------------------------------------------------------------
# newton_complex
# ---------------------------------------------------------------------------

class TestNewtonComplex:
    def test_square_root_of_minus_one(self):
        z = newton_complex(lambda z: z * z + 1, 0.5 + 0.8j, 1e-12, 50)
        assert z == pytest.approx(1j, abs=1e-10)

    def test_cube_root_of_unity(self):
        z = newton_complex(lambda z: z**3 - 1, 1.2, 1e-12, 50)
        assert z == pytest.approx(1.0, abs=1e-10)

    def test_pole_condition_seed(self):
        # s-wave outgoing-wave condition of a depth-5, range-2 well
        def f(E):
            k = cmath.sqrt(E)
            p = cmath.sqrt(E + 5)
            return 1j * k * cmath.tan(p * 2) - p

        z = newton_complex(f, 9 - 4j, 1e-10, 60)
        assert z.real == pytest.approx(9.38265, abs=1e-4)
        assert z.imag == pytest.approx(-4.43007, abs=1e-4)

    def test_no_convergence_carries_state(self):
        with pytest.raises(NoConvergence) as err:
            newton_complex(lambda z: z * z + 1, 10.0 + 0j, 1e-14, 3)
        assert err.value.last_iterate is not None
        assert err.value.residual > 0

    def test_residual_guarantee(self):
        tol = 1e-9
        z = newton_complex(lambda z: cmath.exp(z) - 2, 0.5, tol, 50)
        assert abs(cmath.exp(z) - 2) <= tol


# ---------------------------------------------------------------------------
# integrate
# ---------------------------------------------------------------------------

class TestIntegrate:
    def test_polynomial(self):
        q = integrate(lambda x: x * x, 0.0, 1.0, 1e-12)
        assert q.value == pytest.approx(1.0 / 3.0, abs=1e-10)

    def test_sine(self):
        q = integrate(math.sin, 0.0, math.pi, 1e-12)
        assert q.value == pytest.approx(2.0, abs=1e-10)

    def test_lorentzian_truncation_matches_arctan(self):
        e0, gamma = 3.0, 0.4

        def lor(e):
            return (gamma / 2) / ((e - e0) ** 2 + gamma**2 / 4)

        a, b = e0 - 50 * gamma, e0 + 50 * gamma
        q = integrate(lor, a, b, 1e-10)
        # antiderivative arctan((E-E0)/(Gamma/2)): each tail loses
        # pi/2 - atan(100), so the truncated value is 2 atan(100)
        exact = 2 * math.atan(100.0)
        assert q.value == pytest.approx(exact, abs=1e-6)

    def test_reversal_antisymmetry(self):
        fwd = integrate(math.exp, 0.0, 2.0, 1e-10).value
        bwd = integrate(math.exp, 2.0, 0.0, 1e-10).value
        assert fwd == pytest.approx(-bwd, abs=1e-12)

    def test_non_integrable_feature(self):
        # pole at 1/3 (never hit exactly by the dyadic sample points)
        with pytest.raises(MaxDepthExceeded):
            integrate(lambda x: 1.0 / (x - 1.0 / 3.0), 0.0, 1.0, 1e-12)

    def test_reports_evaluations(self):
        q = integrate(math.cos, 0.0, 1.0, 1e-8)
        assert q.evaluations > 0
        assert q.error_bound >= 0


# ---------------------------------------------------------------------------
# Curve / find_extrema
# ---------------------------------------------------------------------------

class TestCurve:
    def test_rejects_non_monotone_energies(self):
        with pytest.raises(ValueError):
            Curve(np.array([0.0, 1.0, 1.0]), np.zeros(3))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            Curve(np.array([0.0, 1.0]), np.zeros(3))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Curve(np.array([0.0, 1.0, 2.0]), np.array([0.0, np.inf, 1.0]))


class TestFindExtrema:
    def test_single_lorentzian(self):
        e0, gamma = 5.0, 0.5
        e = np.linspace(e0 - 10 * gamma, e0 + 10 * gamma, 801)
        v = (gamma / 2) / ((e - e0) ** 2 + gamma**2 / 4)
        peaks = [p for p in find_extrema(Curve(e, v)) if p.kind == "max"]
        assert len(peaks) == 1
        step = e[1] - e[0]
        assert abs(peaks[0].position - e0) <= step
        assert peaks[0].height == pytest.approx(2 / gamma, rel=0.01)

    def test_monotone_curve_is_empty(self):
        e = np.linspace(0, 1, 50)
        assert find_extrema(Curve(e, e**2)) == []

    def test_two_lorentzians(self):
        def lor(e, e0, g):
            return (g / 2) / ((e - e0) ** 2 + g**2 / 4)

        e = np.linspace(0.5, 10.0, 4000)
        v = lor(e, 2.0, 0.5) + lor(e, 8.0, 0.5)
        maxima = [p for p in find_extrema(Curve(e, v)) if p.kind == "max"]
        assert len(maxima) == 2
        assert maxima[0].position == pytest.approx(2.0, rel=0.01)
        assert maxima[1].position == pytest.approx(8.0, rel=0.01)

    def test_endpoints_never_reported(self):
        e = np.linspace(0, 2 * math.pi, 100)
        peaks = find_extrema(Curve(e, np.cos(e)))
        for p in peaks:
            assert e[0] < p.position < e[-1]
