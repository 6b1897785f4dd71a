"""Unit tests for Lorentzian reconstruction and the counting integral."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resdelay.counting import (
    count_resonances,
    gamma_from_peak,
    lorentzian_sum,
    reconstruction_report,
)
from resdelay.errors import SpuriousIncluded
from resdelay.numerics import Curve, find_extrema
from resdelay.poles import RESONANCE, SPURIOUS, Pole


def res_pole(e0, gamma):
    return Pole(complex(e0, -gamma / 2), residual=0.0, classification=RESONANCE)


class TestLorentzianSum:
    def test_peak_height(self):
        assert lorentzian_sum([res_pole(5.0, 0.2)], 5.0) == pytest.approx(10.0)

    def test_half_width(self):
        p = [res_pole(5.0, 0.2)]
        assert lorentzian_sum(p, 5.1) == pytest.approx(5.0)
        assert lorentzian_sum(p, 4.9) == pytest.approx(5.0)

    def test_spurious_rejected(self):
        bad = Pole(1.0 - 2.0j, residual=0.0, classification=SPURIOUS)
        with pytest.raises(SpuriousIncluded):
            lorentzian_sum([bad], 1.0)

    @given(
        e0=st.floats(1.0, 50.0),
        gamma=st.floats(0.01, 5.0),
        e=st.floats(0.0, 60.0),
    )
    @settings(max_examples=200)
    def test_positive_and_symmetric(self, e0, gamma, e):
        p = [res_pole(e0, gamma)]
        v = lorentzian_sum(p, e)
        assert v > 0
        mirrored = lorentzian_sum(p, 2 * e0 - e)
        assert v == pytest.approx(mirrored, rel=1e-12)


class TestCountResonances:
    def test_single_lorentzian_counts_one(self):
        e0, gamma = 50.0, 1.0

        def lor(e):
            return (gamma / 2) / ((e - e0) ** 2 + gamma**2 / 4)

        rep = count_resonances(lor, 0.0, 1e4, tol=1e-9)
        # arctan antiderivative over the truncated window
        exact = (
            math.atan(2 * (1e4 - e0) / gamma) + math.atan(2 * e0 / gamma)
        ) / math.pi
        assert rep.n_R == pytest.approx(exact, abs=1e-6)
        assert rep.n_R == pytest.approx(1.0, abs=0.005)
        assert rep.N == 0 or rep.near_integer

    def test_zero_function(self):
        rep = count_resonances(lambda e: 0.0, 0.0, 10.0, tol=1e-10)
        assert rep.n_R == 0.0

    def test_split_fields_consistent(self):
        rep = count_resonances(lambda e: 0.5, 1.0, 10.0, tol=1e-10)
        assert rep.n_R == pytest.approx(rep.N + rep.Delta, abs=1e-12)
        assert 0.0 <= rep.Delta < 1.0

    def test_additivity(self):
        def f(e):
            return math.sin(e) ** 2 / (1 + e)

        tol = 1e-9
        ab = count_resonances(f, 1.0, 5.0, tol).n_R
        bc = count_resonances(f, 5.0, 9.0, tol).n_R
        ac = count_resonances(f, 1.0, 9.0, tol).n_R
        assert ab + bc == pytest.approx(ac, abs=2 * tol + 1e-9)

    def test_lorentzian_comb(self):
        # isolated narrow resonances each contribute ~1
        centers = [10.0, 30.0, 50.0]
        gamma = 0.05

        def comb(e):
            return sum(
                (gamma / 2) / ((e - c) ** 2 + gamma**2 / 4) for c in centers
            )

        rep = count_resonances(comb, 0.0, 60.0, tol=1e-9)
        expected = len(centers)
        # each pole leaks Gamma/(pi * distance-to-boundary) at worst
        assert rep.n_R == pytest.approx(expected, abs=0.01)

    def test_invalid_range(self):
        with pytest.raises(ValueError):
            count_resonances(lambda e: 0.0, 5.0, 1.0, tol=1e-8)


class TestGammaFromPeak:
    def test_inversion(self):
        assert gamma_from_peak(10.0) == pytest.approx(0.2)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            gamma_from_peak(0.0)

    def test_duality_with_find_extrema(self):
        e0, gamma = 5.0, 0.3
        e = np.linspace(2.0, 8.0, 6000)
        v = (gamma / 2) / ((e - e0) ** 2 + gamma**2 / 4)
        peak = max(
            (p for p in find_extrema(Curve(e, v)) if p.kind == "max"),
            key=lambda p: p.height,
        )
        assert gamma_from_peak(peak.height) == pytest.approx(gamma, rel=1e-3)


class TestReconstructionReport:
    def test_round_trip_is_exact(self):
        poles = [res_pole(2.0, 0.4), res_pole(6.0, 0.8)]
        e = np.linspace(0.5, 10.0, 500)
        v = np.array([lorentzian_sum(poles, x) for x in e])
        rep = reconstruction_report(Curve(e, v), poles)
        assert rep.max_rel_error < 1e-12
        assert rep.l2_rel_error < 1e-12

    def test_l2_bounded_by_max(self):
        poles = [res_pole(2.0, 0.4)]
        e = np.linspace(0.5, 10.0, 500)
        v = np.array([lorentzian_sum(poles, x) for x in e]) * 1.05
        rep = reconstruction_report(Curve(e, v), poles)
        assert rep.l2_rel_error <= rep.max_rel_error + 1e-15

    def test_extra_pole_worsens_fit(self):
        true = [res_pole(2.0, 0.4)]
        e = np.linspace(0.5, 10.0, 500)
        v = np.array([lorentzian_sum(true, x) for x in e])
        clean = reconstruction_report(Curve(e, v), true)
        polluted = reconstruction_report(
            Curve(e, v), true + [res_pole(5.0, 6.0)]
        )
        assert polluted.max_rel_error > clean.max_rel_error
