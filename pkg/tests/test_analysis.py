import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinlab.analysis import (
    SpectrumEntanglementProfile,
    average_ee,
    best_intercept,
    c0_profile,
    dicke_average,
    dicke_average_lower_bound,
    dicke_average_upper_bound,
    dicke_basis_entropies,
    dos_histogram,
    ee_distribution,
    entanglement_dips,
    fixed_intercept_fit,
    intercept_grid,
    lmg_average,
    lmg_sector_entropies,
    moving_average,
    normalized_average,
    s_max,
    superposition_average,
    superposition_basis_entropies,
)
from spinlab.entangle import dicke_entropies
from spinlab.errors import DomainError
from spinlab.lmg import LmgParams, isotropic_spectrum
from spinlab.symspace import Bipartition, sector_indices


class TestAverages:
    def test_all_equal(self):
        assert average_ee([0.7] * 9) == pytest.approx(0.7, abs=1e-15)

    def test_empty(self):
        with pytest.raises(DomainError):
            average_ee([])

    def test_normalized_sample(self):
        sample = normalized_average([1.0, 2.0], 10, 0.5, "dicke")
        assert sample.s_max == math.log2(6)
        assert sample.normalized == pytest.approx(1.5 / math.log2(6))

    def test_dicke_between_bounds(self):
        n = 10_000
        sample = dicke_average(n, 0.5)
        lo = dicke_average_lower_bound(n, 0.5) / sample.s_max
        hi = dicke_average_upper_bound(n, 0.5) / sample.s_max
        assert lo < sample.normalized < hi

    def test_superposition_exceeds_dicke(self):
        gap = superposition_average(512, 0.5).avg_ee - dicke_average(512, 0.5).avg_ee
        assert 0.4 < gap < 1.0

    def test_superposition_basis_size_and_numeric_path(self):
        # below p = 1/2 every state goes through the reduced density matrix
        ent = superposition_basis_entropies(24, 0.25)
        assert ent.size == 25
        ent_half = superposition_basis_entropies(24, 0.5)
        assert ent_half.size == 25
        assert np.all(ent_half <= math.log2(13) + 1e-12)

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_normalized_in_unit_interval(self, n):
        for p in (0.25, 0.5):
            for sample in (dicke_average(n, p), superposition_average(n, p),
                           lmg_average(LmgParams(5, -3, 1), n, p)):
                assert 0 < sample.normalized <= 1
                if p * n >= 2 or sample.basis_label != "superposition":
                    assert sample.normalized < 1

    def test_single_qubit_superposition_average_saturates(self):
        # every superposition-basis state carries exactly one bit on one qubit
        assert superposition_average(4, 0.25).normalized == pytest.approx(1, abs=1e-12)


class TestBounds:
    def test_difference_limit(self):
        n = 10**12
        gap = dicke_average_upper_bound(n, 0.3) - dicke_average_lower_bound(n, 0.3)
        assert gap == pytest.approx(0.5 * math.log2(2 * math.e**2), abs=1e-9)

    @pytest.mark.parametrize("p", [0.25, 0.5])
    def test_sandwich_at_ten_thousand(self, p):
        avg = dicke_average(10_000, p).avg_ee
        assert dicke_average_lower_bound(10_000, p) < avg < dicke_average_upper_bound(10_000, p)

    def test_domain(self):
        with pytest.raises(DomainError):
            dicke_average_upper_bound(100, 0.6)
        with pytest.raises(DomainError):
            dicke_average_lower_bound(100, 0.0)


class TestFit:
    def test_exact_line(self):
        x = np.array([0.1, 0.2, 0.3, 0.5])
        fit = fixed_intercept_fit(x, 0.5 + 0.3 * x, 0.5)
        assert fit.intercept_a == 0.5 and fit.fixed_intercept
        assert fit.slope_b == pytest.approx(0.3, abs=1e-12)
        assert fit.r_squared == pytest.approx(1, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-2, 2), st.floats(-5, 5), st.lists(st.floats(0.01, 1), min_size=2, max_size=8,
                                                        unique=True))
    def test_line_recovered(self, a, b, xs):
        x = np.array(xs)
        if np.ptp(x) < 1e-3 or abs(b) < 1e-2:
            return  # flat data makes R^2 a ratio of round-off terms
        fit = fixed_intercept_fit(x, a + b * x, a)
        assert fit.slope_b == pytest.approx(b, abs=1e-12 * max(1, abs(b)) * 10)
        assert fit.r_squared <= 1
        assert fit.one_minus_r2 == pytest.approx(0, abs=1e-12)

    def test_slope_formula(self):
        x, y = np.array([1.0, 2.0, 4.0]), np.array([1.0, 1.2, 2.5])
        fit = fixed_intercept_fit(x, y, 0.4)
        assert fit.slope_b == pytest.approx(np.dot(x, y - 0.4) / np.dot(x, x))
        resid = np.sum((y - 0.4 - fit.slope_b * x) ** 2)
        assert fit.one_minus_r2 == pytest.approx(resid / np.sum((y - y.mean()) ** 2))

    def test_degenerate_x(self):
        with pytest.raises(DomainError):
            fixed_intercept_fit([0.1, 0.1], [0.5, 0.6], 0.5)
        with pytest.raises(DomainError):
            fixed_intercept_fit([0.1], [0.5], 0.5)

    def test_scan_finds_true_intercept(self):
        x = np.linspace(0.05, 0.12, 6)
        y = 0.503 + 0.1 * x
        assert best_intercept(x, y, intercept_grid(0.48, 0.52, 0.001)) == pytest.approx(0.503)

    def test_grid(self):
        g = intercept_grid(0.48, 0.52, 0.001)
        assert g.size == 41 and g[0] == 0.48 and g[-1] == pytest.approx(0.52, abs=1e-15)
        with pytest.raises(DomainError):
            intercept_grid(0.5, 0.4, 0.01)


class TestC0:
    def test_half_cut_row_matches_average(self):
        row = c0_profile(None, 512, [0.125, 0.5], "both")[-1]
        assert row.c0 == dicke_average(512, 0.5).normalized
        assert row.s_max == s_max(512, 0.5)

    def test_lmg_rows(self):
        rows = c0_profile(LmgParams(5, -3, 1), 64, [0.125, 0.25, 0.5])
        assert [r.fraction for r in rows] == [0.125, 0.25, 0.5]
        assert rows[-1].c0 == lmg_average(LmgParams(5, -3, 1), 64, 0.5).normalized

    def test_non_integer_subsystem(self):
        with pytest.raises(DomainError):
            c0_profile(None, 100, [0.125])


class TestDistribution:
    def test_isotropic_profile_is_dicke(self):
        n = 64
        prof = ee_distribution(LmgParams(1, 1, 1), n, 0.5)
        idx = sector_indices(n, "positive")
        energies = isotropic_spectrum(1, 1, n)[idx]
        order = np.argsort(energies)
        ref = dicke_entropies(n, Bipartition.half(n), idx[order])
        np.testing.assert_allclose(prof.entropies, ref, atol=1e-10)
        np.testing.assert_allclose(prof.scaled_energies, energies[order] / (n / 2), atol=1e-12)

    @pytest.mark.parametrize("sector", ["positive", "negative"])
    def test_isotropic_average_equals_dicke_sector(self, sector):
        n = 128
        lmg = lmg_average(LmgParams(0.7, 0.7, 1.3), n, 0.5, sector).avg_ee
        ref = dicke_average(n, 0.5, sector).avg_ee
        assert lmg == pytest.approx(ref, abs=1e-8)

    def test_both_sectors_merge(self):
        e, s = lmg_sector_entropies(LmgParams(2, 0.5, 1), 40, 0.5, "both")
        assert e.size == 41 and np.all(np.diff(e) >= 0)
        assert s.size == 41

    def test_histogram_counts_cover_sector(self):
        prof = ee_distribution(LmgParams(2, 0.5, 1), 200, 0.5)
        hist = dos_histogram(prof.scaled_energies, 101)
        assert hist.counts.sum() == 101  # positive sector dimension for N = 200
        lo, hi = hist.mode_interval()
        assert lo < hi

    def test_profile_sorted(self):
        prof = ee_distribution(LmgParams(5, 3, 1), 100)
        assert np.all(np.diff(prof.energies) >= 0)
        assert prof.entropies.size == prof.energies.size

    def test_moving_average(self):
        np.testing.assert_allclose(moving_average(np.arange(5.0), 3), [1, 2, 3])
        with pytest.raises(DomainError):
            moving_average(np.arange(3.0), 4)

    def test_dip_detector_on_synthetic_profile(self):
        eps = np.linspace(-2, 2, 801)
        ent = 5 - 2 * np.exp(-((eps - 0.4) / 0.05) ** 2) - 0.5 * eps**2
        prof = SpectrumEntanglementProfile(eps, eps, ent, "positive")
        dips = entanglement_dips(prof)
        assert dips.size == 1 and abs(dips[0] - 0.4) < 0.01

    def test_dips_exclude_edges(self):
        eps = np.linspace(-1, 1, 400)
        ent = eps**2  # one dip at the centre, edges rise
        prof = SpectrumEntanglementProfile(eps, eps, ent, "positive")
        assert np.allclose(entanglement_dips(prof), [0.0], atol=0.01)


def test_dicke_sector_entropies_partition_the_basis():
    n = 30
    full = dicke_basis_entropies(n, 0.5)
    pos = dicke_basis_entropies(n, 0.5, "positive")
    neg = dicke_basis_entropies(n, 0.5, "negative")
    np.testing.assert_allclose(np.sort(full), np.sort(np.concatenate([pos, neg])))
