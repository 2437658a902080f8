import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discordium import (
    DensityMatrix,
    DiagonalFieldParams,
    FamilyParams,
    GhzParams,
    binary_h,
    build_diagonal_field,
    build_noisy_ghz_dense,
    build_symmetric_family,
    closed_form_spectrum_3q,
    closed_form_spectrum_4q,
    diagonal_field_spectrum,
    ghz_spectrum,
    hermitian_eigenvalues,
    realize,
    spectrum_4q_printed,
    von_neumann_entropy,
)

from conftest import sample_physical_family


class TestBinaryH:
    def test_zero(self):
        assert binary_h(0.0, 0.0) == 0.0

    def test_edge_one(self):
        # 0*log 0 convention kills the second term
        assert binary_h(1.0, 0.0) == pytest.approx(2.0, abs=1e-15)

    def test_frozen_value(self):
        assert binary_h(0.2) == pytest.approx(0.05809881109066273, abs=1e-13)

    def test_domain_violation(self):
        with pytest.raises(ValueError):
            binary_h(1.5, 0.0)
        with pytest.raises(ValueError):
            binary_h(0.0, -1.5)

    @given(
        y=st.floats(-0.5, 1.0, allow_nan=False),
        t=st.floats(0.0, 1.0, allow_nan=False),
    )
    @settings(max_examples=100, deadline=None)
    def test_even_in_x(self, y, t):
        x = t * (1.0 + y)
        assert binary_h(x, y) == pytest.approx(binary_h(-x, y), abs=1e-12)

    def test_nondecreasing_in_x(self):
        for y in (0.0, 0.3, -0.4, 1.0):
            xs = np.linspace(0.0, 1.0 + y, 200)
            vals = [binary_h(float(x), y) for x in xs]
            assert all(b - a >= -1e-12 for a, b in zip(vals, vals[1:]))


class TestNumericSpectrum:
    def test_maximally_mixed(self):
        spec = hermitian_eigenvalues(DensityMatrix(3, np.eye(8) / 8))
        assert np.allclose(spec.eigenvalues, 0.125)
        assert spec.source == "numeric"

    def test_ghz_example(self):
        spec = hermitian_eigenvalues(build_noisy_ghz_dense(GhzParams(2, 0.5)))
        assert np.allclose(spec.eigenvalues, [0.625, 0.125, 0.125, 0.125], atol=1e-12)

    def test_descending_order(self, rng):
        params = sample_physical_family(rng, 3)
        ev = hermitian_eigenvalues(realize(build_symmetric_family(params))).eigenvalues
        assert np.all(np.diff(ev) <= 0)


class TestEntropy:
    def test_maximally_mixed_is_n(self):
        for n in range(1, 7):
            rho = DensityMatrix(n, np.eye(2**n) / 2**n)
            assert von_neumann_entropy(rho) == pytest.approx(n, abs=1e-12)

    def test_pure_ghz_zero(self):
        assert von_neumann_entropy(build_noisy_ghz_dense(GhzParams(3, 1.0))) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_ghz_half_mix(self):
        expected = -(3 * 0.125 * np.log2(0.125) + 0.625 * np.log2(0.625))
        got = von_neumann_entropy(build_noisy_ghz_dense(GhzParams(2, 0.5)))
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(1.5487949406953985, abs=1e-12)

    def test_rejects_unphysical(self):
        rho = realize(build_symmetric_family(FamilyParams(2, 1.0, 1.0, 1.0, 0.0)))
        with pytest.raises(ValueError):
            von_neumann_entropy(rho)


class TestClosedForm3q:
    def test_example_values(self):
        spec = closed_form_spectrum_3q(FamilyParams(3, 0.2, 0.2, 0.2, 0.1))
        r2 = np.sqrt(0.33)
        expected = sorted(
            [0.1625] * 3 + [0.0875] * 3 + [(1 + r2) / 8, (1 - r2) / 8], reverse=True
        )
        assert np.allclose(spec.eigenvalues, expected, atol=1e-12)
        assert spec.eigenvalues.sum() == pytest.approx(1.0, abs=1e-12)
        assert spec.source == "closed_form_3q"

    def test_all_zero(self):
        spec = closed_form_spectrum_3q(FamilyParams(3, 0.0, 0.0, 0.0, 0.0))
        assert np.allclose(spec.eigenvalues, 0.125)

    def test_single_coefficient(self):
        spec = closed_form_spectrum_3q(FamilyParams(3, 0.3, 0.0, 0.0, 0.0))
        assert np.allclose(np.sort(spec.eigenvalues), [0.0875] * 4 + [0.1625] * 4)

    def test_matches_dense_eigensolver(self, rng):
        for _ in range(50):
            params = sample_physical_family(rng, 3)
            cf = np.sort(closed_form_spectrum_3q(params).eigenvalues)
            nv = np.sort(
                hermitian_eigenvalues(realize(build_symmetric_family(params))).eigenvalues
            )
            assert np.max(np.abs(cf - nv)) <= 1e-10

    def test_wrong_size_rejected(self):
        with pytest.raises(ValueError):
            closed_form_spectrum_3q(FamilyParams(4, 0.1, 0.1, 0.1, 0.0))


class TestClosedForm4q:
    def test_matches_dense_eigensolver(self, rng):
        for _ in range(50):
            params = sample_physical_family(rng, 4)
            cf = np.sort(closed_form_spectrum_4q(params).eigenvalues)
            nv = np.sort(
                hermitian_eigenvalues(realize(build_symmetric_family(params))).eigenvalues
            )
            assert np.max(np.abs(cf - nv)) <= 1e-10

    def test_all_zero(self):
        spec = closed_form_spectrum_4q(FamilyParams(4, 0.0, 0.0, 0.0, 0.0))
        assert np.allclose(spec.eigenvalues, 1 / 16)

    def test_spot_example(self, rng):
        params = FamilyParams(4, 0.2, 0.1, -0.2, 0.05)
        cf = np.sort(closed_form_spectrum_4q(params).eigenvalues)
        nv = np.sort(hermitian_eigenvalues(realize(build_symmetric_family(params))).eigenvalues)
        assert np.max(np.abs(cf - nv)) <= 1e-10

    def test_printed_variant_trace_deficit(self, rng):
        # the superseded lambda_j makes the printed spectrum sum to 1 - 6 c3/16
        for _ in range(10):
            params = sample_physical_family(rng, 4)
            if abs(params.c3) <= 1e-3:
                continue
            printed = spectrum_4q_printed(params)
            assert printed.sum() == pytest.approx(1.0 - 6 * params.c3 / 16, abs=1e-12)
            # symbolic form of the deficit: 6/16 + 8(1-c3)/16 + 2(1+c3)/16
            symbolic = (6 + 8 * (1 - params.c3) + 2 * (1 + params.c3)) / 16
            assert symbolic == pytest.approx(1.0 - 6 * params.c3 / 16, abs=1e-15)

    def test_printed_variant_fails_numeric_match(self, rng):
        # must disagree with the true spectrum whenever |c3| is not tiny
        found = 0
        for _ in range(20):
            params = sample_physical_family(rng, 4)
            if abs(params.c3) <= 1e-3:
                continue
            printed = np.sort(spectrum_4q_printed(params))
            nv = np.sort(
                hermitian_eigenvalues(realize(build_symmetric_family(params))).eigenvalues
            )
            assert np.max(np.abs(printed - nv)) > 1e-10
            found += 1
        assert found >= 10


class TestFamilySpectra:
    def test_ghz_spectrum_matches_dense(self):
        for n in (2, 3, 4):
            for mu in (0.0, 0.3, 1.0):
                params = GhzParams(n, mu)
                cf = np.sort(ghz_spectrum(params).eigenvalues)
                nv = np.sort(hermitian_eigenvalues(build_noisy_ghz_dense(params)).eigenvalues)
                assert np.max(np.abs(cf - nv)) <= 1e-12

    def test_diagonal_spectrum_matches_dense(self):
        params = DiagonalFieldParams((0.3, -0.2, 0.4))
        cf = np.sort(diagonal_field_spectrum(params).eigenvalues)
        nv = np.sort(hermitian_eigenvalues(realize(build_diagonal_field(params))).eigenvalues)
        assert np.max(np.abs(cf - nv)) <= 1e-12
