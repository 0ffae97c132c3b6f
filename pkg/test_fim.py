"""Tests for the FIM assembly and the closed-form CRBs."""
import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import INSTANCE_SEEDS, make_echo, make_grid, random_instance
from src.ddcrb.otfs import phase, random_symbols, single_pilot, uniform_unit
from src.ddcrb.sensing import (
    CrbResult, Fim, crb_from_fim, crb_pipeline, d_tau, fim_assemble, fim_diagnostics, fim_sums,
)
from src.ddcrb.utils import SingularFimError
from src.ddcrb.validation import fd_derivative_vectors, inverse_diagonal, numeric_fim


def assert_fim_close(actual: Fim, expected: Fim, rel: float) -> None:
    assert actual.i_tau_tau == pytest.approx(expected.i_tau_tau, rel=rel)
    assert actual.i_nu_nu == pytest.approx(expected.i_nu_nu, rel=rel)
    # the coupling term is judged against the diagonal scale, it may be near zero
    scale = math.sqrt(expected.i_tau_tau * expected.i_nu_nu)
    assert abs(actual.i_tau_nu - expected.i_tau_nu) <= rel * scale


def loop_fim(x: np.ndarray, p, grid) -> Fim:
    """FIM from derivative vectors built cell by cell with the scalar phase term."""
    mn = grid.n_dd
    amp = p.amplitude
    mu = np.zeros(mn, dtype=complex)
    dn = np.zeros(mn, dtype=complex)
    dt = np.zeros(mn, dtype=complex)
    for l in range(grid.n_doppler_bins):
        for k in range(grid.m_delay_bins):
            cell = grid.flat_index(l, k)
            for n in range(grid.n_doppler_bins):
                for i in range(grid.m_delay_bins):
                    term = x[n, i] * np.exp(1j * phase(n, i, l, k, p.nu_t, p.tau_t, grid)) / math.sqrt(mn)
                    mu[cell] += amp * term
                    dn[cell] += 2j * math.pi * n * grid.symbol_duration * amp * term
                    dt[cell] += -2j * math.pi * i * grid.delta_f * amp * term
    dt += -2 / p.tau_t * mu
    return numeric_fim(dt, dn, p.sigma_echo_sq)


class TestFimSums:
    def test_uniform_pilot_sums(self, grid, echo):
        s = fim_sums(uniform_unit(grid), echo, grid)
        a = echo.amplitude_sq
        assert s.s_n == pytest.approx(grid.n_dd * 1120, rel=1e-12)
        assert s.s_i == pytest.approx(grid.n_dd * 1120, rel=1e-12)
        assert s.p_mu == pytest.approx(64 * a, rel=1e-12)
        expected_c = -(2 * math.pi) ** 2 * grid.delta_f * grid.symbol_duration * a * 784
        assert s.c_tau_nu == pytest.approx(expected_c, rel=1e-12)

    def test_mean_cross_terms_vanish(self, rng):
        grid = make_grid(m=8, n=16)
        p = make_echo(tau_t=210e-6, nu_t=-3.3e3, beta_t=0.7 + 0.2j)
        x = random_symbols(grid, rng)
        s = fim_sums(x, p, grid)
        bundle = d_tau(x, p, grid)
        scale = np.linalg.norm(bundle.mu) * max(np.linalg.norm(bundle.d_phase_tau), np.linalg.norm(bundle.d_nu))
        assert abs(s.c_mu_tau) <= 1e-12 * scale
        assert abs(s.c_mu_nu) <= 1e-12 * scale


class TestFimAssemble:
    def test_uniform_pilot_closed_form(self, grid, echo):
        fim = fim_assemble(fim_sums(uniform_unit(grid), echo, grid), echo, grid)
        a, sigma_sq, tau = echo.amplitude_sq, echo.sigma_echo_sq, echo.tau_t
        t, df = grid.symbol_duration, grid.delta_f
        expected = Fim(
            i_nu_nu=2 / sigma_sq * (2 * math.pi * t) ** 2 * a * 1120,
            i_tau_tau=2 / sigma_sq * (4 * 64 * a / tau ** 2 + (2 * math.pi * df) ** 2 * a * 1120),
            i_tau_nu=2 / sigma_sq * (-(2 * math.pi) ** 2 * df * t * a * 784),
        )
        assert_fim_close(fim, expected, 1e-12)

    def test_doubling_noise_halves_fim(self, grid, rng):
        x = random_symbols(grid, rng)
        p = make_echo(tau_t=65e-6, nu_t=700.0, sigma_echo_sq=0.3)
        sums = fim_sums(x, p, grid)
        base = fim_assemble(sums, p, grid)
        doubled = fim_assemble(sums, replace(p, sigma_echo_sq=2 * p.sigma_echo_sq), grid)
        assert doubled.i_nu_nu == base.i_nu_nu / 2
        assert doubled.i_tau_tau == base.i_tau_tau / 2
        assert doubled.i_tau_nu == base.i_tau_nu / 2

    def test_beta_scaling(self, grid, rng):
        x = random_symbols(grid, rng)
        p = make_echo(beta_t=-0.35 + 0j)
        base = crb_pipeline(x, p, grid)
        twice = crb_pipeline(x, replace(p, beta_t=2 * p.beta_t), grid)
        assert twice.fim.i_nu_nu == 4 * base.fim.i_nu_nu
        assert twice.fim.i_tau_tau == 4 * base.fim.i_tau_tau
        assert twice.crb_tau == base.crb_tau / 4
        assert twice.crb_nu == base.crb_nu / 4

        c = 0.6 + 1.3j
        scaled = crb_pipeline(x, replace(p, beta_t=c * p.beta_t), grid)
        assert scaled.fim.i_tau_tau == pytest.approx(abs(c) ** 2 * base.fim.i_tau_tau, rel=1e-12)
        assert scaled.crb_nu == pytest.approx(base.crb_nu / abs(c) ** 2, rel=1e-12)

    @pytest.mark.parametrize('seed', INSTANCE_SEEDS)
    def test_matches_generic_gaussian_fim(self, seed):
        inst = random_instance(seed)
        assembled = fim_assemble(fim_sums(inst.x, inst.p, inst.grid), inst.p, inst.grid)
        bundle = d_tau(inst.x, inst.p, inst.grid)
        assert_fim_close(assembled, numeric_fim(bundle.d_tau, bundle.d_nu, inst.p.sigma_echo_sq), 1e-12)

    @pytest.mark.parametrize('seed', INSTANCE_SEEDS[:5])
    def test_matches_finite_difference_fim(self, seed):
        inst = random_instance(seed)
        assembled = fim_assemble(fim_sums(inst.x, inst.p, inst.grid), inst.p, inst.grid)
        fd_tau, fd_nu = fd_derivative_vectors(inst.x, inst.p, inst.grid)
        assert_fim_close(assembled, numeric_fim(fd_tau, fd_nu, inst.p.sigma_echo_sq), 1e-5)

    def test_matches_scalar_loop(self, rng):
        grid = make_grid(m=4, n=4)
        x = random_symbols(grid, rng)
        p = make_echo(tau_t=37e-6, nu_t=-1.9e3, beta_t=1.1 + 0.4j, alpha_ref=0.8, tau_ref=45e-6, sigma_echo_sq=0.2)
        assembled = fim_assemble(fim_sums(x, p, grid), p, grid)
        assert_fim_close(assembled, loop_fim(x, p, grid), 1e-10)

    @pytest.mark.parametrize('seed', INSTANCE_SEEDS)
    def test_positive_semidefinite(self, seed):
        inst = random_instance(seed)
        fim = fim_assemble(fim_sums(inst.x, inst.p, inst.grid), inst.p, inst.grid)
        assert fim.i_tau_tau >= 0
        assert fim.i_nu_nu >= 0
        assert fim.min_eigenvalue() >= -1e-10 * fim.trace
        assert fim_diagnostics(fim) == []

    def test_diagnostics_report_negative_entries(self, caplog):
        issues = fim_diagnostics(Fim(i_nu_nu=-1.0, i_tau_tau=2.0, i_tau_nu=0.0))
        assert any('I_nunu' in issue for issue in issues)
        assert 'negative' in caplog.text

    def test_diagnostics_quiet_on_valid_fim(self):
        assert fim_diagnostics(Fim(i_nu_nu=2.0, i_tau_tau=3.0, i_tau_nu=1.0)) == []


class TestCrb:
    @pytest.mark.parametrize('seed', INSTANCE_SEEDS)
    def test_matches_matrix_inverse(self, seed):
        inst = random_instance(seed)
        crb = crb_pipeline(inst.x, inst.p, inst.grid)
        crb_tau, crb_nu = inverse_diagonal(crb.fim)
        assert crb.crb_tau == pytest.approx(crb_tau, rel=1e-12)
        assert crb.crb_nu == pytest.approx(crb_nu, rel=1e-12)

    @pytest.mark.parametrize('seed', INSTANCE_SEEDS)
    def test_bounds_times_determinant(self, seed):
        inst = random_instance(seed)
        crb = crb_pipeline(inst.x, inst.p, inst.grid)
        assert crb.det_fim > 0
        assert crb.crb_tau * crb.det_fim == pytest.approx(crb.fim.i_nu_nu, rel=1e-14)
        assert crb.crb_nu * crb.det_fim == pytest.approx(crb.fim.i_tau_tau, rel=1e-14)

    def test_zero_pilot_is_singular(self, grid, echo):
        with pytest.raises(SingularFimError) as excinfo:
            crb_pipeline(np.zeros(grid.tf_shape, dtype=complex), echo, grid)
        assert excinfo.value.zero_entry == 'i_tau_tau,i_nu_nu'

    def test_random_psd_fim(self, rng):
        for _ in range(20):
            a = rng.standard_normal((2, 2))
            m = a @ a.T + 0.1 * np.eye(2)
            fim = Fim(i_tau_tau=m[0, 0], i_nu_nu=m[1, 1], i_tau_nu=m[0, 1])
            crb = crb_from_fim(fim)
            expected = np.linalg.inv(m)
            assert crb.crb_tau == pytest.approx(expected[0, 0], rel=1e-12)
            assert crb.crb_nu == pytest.approx(expected[1, 1], rel=1e-12)

    def test_diagonal_fim(self):
        crb = crb_from_fim(Fim(i_nu_nu=4.0, i_tau_tau=2.0, i_tau_nu=0.0))
        assert crb.crb_tau == 0.5
        assert crb.crb_nu == 0.25
        assert crb.det_fim == 8.0

    def test_coupling_inflates_bounds(self):
        crb = crb_from_fim(Fim(i_nu_nu=4.0, i_tau_tau=2.0, i_tau_nu=2.0))
        assert crb.crb_tau == 1.0
        assert crb.crb_nu == 0.5

    def test_noise_scaling_is_exact(self, grid, rng):
        x = random_symbols(grid, rng)
        p = make_echo(sigma_echo_sq=0.25)
        base = crb_pipeline(x, p, grid)
        for factor in (0.5, 2.0, 4.0):
            scaled = crb_pipeline(x, replace(p, sigma_echo_sq=factor * 0.25), grid)
            assert scaled.crb_tau == factor * base.crb_tau
            assert scaled.crb_nu == factor * base.crb_nu

    def test_fim_scaling_divides_bounds(self):
        fim = Fim(i_nu_nu=3.0, i_tau_tau=5.0, i_tau_nu=1.0)
        base = crb_from_fim(fim)
        scaled = crb_from_fim(fim.scaled(4.0))
        assert scaled.crb_tau == base.crb_tau / 4
        assert scaled.crb_nu == base.crb_nu / 4

    def test_single_pilot_on_first_symbol_is_singular(self, grid, echo):
        with pytest.raises(SingularFimError) as excinfo:
            crb_pipeline(single_pilot(grid, 0, 3), echo, grid)
        assert excinfo.value.zero_entry == 'i_nu_nu'
        assert excinfo.value.fim is not None

    def test_single_pilot_off_origin_is_regular(self, grid, echo):
        # the gain law keeps the delay and Doppler derivatives from being collinear
        crb = crb_pipeline(single_pilot(grid, 3, 2), echo, grid)
        assert crb.crb_tau > 0
        assert crb.crb_nu > 0

    def test_rank_one_fim_is_singular(self):
        j = np.array([1.0 + 2.0j, -0.5j, 3.0])
        with pytest.raises(SingularFimError) as excinfo:
            crb_from_fim(numeric_fim(j, j, 1.0))
        assert excinfo.value.zero_entry is None

    def test_zero_fim(self):
        with pytest.raises(SingularFimError) as excinfo:
            crb_from_fim(Fim(i_nu_nu=0.0, i_tau_tau=0.0, i_tau_nu=0.0))
        assert excinfo.value.zero_entry == 'i_tau_tau,i_nu_nu'

    def test_result_helpers(self, grid, echo):
        crb = crb_pipeline(uniform_unit(grid), echo, grid)
        assert isinstance(crb, CrbResult)
        assert crb.std_tau == math.sqrt(crb.crb_tau)
        norm_tau, norm_nu = crb.normalized(echo, grid)
        assert norm_tau == crb.crb_tau / echo.tau_t ** 2
        assert norm_nu == crb.crb_nu * grid.symbol_duration ** 2
        assert crb.fim.min_eigenvalue() > 0
        assert crb.det_fim == pytest.approx(np.linalg.det(crb.fim.matrix()), rel=1e-10)
