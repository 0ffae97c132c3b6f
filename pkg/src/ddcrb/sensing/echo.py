"""Monostatic echo in the DD domain with a delay-dependent path gain.

    mu[l, k] = alpha(tau) * beta / sqrt(MN) * sum_{n,i} X[n, i] * exp(j * phi_{n,i,l,k})

which is alpha(tau) * beta * SFFT(X * exp(j2pi(n*nu*T - i*tau*delta_f))).
"""
import math
from dataclasses import dataclass

import numpy as np

from ..otfs import DdVector, OtfsGrid, TfSymbols, phasor_grid, sfft
from ..utils import require_positive


@dataclass(frozen=True)
class GainModel:
    """alpha(tau) = alpha_ref * (tau_ref / tau)**2, so d alpha / d tau = -2 alpha / tau."""
    alpha_ref: complex
    tau_ref: float

    def __post_init__(self) -> None:
        require_positive('echo.tau_ref', self.tau_ref)

    def alpha(self, tau: float) -> complex:
        require_positive('tau', tau)
        ratio = self.tau_ref / tau
        return self.alpha_ref * (ratio * ratio)

    def d_alpha(self, tau: float) -> complex:
        return -2.0 * self.alpha(tau) / tau


@dataclass(frozen=True)
class EchoParams:
    tau_t: float
    nu_t: float
    beta_t: complex
    gain: GainModel
    sigma_echo_sq: float

    def __post_init__(self) -> None:
        require_positive('echo.tau_t', self.tau_t)
        require_positive('echo.sigma_echo_sq', self.sigma_echo_sq)

    @property
    def alpha(self) -> complex:
        return self.gain.alpha(self.tau_t)

    @property
    def amplitude(self) -> complex:
        return self.alpha * self.beta_t

    @property
    def amplitude_sq(self) -> float:
        """|alpha(tau_t)|^2 |beta_t|^2"""
        return abs(self.alpha) ** 2 * abs(self.beta_t) ** 2


@dataclass(frozen=True, eq=False)
class DerivativeBundle:
    """mu and its derivatives; d_tau is d_gain + d_phase_tau elementwise."""
    mu: DdVector
    d_nu: DdVector
    d_gain: DdVector
    d_phase_tau: DdVector
    d_tau: DdVector


def _weights(grid: OtfsGrid, axis: str | None) -> np.ndarray | float:
    if axis == 'n':
        return np.arange(grid.n_doppler_bins, dtype=float)[:, None]
    if axis == 'i':
        return np.arange(grid.m_delay_bins, dtype=float)[None, :]
    return 1.0


def _modulated(x: TfSymbols, p: EchoParams, grid: OtfsGrid) -> np.ndarray:
    return grid.check_tf(x) * phasor_grid(p.nu_t, p.tau_t, grid)


def weighted_phase_sums(x: TfSymbols, p: EchoParams, grid: OtfsGrid, weight: str | None = None) -> DdVector:
    """Inner sums sum_{n,i} w[n,i] X[n,i] exp(j phi) for every DD cell, without the gain prefactor.

    weight is None (w = 1), 'n' (w = n) or 'i' (w = i).
    """
    modulated = _modulated(x, p, grid)
    return math.sqrt(grid.n_dd) * sfft(_weights(grid, weight) * modulated, grid)


def mean_dd_signal(x: TfSymbols, p: EchoParams, grid: OtfsGrid) -> DdVector:
    return p.amplitude * sfft(_modulated(x, p, grid), grid)


def d_nu(x: TfSymbols, p: EchoParams, grid: OtfsGrid) -> DdVector:
    modulated = _modulated(x, p, grid)
    return (2j * math.pi * grid.symbol_duration) * p.amplitude * sfft(_weights(grid, 'n') * modulated, grid)


def d_tau(x: TfSymbols, p: EchoParams, grid: OtfsGrid) -> DerivativeBundle:
    modulated = _modulated(x, p, grid)
    amplitude = p.amplitude

    mu = amplitude * sfft(modulated, grid)
    doppler = (2j * math.pi * grid.symbol_duration) * amplitude * sfft(_weights(grid, 'n') * modulated, grid)
    d_gain = (-2.0 / p.tau_t) * mu
    d_phase_tau = (-2j * math.pi * grid.delta_f) * amplitude * sfft(_weights(grid, 'i') * modulated, grid)

    return DerivativeBundle(
        mu=mu,
        d_nu=doppler,
        d_gain=d_gain,
        d_phase_tau=d_phase_tau,
        d_tau=d_gain + d_phase_tau,
    )
