"""SFFT/ISFFT pair between the N x M time-frequency grid and the DD lattice.

    y[l, k] = 1/sqrt(MN) * sum_{n,i} x[n, i] * exp(-j2pi(nl/N - ik/M))

The reference realisation evaluates the kernel sums explicitly; the fast
realisation uses scipy.fft with orthonormal scaling and must agree with the
reference to 1e-10.
"""
import math

import numpy as np
from scipy.fft import fft, ifft

from ..config import settings
from .grid import DdVector, OtfsGrid, TfSymbols


def _kernels(grid: OtfsGrid) -> tuple[np.ndarray, np.ndarray]:
    n_bins, m_bins = grid.n_doppler_bins, grid.m_delay_bins
    doppler = np.exp(-2j * np.pi * np.outer(np.arange(n_bins), np.arange(n_bins)) / n_bins)  # [l, n]
    delay = np.exp(2j * np.pi * np.outer(np.arange(m_bins), np.arange(m_bins)) / m_bins)  # [k, i]
    return doppler, delay


def sfft_reference(x: TfSymbols, grid: OtfsGrid) -> DdVector:
    x = grid.check_tf(x)
    doppler, delay = _kernels(grid)
    # outer sum over n, inner over i
    y = np.einsum('ln,ni,ki->lk', doppler, x, delay, optimize=False)
    return (y / math.sqrt(grid.n_dd)).reshape(grid.n_dd)


def isfft_reference(y: DdVector, grid: OtfsGrid) -> TfSymbols:
    y = grid.check_dd(y).reshape(grid.tf_shape)
    doppler, delay = _kernels(grid)
    x = np.einsum('ln,lk,ki->ni', doppler.conj(), y, delay.conj(), optimize=False)
    return x / math.sqrt(grid.n_dd)


def sfft_fast(x: TfSymbols, grid: OtfsGrid) -> DdVector:
    x = grid.check_tf(x)
    return fft(ifft(x, axis=1, norm='ortho'), axis=0, norm='ortho').reshape(grid.n_dd)


def isfft_fast(y: DdVector, grid: OtfsGrid) -> TfSymbols:
    y = grid.check_dd(y).reshape(grid.tf_shape)
    return ifft(fft(y, axis=1, norm='ortho'), axis=0, norm='ortho')


def sfft(x: TfSymbols, grid: OtfsGrid, fast: bool | None = None) -> DdVector:
    use_fast = settings.FAST_TRANSFORM if fast is None else fast
    return sfft_fast(x, grid) if use_fast else sfft_reference(x, grid)


def isfft(y: DdVector, grid: OtfsGrid, fast: bool | None = None) -> TfSymbols:
    use_fast = settings.FAST_TRANSFORM if fast is None else fast
    return isfft_fast(y, grid) if use_fast else isfft_reference(y, grid)


def phase(n: int, i: int, l: int, k: int, nu: float, tau: float, grid: OtfsGrid) -> float:
    """phi_{n,i,l,k} = 2pi[n(nu*T - l/N) - i(tau*delta_f - k/M)] in radians."""
    doppler_term = n * (nu * grid.symbol_duration - l / grid.n_doppler_bins)
    delay_term = i * (tau * grid.delta_f - k / grid.m_delay_bins)
    return 2 * math.pi * (doppler_term - delay_term)


def phasor_grid(nu: float, tau: float, grid: OtfsGrid) -> np.ndarray:
    """N x M factor exp(j2pi(n*nu*T - i*tau*delta_f)) carried by every echo sum."""
    n = np.arange(grid.n_doppler_bins)[:, None]
    i = np.arange(grid.m_delay_bins)[None, :]
    return np.exp(2j * np.pi * (n * nu * grid.symbol_duration - i * tau * grid.delta_f))
