import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..otfs import OtfsGrid
from ..utils import DimensionError, require_int_at_least, require_non_negative, require_positive

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """True DD channel of one user, its estimate and the noise/error variances."""
    h_true: npt.NDArray[np.complex128]
    h_est: npt.NDArray[np.complex128]
    sigma_e_sq: float
    sigma_n_sq: float

    def __post_init__(self) -> None:
        if self.h_true.ndim != 2 or self.h_true.shape[0] != self.h_true.shape[1]:
            raise DimensionError(f"channel must be square, got shape {self.h_true.shape}")
        if self.h_est.shape != self.h_true.shape:
            raise DimensionError(f"estimate shape {self.h_est.shape} differs from channel shape {self.h_true.shape}")
        require_positive('rsma.sigma_n_sq', self.sigma_n_sq)
        require_non_negative('rsma.sigma_e_sq', self.sigma_e_sq)

    @property
    def error(self) -> npt.NDArray[np.complex128]:
        return self.h_est - self.h_true


def draw_channel_estimate(h_true: npt.ArrayLike, sigma_e_sq: float, seed: int) -> npt.NDArray[np.complex128]:
    """H_est = H + E with E i.i.d. CN(0, sigma_e_sq), deterministic given seed."""
    require_non_negative('sigma_e_sq', sigma_e_sq)
    h = np.asarray(h_true, dtype=np.complex128)
    if sigma_e_sq == 0:
        return h.copy()
    rng = np.random.default_rng(seed)
    scale = np.sqrt(sigma_e_sq / 2)
    error = scale * (rng.standard_normal(h.shape) + 1j * rng.standard_normal(h.shape))
    return h + error


def dd_channel(grid: OtfsGrid, paths: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    """Sum of `paths` integer delay/Doppler taps, each a cyclic shift on the DD lattice with CN(0, 1/P) gain."""
    require_int_at_least('rsma.paths', paths, 1)
    n_bins, m_bins = grid.n_doppler_bins, grid.m_delay_bins
    h = np.zeros((grid.n_dd, grid.n_dd), dtype=np.complex128)
    for _ in range(paths):
        doppler_shift = int(rng.integers(0, n_bins))
        delay_shift = int(rng.integers(0, m_bins))
        gain = (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2 * paths)
        shift = np.kron(np.roll(np.eye(n_bins), doppler_shift, axis=0), np.roll(np.eye(m_bins), delay_shift, axis=0))
        h += gain * shift
        logger.debug(f"DD path: doppler shift {doppler_shift}, delay shift {delay_shift}, gain {gain:.4f}")
    return h


def build_channel_set(grid: OtfsGrid, paths: int, sigma_e_sq: float, sigma_n_sq: float, seed: int) -> ChannelSet:
    rng = np.random.default_rng(seed)
    h_true = dd_channel(grid, paths, rng)
    # estimation error stream is seeded separately from the path draw
    h_est = draw_channel_estimate(h_true, sigma_e_sq, seed + 1_000_003)
    return ChannelSet(h_true=h_true, h_est=h_est, sigma_e_sq=sigma_e_sq, sigma_n_sq=sigma_n_sq)
