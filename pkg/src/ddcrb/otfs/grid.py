from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from ..utils import DimensionError, DomainError, require_int_at_least, require_positive

# TF symbols are N x M arrays indexed [n, i]; DD vectors are flat with cell id l*M + k.
TfSymbols: TypeAlias = npt.NDArray[np.complex128]
DdVector: TypeAlias = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class OtfsGrid:
    """OTFS lattice: M delay bins (subcarriers), N Doppler bins (TF symbols).

    T*delta_f = 1 is not required; both values are kept as given.
    """
    m_delay_bins: int
    n_doppler_bins: int
    delta_f: float
    symbol_duration: float

    def __post_init__(self) -> None:
        require_int_at_least('grid.m', self.m_delay_bins, 1)
        require_int_at_least('grid.n', self.n_doppler_bins, 1)
        require_positive('grid.delta_f', self.delta_f)
        require_positive('grid.symbol_duration', self.symbol_duration)

    @property
    def n_dd(self) -> int:
        return self.m_delay_bins * self.n_doppler_bins

    @property
    def tf_shape(self) -> tuple[int, int]:
        return (self.n_doppler_bins, self.m_delay_bins)

    @property
    def bandwidth(self) -> float:
        return self.m_delay_bins * self.delta_f

    @property
    def frame_duration(self) -> float:
        return self.n_doppler_bins * self.symbol_duration

    @property
    def delay_resolution(self) -> float:
        return 1.0 / self.bandwidth

    @property
    def doppler_resolution(self) -> float:
        return 1.0 / self.frame_duration

    def flat_index(self, l: int, k: int) -> int:
        if not (0 <= l < self.n_doppler_bins and 0 <= k < self.m_delay_bins):
            raise DomainError(f"DD cell ({l}, {k}) outside the {self.n_doppler_bins}x{self.m_delay_bins} lattice")
        return l * self.m_delay_bins + k

    def cell(self, flat: int) -> tuple[int, int]:
        if not 0 <= flat < self.n_dd:
            raise DomainError(f"flat cell id {flat} outside [0, {self.n_dd})")
        return divmod(flat, self.m_delay_bins)

    def check_tf(self, x: npt.ArrayLike) -> TfSymbols:
        arr = np.asarray(x, dtype=np.complex128)
        if arr.shape != self.tf_shape:
            raise DimensionError(f"TF symbols must have shape {self.tf_shape}, got {arr.shape}")
        return arr

    def check_dd(self, y: npt.ArrayLike) -> DdVector:
        arr = np.asarray(y, dtype=np.complex128)
        if arr.shape != (self.n_dd,):
            raise DimensionError(f"DD vector must have length {self.n_dd}, got shape {arr.shape}")
        return arr
