"""Refined RSMA SINRs under imperfect CSI (additive estimation error) and imperfect SIC.

Filters are row vectors acting on the left of the received DD vector. The
estimation error enters as the effective noise floor sigma_n^2 + sigma_e^2 * P_tot,
both when designing the LMMSE filters and in the SINR denominators. Theta only
enters the private-stream denominator.
"""
import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import linalg

from ..utils import DimensionError, DomainError, ordered_map, require_between, require_non_negative, require_positive
from .channel import ChannelSet
from .precoding import Precoders

logger = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class SinrInputs:
    w_common: ComplexArray
    w_private: ComplexArray
    theta: float

    def __post_init__(self) -> None:
        require_between('theta', self.theta, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class LmmseFilters:
    w_common: ComplexArray
    w_private: tuple[ComplexArray, ...]


@dataclass(frozen=True)
class UserSinr:
    user: int
    theta: float
    sinr_common: float
    sinr_private: float


def _effective_noise(pre: Precoders, sigma_n_sq: float, sigma_e_sq: float) -> float:
    require_positive('sigma_n_sq', sigma_n_sq)
    require_non_negative('sigma_e_sq', sigma_e_sq)
    return sigma_n_sq + sigma_e_sq * pre.p_tot


def _check_channel(h_est: ComplexArray, pre: Precoders) -> ComplexArray:
    h = np.asarray(h_est, dtype=np.complex128)
    if h.shape != (pre.n_dd, pre.n_dd):
        raise DimensionError(f"channel shape {h.shape} does not match precoder length {pre.n_dd}")
    return h


def _solve_rows(covariance: ComplexArray, targets: ComplexArray) -> ComplexArray:
    # covariance is Hermitian positive definite, so (R^-1 h)^H = h^H R^-1
    return linalg.solve(covariance, targets, assume_a='pos').conj().T


def lmmse_filters(h_est: ComplexArray, pre: Precoders, sigma_n_sq: float, sigma_e_sq: float) -> LmmseFilters:
    h = _check_channel(h_est, pre)
    noise = _effective_noise(pre, sigma_n_sq, sigma_e_sq)
    identity = np.eye(pre.n_dd)

    common_rx = h @ pre.p_common
    private_rx = h @ pre.private_matrix()

    # common filter sees every stream; private filters are designed after SIC removed the common stream
    private_cov = private_rx @ private_rx.conj().T + noise * identity
    common_cov = private_cov + np.outer(common_rx, common_rx.conj())

    w_common = _solve_rows(common_cov, common_rx[:, None])[0]
    if pre.users:
        rows = _solve_rows(private_cov, private_rx)
        w_private = tuple(rows[k] for k in range(pre.users))
    else:
        w_private = ()
    return LmmseFilters(w_common=w_common, w_private=w_private)


def matched_filter(h_est: ComplexArray, target: ComplexArray) -> ComplexArray:
    """p^H H^H as a row vector."""
    return (np.asarray(h_est) @ np.asarray(target)).conj()


def sinr_common(
    inp: SinrInputs,
    h_est: ComplexArray,
    pre: Precoders,
    sigma_n_sq: float,
    sigma_e_sq: float,
    desired_channel: ComplexArray | None = None,
) -> float:
    """|w_c H p_c|^2 / (sum_j |w_c H p_j|^2 + ||w_c||^2 (sigma_n^2 + sigma_e^2 P_tot)).

    desired_channel replaces H in the numerator only (true-channel diagnostic).
    """
    h = _check_channel(h_est, pre)
    noise = _effective_noise(pre, sigma_n_sq, sigma_e_sq)
    w = inp.w_common
    h_signal = h if desired_channel is None else _check_channel(desired_channel, pre)

    signal = abs(w @ h_signal @ pre.p_common) ** 2
    interference = float(np.sum(np.abs(w @ h @ pre.private_matrix()) ** 2))
    denominator = interference + float(np.vdot(w, w).real) * noise
    return float(signal / denominator)


def sinr_private(
    inp: SinrInputs,
    h_est: ComplexArray,
    pre: Precoders,
    k: int,
    sigma_n_sq: float,
    sigma_e_sq: float,
    desired_channel: ComplexArray | None = None,
) -> float:
    """|w_p H p_k|^2 / (sum_{j != k} |w_p H p_j|^2 + Theta |w_p H p_c|^2 + ||w_p||^2 (sigma_n^2 + sigma_e^2 P_tot))."""
    if not 0 <= k < pre.users:
        raise DomainError(f"user index {k} outside [0, {pre.users})")
    h = _check_channel(h_est, pre)
    noise = _effective_noise(pre, sigma_n_sq, sigma_e_sq)
    w = inp.w_private
    h_signal = h if desired_channel is None else _check_channel(desired_channel, pre)

    signal = abs(w @ h_signal @ pre.p_private[k]) ** 2
    leakage = np.abs(w @ h @ pre.private_matrix()) ** 2
    interference = float(np.sum(np.delete(leakage, k)))
    residual_common = inp.theta * abs(w @ h @ pre.p_common) ** 2
    denominator = interference + residual_common + float(np.vdot(w, w).real) * noise
    return float(signal / denominator)


def mmse_sinr_reference(h_est: ComplexArray, pre: Precoders, sigma_n_sq: float, k: int | None = None) -> float:
    """Perfect-CSI, perfect-SIC MMSE SINR h^H Q^-1 h.

    k=None gives the common stream (all privates interfere); otherwise private stream k
    with the other privates as interference.
    """
    h = _check_channel(h_est, pre)
    require_positive('sigma_n_sq', sigma_n_sq)
    private_rx = h @ pre.private_matrix()
    if k is None:
        desired = h @ pre.p_common
        interferers = private_rx
    else:
        desired = private_rx[:, k]
        interferers = np.delete(private_rx, k, axis=1)
    q = interferers @ interferers.conj().T + sigma_n_sq * np.eye(pre.n_dd)
    return float(np.vdot(desired, linalg.solve(q, desired, assume_a='pos')).real)


def evaluate_users(
    channels: list[ChannelSet],
    pre: Precoders,
    thetas: list[float],
) -> list[UserSinr]:
    """Per-user common and private SINR with LMMSE filters designed on each user's estimate."""
    if len(channels) != pre.users or len(thetas) != pre.users:
        raise DimensionError(
            f"need one channel and one theta per user: {pre.users} users, "
            f"{len(channels)} channels, {len(thetas)} thetas"
        )

    def evaluate(k: int) -> UserSinr:
        ch = channels[k]
        filters = lmmse_filters(ch.h_est, pre, ch.sigma_n_sq, ch.sigma_e_sq)
        inp = SinrInputs(w_common=filters.w_common, w_private=filters.w_private[k], theta=thetas[k])
        result = UserSinr(
            user=k,
            theta=float(thetas[k]),
            sinr_common=sinr_common(inp, ch.h_est, pre, ch.sigma_n_sq, ch.sigma_e_sq),
            sinr_private=sinr_private(inp, ch.h_est, pre, k, ch.sigma_n_sq, ch.sigma_e_sq),
        )
        logger.debug(f"User {k}: {result}")
        return result

    return ordered_map(evaluate, range(pre.users))
