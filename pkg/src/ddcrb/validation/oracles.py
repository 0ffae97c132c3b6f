"""Numerical oracles, independent of the closed-form FIM assembly."""
from collections.abc import Callable
from dataclasses import replace

import numpy as np

from ..config import settings
from ..otfs import DdVector, OtfsGrid, TfSymbols
from ..sensing import EchoParams, Fim, mean_dd_signal
from ..utils import DimensionError, require_positive


def fd_derivative(f: Callable[[float], np.ndarray], at: float, step: float) -> np.ndarray:
    """Central difference (f(x + step) - f(x - step)) / (2 step)."""
    require_positive('step', step)
    return (np.asarray(f(at + step)) - np.asarray(f(at - step))) / (2 * step)


def fd_derivative_vectors(
    x: TfSymbols,
    p: EchoParams,
    grid: OtfsGrid,
    nu_step: float | None = None,
    tau_step: float | None = None,
) -> tuple[DdVector, DdVector]:
    """Finite-difference (d_tau, d_nu) of the mean DD signal; the gain is re-evaluated at every delay.

    nu_step is in units of 1/T and tau_step is relative to tau_t.
    """
    nu_step = settings.FD_NU_STEP if nu_step is None else nu_step
    tau_step = settings.FD_TAU_STEP if tau_step is None else tau_step

    d_tau = fd_derivative(lambda tau: mean_dd_signal(x, replace(p, tau_t=tau), grid), p.tau_t, tau_step * p.tau_t)
    d_nu = fd_derivative(
        lambda nu: mean_dd_signal(x, replace(p, nu_t=nu), grid), p.nu_t, nu_step / grid.symbol_duration
    )
    return d_tau, d_nu


def numeric_fim(j_tau: DdVector, j_nu: DdVector, sigma_sq: float) -> Fim:
    """[I]_ij = (2 / sigma^2) Re(d_i^H d_j) for a complex Gaussian observation."""
    j_tau = np.asarray(j_tau)
    j_nu = np.asarray(j_nu)
    if j_tau.shape != j_nu.shape or j_tau.ndim != 1:
        raise DimensionError(f"derivative vectors must be equal-length 1-D arrays, got {j_tau.shape} and {j_nu.shape}")
    require_positive('sigma_sq', sigma_sq)

    scale = 2.0 / sigma_sq
    return Fim(
        i_nu_nu=scale * float(np.vdot(j_nu, j_nu).real),
        i_tau_tau=scale * float(np.vdot(j_tau, j_tau).real),
        i_tau_nu=scale * float(np.vdot(j_tau, j_nu).real),
    )


def inverse_diagonal(f: Fim) -> tuple[float, float]:
    """(CRB(tau), CRB(nu)) from a general-purpose matrix inverse."""
    inverse = np.linalg.inv(f.matrix())
    return float(inverse[0, 0]), float(inverse[1, 1])
