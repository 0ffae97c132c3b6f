"""Fisher information for (tau_t, nu_t) and the explicit 2x2 Cramer-Rao bounds."""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import settings
from ..otfs import OtfsGrid, TfSymbols
from ..utils import SingularFimError
from .echo import EchoParams, d_tau, weighted_phase_sums

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FimSums:
    s_n: float
    s_i: float
    c_tau_nu: float
    c_mu_tau: float
    c_mu_nu: float
    p_mu: float


@dataclass(frozen=True)
class Fim:
    i_nu_nu: float
    i_tau_tau: float
    i_tau_nu: float

    def matrix(self) -> np.ndarray:
        """[[I_tautau, I_taunu], [I_taunu, I_nunu]]"""
        return np.array([[self.i_tau_tau, self.i_tau_nu], [self.i_tau_nu, self.i_nu_nu]])

    @property
    def trace(self) -> float:
        return self.i_tau_tau + self.i_nu_nu

    @property
    def det(self) -> float:
        return self.i_tau_tau * self.i_nu_nu - self.i_tau_nu ** 2

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix())[0])

    def scaled(self, factor: float) -> 'Fim':
        return Fim(
            i_nu_nu=factor * self.i_nu_nu,
            i_tau_tau=factor * self.i_tau_tau,
            i_tau_nu=factor * self.i_tau_nu,
        )


@dataclass(frozen=True)
class CrbResult:
    crb_tau: float
    crb_nu: float
    det_fim: float
    fim: Fim

    @property
    def std_tau(self) -> float:
        return math.sqrt(self.crb_tau)

    @property
    def std_nu(self) -> float:
        return math.sqrt(self.crb_nu)

    def normalized(self, p: EchoParams, grid: OtfsGrid) -> tuple[float, float]:
        """(CRB(tau)/tau_t^2, CRB(nu)*T^2)"""
        return self.crb_tau / p.tau_t ** 2, self.crb_nu * grid.symbol_duration ** 2


def fim_sums(x: TfSymbols, p: EchoParams, grid: OtfsGrid) -> FimSums:
    sums_n = weighted_phase_sums(x, p, grid, 'n')
    sums_i = weighted_phase_sums(x, p, grid, 'i')
    bundle = d_tau(x, p, grid)

    return FimSums(
        s_n=float(np.vdot(sums_n, sums_n).real),
        s_i=float(np.vdot(sums_i, sums_i).real),
        c_tau_nu=float(np.vdot(bundle.d_phase_tau, bundle.d_nu).real),
        c_mu_tau=float(np.vdot(bundle.mu, bundle.d_phase_tau).real),
        c_mu_nu=float(np.vdot(bundle.mu, bundle.d_nu).real),
        p_mu=float(np.vdot(bundle.mu, bundle.mu).real),
    )


def fim_assemble(s: FimSums, p: EchoParams, grid: OtfsGrid) -> Fim:
    sigma_sq = p.sigma_echo_sq
    tau = p.tau_t
    mn = grid.n_dd
    gain_sq = p.amplitude_sq
    doppler_scale = (2 * math.pi * grid.symbol_duration) ** 2
    delay_scale = (2 * math.pi * grid.delta_f) ** 2

    fim = Fim(
        i_nu_nu=2 * doppler_scale * gain_sq * s.s_n / (mn * sigma_sq),
        i_tau_tau=(
            8 * s.p_mu / (sigma_sq * tau ** 2)
            + 2 * delay_scale * gain_sq * s.s_i / (mn * sigma_sq)
            - 8 * s.c_mu_tau / (sigma_sq * tau)
        ),
        i_tau_nu=2 * s.c_tau_nu / sigma_sq - 4 * s.c_mu_nu / (sigma_sq * tau),
    )
    fim_diagnostics(fim)
    return fim


def fim_diagnostics(f: Fim) -> list[str]:
    """Report sign or definiteness problems without altering the matrix."""
    issues: list[str] = []
    if f.i_nu_nu < 0:
        issues.append(f"I_nunu is negative ({f.i_nu_nu:.6e})")
    if f.i_tau_tau < 0:
        issues.append(f"I_tautau is negative ({f.i_tau_tau:.6e})")
    if f.trace > 0 and f.min_eigenvalue() < -1e-10 * f.trace:
        issues.append(f"FIM is not positive semidefinite (min eigenvalue {f.min_eigenvalue():.6e})")
    for issue in issues:
        logger.warning(issue)
    return issues


def crb_from_fim(f: Fim, rtol: float | None = None) -> CrbResult:
    rtol = settings.SINGULAR_RTOL if rtol is None else rtol
    det = f.det
    threshold = rtol * max(f.i_tau_tau * f.i_nu_nu, 1.0)

    if det <= threshold:
        zero = [name for name, value in (('i_tau_tau', f.i_tau_tau), ('i_nu_nu', f.i_nu_nu)) if value == 0]
        zero_entry = ','.join(zero) if zero else None
        detail = f"zero diagonal entry: {zero_entry}" if zero_entry else "diagonal entries nonzero"
        raise SingularFimError(f"FIM is singular (det={det:.6e}, threshold={threshold:.6e}; {detail})", f, zero_entry)

    return CrbResult(crb_tau=f.i_nu_nu / det, crb_nu=f.i_tau_tau / det, det_fim=det, fim=f)


def crb_pipeline(x: TfSymbols, p: EchoParams, grid: OtfsGrid) -> CrbResult:
    sums = fim_sums(x, p, grid)
    logger.debug(f"FIM sums: {sums}")
    return crb_from_fim(fim_assemble(sums, p, grid))
