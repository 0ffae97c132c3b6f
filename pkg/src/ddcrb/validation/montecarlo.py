"""Monte-Carlo check that a maximum-likelihood grid search approaches the CRBs.

The estimator knows alpha(.) and beta_t, matching the two-parameter FIM, and
minimises ||y - mu(tau, nu)||^2 over a (tau, nu) grid. Since the SFFT is
unitary, that objective equals, up to the constant ||y||^2,

    |alpha(tau) beta|^2 ||X||^2 - 2 Re(alpha(tau) beta * <ISFFT(y), X * exp(j2pi(n nu T - i tau df))>)

which is evaluated for the whole grid with two matrix products.
"""
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from ..otfs import DdVector, OtfsGrid, TfSymbols, isfft
from ..sensing import CrbResult, EchoParams, GainModel, crb_pipeline, mean_dd_signal
from ..utils import DomainError, ordered_map, require_int_at_least, require_positive

logger = logging.getLogger(__name__)

SearchRange = tuple[float, float, int]


@dataclass(frozen=True)
class McConfig:
    trials: int
    snr_db: float
    grid_tau: SearchRange
    grid_nu: SearchRange
    seed: int = 0
    refine: bool = True

    def __post_init__(self) -> None:
        require_int_at_least('mc.trials', self.trials, 1)
        min_count = 3 if self.refine else 2
        for name, (low, high, count) in (('tau', self.grid_tau), ('nu', self.grid_nu)):
            require_int_at_least(f'mc.{name}_count', count, min_count)
            if not low < high:
                raise DomainError(f"mc.{name} search range must have min < max, got [{low}, {high}]")

    def tau_nodes(self) -> np.ndarray:
        low, high, count = self.grid_tau
        return np.linspace(low, high, count)

    def nu_nodes(self) -> np.ndarray:
        low, high, count = self.grid_nu
        return np.linspace(low, high, count)

    def check_contains(self, p: EchoParams) -> None:
        if not self.grid_tau[0] <= p.tau_t <= self.grid_tau[1]:
            raise DomainError(f"tau search range {self.grid_tau[:2]} does not contain tau_t={p.tau_t}")
        if not self.grid_nu[0] <= p.nu_t <= self.grid_nu[1]:
            raise DomainError(f"nu search range {self.grid_nu[:2]} does not contain nu_t={p.nu_t}")


@dataclass(frozen=True)
class MlEstimate:
    tau_hat: float
    nu_hat: float
    tau_on_boundary: bool
    nu_on_boundary: bool
    objective_min: float

    @property
    def on_boundary(self) -> bool:
        return self.tau_on_boundary or self.nu_on_boundary


@dataclass(frozen=True)
class McReport:
    mse_tau: float
    mse_nu: float
    crb_tau: float
    crb_nu: float
    ratio_tau: float
    ratio_nu: float
    bias_tau: float
    bias_nu: float
    trials_used: int
    boundary_hits: int
    snr_db: float
    sigma_echo_sq: float
    sq_errors_tau: tuple[float, ...]
    sq_errors_nu: tuple[float, ...]


def snr_to_noise_variance(p_mu: float, grid: OtfsGrid, snr_db: float) -> float:
    """sigma_echo^2 for SNR = P_mu / (MN sigma_echo^2)."""
    return p_mu / (grid.n_dd * 10 ** (snr_db / 10))


def noise_variance_to_snr(p_mu: float, grid: OtfsGrid, sigma_echo_sq: float) -> float:
    return 10 * math.log10(p_mu / (grid.n_dd * sigma_echo_sq))


def crb_search_grid(p: EchoParams, crb: CrbResult, span: float = 6.0, count: int = 25) -> tuple[SearchRange, SearchRange]:
    """Search ranges centred on the truth, span * sqrt(CRB) wide on each side."""
    require_positive('mc.span', span)
    half_tau = span * crb.std_tau
    half_nu = span * crb.std_nu
    if p.tau_t - half_tau <= 0:
        raise DomainError(f"tau search range would reach non-positive delays (half-width {half_tau})")
    return (p.tau_t - half_tau, p.tau_t + half_tau, count), (p.nu_t - half_nu, p.nu_t + half_nu, count)


def _parabolic_offset(left: float, centre: float, right: float) -> float:
    curvature = left - 2 * centre + right
    if curvature <= 0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / curvature, -0.5, 0.5))


def ml_estimate(
    y: DdVector,
    x: TfSymbols,
    gain: GainModel,
    beta: complex,
    cfg: McConfig,
    grid: OtfsGrid,
) -> MlEstimate:
    x = grid.check_tf(x)
    taus = cfg.tau_nodes()
    nus = cfg.nu_nodes()

    correlation = np.conj(isfft(y, grid)) * x
    n = np.arange(grid.n_doppler_bins)
    i = np.arange(grid.m_delay_bins)
    doppler = np.exp(2j * np.pi * np.outer(nus, n) * grid.symbol_duration)  # [nu, n]
    delay = np.exp(-2j * np.pi * np.outer(i, taus) * grid.delta_f)  # [i, tau]
    cross = (doppler @ correlation @ delay).T  # [tau, nu]

    amplitude = np.array([gain.alpha(t) for t in taus]) * beta
    energy = np.abs(amplitude) ** 2 * float(np.vdot(x, x).real)
    objective = energy[:, None] - 2 * np.real(amplitude[:, None] * cross)

    # argmin returns the first occurrence: ties go to the lowest flat (tau-major) index
    tau_idx, nu_idx = np.unravel_index(int(np.argmin(objective)), objective.shape)
    tau_edge = tau_idx in (0, len(taus) - 1)
    nu_edge = nu_idx in (0, len(nus) - 1)

    tau_hat = float(taus[tau_idx])
    nu_hat = float(nus[nu_idx])
    if cfg.refine:
        if not tau_edge:
            column = objective[tau_idx - 1:tau_idx + 2, nu_idx]
            tau_hat += _parabolic_offset(*column) * (taus[1] - taus[0])
        if not nu_edge:
            row = objective[tau_idx, nu_idx - 1:nu_idx + 2]
            nu_hat += _parabolic_offset(*row) * (nus[1] - nus[0])

    if tau_edge or nu_edge:
        logger.debug(f"ML minimum on search boundary: tau index {tau_idx}, nu index {nu_idx}")

    return MlEstimate(
        tau_hat=tau_hat,
        nu_hat=nu_hat,
        tau_on_boundary=bool(tau_edge),
        nu_on_boundary=bool(nu_edge),
        objective_min=float(objective[tau_idx, nu_idx]),
    )


def run_mc(p: EchoParams, x: TfSymbols, cfg: McConfig, grid: OtfsGrid, workers: int | None = None) -> McReport:
    """Draw cfg.trials noisy echoes at cfg.snr_db and compare the ML estimator's MSE with the CRBs.

    The noise variance follows from the SNR, replacing p.sigma_echo_sq. Trial t
    uses seed cfg.seed + t, so the report does not depend on the worker count.
    """
    x = grid.check_tf(x)
    cfg.check_contains(p)

    p_mu = p.amplitude_sq * float(np.vdot(x, x).real)
    require_positive('P_mu', p_mu)
    sigma_sq = snr_to_noise_variance(p_mu, grid, cfg.snr_db)
    p_run = replace(p, sigma_echo_sq=sigma_sq)

    crb = crb_pipeline(x, p_run, grid)
    mu = mean_dd_signal(x, p_run, grid)
    noise_scale = math.sqrt(sigma_sq / 2)

    def trial(index: int) -> tuple[float, float, bool]:
        rng = np.random.default_rng(cfg.seed + index)
        noise = noise_scale * (rng.standard_normal(grid.n_dd) + 1j * rng.standard_normal(grid.n_dd))
        estimate = ml_estimate(mu + noise, x, p.gain, p.beta_t, cfg, grid)
        return estimate.tau_hat - p.tau_t, estimate.nu_hat - p.nu_t, estimate.on_boundary

    results = ordered_map(trial, range(cfg.trials), workers=workers, progress='mc trials')
    err_tau = np.array([r[0] for r in results])
    err_nu = np.array([r[1] for r in results])
    boundary_hits = sum(1 for r in results if r[2])
    if boundary_hits:
        logger.warning(f"{boundary_hits} of {cfg.trials} ML estimates hit the search boundary")

    mse_tau = float(np.mean(err_tau ** 2))
    mse_nu = float(np.mean(err_nu ** 2))
    report = McReport(
        mse_tau=mse_tau,
        mse_nu=mse_nu,
        crb_tau=crb.crb_tau,
        crb_nu=crb.crb_nu,
        ratio_tau=mse_tau / crb.crb_tau,
        ratio_nu=mse_nu / crb.crb_nu,
        bias_tau=float(np.mean(err_tau)),
        bias_nu=float(np.mean(err_nu)),
        trials_used=cfg.trials,
        boundary_hits=boundary_hits,
        snr_db=cfg.snr_db,
        sigma_echo_sq=sigma_sq,
        sq_errors_tau=tuple(float(e) for e in err_tau ** 2),
        sq_errors_nu=tuple(float(e) for e in err_nu ** 2),
    )
    logger.info(
        f"MC at {cfg.snr_db:g} dB over {cfg.trials} trials: "
        f"mse/crb tau={report.ratio_tau:.3f}, nu={report.ratio_nu:.3f}"
    )
    return report
