import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from .. import __version__
from ..otfs import TfSymbols, load_pilot_csv, single_pilot, uniform_unit
from ..rsma import build_channel_set, evaluate_users, random_precoders
from ..sensing import crb_pipeline
from ..utils import DdCrbError, ScenarioError, SingularFimError, ordered_map
from ..validation import McConfig, crb_search_grid, run_mc, snr_to_noise_variance
from .output import write_table, write_text
from .scenario import McSpec, RsmaSpec, Scenario, emit_manifest, resolve_key, with_override

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SINGULAR = 2
EXIT_SCENARIO = 3
EXIT_PARTIAL = 4

SUBCOMMANDS = ('crb', 'sinr', 'mc-validate', 'sweep')
METRICS = ('crb', 'sinr', 'mc')

CRB_COLUMNS = ['tau_s', 'nu_hz', 'crb_tau_s2', 'crb_nu_hz2', 'det_fim', 'I_tautau', 'I_nunu', 'I_taunu']
CRB_CONTEXT_COLUMNS = ['m', 'n', 'delta_f', 'symbol_duration', 'sigma_echo_sq']
NORMALIZED_COLUMNS = ['crb_tau_norm', 'crb_nu_norm']
SINR_COLUMNS = ['user', 'theta', 'sigma_n_sq', 'sigma_e_sq', 'p_tot', 'sinr_common', 'sinr_private']
MC_COLUMNS = [
    'snr_db', 'sigma_echo_sq', 'trials_used', 'boundary_hits',
    'mse_tau', 'crb_tau', 'ratio_tau', 'bias_tau',
    'mse_nu', 'crb_nu', 'ratio_nu', 'bias_nu',
    'tau_min', 'tau_max', 'nu_min', 'nu_max', 'count', 'refine',
]
SWEEP_COLUMNS = ['param', 'value', 'status']


@dataclass(frozen=True)
class SweepSpec:
    key: str
    values: tuple[str, ...]


def parse_sweep(expression: str | None = None, param: str | None = None, values: str | None = None) -> SweepSpec | None:
    """`key=start:stop:step` or --param key --values a,b,c; single axis only."""
    if expression is None and param is None and values is None:
        return None
    if expression is not None:
        if param is not None or values is not None:
            raise ScenarioError("use either --sweep or --param/--values, not both")
        if '=' not in expression:
            raise ScenarioError(f"sweep must look like key=start:stop:step, got {expression!r}")
        key, bounds = (part.strip() for part in expression.split('=', 1))
        try:
            start, stop, step = (float(part) for part in bounds.split(':'))
        except ValueError as e:
            raise ScenarioError(f"sweep range must be start:stop:step, got {bounds!r}", key) from e
        if step <= 0 or stop < start:
            raise ScenarioError(f"sweep range needs step > 0 and stop >= start, got {bounds!r}", key)
        # the last point never passes stop, even when step does not divide the range
        count = math.floor((stop - start) / step + 1e-9) + 1
        points = (min(start + j * step, stop) for j in range(count))
        return SweepSpec(key=resolve_key(key), values=tuple(repr(v) for v in points))
    if param is None or values is None:
        raise ScenarioError("--param and --values must be given together")
    items = tuple(v.strip() for v in values.split(',') if v.strip())
    if not items:
        raise ScenarioError("--values is empty", param)
    return SweepSpec(key=resolve_key(param), values=items)


def pilot_symbols(scenario: Scenario) -> TfSymbols:
    pilot, grid = scenario.pilot, scenario.grid
    if pilot.kind == 'single_pilot':
        return single_pilot(grid, pilot.n, pilot.i)
    if pilot.kind == 'custom_file':
        assert pilot.path is not None
        return load_pilot_csv(pilot.path, grid)
    return uniform_unit(grid)


def crb_rows(scenario: Scenario, normalized: bool = False) -> list[dict[str, Any]]:
    grid, echo = scenario.grid, scenario.echo
    result = crb_pipeline(pilot_symbols(scenario), echo, grid)
    row: dict[str, Any] = {
        'tau_s': echo.tau_t,
        'nu_hz': echo.nu_t,
        'crb_tau_s2': result.crb_tau,
        'crb_nu_hz2': result.crb_nu,
        'det_fim': result.det_fim,
        'I_tautau': result.fim.i_tau_tau,
        'I_nunu': result.fim.i_nu_nu,
        'I_taunu': result.fim.i_tau_nu,
        'm': grid.m_delay_bins,
        'n': grid.n_doppler_bins,
        'delta_f': grid.delta_f,
        'symbol_duration': grid.symbol_duration,
        'sigma_echo_sq': echo.sigma_echo_sq,
    }
    if normalized:
        row['crb_tau_norm'], row['crb_nu_norm'] = result.normalized(echo, grid)
    return [row]


def sinr_rows(scenario: Scenario, normalized: bool = False) -> list[dict[str, Any]]:
    del normalized  # CRB-only option
    grid = scenario.grid
    rsma = scenario.rsma or RsmaSpec()
    rng = np.random.default_rng(rsma.seed)
    pre = random_precoders(grid.n_dd, rsma.users, rng, rsma.total_power, rsma.common_fraction)
    channels = [
        build_channel_set(grid, rsma.paths, rsma.sigma_e_sq, rsma.sigma_n_sq, seed=rsma.seed + 1 + k)
        for k in range(rsma.users)
    ]
    return [
        {
            'user': result.user,
            'theta': result.theta,
            'sigma_n_sq': rsma.sigma_n_sq,
            'sigma_e_sq': rsma.sigma_e_sq,
            'p_tot': pre.p_tot,
            'sinr_common': result.sinr_common,
            'sinr_private': result.sinr_private,
        }
        for result in evaluate_users(channels, pre, list(rsma.theta))
    ]


def mc_config(scenario: Scenario, x: TfSymbols) -> McConfig:
    mc = scenario.mc or McSpec()
    echo, grid = scenario.echo, scenario.grid
    if mc.explicit_ranges:
        grid_tau = (mc.tau_min, mc.tau_max, mc.count)
        grid_nu = (mc.nu_min, mc.nu_max, mc.count)
    else:
        p_mu = echo.amplitude_sq * float(np.vdot(x, x).real)
        at_snr = replace(echo, sigma_echo_sq=snr_to_noise_variance(p_mu, grid, mc.snr_db))
        grid_tau, grid_nu = crb_search_grid(echo, crb_pipeline(x, at_snr, grid), mc.span, mc.count)
    return McConfig(
        trials=mc.trials,
        snr_db=mc.snr_db,
        grid_tau=grid_tau,  # pyright: ignore[reportArgumentType]
        grid_nu=grid_nu,  # pyright: ignore[reportArgumentType]
        seed=mc.seed,
        refine=mc.refine,
    )


def mc_rows(scenario: Scenario, normalized: bool = False) -> list[dict[str, Any]]:
    del normalized
    x = pilot_symbols(scenario)
    cfg = mc_config(scenario, x)
    report = run_mc(scenario.echo, x, cfg, scenario.grid)
    return [{
        'snr_db': report.snr_db,
        'sigma_echo_sq': report.sigma_echo_sq,
        'trials_used': report.trials_used,
        'boundary_hits': report.boundary_hits,
        'mse_tau': report.mse_tau,
        'crb_tau': report.crb_tau,
        'ratio_tau': report.ratio_tau,
        'bias_tau': report.bias_tau,
        'mse_nu': report.mse_nu,
        'crb_nu': report.crb_nu,
        'ratio_nu': report.ratio_nu,
        'bias_nu': report.bias_nu,
        'tau_min': cfg.grid_tau[0],
        'tau_max': cfg.grid_tau[1],
        'nu_min': cfg.grid_nu[0],
        'nu_max': cfg.grid_nu[1],
        'count': cfg.grid_tau[2],
        'refine': cfg.refine,
    }]


RowBuilder = Callable[[Scenario, bool], list[dict[str, Any]]]

ROW_BUILDERS: dict[str, RowBuilder] = {'crb': crb_rows, 'sinr': sinr_rows, 'mc': mc_rows}


def metric_columns(metric: str, normalized: bool) -> list[str]:
    if metric == 'crb':
        return CRB_COLUMNS + CRB_CONTEXT_COLUMNS + (NORMALIZED_COLUMNS if normalized else [])
    if metric == 'sinr':
        return SINR_COLUMNS
    return MC_COLUMNS


def sweep_rows(scenario: Scenario, sweep: SweepSpec, metric: str, normalized: bool = False) -> list[dict[str, Any]]:
    builder = ROW_BUILDERS[metric]

    def evaluate(value: str) -> list[dict[str, Any]]:
        head: dict[str, Any] = {'param': sweep.key, 'value': _sweep_value(value), 'status': 'ok'}
        try:
            rows = builder(with_override(scenario, sweep.key, value), normalized)
        except DdCrbError as e:
            logger.warning(f"Sweep row {sweep.key}={value} failed: {e}")
            return [{**head, 'status': f'{type(e).__name__}: {e}'}]
        return [{**head, **row} for row in rows]

    results = ordered_map(evaluate, sweep.values, progress='sweep')
    flat = [row for rows in results for row in rows]
    if metric == 'sinr':
        # one block per user in sweep order; failed rows carry no user and go last
        flat.sort(key=lambda row: row.get('user', math.inf))
    return flat


def _sweep_value(value: str) -> float | str:
    try:
        return float(value)
    except ValueError:
        return value


def _materialize(scenario: Scenario, metric: str, seed: int | None) -> Scenario:
    """Fill in the sections this metric needs and apply the --seed override."""
    if metric == 'sinr' and scenario.rsma is None:
        scenario = replace(scenario, rsma=RsmaSpec())
    if metric == 'mc' and scenario.mc is None:
        scenario = replace(scenario, mc=McSpec())
    if seed is not None:
        if scenario.rsma is not None:
            scenario = replace(scenario, rsma=replace(scenario.rsma, seed=seed))
        if scenario.mc is not None:
            scenario = replace(scenario, mc=replace(scenario.mc, seed=seed))
    return scenario


def run(
    subcommand: str,
    scenario: Scenario,
    output_dir: str | Path,
    seed: int | None = None,
    sweep: SweepSpec | None = None,
    metric: str | None = None,
    normalized: bool = False,
) -> int:
    if subcommand not in SUBCOMMANDS:
        logger.error(f"Unknown subcommand {subcommand!r}; expected one of {', '.join(SUBCOMMANDS)}")
        return EXIT_ERROR
    if subcommand == 'sweep' and sweep is None:
        logger.error("The sweep subcommand needs --param/--values or --sweep key=start:stop:step")
        return EXIT_SCENARIO

    default_metric = {'crb': 'crb', 'sinr': 'sinr', 'mc-validate': 'mc'}.get(subcommand, 'crb')
    metric = metric or default_metric
    if metric not in METRICS:
        logger.error(f"Unknown metric {metric!r}; expected one of {', '.join(METRICS)}")
        return EXIT_ERROR

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario = _materialize(scenario, metric, seed)

    metadata = {
        'tool_version': __version__,
        'subcommand': subcommand,
        'metric': metric,
        'seed': 'scenario' if seed is None else str(seed),
        'sweep': f'{sweep.key} = {",".join(sweep.values)}' if sweep else 'none',
        'created': datetime.now(timezone.utc).isoformat(timespec='seconds'),
    }
    write_text(emit_manifest(scenario, metadata), out / 'manifest.txt')

    table = out / f"{subcommand.replace('-', '_')}.csv"
    try:
        if sweep is not None:
            rows = sweep_rows(scenario, sweep, metric, normalized)
            write_table(rows, table, SWEEP_COLUMNS + metric_columns(metric, normalized))
            failed = sum(1 for row in rows if row['status'] != 'ok')
            if failed:
                logger.error(f"{failed} of {len(rows)} sweep rows failed; see the status column")
                return EXIT_PARTIAL
            return EXIT_OK

        rows = ROW_BUILDERS[metric](scenario, normalized)
        write_table(rows, table, metric_columns(metric, normalized))
        return EXIT_OK
    except SingularFimError as e:
        logger.error(f"Singular Fisher information: {e}")
        return EXIT_SINGULAR
    except ScenarioError as e:
        logger.error(f"Scenario error: {e}")
        return EXIT_SCENARIO
    except DdCrbError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR
