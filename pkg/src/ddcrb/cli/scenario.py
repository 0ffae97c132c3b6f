"""Scenario files: flat `section.key = value` lines, `#` starts a comment.

Every key has a parser, an optional check and a default. A scenario converts
back to the same flat form (`to_flat`), which is what manifests contain and
what sweeps override, so any resolved scenario re-parses to an equal one.
"""
import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..otfs import OtfsGrid
from ..sensing import EchoParams, GainModel
from ..utils import (
    DdCrbError, DomainError, ScenarioError,
    require_between, require_int_at_least, require_non_negative, require_positive,
)

logger = logging.getLogger(__name__)

PILOT_KINDS = ('single_pilot', 'uniform_unit', 'custom_file')


@dataclass(frozen=True)
class PilotSpec:
    kind: str = 'uniform_unit'
    n: int = 0
    i: int = 0
    path: str | None = None


@dataclass(frozen=True)
class RsmaSpec:
    users: int = 2
    sigma_n_sq: float = 1e-1
    sigma_e_sq: float = 1e-3
    theta: tuple[float, ...] = (0.1, 0.1)
    seed: int = 0
    paths: int = 4
    total_power: float = 1.0
    common_fraction: float = 0.5


@dataclass(frozen=True)
class McSpec:
    trials: int = 500
    snr_db: float = 30.0
    seed: int = 0
    refine: bool = True
    span: float = 6.0
    count: int = 25
    tau_min: float | None = None
    tau_max: float | None = None
    nu_min: float | None = None
    nu_max: float | None = None

    @property
    def explicit_ranges(self) -> bool:
        return None not in (self.tau_min, self.tau_max, self.nu_min, self.nu_max)


@dataclass(frozen=True)
class Scenario:
    grid: OtfsGrid
    echo: EchoParams
    pilot: PilotSpec
    rsma: RsmaSpec | None = None
    mc: McSpec | None = None


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ('true', 'yes', '1', 'on'):
        return True
    if lowered in ('false', 'no', '0', 'off'):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_complex(text: str) -> complex:
    return complex(text.strip().replace(' ', ''))


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(',') if part.strip())


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return ','.join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


Check = Callable[[str, Any], Any]


def _positive(key: str, value: float) -> float:
    return require_positive(key, value)


def _non_negative(key: str, value: float) -> float:
    return require_non_negative(key, value)


def _at_least(low: int) -> Check:
    return lambda key, value: require_int_at_least(key, value, low)


def _unit_interval(key: str, value: float) -> float:
    return require_between(key, value, 0.0, 1.0)


def _thetas(key: str, value: tuple[float, ...]) -> tuple[float, ...]:
    for theta in value:
        require_between(key, theta, 0.0, 1.0)
    return value


def _pilot_kind(key: str, value: str) -> str:
    if value not in PILOT_KINDS:
        raise DomainError(f"{key} must be one of {', '.join(PILOT_KINDS)}, got {value!r}")
    return value


# key -> (parser, check)
FIELDS: dict[str, tuple[Callable[[str], Any], Check | None]] = {
    'grid.m': (int, _at_least(1)),
    'grid.n': (int, _at_least(1)),
    'grid.delta_f': (float, _positive),
    'grid.symbol_duration': (float, _positive),
    'echo.tau_t': (float, _positive),
    'echo.nu_t': (float, None),
    'echo.beta_t': (_parse_complex, None),
    'echo.alpha_ref': (_parse_complex, None),
    'echo.tau_ref': (float, _positive),
    'echo.sigma_echo_sq': (float, _positive),
    'pilot.kind': (str.strip, _pilot_kind),
    'pilot.n': (int, _at_least(0)),
    'pilot.i': (int, _at_least(0)),
    'pilot.path': (str.strip, None),
    'rsma.users': (int, _at_least(1)),
    'rsma.sigma_n_sq': (float, _positive),
    'rsma.sigma_e_sq': (float, _non_negative),
    'rsma.theta': (_parse_float_list, _thetas),
    'rsma.seed': (int, None),
    'rsma.paths': (int, _at_least(1)),
    'rsma.total_power': (float, _positive),
    'rsma.common_fraction': (float, _unit_interval),
    'mc.trials': (int, _at_least(1)),
    'mc.snr_db': (float, None),
    'mc.seed': (int, None),
    'mc.refine': (_parse_bool, None),
    'mc.span': (float, _positive),
    'mc.count': (int, _at_least(3)),
    'mc.tau_min': (float, _positive),
    'mc.tau_max': (float, _positive),
    'mc.nu_min': (float, None),
    'mc.nu_max': (float, None),
}

GRID_DEFAULTS = {'grid.m': 8, 'grid.n': 8, 'grid.delta_f': 15e3}
ECHO_DEFAULTS = {
    'echo.tau_t': 50e-6,
    'echo.nu_t': 1e3,
    'echo.beta_t': 1 + 0j,
    'echo.alpha_ref': 1 + 0j,
    'echo.sigma_echo_sq': 1e-2,
}


def resolve_key(key: str) -> str:
    """Accept a dotted key or a bare field name that ends exactly one dotted key."""
    if key in FIELDS:
        return key
    matches = [k for k in FIELDS if k.split('.', 1)[1] == key]
    if len(matches) == 1:
        return matches[0]
    raise ScenarioError(f"unknown scenario key: {key}", key)


def read_pairs(path: str | Path) -> dict[str, str]:
    pairs: dict[str, str] = {}
    with open(path, encoding='utf-8') as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ScenarioError(f"{path}:{number}: expected `section.key = value`, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split('=', 1))
            if key not in FIELDS:
                raise ScenarioError(f"{path}:{number}: unknown key `{key}`", key)
            if key in pairs:
                raise ScenarioError(f"{path}:{number}: duplicate key `{key}`", key)
            pairs[key] = value
    return pairs


def _value(pairs: dict[str, str], key: str, default: Any = None) -> Any:
    if key not in pairs:
        return default
    parse, check = FIELDS[key]
    try:
        value = parse(pairs[key])
        if check is not None:
            value = check(key, value)
    except DdCrbError as e:
        raise ScenarioError(str(e), key) from e
    except ValueError as e:
        raise ScenarioError(f"{key}: cannot parse {pairs[key]!r} ({e})", key) from e
    return value


def _section_present(pairs: dict[str, str], section: str) -> bool:
    return any(key.startswith(section + '.') for key in pairs)


def from_flat(pairs: dict[str, str], base_dir: Path | None = None) -> Scenario:
    for key in pairs:
        if key not in FIELDS:
            raise ScenarioError(f"unknown key `{key}`", key)

    delta_f = _value(pairs, 'grid.delta_f', GRID_DEFAULTS['grid.delta_f'])
    grid = OtfsGrid(
        m_delay_bins=_value(pairs, 'grid.m', GRID_DEFAULTS['grid.m']),
        n_doppler_bins=_value(pairs, 'grid.n', GRID_DEFAULTS['grid.n']),
        delta_f=delta_f,
        symbol_duration=_value(pairs, 'grid.symbol_duration', 1.0 / delta_f),
    )

    tau_t = _value(pairs, 'echo.tau_t', ECHO_DEFAULTS['echo.tau_t'])
    echo = EchoParams(
        tau_t=tau_t,
        nu_t=_value(pairs, 'echo.nu_t', ECHO_DEFAULTS['echo.nu_t']),
        beta_t=_value(pairs, 'echo.beta_t', ECHO_DEFAULTS['echo.beta_t']),
        gain=GainModel(
            alpha_ref=_value(pairs, 'echo.alpha_ref', ECHO_DEFAULTS['echo.alpha_ref']),
            tau_ref=_value(pairs, 'echo.tau_ref', tau_t),
        ),
        sigma_echo_sq=_value(pairs, 'echo.sigma_echo_sq', ECHO_DEFAULTS['echo.sigma_echo_sq']),
    )

    return Scenario(
        grid=grid,
        echo=echo,
        pilot=_pilot(pairs, grid, base_dir),
        rsma=_rsma(pairs) if _section_present(pairs, 'rsma') else None,
        mc=_mc(pairs, echo) if _section_present(pairs, 'mc') else None,
    )


def _pilot(pairs: dict[str, str], grid: OtfsGrid, base_dir: Path | None) -> PilotSpec:
    kind = _value(pairs, 'pilot.kind', 'uniform_unit')
    n = _value(pairs, 'pilot.n', 0)
    i = _value(pairs, 'pilot.i', 0)
    if n >= grid.n_doppler_bins:
        raise ScenarioError(f"pilot.n must be < grid.n ({grid.n_doppler_bins}), got {n}", 'pilot.n')
    if i >= grid.m_delay_bins:
        raise ScenarioError(f"pilot.i must be < grid.m ({grid.m_delay_bins}), got {i}", 'pilot.i')

    path = _value(pairs, 'pilot.path')
    if kind == 'custom_file':
        if not path:
            raise ScenarioError("pilot.path is required when pilot.kind = custom_file", 'pilot.path')
        resolved = Path(path)
        if not resolved.is_absolute() and base_dir is not None:
            resolved = base_dir / resolved
        if not resolved.is_file():
            raise ScenarioError(f"pilot.path does not exist: {resolved}", 'pilot.path')
        path = str(resolved.resolve())
    return PilotSpec(kind=kind, n=n, i=i, path=path)


def _rsma(pairs: dict[str, str]) -> RsmaSpec:
    defaults = RsmaSpec()
    users = _value(pairs, 'rsma.users', defaults.users)
    theta = _value(pairs, 'rsma.theta', (defaults.theta[0],))
    if len(theta) == 1:
        theta = theta * users
    if len(theta) != users:
        raise ScenarioError(f"rsma.theta needs 1 or {users} values, got {len(theta)}", 'rsma.theta')
    return RsmaSpec(
        users=users,
        sigma_n_sq=_value(pairs, 'rsma.sigma_n_sq', defaults.sigma_n_sq),
        sigma_e_sq=_value(pairs, 'rsma.sigma_e_sq', defaults.sigma_e_sq),
        theta=theta,
        seed=_value(pairs, 'rsma.seed', defaults.seed),
        paths=_value(pairs, 'rsma.paths', defaults.paths),
        total_power=_value(pairs, 'rsma.total_power', defaults.total_power),
        common_fraction=_value(pairs, 'rsma.common_fraction', defaults.common_fraction),
    )


def _mc(pairs: dict[str, str], echo: EchoParams) -> McSpec:
    defaults = McSpec()
    spec = McSpec(
        trials=_value(pairs, 'mc.trials', defaults.trials),
        snr_db=_value(pairs, 'mc.snr_db', defaults.snr_db),
        seed=_value(pairs, 'mc.seed', defaults.seed),
        refine=_value(pairs, 'mc.refine', defaults.refine),
        span=_value(pairs, 'mc.span', defaults.span),
        count=_value(pairs, 'mc.count', defaults.count),
        tau_min=_value(pairs, 'mc.tau_min'),
        tau_max=_value(pairs, 'mc.tau_max'),
        nu_min=_value(pairs, 'mc.nu_min'),
        nu_max=_value(pairs, 'mc.nu_max'),
    )
    given = [key for key in ('mc.tau_min', 'mc.tau_max', 'mc.nu_min', 'mc.nu_max') if key in pairs]
    if given and not spec.explicit_ranges:
        raise ScenarioError("mc.tau_min, mc.tau_max, mc.nu_min and mc.nu_max must be given together", given[0])
    if spec.explicit_ranges:
        assert spec.tau_min is not None and spec.tau_max is not None
        assert spec.nu_min is not None and spec.nu_max is not None
        if not spec.tau_min <= echo.tau_t <= spec.tau_max:
            raise ScenarioError(f"mc tau range [{spec.tau_min}, {spec.tau_max}] must contain echo.tau_t", 'mc.tau_min')
        if not spec.nu_min <= echo.nu_t <= spec.nu_max:
            raise ScenarioError(f"mc nu range [{spec.nu_min}, {spec.nu_max}] must contain echo.nu_t", 'mc.nu_min')
    return spec


def to_flat(scenario: Scenario) -> dict[str, str]:
    grid, echo, pilot = scenario.grid, scenario.echo, scenario.pilot
    values: dict[str, Any] = {
        'grid.m': grid.m_delay_bins,
        'grid.n': grid.n_doppler_bins,
        'grid.delta_f': float(grid.delta_f),
        'grid.symbol_duration': float(grid.symbol_duration),
        'echo.tau_t': float(echo.tau_t),
        'echo.nu_t': float(echo.nu_t),
        'echo.beta_t': complex(echo.beta_t),
        'echo.alpha_ref': complex(echo.gain.alpha_ref),
        'echo.tau_ref': float(echo.gain.tau_ref),
        'echo.sigma_echo_sq': float(echo.sigma_echo_sq),
        'pilot.kind': pilot.kind,
        'pilot.n': pilot.n,
        'pilot.i': pilot.i,
    }
    if pilot.path is not None:
        values['pilot.path'] = pilot.path
    if scenario.rsma is not None:
        r = scenario.rsma
        values.update({
            'rsma.users': r.users,
            'rsma.sigma_n_sq': float(r.sigma_n_sq),
            'rsma.sigma_e_sq': float(r.sigma_e_sq),
            'rsma.theta': tuple(r.theta),
            'rsma.seed': r.seed,
            'rsma.paths': r.paths,
            'rsma.total_power': float(r.total_power),
            'rsma.common_fraction': float(r.common_fraction),
        })
    if scenario.mc is not None:
        m = scenario.mc
        values.update({
            'mc.trials': m.trials,
            'mc.snr_db': float(m.snr_db),
            'mc.seed': m.seed,
            'mc.refine': m.refine,
            'mc.span': float(m.span),
            'mc.count': m.count,
        })
        if m.explicit_ranges:
            values.update({
                'mc.tau_min': float(m.tau_min),  # pyright: ignore[reportArgumentType]
                'mc.tau_max': float(m.tau_max),  # pyright: ignore[reportArgumentType]
                'mc.nu_min': float(m.nu_min),  # pyright: ignore[reportArgumentType]
                'mc.nu_max': float(m.nu_max),  # pyright: ignore[reportArgumentType]
            })
    return {key: _format(value) for key, value in values.items()}


def parse_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"scenario file not found: {path}")
    scenario = from_flat(read_pairs(path), base_dir=path.parent)
    logger.info(f"Scenario loaded from {path}: M={scenario.grid.m_delay_bins}, N={scenario.grid.n_doppler_bins}")
    return scenario


def with_override(scenario: Scenario, key: str, value: str) -> Scenario:
    """The scenario with one flat key replaced, re-validated as a whole."""
    pairs = to_flat(scenario)
    pairs[resolve_key(key)] = value
    return from_flat(pairs)


def emit_manifest(scenario: Scenario, metadata: dict[str, str] | None = None) -> str:
    lines = ['# dd-crb run manifest']
    for key, value in (metadata or {}).items():
        lines.append(f'# {key}: {value}')
    lines.extend(f'{key} = {value}' for key, value in to_flat(scenario).items())
    return '\n'.join(lines) + '\n'
