from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import pytest

from src.ddcrb.otfs import OtfsGrid, TfSymbols, random_symbols
from src.ddcrb.sensing import EchoParams, GainModel

DELTA_F = 15e3


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: long Monte-Carlo acceptance runs")


@dataclass(frozen=True)
class Instance:
    grid: OtfsGrid
    x: TfSymbols
    p: EchoParams


def make_grid(m: int = 8, n: int = 8, delta_f: float = DELTA_F) -> OtfsGrid:
    return OtfsGrid(m_delay_bins=m, n_doppler_bins=n, delta_f=delta_f, symbol_duration=1.0 / delta_f)


def make_echo(
    tau_t: float = 50e-6,
    nu_t: float = 1e3,
    beta_t: complex = 1 + 0j,
    alpha_ref: complex = 1 + 0j,
    tau_ref: float | None = None,
    sigma_echo_sq: float = 1e-2,
) -> EchoParams:
    return EchoParams(
        tau_t=tau_t,
        nu_t=nu_t,
        beta_t=beta_t,
        gain=GainModel(alpha_ref=alpha_ref, tau_ref=tau_t if tau_ref is None else tau_ref),
        sigma_echo_sq=sigma_echo_sq,
    )


def random_instance(seed: int) -> Instance:
    """M, N in {4, 8, 16}, random X, tau in [10us, 1ms], nu in [-5, 5] kHz."""
    rng = np.random.default_rng(seed)
    grid = make_grid(m=int(rng.choice([4, 8, 16])), n=int(rng.choice([4, 8, 16])))
    p = make_echo(
        tau_t=float(rng.uniform(10e-6, 1e-3)),
        nu_t=float(rng.uniform(-5e3, 5e3)),
        beta_t=complex(rng.standard_normal(), rng.standard_normal()),
        alpha_ref=complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)),
        tau_ref=float(rng.uniform(10e-6, 1e-3)),
        sigma_echo_sq=float(rng.uniform(0.1, 2.0)),
    )
    return Instance(grid=grid, x=random_symbols(grid, rng), p=p)


INSTANCE_SEEDS = list(range(20))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def grid() -> OtfsGrid:
    return make_grid()


@pytest.fixture
def echo() -> EchoParams:
    return make_echo()


@pytest.fixture
def instance_factory() -> Callable[[int], Instance]:
    return random_instance
