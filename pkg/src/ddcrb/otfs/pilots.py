import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..utils import DimensionError, DomainError
from .grid import OtfsGrid, TfSymbols

logger = logging.getLogger(__name__)

PILOT_COLUMNS = ['n', 'i', 're', 'im']


def single_pilot(grid: OtfsGrid, n: int = 0, i: int = 0) -> TfSymbols:
    if not (0 <= n < grid.n_doppler_bins and 0 <= i < grid.m_delay_bins):
        raise DomainError(f"pilot position ({n}, {i}) outside the {grid.tf_shape} TF grid")
    x = np.zeros(grid.tf_shape, dtype=np.complex128)
    x[n, i] = 1.0
    return x


def uniform_unit(grid: OtfsGrid) -> TfSymbols:
    return np.ones(grid.tf_shape, dtype=np.complex128)


def random_symbols(grid: OtfsGrid, rng: np.random.Generator) -> TfSymbols:
    """Unit-power circular complex Gaussian symbols."""
    shape = grid.tf_shape
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def load_pilot_csv(path: str | Path, grid: OtfsGrid) -> TfSymbols:
    """Read a pilot file of `n,i,re,im` rows; cells not listed stay zero."""
    try:
        table = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DimensionError(f"pilot file {path} is not a readable CSV: {e}") from e
    missing = [c for c in PILOT_COLUMNS if c not in table.columns]
    if missing:
        raise DimensionError(f"pilot file {path} lacks columns: {', '.join(missing)}")

    x = np.zeros(grid.tf_shape, dtype=np.complex128)
    for line, row in enumerate(table.itertuples(index=False), start=2):
        try:
            n, i = int(row.n), int(row.i)
            value = complex(float(row.re), float(row.im))
        except (TypeError, ValueError) as e:
            raise DimensionError(f"pilot file {path}, line {line}: {e}") from e
        if not np.isfinite(value):
            raise DimensionError(f"pilot file {path}, line {line}: non-finite symbol {value}")
        if not (0 <= n < grid.n_doppler_bins and 0 <= i < grid.m_delay_bins):
            raise DimensionError(f"pilot file {path}: cell ({n}, {i}) outside the {grid.tf_shape} TF grid")
        x[n, i] = value
    logger.debug(f"Loaded {len(table)} pilot cells from {path}")
    return x
