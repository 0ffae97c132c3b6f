import logging
from pathlib import Path
from typing import Any

import pandas as pd

from ..config import settings

logger = logging.getLogger(__name__)


def write_table(rows: list[dict[str, Any]], path: Path, columns: list[str] | None = None) -> Path:
    """Comma-separated, '.' decimal, scientific floats, header row, LF line endings."""
    table = pd.DataFrame(rows, columns=columns)
    table.to_csv(
        path,
        index=False,
        float_format=settings.CSV_FLOAT_FORMAT,
        lineterminator='\n',
        na_rep='nan',
    )
    logger.info(f"Wrote {len(table)} rows to {path}")
    return path


def write_text(text: str, path: Path) -> Path:
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(text)
    return path
