"""Self-describing CSV artifacts.

Every file starts with `# key=value` lines (parameters, method, tolerances,
code version) followed by one column-name row and the data rows. Files are
written to a temp file in the target directory and renamed into place.
"""

from __future__ import annotations

import io
import math
import os
from pathlib import Path
import tempfile
from typing import Any, Sequence

import pandas as pd

from ..errors import ConfigError
from ..types import HeaderDict


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        number = float(value)
        if math.isnan(number):
            return "nan"
        return format(number, ".17g")
    return str(value)


def write_csv(
    path: Path | str,
    header: HeaderDict,
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    for row in rows:
        if len(row) != len(columns):
            raise ConfigError(
                f"row has {len(row)} values for {len(columns)} columns in {path.name}",
                code="INVALID_ARGUMENT",
            )

    handle = tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", newline="", dir=path.parent, prefix=f".{path.name}.", delete=False
    )
    try:
        with handle:
            for key, value in header.items():
                text = format_value(value).replace("\n", " ")
                handle.write(f"# {key}={text}\n")
            frame = pd.DataFrame([[format_value(item) for item in row] for row in rows], columns=list(columns))
            frame.to_csv(handle, index=False, lineterminator="\n")
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise
    return path


def read_csv_header(path: Path | str) -> dict[str, str]:
    header: dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            text = line[1:].strip()
            if "=" not in text:
                continue
            key, value = text.split("=", 1)
            header[key.strip()] = value.strip()
    return header


def read_csv_rows(path: Path | str) -> tuple[list[str], list[list[str]]]:
    """Column names and raw data rows, skipping the header block."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        body = [line for line in handle if not line.startswith("#")]
    if not body:
        return [], []
    frame = pd.read_csv(io.StringIO("".join(body)), dtype=str, keep_default_na=False)
    return list(frame.columns), frame.values.tolist()
