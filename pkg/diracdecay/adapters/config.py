"""key=value run configuration.

Mental model refresher:
- Files use the same flat format as a `.env` file: blank lines and `#`
  comments are skipped, the first `=` splits key from value, and matching
  quotes around the value are stripped.
- Precedence is defaults < config file < CLI flags; this module only merges
  the first two, the CLI layers its own flags on top.
- Environment variables carry process-level settings (output directory,
  strict comparison), never physics parameters.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Mapping

from ..domain.model import INFINITE, Cutoff, ModelParams
from ..domain.ssh import DEFAULT_CELLS, SshChain
from ..domain.volterra import Scheme
from ..errors import ConfigError
from ..types import ConfigMapping

MODEL_KEYS = frozenset({"omega0", "g", "m", "lambda", "hbar"})
RUN_KEYS = frozenset({"dt", "t_max", "scheme", "sigma", "n_modes", "t1", "t2", "cells", "l_max"})
KNOWN_KEYS = MODEL_KEYS | RUN_KEYS

MODEL_DEFAULTS: dict[str, str] = {"omega0": "1.0", "g": "1.0", "m": "0.0", "lambda": "inf", "hbar": "1.0"}
SSH_DEFAULTS: dict[str, str] = {
    "t1": "0.18",
    "t2": "0.18",
    "g": "0.136",
    "omega0": "0.01",
    "cells": str(DEFAULT_CELLS),
    "l_max": "120",
}

OUT_DIR_ENV = "DIRACDECAY_OUT_DIR"
FAIL_ON_FLAG_ENV = "DIRACDECAY_FAIL_ON_FLAG"
_INFINITE_SPELLINGS = {"inf", "+inf", "infinity", "infinite"}


def load_config_file(path: Path | str) -> dict[str, str]:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")

    values: dict[str, str] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        text = line.strip()
        if not text or text.startswith("#") or "=" not in text:
            continue
        key, value = text.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            continue
        if value.startswith(("'", '"')) and value.endswith(("'", '"')) and len(value) >= 2:
            value = value[1:-1]
        values[key] = value

    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return values


def parse_float(name: str, raw: Any) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {raw!r}") from None


def parse_int(name: str, raw: Any) -> int:
    try:
        return int(str(raw).strip())
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def parse_cutoff(raw: Any) -> float | Cutoff:
    if str(raw).strip().lower() in _INFINITE_SPELLINGS:
        return INFINITE
    return parse_float("lambda", raw)


def _merged(values: ConfigMapping | None, overrides: Mapping[str, Any] | None, defaults: Mapping[str, str]) -> dict[str, Any]:
    merged: dict[str, Any] = dict(defaults) | dict(values or {})
    merged |= {key: value for key, value in (overrides or {}).items() if value is not None}
    return merged


def params_from_config(
    values: ConfigMapping | None = None, overrides: Mapping[str, Any] | None = None
) -> ModelParams:
    merged = _merged(values, overrides, MODEL_DEFAULTS)
    return ModelParams(
        omega0=parse_float("omega0", merged["omega0"]),
        g=parse_float("g", merged["g"]),
        m=parse_float("m", merged["m"]),
        lam=parse_cutoff(merged["lambda"]),
        hbar=parse_float("hbar", merged["hbar"]),
    )


def chain_from_config(
    values: ConfigMapping | None = None, overrides: Mapping[str, Any] | None = None
) -> SshChain:
    merged = _merged(values, overrides, SSH_DEFAULTS)
    return SshChain(
        n_cells=parse_int("cells", merged["cells"]),
        t1=parse_float("t1", merged["t1"]),
        t2=parse_float("t2", merged["t2"]),
        g=parse_float("g", merged["g"]),
        omega0=parse_float("omega0", merged["omega0"]),
    )


def run_settings(
    values: ConfigMapping | None = None, overrides: Mapping[str, Any] | None = None
) -> dict[str, Any]:
    """Typed run keys; absent keys map to None so callers choose their defaults."""
    merged = _merged(values, overrides, {})
    settings: dict[str, Any] = {key: None for key in RUN_KEYS}
    for key in ("dt", "t_max", "sigma", "t1", "t2", "l_max"):
        if merged.get(key) is not None:
            settings[key] = parse_float(key, merged[key])
    for key in ("n_modes", "cells"):
        if merged.get(key) is not None:
            settings[key] = parse_int(key, merged[key])
    if merged.get("scheme") is not None:
        raw = str(merged["scheme"]).strip().upper()
        try:
            settings["scheme"] = Scheme(raw)
        except ValueError:
            raise ConfigError(f"scheme must be TRAPEZOID or SIMPSON, got {merged['scheme']!r}") from None
    return settings


def out_dir_from_env(default: Path | str = ".") -> Path:
    raw = os.getenv(OUT_DIR_ENV)
    if raw is None or not raw.strip():
        return Path(default)
    return Path(raw.strip())


def fail_on_flag_from_env() -> bool:
    return _env_bool(FAIL_ON_FLAG_ENV, default=False)


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    normalized = raw.strip().lower()
    if normalized in {"1", "true", "yes", "on"}:
        return True
    if normalized in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(f"Invalid boolean value for {name}: {raw!r}")
