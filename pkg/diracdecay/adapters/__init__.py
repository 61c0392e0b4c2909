"""Adapter layer: config files, CSV artifacts and the command line."""

from .cli import main, parse_args
from .config import chain_from_config, load_config_file, params_from_config, run_settings
from .csv_output import read_csv_header, read_csv_rows, write_csv

__all__ = [
    "chain_from_config",
    "load_config_file",
    "main",
    "params_from_config",
    "parse_args",
    "read_csv_header",
    "read_csv_rows",
    "run_settings",
    "write_csv",
]
