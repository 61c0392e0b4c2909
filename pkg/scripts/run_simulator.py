#!/usr/bin/env python3
"""Run the decay simulator command line.

Examples:
    python scripts/run_simulator.py survival --omega0 1 --g 1 --method bromwich
    python scripts/run_simulator.py run fig9 --out work/
"""

from __future__ import annotations

import sys
from pathlib import Path

# Allow running this file directly from repository root.
REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from diracdecay.adapters.cli import main  # noqa: E402


if __name__ == "__main__":
    sys.exit(main())
