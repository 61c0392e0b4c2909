"""Shared type aliases for the simulator package."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import numpy as np
import numpy.typing as npt

RealArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

ComplexFn = Callable[[complex], complex]
VectorComplexFn = Callable[[ComplexArray], ComplexArray]
SurvivalFn = Callable[[float], float]

ConfigMapping = Mapping[str, str]
HeaderDict = dict[str, Any]
RunResult = dict[str, Any]
ComparisonResult = dict[str, Any]

WriteTableFn = Callable[[Path, HeaderDict, Sequence[str], Sequence[Sequence[Any]]], Path]
