"""
CSV tables and sweep specifications.

Tables are pandas frames written with '#'-prefixed provenance lines, comma
separators and 17 significant digits. The `# generated:` line is the only
non-deterministic content.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from jcm_berry import __version__
from jcm_berry.errors import NumericalError, OutputError

TIMESTAMP_PREFIX = "# generated:"
FLOAT_FORMAT = "%.17g"


@dataclass
class CsvTable:
    """Ordered columns of finite numbers plus provenance comments."""

    frame: pd.DataFrame
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        numeric = self.frame.select_dtypes(include="number")
        if not np.all(np.isfinite(numeric.to_numpy(dtype=float))):
            bad = [c for c in numeric.columns if not np.all(np.isfinite(numeric[c]))]
            raise NumericalError(f"Non-finite values in columns: {', '.join(bad)}")

    @property
    def columns(self) -> list[str]:
        return [str(c) for c in self.frame.columns]

    def render(self, timestamp: bool = True) -> str:
        lines = [f"# jcm-berry {__version__}"]
        lines += [f"# {key}: {value}" for key, value in self.provenance.items()]
        if timestamp:
            lines.append(f"{TIMESTAMP_PREFIX} {datetime.now(timezone.utc).isoformat()}")
        body = self.frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return "\n".join(lines) + "\n" + body

    def write(self, out: str | Path | None) -> None:
        """Write to `out`, or to stdout when `out` is None or "-"."""
        text = self.render()
        if out is None or str(out) == "-":
            sys.stdout.write(text)
            return
        path = Path(out)
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise OutputError(f"Could not write {path}: {e}") from e


def read_table(path: str | Path) -> pd.DataFrame:
    """Read a table written by CsvTable, skipping comment lines."""
    try:
        return pd.read_csv(path, comment="#", float_precision="round_trip")
    except OSError as e:
        raise OutputError(f"Could not read {path}: {e}") from e


SweepVariable = Literal["delta_over_lambda", "gamma_decay", "xi", "m"]
FIXED_KEYS = {"delta_over_lambda", "gamma_decay", "xi", "m", "lambda_m"}


class SweepSpec(BaseModel):
    """One-dimensional sweep over a named variable; other values come from `fixed`."""

    model_config = ConfigDict(frozen=True)

    variable: SweepVariable
    min: float
    max: float
    points: int = Field(ge=2)
    fixed: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check(self) -> SweepSpec:
        if not self.min < self.max:
            raise ValueError(f"min must be < max, got {self.min} >= {self.max}")
        unknown = sorted(set(self.fixed) - FIXED_KEYS)
        if unknown:
            raise ValueError(f"Unknown fixed parameters: {', '.join(unknown)}")
        if self.variable in self.fixed:
            raise ValueError(f"{self.variable} is both swept and fixed")
        if self.variable == "m":
            values = self.values()
            if not np.allclose(values, np.rint(values)) or values[0] < 1:
                raise ValueError("An m sweep needs integer points >= 1")
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.points)
