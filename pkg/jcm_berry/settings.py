"""
Process settings.

Read from the environment after loading an optional `.env` file:

    JCM_BERRY_LOG_LEVEL=INFO
    JCM_BERRY_WORKERS=8
    JCM_BERRY_WILSON_MESH_CAP=1048576
"""

from __future__ import annotations

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Runtime knobs that are not physics parameters."""

    log_level: str = "WARNING"
    workers: int = Field(default=4, ge=1)  # sweep worker threads
    wilson_mesh_cap: int = Field(default=2**20, ge=16)  # refinement stops here


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings from `.env` and the environment (cached)."""
    load_dotenv()
    values: dict[str, str] = {}
    for field_name in Settings.model_fields:
        raw = os.getenv(f"JCM_BERRY_{field_name.upper()}")
        if raw is not None:
            values[field_name] = raw
    return Settings.model_validate(values)
