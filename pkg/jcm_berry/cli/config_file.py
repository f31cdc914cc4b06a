"""
Experiment config files.

Line-oriented "key = value" text read with python-dotenv; keys are CLI flag
names (dashes or underscores). Values become parser defaults, so flags given
on the command line still win.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from dotenv import dotenv_values

from jcm_berry.errors import InvalidParameterError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}
_RESERVED = {"command", "config", "handler"}


def read_config(path: str | Path) -> dict[str, str]:
    """Parse a config file into {dest_name: raw value}."""
    path = Path(path)
    if not path.is_file():
        raise InvalidParameterError(f"Config file not found: {path}")
    values: dict[str, str] = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            raise InvalidParameterError(f"{path}: key {key!r} has no value")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


def _coerce(action: argparse.Action, raw: str) -> object:
    if action.nargs == 0:  # store_true / store_false
        text = raw.lower()
        if text in _TRUE:
            return True
        if text in _FALSE:
            return False
        raise InvalidParameterError(f"Flag {action.dest!r} expects true/false, got {raw!r}")
    if isinstance(action, argparse._AppendAction):
        items = [item.strip() for item in raw.split(",") if item.strip()]
        return [_typed(action, item) for item in items]
    return _typed(action, raw)


def _typed(action: argparse.Action, raw: str) -> object:
    if action.type is None:
        return raw
    try:
        return action.type(raw)  # type: ignore[operator]
    except (TypeError, ValueError, argparse.ArgumentTypeError) as e:
        raise InvalidParameterError(f"Config key {action.dest!r}: {e}") from e


def apply_config(subparser: argparse.ArgumentParser, values: dict[str, str]) -> None:
    """Install config values as defaults of one sub-command parser."""
    actions = {a.dest: a for a in subparser._actions if a.dest not in ("help",)}
    unknown = sorted(k for k in values if k not in actions or k in _RESERVED)
    if unknown:
        raise InvalidParameterError(f"Unknown config keys: {', '.join(unknown)}")
    defaults: dict[str, object] = {}
    for key, raw in values.items():
        action = actions[key]
        value = _coerce(action, raw)
        if action.choices is not None and value not in action.choices:
            allowed = ", ".join(sorted(map(str, action.choices)))
            raise InvalidParameterError(f"Config key {key!r} must be one of {allowed}, got {raw!r}")
        defaults[key] = value
    subparser.set_defaults(**defaults)
