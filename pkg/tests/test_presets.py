"""Tests for the named parameter presets."""

from __future__ import annotations

import math

import pytest

from jcm_berry.errors import InvalidParameterError
from jcm_berry.models.params import GammaUnits, StarkConvention
from jcm_berry.presets import PRESET_ALIASES, PRESETS, RAMAN_PRESETS, get_preset, preset_names
from jcm_berry.spectra import mixing_angle


def test_cavity_presets_share_coupling():
    for name in RAMAN_PRESETS:
        preset = get_preset(name)
        assert preset.name == name
        assert preset.raman is not None
        assert preset.raman.g == pytest.approx(2.0 * math.pi * 50.0e3)
        assert preset.raman.detuning_ratio == pytest.approx(3.0)
        reduced = preset.raman.to_jcm_params(StarkConvention.ELIMINATED)
        assert preset.jcm == reduced.updated(gamma_decay=2.0 * math.pi * 1.0e3)


def test_paper_cavity_resolves():
    preset = get_preset("paper-cavity")
    assert preset.raman is not None
    assert preset.raman.omega0 == pytest.approx(2.0 * math.pi * 173.0e3)
    assert preset.jcm.lambda_m / (2.0 * math.pi) == pytest.approx(50.0e3 / 3.0)


def test_cavity_presets_read_decay_units():
    for name in RAMAN_PRESETS:
        ordinary = get_preset(name, GammaUnits.ORDINARY)
        angular = get_preset(name, GammaUnits.ANGULAR)
        assert ordinary.jcm.gamma_decay == pytest.approx(2.0 * math.pi * 1.0e3)
        assert angular.jcm.gamma_decay == pytest.approx(1.0e3)
        assert angular.raman == ordinary.raman
        assert angular.jcm.lambda_m == ordinary.jcm.lambda_m
        assert "angular" in angular.description


def test_exact_cavity_preset_hits_pi_sixth():
    preset = get_preset("paper-cavity-exact")
    assert mixing_angle(0, preset.jcm) == pytest.approx(math.pi / 6.0, abs=1e-12)
    rounded = get_preset("paper-cavity")
    assert mixing_angle(0, rounded.jcm) == pytest.approx(math.pi / 6.0, abs=0.05)


def test_fringe_preset_and_decay_units():
    ordinary = get_preset("paper-fig4")
    angular = get_preset("paper-fig4", GammaUnits.ANGULAR)
    assert ordinary.raman is None
    assert mixing_angle(0, ordinary.jcm) == pytest.approx(math.pi / 6.0)
    assert ordinary.jcm.lambda_m == pytest.approx(2.0 * math.pi * 50.0e3 / 3.0)
    assert ordinary.jcm.gamma_decay == pytest.approx(2.0 * math.pi * 1.0e3)
    assert angular.jcm.gamma_decay == pytest.approx(1.0e3)


def test_aliases_resolve_to_canonical_presets():
    for alias, canonical in PRESET_ALIASES.items():
        assert canonical in PRESETS
        assert get_preset(alias) == get_preset(canonical)
    assert preset_names()[: len(PRESETS)] == sorted(PRESETS)


def test_unknown_preset():
    assert set(PRESETS) == {"paper-cavity", "paper-cavity-exact", "paper-fig4"}
    with pytest.raises(InvalidParameterError, match="paper-cavity"):
        get_preset("nonexistent")
