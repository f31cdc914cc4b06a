"""Shared fixtures."""

from __future__ import annotations

import math

import pytest

from jcm_berry.hilbert import SpaceSpec
from jcm_berry.models.params import JcmParams


@pytest.fixture
def resonant() -> JcmParams:
    """Delta = 0, lambda = 1: theta_01 = pi/2."""
    return JcmParams.from_detuning(delta_m=0.0, lambda_m=1.0)


@pytest.fixture
def detuned() -> JcmParams:
    """Delta = lambda = 1."""
    return JcmParams.from_detuning(delta_m=1.0, lambda_m=1.0)


@pytest.fixture
def pi_sixth() -> JcmParams:
    """Delta = 2 sqrt 3 lambda: theta_01 = pi/6 and gamma_01 = pi/4."""
    return JcmParams.from_detuning(delta_m=2.0 * math.sqrt(3.0), lambda_m=1.0)


@pytest.fixture
def space() -> SpaceSpec:
    return SpaceSpec(atom_levels=2, photon_cutoff=4)


@pytest.fixture
def raman_space() -> SpaceSpec:
    return SpaceSpec(atom_levels=3, photon_cutoff=3)
