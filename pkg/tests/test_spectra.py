"""Tests for dressed states and the numerical spectrum."""

from __future__ import annotations

import math

import numpy as np
import pytest

from jcm_berry.errors import DegenerateSpectrumError, InvalidParameterError
from jcm_berry.hilbert import SpaceSpec
from jcm_berry.models.hamiltonians import build_jcm_dissipative, build_jcm_frame
from jcm_berry.models.params import Branch, JcmParams
from jcm_berry.spectra import (
    complex_mixing_data,
    diagonalize,
    dressed_pair,
    dressed_state,
    generalized_rabi_frequency,
    mixing_angle,
    sector_factor,
)


def test_sector_factor():
    assert sector_factor(0, 1) == 1
    assert sector_factor(2, 1) == 3
    assert sector_factor(1, 3) == 24
    with pytest.raises(InvalidParameterError):
        sector_factor(-1, 1)


def test_mixing_angle_limits(resonant, pi_sixth):
    assert mixing_angle(0, resonant) == pytest.approx(math.pi / 2.0)
    assert mixing_angle(0, pi_sixth) == pytest.approx(math.pi / 6.0)
    negative = JcmParams.from_detuning(delta_m=-2.0 * math.sqrt(3.0), lambda_m=1.0)
    assert mixing_angle(0, negative) == pytest.approx(5.0 * math.pi / 6.0)
    decoupled = JcmParams.from_detuning(delta_m=1.0, lambda_m=0.0)
    assert mixing_angle(0, decoupled) == 0.0


def test_mixing_angle_degenerate():
    with pytest.raises(DegenerateSpectrumError):
        mixing_angle(0, JcmParams.from_detuning(delta_m=0.0, lambda_m=0.0))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_dressed_states_are_eigenvectors(m, n):
    params = JcmParams.from_detuning(delta_m=0.8, lambda_m=0.6, m=m)
    plus, minus = dressed_pair(n, params)
    hamiltonian = build_jcm_frame(plus.vector.space, params)
    rabi = generalized_rabi_frequency(n, params)
    for state, sign in ((plus, 1.0), (minus, -1.0)):
        image = hamiltonian.apply(state.vector).amplitudes
        np.testing.assert_allclose(image, sign * rabi / 2.0 * state.vector.amplitudes, atol=1e-12)
        assert state.energy == pytest.approx(sign * rabi / 2.0)
    assert abs(plus.vector.overlap(minus.vector)) < 1e-14


def test_dressed_state_gauge_and_weights(detuned):
    plus = dressed_state(0, Branch.PLUS, detuned)
    minus = dressed_state(0, Branch.MINUS, detuned)
    assert plus.vector.amplitude(2, 0).real > 0.0
    assert minus.vector.amplitude(1, 1).real > 0.0
    assert plus.upper_weight == pytest.approx(plus.vector.population(2, 0))
    assert minus.upper_weight == pytest.approx(minus.vector.population(2, 0))
    assert plus.upper_weight + minus.upper_weight == pytest.approx(1.0)


def test_dressed_pair_rejects_small_space(detuned):
    with pytest.raises(InvalidParameterError):
        dressed_pair(2, detuned, SpaceSpec(atom_levels=2, photon_cutoff=2))


def test_numerical_spectrum_matches_closed_form(detuned):
    space = SpaceSpec(atom_levels=2, photon_cutoff=5)
    spectrum = diagonalize(build_jcm_frame(space, detuned))
    assert spectrum.left is None
    values = spectrum.eigenvalues.real
    for n in range(4):
        half = generalized_rabi_frequency(n, detuned) / 2.0
        assert np.min(np.abs(values - half)) < 1e-10
        assert np.min(np.abs(values + half)) < 1e-10
    assert np.all(np.diff(values) >= -1e-12)


def test_non_hermitian_spectrum_is_biorthonormal():
    params = JcmParams.from_detuning(delta_m=1.0, lambda_m=1.0, gamma_decay=0.3)
    space = SpaceSpec(atom_levels=2, photon_cutoff=3)
    spectrum = diagonalize(build_jcm_dissipative(space, params))
    assert spectrum.left is not None
    pairing = spectrum.left.conj().T @ spectrum.right
    np.testing.assert_allclose(np.diag(pairing), np.ones(space.dim), atol=1e-10)
    assert np.all(spectrum.eigenvalues.imag <= 1e-12)


def test_complex_mixing_reduces_to_cos_two_theta(pi_sixth):
    z = complex_mixing_data(0, pi_sixth)
    assert z.real == pytest.approx(math.cos(math.pi / 3.0))
    assert z.imag == pytest.approx(0.0, abs=1e-15)


def test_complex_mixing_degenerate_point():
    params = JcmParams.from_detuning(delta_m=0.0, lambda_m=1.0, gamma_decay=4.0)
    with pytest.raises(DegenerateSpectrumError):
        complex_mixing_data(0, params)


def test_complex_mixing_is_continuous_as_decay_vanishes(pi_sixth):
    closed = math.cos(math.pi / 3.0)
    gaps = [
        abs(complex_mixing_data(0, pi_sixth.updated(gamma_decay=float(g))) - closed)
        for g in np.geomspace(1e-1, 1e-5, 9)
    ]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-9
    tiny = complex_mixing_data(0, pi_sixth.updated(gamma_decay=1e-8))
    assert abs(tiny - closed) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_mixing_angle_decreases_with_detuning(m, n):
    angles = [
        mixing_angle(n, JcmParams.from_detuning(delta_m=float(d), lambda_m=1.0, m=m))
        for d in np.linspace(-5.0, 5.0, 41)
    ]
    assert all(a > b for a, b in zip(angles, angles[1:]))
    assert 0.0 < angles[-1] < math.pi / 2.0 < angles[0] < math.pi


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize("delta", [-5.0, -1.0, 0.0, 1.0, 5.0])
def test_dressed_pair_matches_diagonalization(m, n, delta):
    params = JcmParams.from_detuning(delta_m=delta, lambda_m=1.0, m=m)
    pair = dressed_pair(n, params)
    space = pair[0].vector.space
    spectrum = diagonalize(build_jcm_frame(space, params))
    values = spectrum.eigenvalues.real
    for state in pair:
        index = int(np.argmin(np.abs(values - state.energy)))
        assert values[index] == pytest.approx(state.energy, abs=1e-10)
        numerical = spectrum.vector(space, index)
        assert abs(numerical.overlap(state.vector)) == pytest.approx(1.0, abs=1e-10)
