"""Tests for the JCM and Raman Hamiltonian builders."""

from __future__ import annotations

import math

import numpy as np
import pytest

from jcm_berry.errors import InvalidParameterError
from jcm_berry.hilbert import SpaceSpec, atom_op, number, phase_rotation
from jcm_berry.models.hamiltonians import (
    Harmonic,
    OperatorFamily,
    build_jcm_dissipative,
    build_jcm_frame,
    build_jcm_lab,
    build_jcm_phi,
    build_raman_effective,
    build_raman_full,
    jcm_loop_family,
)
from jcm_berry.models.params import JcmParams, RamanParams, StarkConvention


def test_frame_hamiltonian_sector_block(detuned, space):
    hamiltonian = build_jcm_frame(space, detuned)
    assert hamiltonian.is_hermitian()
    block = hamiltonian.block([(2, 0), (1, 1)])
    np.testing.assert_allclose(block, [[0.5, 1.0], [1.0, -0.5]], atol=1e-12)


def test_frame_hamiltonian_multiphoton_element(space):
    params = JcmParams.from_detuning(delta_m=0.3, lambda_m=0.7, m=2)
    hamiltonian = build_jcm_frame(space, params)
    assert hamiltonian.element((2, 1), (1, 3)) == pytest.approx(0.7 * math.sqrt(3.0 * 2.0))
    # sectors do not talk to each other
    assert hamiltonian.element((2, 0), (1, 3)) == 0.0
    assert hamiltonian.element((2, 0), (2, 1)) == 0.0


def test_phi_hamiltonian_is_rotated_frame(detuned, space):
    phi = 1.1
    rotation = phase_rotation(space, phi)
    expected = rotation @ build_jcm_frame(space, detuned) @ rotation.dagger()
    actual = build_jcm_phi(space, detuned, phi)
    np.testing.assert_allclose(actual.matrix, expected.matrix, atol=1e-12)


def test_lab_hamiltonian_conserves_excitations(space):
    params = JcmParams(m=2, nu=1.3, omega=2.9, lambda_m=0.4)
    excitations = number(space) + atom_op(space, 2, 2).scale(params.m)
    commutator = build_jcm_lab(space, params).commutator(excitations)
    assert np.max(np.abs(commutator.matrix)) < 1e-12


def test_dissipative_adds_photon_damping(space):
    params = JcmParams.from_detuning(delta_m=1.0, lambda_m=1.0, gamma_decay=0.4)
    difference = build_jcm_dissipative(space, params) - build_jcm_phi(space, params)
    np.testing.assert_allclose(difference.matrix, -0.2j * number(space).matrix, atol=1e-12)
    assert not build_jcm_dissipative(space, params).is_hermitian()


def test_jcm_rejects_wrong_space(detuned):
    with pytest.raises(InvalidParameterError):
        build_jcm_frame(SpaceSpec(atom_levels=3, photon_cutoff=3), detuned)
    with pytest.raises(InvalidParameterError):
        build_jcm_frame(SpaceSpec(atom_levels=2, photon_cutoff=1), detuned.updated(m=2))


def test_loop_family_tracks_phi(detuned, space):
    duration = 40.0
    family = jcm_loop_family(space, detuned, duration)
    assert family.drive_frequency == pytest.approx(2.0 * math.pi / duration)
    for fraction in (0.0, 0.25, 0.6):
        phi = 2.0 * math.pi * fraction
        np.testing.assert_allclose(
            family.matrix(fraction * duration),
            build_jcm_phi(space, detuned, phi).matrix,
            atol=1e-12,
        )
    with pytest.raises(InvalidParameterError):
        jcm_loop_family(space, detuned, 0.0)


def test_loop_family_offset_is_scalar(detuned, space):
    family = jcm_loop_family(space, detuned, 10.0, energy_offset=2.5)
    shifted = family(1.0).matrix - family.matrix(1.0)
    np.testing.assert_allclose(shifted, 2.5 * np.eye(space.dim), atol=1e-12)


def test_raman_full_is_hermitian_and_detuned(raman_space):
    params = RamanParams(omega0=1.0, g=0.8, delta=12.0, phi=0.3)
    family = build_raman_full(raman_space, params)
    assert family.drive_frequency == pytest.approx(12.0)
    for t in (0.0, 0.17, 1.3):
        operator = family(t)
        assert operator.is_hermitian()
    with pytest.raises(InvalidParameterError):
        build_raman_full(SpaceSpec(atom_levels=2, photon_cutoff=3), params)


def test_family_hermiticity_covers_drive_terms(detuned, space, raman_space):
    raman = build_raman_full(raman_space, RamanParams(omega0=1.0, g=0.8, delta=12.0, phi=0.3))
    assert raman.is_hermitian
    assert jcm_loop_family(space, detuned, 10.0).is_hermitian
    decayed = detuned.updated(gamma_decay=0.3)
    assert not jcm_loop_family(space, decayed, 10.0, dissipative=True).is_hermitian
    static = build_jcm_frame(space, detuned).matrix
    drive = np.zeros_like(static)
    drive[0, 1] = 1.0
    assert OperatorFamily(space, static, (Harmonic(drive, 2.0),)).is_hermitian
    broken = OperatorFamily(space, static, (Harmonic(drive, float("nan")),))
    assert not broken.is_hermitian


@pytest.mark.parametrize("convention", list(StarkConvention))
def test_raman_effective_elements(convention):
    space = SpaceSpec(atom_levels=2, photon_cutoff=3)
    params = RamanParams(omega0=1.5, g=1.0, delta=10.0, phi=0.4)
    hamiltonian = build_raman_effective(space, params, convention)
    assert hamiltonian.is_hermitian()
    assert hamiltonian.element((2, 0), (2, 0)) == pytest.approx(0.225)
    photon_factor = 2.0 if convention is StarkConvention.ANTINORMAL else 1.0
    assert hamiltonian.element((1, 1), (1, 1)) == pytest.approx(photon_factor * 0.1)
    sign = 1.0 if convention is StarkConvention.ANTINORMAL else -1.0
    assert hamiltonian.element((2, 0), (1, 1)) == pytest.approx(
        params.lambda1 * np.exp(1j * sign * params.phi)
    )


def test_eliminated_form_is_second_order_average():
    params = RamanParams(omega0=1.2, g=0.9, delta=9.0, phi=0.7)
    full_space = SpaceSpec(atom_levels=3, photon_cutoff=3)
    drive = build_raman_full(full_space, params).harmonics[0].operator
    averaged = (drive.conj().T @ drive - drive @ drive.conj().T) / params.delta
    lower_levels = 2 * full_space.field_dim
    effective = build_raman_effective(
        SpaceSpec(atom_levels=2, photon_cutoff=3), params, StarkConvention.ELIMINATED
    )
    np.testing.assert_allclose(
        averaged[:lower_levels, :lower_levels], effective.matrix, atol=1e-12
    )


def test_raman_params_derived_quantities():
    params = RamanParams(omega0=3.0, g=1.0, delta=9.0, phi=0.5)
    assert params.lambda1 == pytest.approx(1.0 / 3.0)
    assert params.delta1 == pytest.approx(8.0 / 9.0)
    assert params.detuning_ratio == pytest.approx(3.0)
    eliminated = params.to_jcm_params(StarkConvention.ELIMINATED)
    antinormal = params.to_jcm_params(StarkConvention.ANTINORMAL)
    assert eliminated.delta_m == pytest.approx(8.0 / 9.0)
    assert eliminated.phi == pytest.approx(-0.5)
    assert antinormal.delta_m == pytest.approx(7.0 / 9.0)
    scaled = params.scaled(2.0)
    assert scaled.lambda1 == pytest.approx(params.lambda1)
    assert scaled.delta1 == pytest.approx(params.delta1)
