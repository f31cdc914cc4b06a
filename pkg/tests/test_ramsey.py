"""Tests for the Ramsey protocol, fringes and the simulated cavity passage."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from jcm_berry.errors import InvalidParameterError
from jcm_berry.geometry import berry_dissipative_analytic, berry_vacuum
from jcm_berry.models.params import GammaMode, JcmParams
from jcm_berry.presets import get_preset
from jcm_berry.ramsey import (
    AtomState,
    RamseyConfig,
    cavity_passage_exact,
    cavity_passage_model,
    detection_probability,
    detection_probability_dissipative,
    fringe_offset,
    fringe_phase,
    fringe_scan,
    ramsey_coefficients,
    ramsey_state_after_r1,
    ramsey_state_after_r2,
)

QUARTER = math.pi / 4.0


def test_first_zone_states():
    assert np.allclose(ramsey_state_after_r1(0.0).amplitudes, [0.0, 1.0])
    assert np.allclose(ramsey_state_after_r1(math.pi).amplitudes, [1j, 0.0])
    half = ramsey_state_after_r1(math.pi / 2.0)
    assert np.allclose(half.amplitudes, np.array([1j, 1.0]) / math.sqrt(2.0))


def test_passage_model_phases():
    state = AtomState(np.array([1.0, 1.0]) / math.sqrt(2.0))
    passed = cavity_passage_model(state, xi=0.3, gamma=QUARTER)
    assert passed.c1 == pytest.approx(np.exp(-0.3j) / math.sqrt(2.0))
    assert passed.c2 == pytest.approx(np.exp(1j * (QUARTER + 0.3)) / math.sqrt(2.0))
    assert passed.norm() == pytest.approx(1.0)


def test_atom_state_validation():
    with pytest.raises(InvalidParameterError):
        AtomState(np.zeros(3))
    with pytest.raises(InvalidParameterError):
        AtomState.excited().population(3)
    with pytest.raises(ValidationError):
        RamseyConfig(pulse_area_1=7.0)


def test_closed_form_matches_step_by_step():
    for a1, a2, xi, gamma in itertools.product(
        (0.3, math.pi / 2.0, 2.0), (math.pi / 2.0, 1.1), (0.0, 0.7), (QUARTER, -1.2)
    ):
        state = ramsey_state_after_r1(a1)
        state = ramsey_state_after_r2(cavity_passage_model(state, xi, gamma), a2)
        config = RamseyConfig(pulse_area_1=a1, pulse_area_2=a2, xi=xi, gamma=gamma)
        c1, c2 = ramsey_coefficients(config)
        assert c1 == pytest.approx(state.c1, abs=1e-12)
        assert c2 == pytest.approx(state.c2, abs=1e-12)


def test_probabilities_conserved_on_grid():
    areas = np.linspace(0.0, 2.0 * math.pi, 5)
    phases = np.linspace(-math.pi, math.pi, 5)
    for a1, a2, xi, gamma in itertools.product(areas, areas, phases, phases):
        config = RamseyConfig(pulse_area_1=a1, pulse_area_2=a2, xi=xi, gamma=gamma)
        c1, c2 = ramsey_coefficients(config)
        assert abs(c1) ** 2 + abs(c2) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_half_pi_pulses_give_cosine_fringe():
    for xi, gamma in itertools.product((0.0, 0.4, 2.0), (0.0, QUARTER, 3.0)):
        p2 = detection_probability(RamseyConfig(xi=xi, gamma=gamma))
        assert p2 == pytest.approx((1.0 - math.cos(gamma + 2.0 * xi)) / 2.0, abs=1e-12)


def test_known_detection_values():
    assert detection_probability(RamseyConfig()) == pytest.approx(0.0, abs=1e-15)
    assert detection_probability(RamseyConfig(gamma=QUARTER)) == pytest.approx(
        0.1464466094067262, abs=1e-12
    )
    assert detection_probability(RamseyConfig(xi=math.pi / 2.0)) == pytest.approx(1.0)


def test_probability_periodicity():
    base = RamseyConfig(pulse_area_1=1.0, pulse_area_2=2.0, xi=0.3, gamma=0.9)
    shifted_gamma = base.model_copy(update={"gamma": 0.9 + 2.0 * math.pi})
    shifted_xi = base.model_copy(update={"xi": 0.3 + math.pi})
    p2 = detection_probability(base)
    assert detection_probability(shifted_gamma) == pytest.approx(p2, abs=1e-12)
    assert detection_probability(shifted_xi) == pytest.approx(p2, abs=1e-12)


def test_dissipative_probability(pi_sixth):
    config = RamseyConfig(xi=0.2)
    ideal = detection_probability(config.model_copy(update={"gamma": QUARTER}))
    assert detection_probability_dissipative(config, pi_sixth) == pytest.approx(ideal, abs=1e-12)
    decayed = pi_sixth.updated(gamma_decay=0.05)
    expected = detection_probability(
        config.model_copy(update={"gamma": berry_dissipative_analytic(decayed).gamma})
    )
    assert detection_probability_dissipative(config, decayed) == pytest.approx(expected)


def test_fringe_scan_columns_and_offset():
    params = get_preset("paper-fig4").jcm
    frame = fringe_scan(GammaMode.IDEAL, params)
    assert isinstance(frame, pd.DataFrame)
    assert list(frame.columns) == ["xi", "p2_no_berry", "p2_berry", "p2_dissipative"]
    assert len(frame) == 401
    assert frame["p2_no_berry"].iloc[0] == pytest.approx(0.0, abs=1e-15)
    quarter_turn = frame.loc[np.isclose(frame["xi"], math.pi / 2.0), "p2_no_berry"]
    assert quarter_turn.iloc[0] == pytest.approx(1.0)
    offset = fringe_offset(frame["xi"], frame["p2_no_berry"], frame["p2_berry"])
    assert abs(abs(offset) - math.pi / 8.0) <= 0.01
    assert np.max(np.abs(frame["p2_berry"] - frame["p2_dissipative"])) <= 0.01


def test_fringe_scan_rejects_bad_input(pi_sixth):
    with pytest.raises(InvalidParameterError):
        fringe_scan(GammaMode.IDEAL, pi_sixth, points=1)
    with pytest.raises(InvalidParameterError):
        fringe_scan(GammaMode.IDEAL, pi_sixth, xi_range=(1.0, 0.0))
    with pytest.raises(InvalidParameterError):
        fringe_scan(GammaMode.EXACT_PASSAGE, pi_sixth)


def test_fringe_phase_recovers_synthetic_phase():
    xi = np.linspace(0.0, 2.0 * math.pi, 101)
    for gamma in (0.0, QUARTER, 2.5, -1.0):
        p2 = 0.5 - 0.4 * np.cos(gamma + 2.0 * xi)
        assert fringe_phase(xi, p2) == pytest.approx(gamma, abs=1e-10)


def test_passage_of_nearly_decoupled_atom():
    params = JcmParams.from_detuning(delta_m=1.0, lambda_m=1e-4)
    T = 20.0
    passage = cavity_passage_exact(params, T)
    assert abs(passage.a11) == pytest.approx(1.0, abs=1e-8)
    assert passage.a11 == pytest.approx(np.exp(0.5j * T), abs=1e-6)
    assert abs(passage.passage_phase) < 1e-6
    assert passage.passage_phase == pytest.approx(berry_vacuum(1, params).gamma, abs=1e-6)
    assert passage.photon_leakage < 1e-6
    assert passage.contrast == pytest.approx(1.0, abs=1e-6)


@pytest.mark.slow
def test_exact_passage_fringe_phase(pi_sixth):
    passage = cavity_passage_exact(pi_sixth, 500.0 * math.pi)
    xi = np.linspace(0.0, 2.0 * math.pi, 201)
    p2 = np.asarray(passage.detection_probability(xi))
    assert fringe_phase(xi, p2) == pytest.approx(QUARTER, abs=0.05)
    assert passage.passage_phase == pytest.approx(QUARTER, abs=0.05)
    assert passage.photon_leakage >= 0.0
    assert 0.0 < passage.contrast <= 1.0
    frame = fringe_scan(GammaMode.EXACT_PASSAGE, pi_sixth, points=101, passage=passage)
    assert np.all((frame["p2_berry"] >= 0.0) & (frame["p2_berry"] <= 1.0))
