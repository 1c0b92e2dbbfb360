import math

import numpy as np
import pytest

from clock import (
    QuantumClock,
    clock_summary,
    evolve,
    first_orthogonal_time,
    frame_transform,
    heisenberg_lower_bound,
    ladder_clock,
    ml_lower_bound,
    parse_preset,
    qubit_clock,
    random_clock,
    random_unitary,
    survival_amplitude,
    tick_count,
)
from utils.errors import InvalidClockError, NonUnitaryError


def test_qubit_ticks_at_pi_over_omega(constants):
    for omega in np.geomspace(1.0e9, 1.0e18, 20):
        clock = qubit_clock(omega, hbar=constants.hbar)
        t_orth = first_orthogonal_time(clock)
        assert t_orth == pytest.approx(math.pi / omega, rel=1e-9)


def test_qubit_saturates_margolus_levitin(qubit):
    t_orth = first_orthogonal_time(qubit)
    assert ml_lower_bound(qubit) == pytest.approx(t_orth, rel=1e-9)
    assert heisenberg_lower_bound(qubit) == pytest.approx(t_orth, rel=1e-9)


def test_ladder_clock_orthogonality(constants):
    spacing = 1.0e-19
    clock = ladder_clock(4, spacing, hbar=constants.hbar)
    expected = 2.0 * math.pi * constants.hbar / (4 * spacing)
    assert first_orthogonal_time(clock) == pytest.approx(expected, rel=1e-9)
    assert ml_lower_bound(clock) <= expected


def test_random_clocks_respect_lower_bounds():
    for seed in range(500):
        clock = random_clock(2 + seed % 7, seed)
        t_orth = first_orthogonal_time(clock)
        assert t_orth is not None
        assert t_orth - ml_lower_bound(clock) >= -1e-9 * t_orth
        assert t_orth - heisenberg_lower_bound(clock) >= -1e-9 * t_orth


@pytest.mark.parametrize("d", range(2, 9))
def test_bounds_hold_in_every_dimension(d):
    for seed in range(20):
        clock = random_clock(d, 1000 * d + seed)
        assert clock.dimension == d
        t_orth = first_orthogonal_time(clock)
        assert t_orth is not None
        assert t_orth >= ml_lower_bound(clock) * (1.0 - 1e-9)
        assert t_orth >= heisenberg_lower_bound(clock) * (1.0 - 1e-9)


def test_frame_transform_keeps_orthogonality_time():
    rng = np.random.default_rng(2024)
    clock = random_clock(4, 17)
    reference = first_orthogonal_time(clock)
    for _ in range(100):
        rotated = frame_transform(clock, random_unitary(4, rng))
        assert first_orthogonal_time(rotated) == pytest.approx(reference, rel=1e-9)
        assert rotated.energy_mean == pytest.approx(clock.energy_mean, rel=1e-9)


def test_non_unitary_transform_rejected(qubit):
    with pytest.raises(NonUnitaryError):
        frame_transform(qubit, np.array([[1.0, 0.0], [0.0, 2.0]]))
    with pytest.raises(NonUnitaryError):
        frame_transform(qubit, np.eye(3))


@pytest.mark.parametrize("hamiltonian, state", [
    ([[0.0, 1.0], [0.0, 0.0]], [1.0, 0.0]),
    ([[0.0, 0.0], [0.0, 1.0]], [1.0, 1.0]),
    ([[0.0, 0.0], [0.0, 1.0]], [1.0, 0.0, 0.0]),
    ([[0.0, 0.0], [0.0, float("nan")]], [1.0, 0.0]),
])
def test_invalid_clocks_rejected(hamiltonian, state):
    with pytest.raises(InvalidClockError):
        QuantumClock(np.array(hamiltonian), np.array(state), hbar=1.0)


def test_stationary_state_never_ticks():
    clock = QuantumClock(np.diag([0.0, 1.0]), np.array([1.0, 0.0]), hbar=1.0)
    assert first_orthogonal_time(clock) is None
    assert math.isinf(ml_lower_bound(clock))
    assert math.isinf(heisenberg_lower_bound(clock))


def test_survival_amplitude_and_evolve_agree(qubit):
    t = 1.0e-15
    psi = evolve(qubit, t)
    assert np.vdot(qubit.initial_state, psi) == pytest.approx(survival_amplitude(qubit, t))
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        survival_amplitude(qubit, -1.0)


def test_tick_count_over_several_periods(qubit):
    period = 2.0 * math.pi / 1.0e15
    # dips at pi/omega, 3 pi/omega and 5 pi/omega
    assert tick_count(qubit, 3.0 * period) == 3


def test_presets_parse():
    assert parse_preset("qubit(1e15)").dimension == 2
    assert parse_preset("ladder(4, 1e-19)").dimension == 4
    assert parse_preset(" random(5, 3) ").name == "random(5, 3)"
    with pytest.raises(InvalidClockError):
        parse_preset("harmonic(3)")
    with pytest.raises(InvalidClockError):
        parse_preset("qubit(1, 2)")


def test_random_clock_is_seeded():
    first = random_clock(5, 3)
    second = random_clock(5, 3)
    np.testing.assert_allclose(first.hamiltonian, second.hamiltonian)
    np.testing.assert_allclose(first.initial_state, second.initial_state)


def test_clock_summary_keys(qubit):
    summary = clock_summary(qubit)
    assert summary["dimension"] == 2
    assert summary["ml_saturation"] == pytest.approx(1.0, rel=1e-9)
    assert set(summary) >= {"first_orthogonal_time", "ml_lower_bound", "heisenberg_lower_bound"}
