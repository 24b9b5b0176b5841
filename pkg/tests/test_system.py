import numpy as np
import pytest

from suslov.retraction import RetractionKind, tau
from suslov.system import (SuslovState, SuslovSystem, exact_flow, hamiltonian,
                           vector_field)

FIG_INERTIA = np.array([1.0, 10.0, 100.0])


def fig_state():
    return SuslovState(np.eye(3), np.array([1.0, 1.0]))


def test_system_validation():
    SuslovSystem(FIG_INERTIA)
    with pytest.raises(ValueError):
        SuslovSystem(np.array([1.0, -1.0, 1.0]))
    with pytest.raises(ValueError):
        SuslovSystem(np.array([1.0, 1.0]))


def test_inertia_d():
    assert np.array_equal(SuslovSystem(FIG_INERTIA).inertia_d, [1.0, 10.0])


def test_state_validation():
    with pytest.raises(ValueError):
        SuslovState(2.0 * np.eye(3), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        SuslovState(np.eye(3), np.array([1.0, 1.0, 0.0]))
    st = fig_state()
    assert np.array_equal(st.pi_full(), np.array([1.0, 1.0, 0.0]))


def test_hamiltonian_reference_value():
    # (1/1 + 1/10) / 2
    assert hamiltonian(SuslovSystem(FIG_INERTIA), fig_state()) == pytest.approx(0.55, abs=1e-15)


def test_vector_field():
    xi, rate = vector_field(SuslovSystem(FIG_INERTIA), fig_state())
    assert np.array_equal(xi, np.array([1.0, 0.1, 0.0]))
    assert np.array_equal(rate, np.zeros(3))


def test_exact_flow_zero_time():
    sys = SuslovSystem(FIG_INERTIA)
    st0 = fig_state()
    st1 = exact_flow(sys, st0, 0.0)
    assert np.array_equal(st1.R, st0.R)
    assert np.array_equal(st1.Pi, st0.Pi)


def test_exact_flow_is_rotation_about_fixed_axis():
    sys = SuslovSystem(FIG_INERTIA)
    st0 = fig_state()
    t = 0.37
    st1 = exact_flow(sys, st0, t)
    xi0, _ = vector_field(sys, st0)
    assert np.abs(st1.R - tau(RetractionKind.EXPONENTIAL, t * xi0)).max() < 1e-14
    assert np.array_equal(st1.Pi, st0.Pi)
    assert hamiltonian(sys, st1) == pytest.approx(hamiltonian(sys, st0), abs=1e-15)


def test_exact_flow_composes():
    # same axis throughout, so the one-parameter group property is exact
    sys = SuslovSystem(FIG_INERTIA)
    st0 = fig_state()
    a = exact_flow(sys, st0, 1.3)
    b = exact_flow(sys, a, 0.9)
    c = exact_flow(sys, st0, 2.2)
    assert np.abs(b.R - c.R).max() < 1e-13


def test_exact_flow_nontrivial_start():
    sys = SuslovSystem(FIG_INERTIA)
    R0 = tau(RetractionKind.EXPONENTIAL, np.array([0.3, 1.1, -0.4]))
    st0 = SuslovState(R0, np.array([-0.7, 2.0]))
    st1 = exact_flow(sys, st0, 0.5)
    xi0, _ = vector_field(sys, st0)
    assert np.abs(st1.R - R0 @ tau(RetractionKind.EXPONENTIAL, 0.5 * xi0)).max() < 1e-14
