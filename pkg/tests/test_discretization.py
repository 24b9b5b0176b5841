import numpy as np
import pytest

from suslov.constraint import SUSLOV_SPLIT
from suslov.discretization import (DiscretizationScheme, complement_displacement,
                                   constraint_adapted_inv, cotangent_lift_inv,
                                   discretize, discretize_inv)
from suslov.retraction import RetractionKind, dtau_left, tau

EXP = RetractionKind.EXPONENTIAL
CAY = RetractionKind.CAYLEY


def random_rotation(rng, scale=2.0):
    return tau(EXP, rng.normal(size=3) * scale)


def test_scheme_validates_s():
    DiscretizationScheme(EXP, 0.0)
    DiscretizationScheme(CAY, 1.0)
    with pytest.raises(ValueError):
        DiscretizationScheme(EXP, -0.1)
    with pytest.raises(ValueError):
        DiscretizationScheme(EXP, 1.5)


def test_discretize_s0_endpoints():
    rng = np.random.default_rng(1)
    g = random_rotation(rng)
    xi = rng.normal(size=3) * 0.3
    sch = DiscretizationScheme(CAY)
    g1, g2 = discretize(sch, g, xi)
    assert np.array_equal(g1, g)
    assert np.abs(g2 - g @ tau(CAY, xi)).max() < 1e-15


@pytest.mark.parametrize("kind", [EXP, CAY])
@pytest.mark.parametrize("s", [0.0, 0.3, 0.5, 1.0])
def test_discretize_inverts(kind, s):
    rng = np.random.default_rng(hash((kind.value, s)) % 2**32)
    sch = DiscretizationScheme(kind, s)
    for _ in range(20):
        g = random_rotation(rng)
        xi = rng.normal(size=3) * 0.4
        base, xi_back = discretize_inv(sch, *discretize(sch, g, xi))
        assert np.abs(xi_back - xi).max() <= 1e-11
        assert np.abs(base - g).max() <= 1e-11


def test_discretize_inv_coincident_points():
    g = random_rotation(np.random.default_rng(2))
    base, xi = discretize_inv(DiscretizationScheme(EXP, 0.25), g, g)
    assert np.array_equal(xi, np.zeros(3))
    assert np.abs(base - g).max() < 1e-15


def test_lifted_inverse_requires_s0():
    rng = np.random.default_rng(3)
    g = random_rotation(rng)
    with pytest.raises(ValueError):
        cotangent_lift_inv(DiscretizationScheme(EXP, 0.5), g, np.zeros(3), g, np.zeros(3))
    with pytest.raises(ValueError):
        constraint_adapted_inv(DiscretizationScheme(EXP, 0.5), SUSLOV_SPLIT,
                               g, np.zeros(3), g, np.zeros(3))


@pytest.mark.parametrize("kind", [EXP, CAY])
def test_cotangent_lift_inv_slots(kind):
    rng = np.random.default_rng(4)
    sch = DiscretizationScheme(kind)
    for _ in range(25):
        g1 = random_rotation(rng)
        w = rng.normal(size=3) * 0.5
        g2 = g1 @ tau(kind, w)
        mu0, mu1 = rng.normal(size=3), rng.normal(size=3)
        base, nu, w_back, force = cotangent_lift_inv(sch, g1, mu0, g2, mu1)
        assert np.array_equal(base, g1)
        assert np.abs(w_back - w).max() <= 1e-12
        # momentum slot is adjoint to the left logarithmic derivative
        eta = rng.normal(size=3)
        assert abs(nu @ eta - mu1 @ dtau_left(kind, w_back, eta)) < 1e-12
        # force slot vanishes exactly when mu0 is the transported mu1
        u = g1.T @ g2
        _, _, _, f0 = cotangent_lift_inv(sch, g1, u @ mu1, g2, mu1)
        assert np.abs(f0).max() <= 1e-15
        assert np.abs(force - (u @ mu1 - mu0)).max() <= 1e-15


@pytest.mark.parametrize("kind", [EXP, CAY])
def test_constraint_adapted_inv_stays_in_subspace(kind):
    rng = np.random.default_rng(5)
    sch = DiscretizationScheme(kind)
    for _ in range(25):
        g1 = random_rotation(rng)
        w = np.array([*rng.normal(size=2) * 0.4, 0.0])
        g2 = g1 @ tau(kind, w)
        mu0 = np.array([*rng.normal(size=2), 0.0])
        mu1 = np.array([*rng.normal(size=2), 0.0])
        base, nu, wbar, force = constraint_adapted_inv(sch, SUSLOV_SPLIT, g1, mu0, g2, mu1)
        assert wbar[2] == 0.0 and nu[2] == 0.0 and force[2] == 0.0
        # in-plane displacement comes back unprojected
        assert np.abs(wbar - w).max() <= 1e-12


def test_constraint_adapted_inv_rejects_violating_momenta():
    g = np.eye(3)
    sch = DiscretizationScheme(EXP)
    bad = np.array([1.0, 0.0, 1e-9])
    ok = np.array([1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        constraint_adapted_inv(sch, SUSLOV_SPLIT, g, bad, g, ok)
    with pytest.raises(ValueError):
        constraint_adapted_inv(sch, SUSLOV_SPLIT, g, ok, g, bad)


@pytest.mark.parametrize("kind", [EXP, CAY])
def test_complement_displacement(kind):
    sch = DiscretizationScheme(kind)
    g = np.eye(3)
    in_plane = g @ tau(kind, [0.2, -0.1, 0.0])
    out_of_plane = g @ tau(kind, [0.2, -0.1, 0.05])
    assert complement_displacement(sch, SUSLOV_SPLIT, g, in_plane) <= 1e-15
    assert complement_displacement(sch, SUSLOV_SPLIT, g, out_of_plane) > 1e-3
