"""The Suslov system: rigid body with the third body angular velocity suppressed.

With diagonal inertia and the constraint Omega^3 = 0 the reduced momentum
equations are trivial (Pi1' = Pi2' = 0), so the restricted velocity is
constant along the exact flow and the configuration moves along a
one-parameter subgroup.  That closed form is the reference oracle for every
convergence test.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import validate_rotation
from .constraint import SUSLOV_SPLIT, ConstraintSubspace, include_d, restrict
from .retraction import RetractionKind, tau


@dataclass(frozen=True)
class SuslovSystem:
    inertia: np.ndarray  # diagonal entries of the inertia tensor
    subspace: ConstraintSubspace = SUSLOV_SPLIT

    def __post_init__(self):
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.shape != (3,) or not np.all(inertia > 0.0):
            raise ValueError("inertia must be three strictly positive entries")
        object.__setattr__(self, "inertia", inertia)

    @property
    def inertia_d(self) -> np.ndarray:
        return restrict(self.subspace, self.inertia)


@dataclass(frozen=True)
class SuslovState:
    """(R, Pi) with the restricted momentum stored as a 2-vector.

    Storing only the d* components makes Pi3 = 0 hold by representation: the
    constraint cannot drift because its violating component has nowhere to
    live.
    """
    R: np.ndarray
    Pi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "R", validate_rotation(self.R))
        Pi = np.asarray(self.Pi, dtype=float)
        if Pi.shape != (2,):
            raise ValueError(f"restricted momentum must be a 2-vector, got shape {Pi.shape}")
        object.__setattr__(self, "Pi", Pi)

    def pi_full(self, sub: ConstraintSubspace = SUSLOV_SPLIT) -> np.ndarray:
        return include_d(sub, self.Pi)


def hamiltonian(sys: SuslovSystem, state: SuslovState) -> float:
    """Restricted reduced Hamiltonian h = (Pi1^2/I11 + Pi2^2/I22)/2."""
    inertia_d = sys.inertia_d
    return 0.5 * float(state.Pi[0] ** 2 / inertia_d[0] + state.Pi[1] ** 2 / inertia_d[1])


def vector_field(sys: SuslovSystem, state: SuslovState) -> tuple[np.ndarray, np.ndarray]:
    """Left-trivialized (velocity, momentum rate); the rate is identically zero."""
    xi = include_d(sys.subspace, state.Pi / sys.inertia_d)
    return xi, np.zeros(3)


def exact_flow(sys: SuslovSystem, state0: SuslovState, t: float) -> SuslovState:
    xi0, _ = vector_field(sys, state0)
    return SuslovState(state0.R @ tau(RetractionKind.EXPONENTIAL, t * xi0),
                       state0.Pi.copy())
