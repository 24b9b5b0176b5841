"""Splitting g = d (+) d-perp by coordinate index sets, plus the dual splitting.

Index sets are zero-based.  Projections are coordinate masks, so constraint
preservation downstream is bit-exact rather than tolerance-based.  A splitting
by general projection matrices is a documented extension point, deliberately
not implemented: the Suslov adapted basis is the standard basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ConstraintSubspace:
    d_indices: tuple[int, ...] = (0, 1)
    complement_indices: tuple[int, ...] = (2,)
    basis: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        if sorted(self.d_indices + self.complement_indices) != [0, 1, 2]:
            raise ValueError("index sets must partition {0, 1, 2}")


#: The Suslov splitting: constrained directions e1, e2; suppressed direction e3.
SUSLOV_SPLIT = ConstraintSubspace()


def project_d(s: ConstraintSubspace, x: np.ndarray) -> np.ndarray:
    out = np.zeros(3)
    for i in s.d_indices:
        out[i] = x[i]
    return out


def include_d(s: ConstraintSubspace, x_d: np.ndarray) -> np.ndarray:
    out = np.zeros(3)
    for k, i in enumerate(s.d_indices):
        out[i] = x_d[k]
    return out


def project_dual(s: ConstraintSubspace, p: np.ndarray) -> np.ndarray:
    # same coordinate mask; kept separate because it acts on momenta (iota*)
    out = np.zeros(3)
    for i in s.d_indices:
        out[i] = p[i]
    return out


def restrict(s: ConstraintSubspace, x: np.ndarray) -> np.ndarray:
    """Pull the d-components out as a len(d_indices) vector."""
    return np.array([x[i] for i in s.d_indices])


def in_dual_subspace(s: ConstraintSubspace, p: np.ndarray) -> bool:
    return all(p[i] == 0.0 for i in s.complement_indices)
