"""Two-point discretization maps built from retractions, and their inverses.

The pair map is D(g, xi) = (R(g, -s xi), R(g, (1-s) xi)) with
R(g, x) = g tau(x).  The cotangent-lifted inverse returns the 4-tuple

    (g_k,  M(w)^ mu_{k+1},  w,  Ad*_{u^-1} mu_{k+1} - mu_k),      u = g_k^-1 g_{k+1},
                                                                   w = tau^-1(u)

ordered (base point, momentum slot, velocity slot, force slot).  The
constraint-adapted variant pushes the momentum slots through the dual
projection and takes only the d-component of the displacement.  Both lifted
inverses are implemented for s = 0, the value wired into the steppers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraint import ConstraintSubspace, in_dual_subspace, project_d, project_dual
from .retraction import RetractionKind, dtau_left_dual_matrix, tau, tau_inv


@dataclass(frozen=True)
class DiscretizationScheme:
    kind: RetractionKind
    s: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {self.s}")


def discretize(sch: DiscretizationScheme, g: np.ndarray,
               xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = np.asarray(g, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return g @ tau(sch.kind, -sch.s * xi), g @ tau(sch.kind, (1.0 - sch.s) * xi)


def _cayley_angle(r: float) -> float:
    # rotation angle of cay(x) for |x| = r
    return 2.0 * np.arctan(0.5 * r)


def discretize_inv(sch: DiscretizationScheme, g1: np.ndarray,
                   g2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    V = g1.T @ g2
    if sch.s == 0.0:
        return g1, tau_inv(sch.kind, V)

    # Both endpoints are rotations about the axis of xi, so the inverse
    # reduces to angle bookkeeping on that shared axis.
    log_v = tau_inv(RetractionKind.EXPONENTIAL, V)
    theta = float(np.linalg.norm(log_v))
    if theta == 0.0:
        return g1, np.zeros(3)
    axis = log_v / theta

    if sch.kind is RetractionKind.EXPONENTIAL:
        rho = theta  # exp(s xi) exp((1-s) xi) = exp(xi)
    else:
        # solve angle(s*rho) + angle((1-s)*rho) = theta by bisection;
        # the left side is strictly increasing in rho
        def total(rho: float) -> float:
            return _cayley_angle(sch.s * rho) + _cayley_angle((1.0 - sch.s) * rho)

        hi = 2.0 * np.tan(0.5 * theta) / max(sch.s, 1.0 - sch.s)
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if total(mid) < theta:
                lo = mid
            else:
                hi = mid
        rho = 0.5 * (lo + hi)

    xi = rho * axis
    base = g1 @ tau(sch.kind, sch.s * xi)
    return base, xi


def _require_s0(sch: DiscretizationScheme, what: str) -> None:
    if sch.s != 0.0:
        raise ValueError(f"{what} is implemented for s = 0 only (got s = {sch.s})")


def cotangent_lift_inv(sch: DiscretizationScheme, g_k: np.ndarray,
                       mu_k: np.ndarray, g_k1: np.ndarray, mu_k1: np.ndarray):
    _require_s0(sch, "cotangent_lift_inv")
    g_k = np.asarray(g_k, dtype=float)
    mu_k = np.asarray(mu_k, dtype=float)
    mu_k1 = np.asarray(mu_k1, dtype=float)
    u = g_k.T @ np.asarray(g_k1, dtype=float)
    w = tau_inv(sch.kind, u)
    slot2 = dtau_left_dual_matrix(sch.kind, w) @ mu_k1
    # Ad*_{u^-1} = ((u^-1))^T = u under the dot-product pairing
    slot4 = u @ mu_k1 - mu_k
    return g_k, slot2, w, slot4


def constraint_adapted_inv(sch: DiscretizationScheme, sub: ConstraintSubspace,
                           g_k: np.ndarray, mubar_k: np.ndarray,
                           g_k1: np.ndarray, mubar_k1: np.ndarray):
    _require_s0(sch, "constraint_adapted_inv")
    mubar_k = np.asarray(mubar_k, dtype=float)
    mubar_k1 = np.asarray(mubar_k1, dtype=float)
    for name, p in (("mubar_k", mubar_k), ("mubar_k1", mubar_k1)):
        if not in_dual_subspace(sub, p):
            raise ValueError(
                f"{name} has nonzero components outside d*: constraint "
                "violated on entry")
    g_k = np.asarray(g_k, dtype=float)
    u = g_k.T @ np.asarray(g_k1, dtype=float)
    wbar = project_d(sub, tau_inv(sch.kind, u))
    # dual matrix evaluated at the projected displacement
    slot2 = project_dual(sub, dtau_left_dual_matrix(sch.kind, wbar) @ mubar_k1)
    slot4 = project_dual(sub, u @ mubar_k1 - mubar_k)
    return g_k, slot2, wbar, slot4


def complement_displacement(sch: DiscretizationScheme, sub: ConstraintSubspace,
                            g_k: np.ndarray, g_k1: np.ndarray) -> float:
    """Norm of the displacement components discarded by the d-projection.

    Measures how far g_k^-1 g_{k+1} drifts from tau(d); identically zero for
    trajectories generated by the adapted steppers.
    """
    xi = tau_inv(sch.kind, np.asarray(g_k, dtype=float).T @ np.asarray(g_k1, dtype=float))
    return float(np.linalg.norm(xi - project_d(sub, xi)))
