"""Self-check suite behind the ``check`` CLI subcommand.

Three groups, each reduced to a worst-case error against a fixed threshold:

1. retraction round-trips,
2. logarithmic-derivative checks (finite differences, duality, adjoint
   relation),
3. single-step oracle equivalence: the specialized steppers against a plain
   Newton solve of the generic pair-map-inversion system assembled from the
   discretization module.

Deterministic for a fixed seed.  ``dual_matrix_fn`` exists so tests can
inject a perturbed dual matrix and watch the duality check fail.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraint import SUSLOV_SPLIT, include_d
from .discretization import DiscretizationScheme, constraint_adapted_inv
from .integrators import _solve_adapted
from .retraction import (RetractionKind, dtau_left, dtau_left_dual_matrix,
                         dtau_right, tau, tau_inv)
from .system import SuslovSystem

KINDS = (RetractionKind.EXPONENTIAL, RetractionKind.CAYLEY)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    samples: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: worst {self.worst:.3e} "
                f"(threshold {self.threshold:.1e}, n={self.samples})")


def _random_unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _check_round_trips(rng, samples: int) -> CheckResult:
    worst = 0.0
    reach = {RetractionKind.EXPONENTIAL: 2.0, RetractionKind.CAYLEY: 10.0}
    for _ in range(samples):
        for kind in KINDS:
            x = _random_unit(rng) * rng.uniform(0.0, reach[kind])
            err = np.linalg.norm(tau_inv(kind, tau(kind, x)) - x)
            worst = max(worst, float(err))
    return CheckResult("retraction-round-trip", worst <= 1e-12, worst, 1e-12, samples)


def _fd_dtau_left(kind, x, eta, eps=1e-6):
    A = tau(kind, x)
    P = np.linalg.solve(A, tau(kind, x + eps * eta))
    Mm = np.linalg.solve(A, tau(kind, x - eps * eta))
    S = (P - Mm) / (2.0 * eps)
    return np.array([S[2, 1] - S[1, 2], S[0, 2] - S[2, 0], S[1, 0] - S[0, 1]]) / 2.0


def _check_log_derivative(rng, samples: int, dual_matrix_fn) -> CheckResult:
    worst = 0.0
    for _ in range(samples):
        kind = KINDS[rng.integers(2)]
        x = rng.normal(size=3) * 0.8
        eta = rng.normal(size=3)
        p = rng.normal(size=3)
        d1 = dtau_left(kind, x, eta)
        # analytic vs central finite differences, O(eps^2) accurate
        err_fd = np.linalg.norm(d1 - _fd_dtau_left(kind, x, eta)) / 1e-8
        # duality of the dual matrix against the left derivative
        err_dual = abs(float(dual_matrix_fn(kind, x) @ p @ eta - p @ d1)) / 1e-10
        # right derivative related to the left one by the adjoint action
        err_adj = np.linalg.norm(
            dtau_right(kind, x, eta) - tau(kind, x) @ d1) / 1e-13
        worst = max(worst, float(err_fd), float(err_dual), float(err_adj))
    # worst is already normalized by per-part thresholds
    return CheckResult("log-derivative", worst <= 1.0, worst, 1.0, samples)


def assembly_step(kind: RetractionKind, g0: np.ndarray, Pi2: np.ndarray,
                  dt: float, inertia: np.ndarray):
    """One step obtained from the generic constraint-adapted pair-map inversion.

    Unknowns (Om, mu1) in R^4; the velocity slot of the inverted pair map
    must equal dt times the system vector field at the inverted base point,
    and the force slot must vanish.  Solved by a plain Newton iteration with
    finite-difference Jacobian; independent of the specialized steppers'
    2-variable reduction.
    """
    sch = DiscretizationScheme(kind)
    sub = SUSLOV_SPLIT

    def residual(z):
        Om, mu1 = z[:2], z[2:]
        g1 = g0 @ tau(kind, dt * include_d(sub, Om))
        _, nu, wbar, slot4 = constraint_adapted_inv(
            sch, sub, g0, np.array([Pi2[0], Pi2[1], 0.0]),
            g1, np.array([mu1[0], mu1[1], 0.0]))
        return np.array([
            wbar[0] / dt - nu[0] / inertia[0],
            wbar[1] / dt - nu[1] / inertia[1],
            slot4[0],
            slot4[1],
        ])

    z = np.concatenate([Pi2 / inertia[:2], Pi2]).astype(float)
    r = residual(z)
    for _ in range(50):
        if float(np.abs(r).max()) <= 1e-13:
            break
        J = np.empty((4, 4))
        for j in range(4):
            d = 1e-7 * (1.0 + abs(z[j]))
            zp = z.copy(); zp[j] += d
            zm = z.copy(); zm[j] -= d
            J[:, j] = (residual(zp) - residual(zm)) / (2.0 * d)
        z = z - np.linalg.solve(J, r)
        r = residual(z)
    Om, mu1 = z[:2], z[2:]
    return g0 @ tau(kind, dt * include_d(sub, Om)), mu1, Om


def _check_step_oracle(rng, samples: int) -> CheckResult:
    worst = 0.0
    for _ in range(samples):
        g0 = tau(RetractionKind.EXPONENTIAL, _random_unit(rng) * rng.uniform(0.0, 2.5))
        Pi2 = rng.normal(size=2) * 2.0
        inertia = rng.uniform(0.5, 20.0, size=3)
        dt = rng.uniform(1e-3, 5e-2)
        sys = SuslovSystem(inertia)
        for kind in KINDS:
            Om, mu1, _ = _solve_adapted(sys, Pi2, dt, kind, 1e-12, 25)
            R1 = g0 @ tau(kind, dt * include_d(SUSLOV_SPLIT, Om))
            Ra, mua, Oma = assembly_step(kind, g0, Pi2, dt, inertia)
            worst = max(worst,
                        float(np.abs(R1 - Ra).max()),
                        float(np.abs(mu1 - mua).max()),
                        float(np.abs(Om - Oma).max()))
    return CheckResult("single-step-oracle", worst <= 1e-12, worst, 1e-12, samples)


def run_check_suite(seed: int = 0, samples: int = 1000,
                    dual_matrix_fn=None) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    if dual_matrix_fn is None:
        dual_matrix_fn = dtau_left_dual_matrix
    return [
        _check_round_trips(rng, samples),
        _check_log_derivative(rng, samples, dual_matrix_fn),
        _check_step_oracle(rng, max(25, samples // 8)),
    ]
