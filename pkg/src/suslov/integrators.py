"""Steppers and the trajectory driver.

Three methods:

* ``lps-exp`` / ``lps-cay``: constraint-adapted steppers.  One step solves the
  2-dimensional implicit system

      F(Om) = proj_d[ M(dt iota(Om)) iota(mu1(Om)) ] - I_d Om = 0,
      [u(Om)]_dd mu1(Om) = Pi_k,          u(Om) = tau(dt iota(Om)),

  then updates R <- R u(Om*), Pi <- mu1(Om*).  The momentum update is the
  root of the transport slot of the constraint-adapted pair-map inversion,
  which is what makes a step of this function agree with the generic
  assembly from the discretization module to roundoff (see the oracle
  tests).  The restricted momentum stays a 2-vector throughout, so the
  constraint holds structurally.

* ``lp-exp``: the unadapted comparator, a free-rigid-body scheme run on the
  full momentum: solve M(dt Om) Pi_k = I Om for Om in R^3, then
  R <- R exp(dt hat(Om)), Pi <- exp(dt hat(Om)) Pi.  Started on the
  constraint surface it drifts off it, which is the point of the comparison.

Newton details (both solves): initial guess Om = I^-1 Pi (the dt -> 0 limit),
full steps, central-difference Jacobian with relative perturbation 1e-7,
infinity-norm tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import impl
from .algebra import validate_rotation
from .retraction import RetractionKind, tau
from .system import SuslovState, SuslovSystem

METHODS = ("lps-exp", "lps-cay", "lp-exp")

_ALIASES = {
    "lps-exp": "lps-exp",
    "lps-exponential": "lps-exp",
    "lps-cay": "lps-cay",
    "lps-cayley": "lps-cay",
    "lp-exp": "lp-exp",
}

_KIND_CODE = {RetractionKind.EXPONENTIAL: 0, RetractionKind.CAYLEY: 1}
METHOD_KIND = {"lps-exp": RetractionKind.EXPONENTIAL,
               "lps-cay": RetractionKind.CAYLEY}

DEFAULT_NEWTON_TOL = 1e-12
DEFAULT_NEWTON_MAX_ITER = 25


def normalize_method(tag: str) -> str:
    try:
        return _ALIASES[tag.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown method {tag!r}; expected one of {', '.join(METHODS)}") from None


@dataclass(frozen=True)
class StepperConfig:
    method: str
    dt: float
    newton_tol: float = DEFAULT_NEWTON_TOL
    newton_max_iter: int = DEFAULT_NEWTON_MAX_ITER

    def __post_init__(self):
        object.__setattr__(self, "method", normalize_method(self.method))
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.newton_tol > 0.0:
            raise ValueError(f"newton_tol must be positive, got {self.newton_tol}")
        if self.newton_max_iter < 1:
            raise ValueError(f"newton_max_iter must be >= 1, got {self.newton_max_iter}")


@dataclass(frozen=True)
class NewtonReport:
    iterations: int
    final_residual: float
    converged: bool


class StepFailure(RuntimeError):
    """Velocity solve failed to converge."""

    def __init__(self, message: str, report: NewtonReport, step_index: int | None = None):
        super().__init__(message)
        self.report = report
        self.step_index = step_index


def _restricted(Pi) -> np.ndarray:
    Pi = np.asarray(Pi, dtype=float)
    if Pi.shape == (2,):
        return Pi
    if Pi.shape == (3,):
        if Pi[2] != 0.0:
            raise ValueError("restricted momentum must have exactly zero third component")
        return Pi[:2].copy()
    raise ValueError(f"restricted momentum must be a 2-vector, got shape {Pi.shape}")


def _solve_adapted(sys: SuslovSystem, Pi2: np.ndarray, dt: float,
                   kind: RetractionKind, tol: float, maxiter: int):
    Om, mu1, iters, resid, ok = impl.solve_velocity_adapted(
        Pi2, sys.inertia, dt, _KIND_CODE[kind], tol, maxiter)
    report = NewtonReport(iters, float(resid), bool(ok))
    if not ok:
        raise StepFailure(
            f"velocity solve did not converge in {iters} iterations "
            f"(residual {resid:.3e}, tol {tol:.1e})", report)
    return Om, mu1, report


def solve_velocity_exp(sys: SuslovSystem, Pi_k, dt: float,
                       cfg: StepperConfig | None = None):
    """Restricted velocity for the exponential stepper: (Omega in R^2, report)."""
    tol = cfg.newton_tol if cfg else DEFAULT_NEWTON_TOL
    maxiter = cfg.newton_max_iter if cfg else DEFAULT_NEWTON_MAX_ITER
    Om, _, report = _solve_adapted(sys, _restricted(Pi_k), dt,
                                   RetractionKind.EXPONENTIAL, tol, maxiter)
    return Om, report


def solve_velocity_cayley(sys: SuslovSystem, Pi_k, dt: float,
                          cfg: StepperConfig | None = None):
    """Restricted velocity for the Cayley stepper: (Omega in R^2, report)."""
    tol = cfg.newton_tol if cfg else DEFAULT_NEWTON_TOL
    maxiter = cfg.newton_max_iter if cfg else DEFAULT_NEWTON_MAX_ITER
    Om, _, report = _solve_adapted(sys, _restricted(Pi_k), dt,
                                   RetractionKind.CAYLEY, tol, maxiter)
    return Om, report


def step_lps(sys: SuslovSystem, kind: RetractionKind, state: SuslovState,
             cfg: StepperConfig) -> SuslovState:
    """One constraint-adapted step; Pi stays a 2-vector, so Pi3 = 0 structurally."""
    Om, mu1, _ = _solve_adapted(sys, state.Pi, cfg.dt, kind,
                                cfg.newton_tol, cfg.newton_max_iter)
    u = tau(kind, np.array([cfg.dt * Om[0], cfg.dt * Om[1], 0.0]))
    return SuslovState(state.R @ u, mu1)


def step_lp_unadapted(sys: SuslovSystem, state_full, cfg: StepperConfig):
    """One step of the unadapted comparator on (R, full 3-vector momentum)."""
    R, Pi = state_full
    R = validate_rotation(R)
    Pi = np.asarray(Pi, dtype=float)
    Om, iters, resid, ok = impl.solve_velocity_unadapted(
        Pi, sys.inertia, cfg.dt, cfg.newton_tol, cfg.newton_max_iter)
    if not ok:
        raise StepFailure(
            f"velocity solve did not converge in {iters} iterations "
            f"(residual {resid:.3e})", NewtonReport(iters, float(resid), False))
    u = tau(RetractionKind.EXPONENTIAL, cfg.dt * Om)
    return R @ u, u @ Pi


@dataclass(frozen=True)
class Trajectory:
    """Per-step records of a run; all arrays share length nsteps + 1.

    ``Omega[k]`` is the velocity solved at state k (the one that advances
    step k -> k+1); the final record carries one extra solve so the column
    is defined everywhere.
    """
    method: str
    dt: float
    step: np.ndarray
    t: np.ndarray
    R: np.ndarray
    Pi: np.ndarray
    Omega: np.ndarray
    energy: np.ndarray
    energy_err: np.ndarray
    constraint: np.ndarray
    ortho_defect: np.ndarray
    det_defect: np.ndarray

    def __len__(self) -> int:
        return len(self.step)


def _expand_cols(arr2: np.ndarray) -> np.ndarray:
    out = np.zeros((arr2.shape[0], 3))
    out[:, :2] = arr2
    return out


def simulate(sys: SuslovSystem, method: str, state0, dt: float,
             duration: float, newton_tol: float = DEFAULT_NEWTON_TOL,
             newton_max_iter: int = DEFAULT_NEWTON_MAX_ITER) -> Trajectory:
    """Run a trajectory, recording state, solved velocity and diagnostics.

    Deterministic: identical inputs produce bit-identical arrays (single
    fixed backend).  Step failures raise StepFailure with the step index.
    """
    method = normalize_method(method)
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if duration < 0.0:
        raise ValueError(f"duration must be nonnegative, got {duration}")
    if duration / dt > 1e8:
        raise ValueError("duration/dt exceeds the 1e8 step budget")
    nsteps = int(round(duration / dt))

    if method in METHOD_KIND:
        if isinstance(state0, SuslovState):
            R0, Pi0 = state0.R, state0.Pi
        else:
            R0, Pi0 = state0
            R0 = validate_rotation(R0)
            Pi0 = _restricted(Pi0)
        kind_code = _KIND_CODE[METHOD_KIND[method]]
        (status, iters, resid, R, Pi2, Om2,
         energy, ortho, det) = impl.run_adapted(
            R0, Pi0, sys.inertia, dt, nsteps, kind_code,
            newton_tol, newton_max_iter)
        if status >= 0:
            raise StepFailure(
                f"velocity solve failed at step {status} "
                f"(residual {resid:.3e})",
                NewtonReport(iters, float(resid), False), step_index=int(status))
        Pi = _expand_cols(Pi2)
        Omega = _expand_cols(Om2)
        constraint = np.zeros(nsteps + 1)  # structural: Pi3 has no storage
    else:
        if isinstance(state0, SuslovState):
            R0, Pi0 = state0.R, state0.pi_full(sys.subspace)
        else:
            R0, Pi0 = state0
            R0 = validate_rotation(R0)
            Pi0 = np.asarray(Pi0, dtype=float)
            if Pi0.shape == (2,):
                Pi0 = np.array([Pi0[0], Pi0[1], 0.0])
            elif Pi0.shape != (3,):
                raise ValueError(f"momentum must be a 3-vector, got shape {Pi0.shape}")
        (status, iters, resid, R, Pi, Omega,
         energy, ortho, det) = impl.run_unadapted(
            R0, Pi0, sys.inertia, dt, nsteps, newton_tol, newton_max_iter)
        if status >= 0:
            raise StepFailure(
                f"velocity solve failed at step {status} "
                f"(residual {resid:.3e})",
                NewtonReport(iters, float(resid), False), step_index=int(status))
        # violation reported as the third body-velocity component |I^33 Pi3|
        constraint = np.abs(Pi[:, 2]) / sys.inertia[2]

    step = np.arange(nsteps + 1)
    return Trajectory(
        method=method, dt=dt, step=step, t=step * dt, R=R, Pi=Pi, Omega=Omega,
        energy=energy, energy_err=energy - energy[0], constraint=constraint,
        ortho_defect=ortho, det_defect=det)
