"""Per-state quality metrics and convergence-order estimation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import rotation_defects
from .retraction import RetractionKind, tau_inv
from .system import SuslovState, SuslovSystem, exact_flow
from . import integrators


@dataclass(frozen=True)
class StepDiagnostics:
    energy: float
    energy_error: float          # h_k - h_0
    constraint_violation: float  # |I^33 Pi_3|: identically 0 for adapted states
    ortho_defect: float          # ||R^T R - I||_F
    det_defect: float            # |det R - 1|


def diagnose(sys: SuslovSystem, state, h0: float) -> StepDiagnostics:
    """Metrics for one state; accepts a SuslovState or an (R, Pi3) pair."""
    if isinstance(state, SuslovState):
        R = state.R
        Pi = state.pi_full(sys.subspace)
        violation = 0.0  # the violating component has no storage
    else:
        R, Pi = state
        Pi = np.asarray(Pi, dtype=float)
        violation = float(abs(Pi[2]) / sys.inertia[2])
    energy = 0.5 * float(Pi @ (Pi / sys.inertia))
    ortho, det = rotation_defects(R)
    return StepDiagnostics(
        energy=energy, energy_error=energy - h0,
        constraint_violation=violation, ortho_defect=ortho, det_defect=det)


class DegenerateFitError(ValueError):
    """Errors too small to fit a convergence order."""


def _advance(sys: SuslovSystem, method, state: SuslovState, dt: float,
             nsteps: int) -> SuslovState:
    if callable(method):
        for _ in range(nsteps):
            state = method(sys, state, dt)
        return state
    traj = integrators.simulate(sys, method, state, dt, nsteps * dt)
    return SuslovState(traj.R[-1], traj.Pi[-1, :2])


def convergence_errors(sys: SuslovSystem, method, state0: SuslovState,
                       T: float, dts) -> list[float]:
    """Global error against the exact flow for each step size.

    ``method`` is a stepper tag ("lps-exp", "lps-cay") or a callable
    (sys, state, dt) -> state.  The error is the log-map distance on the
    group plus the momentum error, both at time round(T/dt)*dt.
    """
    dts = [float(d) for d in dts]
    if len(dts) < 3:
        raise ValueError("need at least 3 step sizes")
    if any(b >= a for a, b in zip(dts, dts[1:])):
        raise ValueError("step sizes must be strictly decreasing")

    errs = []
    for dt in dts:
        nsteps = int(round(T / dt))
        ref = exact_flow(sys, state0, nsteps * dt)
        end = _advance(sys, method, state0, dt, nsteps)
        rot_err = np.linalg.norm(
            tau_inv(RetractionKind.EXPONENTIAL, ref.R.T @ end.R))
        mom_err = np.linalg.norm(ref.Pi - end.Pi)
        errs.append(float(rot_err + mom_err))
    return errs


def fit_order(dts, errs) -> float:
    """Least-squares slope of log(error) vs log(dt).

    Raises DegenerateFitError when even the coarsest dt gives error below
    1e-13 (nothing to fit).
    """
    if errs[0] < 1e-13:
        raise DegenerateFitError(
            f"error {errs[0]:.3e} at dt={dts[0]} is below the fit floor")
    slope = np.polyfit(np.log(np.asarray(dts, dtype=float)),
                       np.log(np.asarray(errs, dtype=float)), 1)[0]
    return float(slope)


def estimate_order(sys: SuslovSystem, method, state0: SuslovState, T: float,
                   dts) -> float:
    """Fitted convergence order of ``method`` against the exact flow."""
    errs = convergence_errors(sys, method, state0, T, dts)
    return fit_order(dts, errs)
