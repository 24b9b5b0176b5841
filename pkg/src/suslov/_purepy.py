"""Pure-python backend: reference implementation of the stepping kernels.

Mirrors the compiled backend in suslov._kernels function-for-function; the
compiled module is preferred at import time when available (see _backend).
Algorithmic choices (central-difference Jacobians, perturbation sizes,
iteration accounting) are kept identical so the two backends agree to
rounding.

The implicit velocity equation solved for one adapted step, with u(Om) =
tau(dt * iota(Om)) and the transported momentum mu1(Om) from the 2x2 block
system [u]_dd mu1 = Pi_k:

    F(Om) = proj_d[ M(dt * iota(Om)) iota(mu1(Om)) ] - I_d Om = 0

Its root, together with mu1 at the root, is exactly the data the generic
constraint-adapted pair-map inversion produces, which is what the oracle
tests pin down.
"""
from __future__ import annotations

import numpy as np

from .retraction import RetractionKind, dtau_left_dual_matrix, tau

KIND_FROM_CODE = {0: RetractionKind.EXPONENTIAL, 1: RetractionKind.CAYLEY}

FD_REL = 1e-7  # relative perturbation for central-difference Jacobians


def _residual_adapted(Om, Pi, inertia, dt, kind):
    w = np.array([dt * Om[0], dt * Om[1], 0.0])
    u = tau(kind, w)
    B = u[:2, :2]
    mu1 = np.linalg.solve(B, Pi)
    nu = dtau_left_dual_matrix(kind, w) @ np.array([mu1[0], mu1[1], 0.0])
    return nu[:2] - inertia[:2] * Om, mu1


def solve_velocity_adapted(Pi, inertia, dt, kind_code, tol, maxiter):
    kind = KIND_FROM_CODE[kind_code]
    Pi = np.asarray(Pi, dtype=float)
    inertia = np.asarray(inertia, dtype=float)
    if Pi[0] == 0.0 and Pi[1] == 0.0:
        return np.zeros(2), np.zeros(2), 0, 0.0, True
    Om = Pi / inertia[:2]
    res, mu1 = _residual_adapted(Om, Pi, inertia, dt, kind)
    rn = float(np.abs(res).max())
    iters = 0
    while rn > tol and iters < maxiter:
        J = np.empty((2, 2))
        for j in range(2):
            d = FD_REL * (1.0 + abs(Om[j]))
            Op = Om.copy(); Op[j] += d
            Om_ = Om.copy(); Om_[j] -= d
            rp, _ = _residual_adapted(Op, Pi, inertia, dt, kind)
            rm, _ = _residual_adapted(Om_, Pi, inertia, dt, kind)
            J[:, j] = (rp - rm) / (2.0 * d)
        try:
            Om = Om - np.linalg.solve(J, res)
        except np.linalg.LinAlgError:
            return Om, mu1, iters, rn, False
        res, mu1 = _residual_adapted(Om, Pi, inertia, dt, kind)
        rn = float(np.abs(res).max())
        iters += 1
    return Om, mu1, iters, rn, rn <= tol


def _residual_unadapted(Om, Pi, inertia, dt):
    M = dtau_left_dual_matrix(RetractionKind.EXPONENTIAL, dt * Om)
    return M @ Pi - inertia * Om


def solve_velocity_unadapted(Pi, inertia, dt, tol, maxiter):
    Pi = np.asarray(Pi, dtype=float)
    inertia = np.asarray(inertia, dtype=float)
    if not Pi.any():
        return np.zeros(3), 0, 0.0, True
    Om = Pi / inertia
    res = _residual_unadapted(Om, Pi, inertia, dt)
    rn = float(np.abs(res).max())
    iters = 0
    while rn > tol and iters < maxiter:
        J = np.empty((3, 3))
        for j in range(3):
            d = FD_REL * (1.0 + abs(Om[j]))
            Op = Om.copy(); Op[j] += d
            Om_ = Om.copy(); Om_[j] -= d
            J[:, j] = (_residual_unadapted(Op, Pi, inertia, dt)
                       - _residual_unadapted(Om_, Pi, inertia, dt)) / (2.0 * d)
        try:
            Om = Om - np.linalg.solve(J, res)
        except np.linalg.LinAlgError:
            return Om, iters, rn, False
        res = _residual_unadapted(Om, Pi, inertia, dt)
        rn = float(np.abs(res).max())
        iters += 1
    return Om, iters, rn, rn <= tol


def _defects(R):
    ortho = float(np.linalg.norm(R.T @ R - np.eye(3)))
    det = float(abs(np.linalg.det(R) - 1.0))
    return ortho, det


def run_adapted(R0, Pi0, inertia, dt, nsteps, kind_code, tol, maxiter):
    kind = KIND_FROM_CODE[kind_code]
    inertia = np.asarray(inertia, dtype=float)
    n1 = nsteps + 1
    R_out = np.empty((n1, 3, 3))
    Pi_out = np.empty((n1, 2))
    Om_out = np.empty((n1, 2))
    energy = np.empty(n1)
    ortho = np.empty(n1)
    det = np.empty(n1)

    R = np.array(R0, dtype=float)
    Pi = np.array(Pi0, dtype=float)
    for k in range(n1):
        Om, mu1, iters, rn, ok = solve_velocity_adapted(
            Pi, inertia, dt, kind_code, tol, maxiter)
        if not ok:
            return k, iters, rn, R_out, Pi_out, Om_out, energy, ortho, det
        R_out[k] = R
        Pi_out[k] = Pi
        Om_out[k] = Om
        energy[k] = 0.5 * (Pi[0] ** 2 / inertia[0] + Pi[1] ** 2 / inertia[1])
        ortho[k], det[k] = _defects(R)
        if k < nsteps:
            R = R @ tau(kind, np.array([dt * Om[0], dt * Om[1], 0.0]))
            Pi = mu1
    return -1, 0, 0.0, R_out, Pi_out, Om_out, energy, ortho, det


def run_unadapted(R0, Pi0, inertia, dt, nsteps, tol, maxiter):
    inertia = np.asarray(inertia, dtype=float)
    n1 = nsteps + 1
    R_out = np.empty((n1, 3, 3))
    Pi_out = np.empty((n1, 3))
    Om_out = np.empty((n1, 3))
    energy = np.empty(n1)
    ortho = np.empty(n1)
    det = np.empty(n1)

    R = np.array(R0, dtype=float)
    Pi = np.array(Pi0, dtype=float)
    for k in range(n1):
        Om, iters, rn, ok = solve_velocity_unadapted(Pi, inertia, dt, tol, maxiter)
        if not ok:
            return k, iters, rn, R_out, Pi_out, Om_out, energy, ortho, det
        R_out[k] = R
        Pi_out[k] = Pi
        Om_out[k] = Om
        energy[k] = 0.5 * float(Pi @ (Pi / inertia))
        ortho[k], det[k] = _defects(R)
        if k < nsteps:
            u = tau(RetractionKind.EXPONENTIAL, dt * Om)
            R = R @ u
            Pi = u @ Pi
    return -1, 0, 0.0, R_out, Pi_out, Om_out, energy, ortho, det
