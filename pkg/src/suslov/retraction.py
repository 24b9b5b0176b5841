"""Retractions tau: so(3) -> SO(3) and their trivialized derivatives.

Two kinds are provided:

* ``EXPONENTIAL``: the matrix exponential in Rodrigues closed form.
* ``CAYLEY``: the scaled Cayley map cay(x) = (I - hat(x)/2)^-1 (I + hat(x)/2),
  closed form  I + (hat(x) + hat(x)^2/2) / (1 + |x|^2/4).

The half-argument scaling is what makes the Cayley map a retraction in the
strict sense (tau(0) = I and d/dt|0 tau(t x) = hat(x)); the unscaled variant
moves at twice the speed at the identity and would break first-order
consistency of every integrator built on top of it.

Derivative conventions:

* left logarithmic derivative   d^L_xi tau(eta) = d/dt|0 [tau(xi)^-1 tau(xi + t eta)]
* right logarithmic derivative  d^R_xi tau(eta) = Ad_{tau(xi)} d^L_xi tau(eta)
* dual matrix M(w): the matrix with <M(w) p, eta> = <p, d^L_w tau(eta)>,
  i.e. M(w) = (d^L_w tau)^T.  This is the matrix that multiplies the momentum
  on the left-hand side of the implicit velocity equations.
"""
from __future__ import annotations

import enum

import numpy as np

from .algebra import adjoint, hat, vee

# Below this angle the trig coefficient functions switch to Taylor series.
# The closed forms (1-cos th)/th^2 and (th-sin th)/th^3 suffer cancellation
# that grows like eps/th^2 as th -> 0, while the series truncation error
# grows with th; both sides stay below ~1e-13 at the crossover 0.05.
SMALL_ANGLE = 0.05


class RetractionKind(enum.Enum):
    EXPONENTIAL = "exp"
    CAYLEY = "cay"


def _exp_coeffs(theta: float) -> tuple[float, float, float]:
    """(sin th/th, (1-cos th)/th^2, (th-sin th)/th^3) with small-angle series."""
    if theta < SMALL_ANGLE:
        t2 = theta * theta
        t4 = t2 * t2
        s = 1.0 - t2 / 6.0 + t4 / 120.0 - t4 * t2 / 5040.0 + t4 * t4 / 362880.0
        a = 0.5 - t2 / 24.0 + t4 / 720.0 - t4 * t2 / 40320.0 + t4 * t4 / 3628800.0
        b = (1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0
             - t4 * t2 / 362880.0 + t4 * t4 / 39916800.0)
    else:
        s = np.sin(theta) / theta
        a = (1.0 - np.cos(theta)) / (theta * theta)
        b = (theta - np.sin(theta)) / (theta * theta * theta)
    return s, a, b


def tau(kind: RetractionKind, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    X = hat(x)
    if kind is RetractionKind.EXPONENTIAL:
        s, a, _ = _exp_coeffs(float(np.linalg.norm(x)))
        return np.eye(3) + s * X + a * (X @ X)
    if kind is RetractionKind.CAYLEY:
        c = 1.0 / (1.0 + 0.25 * float(x @ x))
        return np.eye(3) + c * (X + 0.5 * (X @ X))
    raise TypeError(f"unknown retraction kind {kind!r}")


def tau_inv(kind: RetractionKind, R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if kind is RetractionKind.EXPONENTIAL:
        c = min(1.0, max(-1.0, (float(np.trace(R)) - 1.0) / 2.0))
        theta = float(np.arccos(c))
        if theta >= np.pi - 1e-9:
            raise ValueError(
                f"rotation angle {theta:.12g} rad is outside the injectivity "
                "domain of the exponential (angle < pi required)")
        v = vee((R - R.T) / 2.0, tol=np.inf)
        if theta < 1e-6:
            f = 1.0 + theta * theta / 6.0
        else:
            f = theta / np.sin(theta)
        return f * v
    if kind is RetractionKind.CAYLEY:
        tr = float(np.trace(R))
        if abs(tr + 1.0) < 1e-12:
            theta = float(np.arccos(min(1.0, max(-1.0, (tr - 1.0) / 2.0))))
            raise ValueError(
                f"rotation angle {theta:.12g} rad: trace(R) = -1 is outside "
                "the injectivity domain of the Cayley map")
        # cay(x) = R  <=>  hat(x) = 2 (R + I)^-1 (R - I); the two factors
        # commute, and the product is skew up to roundoff.
        S = 2.0 * np.linalg.solve(R + np.eye(3), R - np.eye(3))
        return vee((S - S.T) / 2.0, tol=np.inf)
    raise TypeError(f"unknown retraction kind {kind!r}")


def dtau_left(kind: RetractionKind, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if kind is RetractionKind.EXPONENTIAL:
        # (I - a hat(xi) + b hat(xi)^2) eta, the transpose of the dual matrix
        _, a, b = _exp_coeffs(float(np.linalg.norm(xi)))
        c1 = np.cross(xi, eta)
        return eta - a * c1 + b * np.cross(xi, c1)
    if kind is RetractionKind.CAYLEY:
        c = 1.0 / (1.0 + 0.25 * float(xi @ xi))
        return c * (eta - 0.5 * np.cross(xi, eta))
    raise TypeError(f"unknown retraction kind {kind!r}")


def dtau_right(kind: RetractionKind, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    return adjoint(tau(kind, xi), dtau_left(kind, xi, eta))


def dtau_left_dual_matrix(kind: RetractionKind, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    W = hat(w)
    if kind is RetractionKind.EXPONENTIAL:
        _, a, b = _exp_coeffs(float(np.linalg.norm(w)))
        return np.eye(3) + a * W + b * (W @ W)
    if kind is RetractionKind.CAYLEY:
        # transpose of the dtau_left matrix: (I + hat(w)/2) / (1 + |w|^2/4)
        c = 1.0 / (1.0 + 0.25 * float(w @ w))
        return c * (np.eye(3) + 0.5 * W)
    raise TypeError(f"unknown retraction kind {kind!r}")
