"""so(3)/SO(3) building blocks: hat/vee, bracket, adjoint actions.

Conventions used throughout the package:

* hat(v) w = v x w, i.e. hat((v1,v2,v3)) = [[0,-v3,v2],[v3,0,-v1],[-v2,v1,0]].
* The pairing between momenta (g*) and velocities (g) is the Euclidean dot
  product, so coadjoint(R, p) = R^T p is forced by duality with
  adjoint(R, x) = R x.
* Rotation matrices are plain (3,3) float arrays; algebra/coalgebra elements
  are plain (3,) float arrays.  Validation is explicit, not wrapped in types.
"""
from __future__ import annotations

import numpy as np

ORTHO_TOL = 1e-10
DET_TOL = 1e-10


def hat(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee(S: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    defect = np.linalg.norm(S + S.T)
    if defect > tol:
        raise ValueError(f"matrix is not skew-symmetric (defect {defect:.3e})")
    return np.array([S[2, 1], S[0, 2], S[1, 0]])


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """[x, y] on so(3): the cross product under the hat identification."""
    return np.cross(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def adjoint(R: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Ad_R x = vee(R hat(x) R^T), which reduces to R x on SO(3)."""
    return np.asarray(R, dtype=float) @ np.asarray(x, dtype=float)


def coadjoint(R: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Ad*_R p, fixed by <Ad*_R p, x> = <p, Ad_R x>: equals R^T p."""
    return np.asarray(R, dtype=float).T @ np.asarray(p, dtype=float)


def rotation_defects(R: np.ndarray) -> tuple[float, float]:
    """(||R^T R - I||_F, |det R - 1|) for diagnostics and validation."""
    R = np.asarray(R, dtype=float)
    ortho = float(np.linalg.norm(R.T @ R - np.eye(3)))
    det = float(abs(np.linalg.det(R) - 1.0))
    return ortho, det


def validate_rotation(R: np.ndarray, ortho_tol: float = ORTHO_TOL,
                      det_tol: float = DET_TOL) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be a 3x3 matrix, got shape {R.shape}")
    ortho, det = rotation_defects(R)
    if ortho > ortho_tol or det > det_tol:
        raise ValueError(
            f"matrix fails rotation validation (orthogonality defect {ortho:.3e}, "
            f"determinant defect {det:.3e})")
    return R


def structure_constants(basis, splitting=None) -> np.ndarray:
    """Coefficients C[i, j, k] with [e_i, e_j] = sum_k C[i, j, k] e_k.

    ``basis`` is a sequence of three 3-vectors; it must span R^3.  The
    optional ``splitting`` is accepted for call-site symmetry with the
    constraint module (the table itself does not depend on it: readers index
    the d/complement blocks themselves).
    """
    B = np.column_stack([np.asarray(e, dtype=float) for e in basis])
    if B.shape != (3, 3):
        raise ValueError("basis must consist of exactly three 3-vectors")
    if abs(np.linalg.det(B)) < 1e-12:
        raise ValueError("degenerate basis: vectors do not span R^3")
    C = np.empty((3, 3, 3))
    for i in range(3):
        for j in range(3):
            C[i, j] = np.linalg.solve(B, np.cross(B[:, i], B[:, j]))
    return C
