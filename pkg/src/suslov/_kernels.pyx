# cython: language_level=3
"""Compiled stepping kernels.

Same function set and algorithmic layout as suslov._purepy; that module is
the readable reference, this one exists so a 180 000-step run finishes in
seconds.  Keep the two in lockstep when touching either.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport acos, atan, cos, fabs, sin, sqrt

cnp.import_array()

cdef double SMALL_ANGLE = 0.05
cdef double FD_REL = 1e-7


cdef inline void _exp_coeffs(double theta, double* s, double* a, double* b) nogil:
    cdef double t2, t4
    if theta < SMALL_ANGLE:
        t2 = theta * theta
        t4 = t2 * t2
        s[0] = 1.0 - t2 / 6.0 + t4 / 120.0 - t4 * t2 / 5040.0 + t4 * t4 / 362880.0
        a[0] = 0.5 - t2 / 24.0 + t4 / 720.0 - t4 * t2 / 40320.0 + t4 * t4 / 3628800.0
        b[0] = (1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0
                - t4 * t2 / 362880.0 + t4 * t4 / 39916800.0)
    else:
        s[0] = sin(theta) / theta
        a[0] = (1.0 - cos(theta)) / (theta * theta)
        b[0] = (theta - sin(theta)) / (theta * theta * theta)


cdef inline void _tau(int kind_code, const double* w, double* R) nogil:
    """R <- tau(w), kind 0 = exponential (Rodrigues), 1 = scaled Cayley."""
    cdef double n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2]
    cdef double s, a, b, c
    cdef double W[9]
    cdef int i, j
    W[0] = 0.0;    W[1] = -w[2]; W[2] = w[1]
    W[3] = w[2];   W[4] = 0.0;   W[5] = -w[0]
    W[6] = -w[1];  W[7] = w[0];  W[8] = 0.0
    if kind_code == 0:
        _exp_coeffs(sqrt(n2), &s, &a, &b)
        for i in range(3):
            for j in range(3):
                R[3 * i + j] = s * W[3 * i + j] + a * (w[i] * w[j])
            R[3 * i + i] += 1.0 - a * n2
    else:
        c = 1.0 / (1.0 + 0.25 * n2)
        for i in range(3):
            for j in range(3):
                R[3 * i + j] = c * (W[3 * i + j] + 0.5 * w[i] * w[j])
            R[3 * i + i] += 1.0 - c * 0.5 * n2


cdef inline void _dual_apply(int kind_code, const double* w, const double* p,
                             double* out) nogil:
    """out <- M(w) p where M is the dual matrix of the left derivative."""
    cdef double n2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2]
    cdef double s, a, b, c
    cdef double c1[3]
    cdef double c2[3]
    c1[0] = w[1] * p[2] - w[2] * p[1]
    c1[1] = w[2] * p[0] - w[0] * p[2]
    c1[2] = w[0] * p[1] - w[1] * p[0]
    if kind_code == 0:
        _exp_coeffs(sqrt(n2), &s, &a, &b)
        c2[0] = w[1] * c1[2] - w[2] * c1[1]
        c2[1] = w[2] * c1[0] - w[0] * c1[2]
        c2[2] = w[0] * c1[1] - w[1] * c1[0]
        out[0] = p[0] + a * c1[0] + b * c2[0]
        out[1] = p[1] + a * c1[1] + b * c2[1]
        out[2] = p[2] + a * c1[2] + b * c2[2]
    else:
        c = 1.0 / (1.0 + 0.25 * n2)
        out[0] = c * (p[0] + 0.5 * c1[0])
        out[1] = c * (p[1] + 0.5 * c1[1])
        out[2] = c * (p[2] + 0.5 * c1[2])


cdef inline int _residual_adapted(int kind_code, const double* Om,
                                  const double* Pi, const double* inertia,
                                  double dt, double* res, double* mu1) nogil:
    """Residual of the implicit velocity equation; also reports mu1(Om).

    Returns nonzero when the 2x2 transport block is singular.
    """
    cdef double w[3]
    cdef double u[9]
    cdef double m3[3]
    cdef double nu[3]
    cdef double det
    w[0] = dt * Om[0]; w[1] = dt * Om[1]; w[2] = 0.0
    _tau(kind_code, w, u)
    det = u[0] * u[4] - u[1] * u[3]
    if fabs(det) < 1e-300:
        return 1
    mu1[0] = (u[4] * Pi[0] - u[1] * Pi[1]) / det
    mu1[1] = (-u[3] * Pi[0] + u[0] * Pi[1]) / det
    m3[0] = mu1[0]; m3[1] = mu1[1]; m3[2] = 0.0
    _dual_apply(kind_code, w, m3, nu)
    res[0] = nu[0] - inertia[0] * Om[0]
    res[1] = nu[1] - inertia[1] * Om[1]
    return 0


cdef int _newton_adapted(int kind_code, const double* Pi, const double* inertia,
                         double dt, double tol, int maxiter, double* Om,
                         double* mu1, int* iters, double* resid) nogil:
    """Full-step Newton with central-difference Jacobian.  Returns 1 if converged."""
    cdef double res[2]
    cdef double rp[2]
    cdef double rm[2]
    cdef double mtmp[2]
    cdef double J[4]
    cdef double Op[2]
    cdef double rn, d, det, dx0, dx1
    cdef int j
    iters[0] = 0
    if Pi[0] == 0.0 and Pi[1] == 0.0:
        Om[0] = 0.0; Om[1] = 0.0
        mu1[0] = 0.0; mu1[1] = 0.0
        resid[0] = 0.0
        return 1
    Om[0] = Pi[0] / inertia[0]
    Om[1] = Pi[1] / inertia[1]
    if _residual_adapted(kind_code, Om, Pi, inertia, dt, res, mu1):
        resid[0] = -1.0
        return 0
    rn = max(fabs(res[0]), fabs(res[1]))
    while rn > tol and iters[0] < maxiter:
        for j in range(2):
            d = FD_REL * (1.0 + fabs(Om[j]))
            Op[0] = Om[0]; Op[1] = Om[1]
            Op[j] += d
            if _residual_adapted(kind_code, Op, Pi, inertia, dt, rp, mtmp):
                resid[0] = rn
                return 0
            Op[j] -= 2.0 * d
            if _residual_adapted(kind_code, Op, Pi, inertia, dt, rm, mtmp):
                resid[0] = rn
                return 0
            J[j] = (rp[0] - rm[0]) / (2.0 * d)
            J[2 + j] = (rp[1] - rm[1]) / (2.0 * d)
        det = J[0] * J[3] - J[1] * J[2]
        if fabs(det) < 1e-300:
            resid[0] = rn
            return 0
        dx0 = (J[3] * res[0] - J[1] * res[1]) / det
        dx1 = (-J[2] * res[0] + J[0] * res[1]) / det
        Om[0] -= dx0
        Om[1] -= dx1
        if _residual_adapted(kind_code, Om, Pi, inertia, dt, res, mu1):
            resid[0] = rn
            return 0
        rn = max(fabs(res[0]), fabs(res[1]))
        iters[0] += 1
    resid[0] = rn
    return rn <= tol


cdef inline void _residual_unadapted(const double* Om, const double* Pi,
                                     const double* inertia, double dt,
                                     double* res) nogil:
    cdef double w[3]
    cdef double nu[3]
    w[0] = dt * Om[0]; w[1] = dt * Om[1]; w[2] = dt * Om[2]
    _dual_apply(0, w, Pi, nu)
    res[0] = nu[0] - inertia[0] * Om[0]
    res[1] = nu[1] - inertia[1] * Om[1]
    res[2] = nu[2] - inertia[2] * Om[2]


cdef inline int _solve3(const double* A, const double* b, double* x) nogil:
    """Solve 3x3 A x = b by the adjugate; returns nonzero when singular."""
    cdef double det = (A[0] * (A[4] * A[8] - A[5] * A[7])
                       - A[1] * (A[3] * A[8] - A[5] * A[6])
                       + A[2] * (A[3] * A[7] - A[4] * A[6]))
    if fabs(det) < 1e-300:
        return 1
    x[0] = ((A[4] * A[8] - A[5] * A[7]) * b[0]
            - (A[1] * A[8] - A[2] * A[7]) * b[1]
            + (A[1] * A[5] - A[2] * A[4]) * b[2]) / det
    x[1] = (-(A[3] * A[8] - A[5] * A[6]) * b[0]
            + (A[0] * A[8] - A[2] * A[6]) * b[1]
            - (A[0] * A[5] - A[2] * A[3]) * b[2]) / det
    x[2] = ((A[3] * A[7] - A[4] * A[6]) * b[0]
            - (A[0] * A[7] - A[1] * A[6]) * b[1]
            + (A[0] * A[4] - A[1] * A[3]) * b[2]) / det
    return 0


cdef int _newton_unadapted(const double* Pi, const double* inertia, double dt,
                           double tol, int maxiter, double* Om, int* iters,
                           double* resid) nogil:
    cdef double res[3]
    cdef double rp[3]
    cdef double rm[3]
    cdef double J[9]
    cdef double Op[3]
    cdef double dx[3]
    cdef double rn, d
    cdef int j, i
    iters[0] = 0
    if Pi[0] == 0.0 and Pi[1] == 0.0 and Pi[2] == 0.0:
        Om[0] = 0.0; Om[1] = 0.0; Om[2] = 0.0
        resid[0] = 0.0
        return 1
    for j in range(3):
        Om[j] = Pi[j] / inertia[j]
    _residual_unadapted(Om, Pi, inertia, dt, res)
    rn = max(fabs(res[0]), max(fabs(res[1]), fabs(res[2])))
    while rn > tol and iters[0] < maxiter:
        for j in range(3):
            d = FD_REL * (1.0 + fabs(Om[j]))
            for i in range(3):
                Op[i] = Om[i]
            Op[j] += d
            _residual_unadapted(Op, Pi, inertia, dt, rp)
            Op[j] -= 2.0 * d
            _residual_unadapted(Op, Pi, inertia, dt, rm)
            for i in range(3):
                J[3 * i + j] = (rp[i] - rm[i]) / (2.0 * d)
        if _solve3(J, res, dx):
            resid[0] = rn
            return 0
        for j in range(3):
            Om[j] -= dx[j]
        _residual_unadapted(Om, Pi, inertia, dt, res)
        rn = max(fabs(res[0]), max(fabs(res[1]), fabs(res[2])))
        iters[0] += 1
    resid[0] = rn
    return rn <= tol


cdef inline void _mat_mul(const double* A, const double* B, double* C) nogil:
    cdef int i, j
    for i in range(3):
        for j in range(3):
            C[3 * i + j] = (A[3 * i] * B[j] + A[3 * i + 1] * B[3 + j]
                            + A[3 * i + 2] * B[6 + j])


cdef inline void _defects(const double* R, double* ortho, double* det) nogil:
    cdef double G[9]
    cdef double acc = 0.0
    cdef double g
    cdef int i, j, k
    for i in range(3):
        for j in range(3):
            g = R[i] * R[j] + R[3 + i] * R[3 + j] + R[6 + i] * R[6 + j]
            if i == j:
                g -= 1.0
            acc += g * g
    ortho[0] = sqrt(acc)
    det[0] = fabs(R[0] * (R[4] * R[8] - R[5] * R[7])
                  - R[1] * (R[3] * R[8] - R[5] * R[6])
                  + R[2] * (R[3] * R[7] - R[4] * R[6]) - 1.0)


# ---------------------------------------------------------------------------
# python-visible entry points (same signatures as suslov._purepy)

def solve_velocity_adapted(Pi, inertia, double dt, int kind_code, double tol,
                           int maxiter):
    cdef cnp.ndarray[double, ndim=1] Pi_ = np.ascontiguousarray(Pi, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] in_ = np.ascontiguousarray(inertia, dtype=np.float64)
    cdef double Om[2]
    cdef double mu1[2]
    cdef double resid
    cdef int iters
    ok = _newton_adapted(kind_code, &Pi_[0], &in_[0], dt, tol, maxiter,
                         Om, mu1, &iters, &resid)
    return (np.array([Om[0], Om[1]]), np.array([mu1[0], mu1[1]]),
            iters, resid, bool(ok))


def solve_velocity_unadapted(Pi, inertia, double dt, double tol, int maxiter):
    cdef cnp.ndarray[double, ndim=1] Pi_ = np.ascontiguousarray(Pi, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] in_ = np.ascontiguousarray(inertia, dtype=np.float64)
    cdef double Om[3]
    cdef double resid
    cdef int iters
    ok = _newton_unadapted(&Pi_[0], &in_[0], dt, tol, maxiter, Om, &iters, &resid)
    return np.array([Om[0], Om[1], Om[2]]), iters, resid, bool(ok)


def run_adapted(R0, Pi0, inertia, double dt, long nsteps, int kind_code,
                double tol, int maxiter):
    cdef cnp.ndarray[double, ndim=2] R0_ = np.ascontiguousarray(R0, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] Pi0_ = np.ascontiguousarray(Pi0, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] in_ = np.ascontiguousarray(inertia, dtype=np.float64)

    cdef long n1 = nsteps + 1
    cdef cnp.ndarray[double, ndim=3] R_out = np.empty((n1, 3, 3))
    cdef cnp.ndarray[double, ndim=2] Pi_out = np.empty((n1, 2))
    cdef cnp.ndarray[double, ndim=2] Om_out = np.empty((n1, 2))
    cdef cnp.ndarray[double, ndim=1] energy = np.empty(n1)
    cdef cnp.ndarray[double, ndim=1] ortho = np.empty(n1)
    cdef cnp.ndarray[double, ndim=1] det = np.empty(n1)

    cdef double R[9]
    cdef double Rn[9]
    cdef double u[9]
    cdef double w[3]
    cdef double Pi[2]
    cdef double Om[2]
    cdef double mu1[2]
    cdef double resid
    cdef int iters
    cdef long k
    cdef int i, ok
    cdef long status = -1

    for i in range(9):
        R[i] = R0_[i // 3, i % 3]
    Pi[0] = Pi0_[0]; Pi[1] = Pi0_[1]

    with nogil:
        for k in range(n1):
            ok = _newton_adapted(kind_code, Pi, &in_[0], dt, tol, maxiter,
                                 Om, mu1, &iters, &resid)
            if not ok:
                status = k
                break
            for i in range(9):
                R_out[k, i // 3, i % 3] = R[i]
            Pi_out[k, 0] = Pi[0]; Pi_out[k, 1] = Pi[1]
            Om_out[k, 0] = Om[0]; Om_out[k, 1] = Om[1]
            energy[k] = 0.5 * (Pi[0] * Pi[0] / in_[0] + Pi[1] * Pi[1] / in_[1])
            _defects(R, &ortho[k], &det[k])
            if k < nsteps:
                w[0] = dt * Om[0]; w[1] = dt * Om[1]; w[2] = 0.0
                _tau(kind_code, w, u)
                _mat_mul(R, u, Rn)
                for i in range(9):
                    R[i] = Rn[i]
                Pi[0] = mu1[0]; Pi[1] = mu1[1]

    if status >= 0:
        return status, iters, resid, R_out, Pi_out, Om_out, energy, ortho, det
    return -1, 0, 0.0, R_out, Pi_out, Om_out, energy, ortho, det


def run_unadapted(R0, Pi0, inertia, double dt, long nsteps, double tol,
                  int maxiter):
    cdef cnp.ndarray[double, ndim=2] R0_ = np.ascontiguousarray(R0, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] Pi0_ = np.ascontiguousarray(Pi0, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] in_ = np.ascontiguousarray(inertia, dtype=np.float64)

    cdef long n1 = nsteps + 1
    cdef cnp.ndarray[double, ndim=3] R_out = np.empty((n1, 3, 3))
    cdef cnp.ndarray[double, ndim=2] Pi_out = np.empty((n1, 3))
    cdef cnp.ndarray[double, ndim=2] Om_out = np.empty((n1, 3))
    cdef cnp.ndarray[double, ndim=1] energy = np.empty(n1)
    cdef cnp.ndarray[double, ndim=1] ortho = np.empty(n1)
    cdef cnp.ndarray[double, ndim=1] det = np.empty(n1)

    cdef double R[9]
    cdef double Rn[9]
    cdef double u[9]
    cdef double w[3]
    cdef double Pi[3]
    cdef double Pin[3]
    cdef double Om[3]
    cdef double resid
    cdef int iters
    cdef long k
    cdef int i, ok
    cdef long status = -1

    for i in range(9):
        R[i] = R0_[i // 3, i % 3]
    for i in range(3):
        Pi[i] = Pi0_[i]

    with nogil:
        for k in range(n1):
            ok = _newton_unadapted(Pi, &in_[0], dt, tol, maxiter, Om,
                                   &iters, &resid)
            if not ok:
                status = k
                break
            for i in range(9):
                R_out[k, i // 3, i % 3] = R[i]
            for i in range(3):
                Pi_out[k, i] = Pi[i]
                Om_out[k, i] = Om[i]
            energy[k] = 0.5 * (Pi[0] * Pi[0] / in_[0] + Pi[1] * Pi[1] / in_[1]
                               + Pi[2] * Pi[2] / in_[2])
            _defects(R, &ortho[k], &det[k])
            if k < nsteps:
                w[0] = dt * Om[0]; w[1] = dt * Om[1]; w[2] = dt * Om[2]
                _tau(0, w, u)
                _mat_mul(R, u, Rn)
                for i in range(9):
                    R[i] = Rn[i]
                for i in range(3):
                    Pin[i] = u[3 * i] * Pi[0] + u[3 * i + 1] * Pi[1] + u[3 * i + 2] * Pi[2]
                for i in range(3):
                    Pi[i] = Pin[i]

    if status >= 0:
        return status, iters, resid, R_out, Pi_out, Om_out, energy, ortho, det
    return -1, 0, 0.0, R_out, Pi_out, Om_out, energy, ortho, det
