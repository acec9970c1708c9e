# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, copysign, cos, sin

cnp.import_array()

cdef double EPS = np.finfo(float).eps
cdef int MAX_SWEEPS = 60
cdef double NEGLIGIBLE = 1e-30
cdef double TINY = 1e-290
cdef Py_ssize_t RESYNC = 256

cdef extern from "complex.h" nogil:
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)
    double cabs(double complex)


cdef inline double complex cis(double x) nogil:
    return cos(x) + 1j * sin(x)


cdef inline double abs2(double complex z) nogil:
    return creal(z) * creal(z) + cimag(z) * cimag(z)


def jacobi_eigh(a, bint want_vectors=True):
    cdef double complex[:, ::1] A = np.array(
        0.5 * (np.asarray(a, dtype=complex) + np.asarray(a, dtype=complex).conj().T),
        dtype=complex, order="C")
    cdef Py_ssize_t n = A.shape[0]
    vv = np.eye(n, dtype=complex)
    cdef double complex[:, ::1] V = vv
    cdef Py_ssize_t p, q, k
    cdef int sweep, sweeps = -1
    cdef double scale = 0.0, off, r, app, aqq, tau, t, c, s
    cdef double complex ph, phc, x, y
    for p in range(n):
        for q in range(n):
            scale += abs2(A[p, q])
    scale = sqrt(scale)
    with nogil:
        for sweep in range(MAX_SWEEPS):
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += abs2(A[p, q])
            off = sqrt(off)
            if off <= EPS * scale or scale == 0.0:
                sweeps = sweep
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = cabs(A[p, q])
                    if r <= NEGLIGIBLE * scale or r < TINY:
                        A[p, q] = 0.0
                        A[q, p] = 0.0
                        continue
                    ph = A[p, q] / r
                    phc = conj(ph)
                    for k in range(n):
                        A[k, q] = A[k, q] * phc
                    for k in range(n):
                        A[q, k] = A[q, k] * ph
                    for k in range(n):
                        V[k, q] = V[k, q] * phc
                    app = creal(A[p, p])
                    aqq = creal(A[q, q])
                    tau = (aqq - app) / (2.0 * r)
                    if tau == 0.0:
                        t = 1.0
                    else:
                        t = copysign(1.0, tau) / (fabs(tau) + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        x = A[k, p]
                        y = A[k, q]
                        A[k, p] = c * x - s * y
                        A[k, q] = s * x + c * y
                    for k in range(n):
                        x = A[p, k]
                        y = A[q, k]
                        A[p, k] = c * x - s * y
                        A[q, k] = s * x + c * y
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    A[p, p] = creal(A[p, p])
                    A[q, q] = creal(A[q, q])
                    for k in range(n):
                        x = V[k, p]
                        y = V[k, q]
                        V[k, p] = c * x - s * y
                        V[k, q] = s * x + c * y
    w = np.array([creal(A[k, k]) for k in range(n)])
    order = np.argsort(w, kind="stable")
    w = w[order]
    if not want_vectors:
        return w, None, sweeps
    return w, vv[:, order], sweeps


cdef bint _orthogonalize(double complex[:, ::1] a) nogil:
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef bint rotated
    cdef double alpha, beta, g, zeta, t, c, s
    cdef double complex gamma, phc, x, yp
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(m):
                    alpha += abs2(a[k, p])
                    beta += abs2(a[k, q])
                    gamma += conj(a[k, p]) * a[k, q]
                g = cabs(gamma)
                if not (g > EPS * sqrt(alpha * beta)) or g < TINY:
                    # already orthogonal, or too small for gamma / g to be finite
                    continue
                rotated = True
                phc = conj(gamma / g)
                zeta = (beta - alpha) / (2.0 * g)
                if zeta == 0.0:
                    t = 1.0
                else:
                    t = copysign(1.0, zeta) / (fabs(zeta) + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(m):
                    x = a[k, p]
                    yp = phc * a[k, q]
                    a[k, p] = c * x - s * yp
                    a[k, q] = s * x + c * yp
        if not rotated:
            return True
    return False


def svd3_values(m):
    cdef double complex[:, ::1] a = np.array(m, dtype=complex, order="C")
    cdef Py_ssize_t k, j
    cdef double acc
    with nogil:
        _orthogonalize(a)
    sv = np.empty(a.shape[1])
    for j in range(a.shape[1]):
        acc = 0.0
        for k in range(a.shape[0]):
            acc += abs2(a[k, j])
        sv[j] = sqrt(acc)
    return np.sort(sv)[::-1]


def batch_pure_negativity(m):
    cdef double complex[:, :, ::1] a = np.array(m, dtype=complex, order="C")
    cdef Py_ssize_t nb = a.shape[0], i, j, k
    out = np.empty(nb)
    cdef double[::1] res = out
    cdef double sv[3]
    cdef double acc, norm2
    if a.shape[1] != 3 or a.shape[2] != 3:
        raise ValueError("expected an array of 3x3 matrices")
    with nogil:
        for i in range(nb):
            _orthogonalize(a[i])
            norm2 = 0.0
            for j in range(3):
                acc = 0.0
                for k in range(3):
                    acc += abs2(a[i, k, j])
                sv[j] = sqrt(acc)
                norm2 += acc
            if norm2 > 0.0:
                res[i] = (sv[0] * sv[1] + sv[0] * sv[2] + sv[1] * sv[2]) / norm2
            else:
                res[i] = 0.0 / norm2
    return out


def rk4_oracle(gm, w, double omega, double delta_l, double complex e0,
               double complex f0, double dt, Py_ssize_t nsteps, Py_ssize_t store_every):
    # split real/imaginary storage keeps the inner loops free of complex
    # helper calls; mode phases advance by a fixed rotation and are resynced
    # exactly every RESYNC steps
    cdef double[::1] gr = np.ascontiguousarray(np.real(gm), dtype=float)
    cdef double[::1] gi = np.ascontiguousarray(np.imag(gm), dtype=float)
    cdef double[::1] wr = np.ascontiguousarray(w, dtype=float)
    cdef Py_ssize_t n = gr.shape[0], i, m
    Eo = np.empty(nsteps + 1, dtype=complex)
    Fo = np.empty(nsteps + 1, dtype=complex)
    No = np.empty(nsteps + 1)
    snaps = np.zeros((nsteps // store_every + 1, n), dtype=complex)
    cdef double complex[::1] E = Eo, F = Fo
    cdef double[::1] nrm = No
    cdef double complex[:, ::1] S = snaps
    cdef double[::1] ur = np.zeros(n), ui = np.zeros(n)
    # a_m = g_m exp(i w_m t) at t, t + dt/2, t + dt
    cdef double[::1] a0r = np.empty(n), a0i = np.empty(n)
    cdef double[::1] ahr = np.empty(n), ahi = np.empty(n)
    cdef double[::1] a1r = np.empty(n), a1i = np.empty(n)
    cdef double[::1] hr = np.cos(0.5 * np.asarray(w, dtype=float) * dt)
    cdef double[::1] hi = np.sin(0.5 * np.asarray(w, dtype=float) * dt)
    cdef double[::1] accr = np.empty(n), acci = np.empty(n)
    cdef double complex e = e0, f = f0, dm0, dmh, dm1
    cdef double complex k1e, k1f, k2e, k2f, k3e, k3f, k4e, k4f, e2, f2, e3, f3, e4, f4
    cdef double complex I = 1j
    cdef double t, un, c, s, xr, xi, sr, si, kr, ki, er, ei, h = 0.5 * dt
    E[0] = e
    F[0] = f
    nrm[0] = abs2(e) + abs2(f)
    with nogil:
        for i in range(nsteps):
            t = i * dt
            dm0 = cis(-delta_l * t)
            dmh = cis(-delta_l * (t + h))
            dm1 = cis(-delta_l * (t + dt))
            if i % RESYNC == 0:
                for m in range(n):
                    c = cos(wr[m] * t)
                    s = sin(wr[m] * t)
                    a0r[m] = gr[m] * c - gi[m] * s
                    a0i[m] = gr[m] * s + gi[m] * c
            else:
                for m in range(n):
                    a0r[m] = a1r[m]
                    a0i[m] = a1i[m]
            # stage 1: s = sum conj(a0) u
            sr = 0.0
            si = 0.0
            for m in range(n):
                xr = a0r[m] * hr[m] - a0i[m] * hi[m]
                xi = a0r[m] * hi[m] + a0i[m] * hr[m]
                ahr[m] = xr
                ahi[m] = xi
                a1r[m] = xr * hr[m] - xi * hi[m]
                a1i[m] = xr * hi[m] + xi * hr[m]
                sr = sr + a0r[m] * ur[m] + a0i[m] * ui[m]
                si = si + a0r[m] * ui[m] - a0i[m] * ur[m]
            k1e = -I * (sr + I * si) - I * omega * dm0 * f
            k1f = -I * omega * conj(dm0) * e
            e2 = e + h * k1e
            f2 = f + h * k1f
            # stage 2; k1u = -i a0 e
            er = creal(e)
            ei = cimag(e)
            sr = 0.0
            si = 0.0
            for m in range(n):
                kr = a0r[m] * ei + a0i[m] * er
                ki = -(a0r[m] * er - a0i[m] * ei)
                accr[m] = kr
                acci[m] = ki
                xr = ur[m] + h * kr
                xi = ui[m] + h * ki
                sr = sr + ahr[m] * xr + ahi[m] * xi
                si = si + ahr[m] * xi - ahi[m] * xr
            k2e = -I * (sr + I * si) - I * omega * dmh * f2
            k2f = -I * omega * conj(dmh) * e2
            e3 = e + h * k2e
            f3 = f + h * k2f
            # stage 3; k2u = -i ah e2
            er = creal(e2)
            ei = cimag(e2)
            sr = 0.0
            si = 0.0
            for m in range(n):
                kr = ahr[m] * ei + ahi[m] * er
                ki = -(ahr[m] * er - ahi[m] * ei)
                accr[m] = accr[m] + 2.0 * kr
                acci[m] = acci[m] + 2.0 * ki
                xr = ur[m] + h * kr
                xi = ui[m] + h * ki
                sr = sr + ahr[m] * xr + ahi[m] * xi
                si = si + ahr[m] * xi - ahi[m] * xr
            k3e = -I * (sr + I * si) - I * omega * dmh * f3
            k3f = -I * omega * conj(dmh) * e3
            e4 = e + dt * k3e
            f4 = f + dt * k3f
            # stage 4; k3u = -i ah e3
            er = creal(e3)
            ei = cimag(e3)
            sr = 0.0
            si = 0.0
            for m in range(n):
                kr = ahr[m] * ei + ahi[m] * er
                ki = -(ahr[m] * er - ahi[m] * ei)
                accr[m] = accr[m] + 2.0 * kr
                acci[m] = acci[m] + 2.0 * ki
                xr = ur[m] + dt * kr
                xi = ui[m] + dt * ki
                sr = sr + a1r[m] * xr + a1i[m] * xi
                si = si + a1r[m] * xi - a1i[m] * xr
            k4e = -I * (sr + I * si) - I * omega * dm1 * f4
            k4f = -I * omega * conj(dm1) * e4
            # update; k4u = -i a1 e4
            er = creal(e4)
            ei = cimag(e4)
            un = 0.0
            for m in range(n):
                kr = a1r[m] * ei + a1i[m] * er
                ki = -(a1r[m] * er - a1i[m] * ei)
                ur[m] = ur[m] + dt / 6.0 * (accr[m] + kr)
                ui[m] = ui[m] + dt / 6.0 * (acci[m] + ki)
                un = un + ur[m] * ur[m] + ui[m] * ui[m]
            e = e + dt / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e)
            f = f + dt / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
            E[i + 1] = e
            F[i + 1] = f
            nrm[i + 1] = abs2(e) + abs2(f) + un
            if (i + 1) % store_every == 0:
                for m in range(n):
                    S[(i + 1) // store_every, m] = ur[m] + I * ui[m]
    return Eo, Fo, No, snaps
