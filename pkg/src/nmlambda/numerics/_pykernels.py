"""Pure-Python (numpy) implementations of the hot kernels.

These mirror ``_ckernels.pyx`` function by function and are used whenever
the compiled extension is unavailable or ``NMLAMBDA_PURE_PYTHON`` is set.
"""

import math

import numpy as np

_EPS = np.finfo(float).eps
_NEGLIGIBLE = 1e-30
_TINY = 1e-290
MAX_SWEEPS = 60


def jacobi_eigh(a, want_vectors=True):
    """Cyclic complex Jacobi diagonalization of a Hermitian matrix.

    Returns ``(w, v, sweeps)`` with ``w`` ascending. ``v`` is ``None`` when
    vectors are not requested. ``sweeps`` is -1 if the sweep cap was hit.
    """
    a = np.array(a, dtype=complex)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.sqrt(np.sum(np.abs(a) ** 2))
    sweeps = -1
    for sweep in range(MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= _EPS * scale or scale == 0.0:
            sweeps = sweep
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= _NEGLIGIBLE * scale or r < _TINY:
                    # below rounding of every entry; also keeps subnormals out of apq / r
                    a[p, q] = a[q, p] = 0.0
                    continue
                ph = apq / r
                # phase column/row q so that a[p, q] becomes real positive
                a[:, q] *= ph.conjugate()
                a[q, :] *= ph
                v[:, q] *= ph.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp = a[:, p].copy()
                a[:, p] = c * colp - s * a[:, q]
                a[:, q] = s * colp + c * a[:, q]
                rowp = a[p, :].copy()
                a[p, :] = c * rowp - s * a[q, :]
                a[q, :] = s * rowp + c * a[q, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if not want_vectors:
        return w, None, sweeps
    return w, v[:, order], sweeps


def _one_sided_rotations(a):
    """Orthogonalize the columns of ``a`` (shape (..., m, n)) in place."""
    n = a.shape[-1]
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                x = a[..., :, p]
                y = a[..., :, q]
                alpha = np.sum(x.real ** 2 + x.imag ** 2, axis=-1)
                beta = np.sum(y.real ** 2 + y.imag ** 2, axis=-1)
                gamma = np.sum(x.conj() * y, axis=-1)
                g = np.abs(gamma)
                active = (g > _EPS * np.sqrt(alpha * beta)) & (g >= _TINY)
                if not np.any(active):
                    continue
                rotated = True
                gsafe = np.where(active, g, 1.0)
                ph = np.where(active, gamma / gsafe, 1.0)
                zeta = (beta - alpha) / (2.0 * gsafe)
                t = np.where(
                    zeta == 0.0,
                    1.0,
                    np.sign(zeta) / (np.abs(zeta) + np.hypot(1.0, zeta)),
                )
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                yp = ph.conj()[..., None] * y
                xn = c[..., None] * x - s[..., None] * yp
                yn = s[..., None] * x + c[..., None] * yp
                # inactive entries keep their original columns
                keep = ~active[..., None]
                a[..., :, p] = np.where(keep, x, xn)
                a[..., :, q] = np.where(keep, y, yn)
        if not rotated:
            return True
    return False


def svd3_values(m):
    """Singular values (descending) of a small complex matrix."""
    a = np.array(m, dtype=complex)
    _one_sided_rotations(a)
    sv = np.sqrt(np.sum(np.abs(a) ** 2, axis=0))
    return np.sort(sv)[::-1]


def batch_pure_negativity(m):
    """Negativity of the normalized pure states with coefficient matrices ``m``.

    ``m`` has shape (N, 3, 3). Zero matrices give NaN.
    """
    a = np.array(m, dtype=complex)
    _one_sided_rotations(a)
    sv = np.sqrt(np.sum(a.real ** 2 + a.imag ** 2, axis=-2))
    norm2 = np.sum(sv * sv, axis=-1)
    cross = sv[..., 0] * sv[..., 1] + sv[..., 0] * sv[..., 2] + sv[..., 1] * sv[..., 2]
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(norm2 > 0.0, cross / norm2, np.nan)


def rk4_oracle(gm, w, omega, delta_l, e0, f0, dt, nsteps, store_every):
    """Fixed-step RK4 for the mode-discretized single-excitation equations.

    ``gm`` are the complex mode couplings and ``w`` the mode phase rates
    (cavity detuning plus relative frequency). Returns ``(E, F, norm, U)``
    where ``U`` holds snapshots every ``store_every`` steps.
    """
    gm = np.asarray(gm, dtype=complex)
    w = np.asarray(w, dtype=float)
    n = gm.shape[0]
    gmc = gm.conj()
    half = np.exp(0.5j * w * dt)
    E = np.empty(nsteps + 1, dtype=complex)
    F = np.empty(nsteps + 1, dtype=complex)
    norm = np.empty(nsteps + 1)
    nsnap = nsteps // store_every + 1
    snaps = np.empty((nsnap, n), dtype=complex)
    u = np.zeros(n, dtype=complex)
    e = complex(e0)
    f = complex(f0)
    E[0], F[0] = e, f
    norm[0] = abs(e) ** 2 + abs(f) ** 2
    snaps[0] = u
    for i in range(nsteps):
        t = i * dt
        ph0 = np.exp(1j * w * t)
        phh = ph0 * half
        ph1 = phh * half
        dm0 = np.exp(-1j * delta_l * t)
        dmh = np.exp(-1j * delta_l * (t + 0.5 * dt))
        dm1 = np.exp(-1j * delta_l * (t + dt))

        k1e = -1j * np.dot(gmc * ph0.conj(), u) - 1j * omega * dm0 * f
        k1f = -1j * omega * dm0.conjugate() * e
        k1u = -1j * gm * ph0 * e

        e2 = e + 0.5 * dt * k1e
        f2 = f + 0.5 * dt * k1f
        u2 = u + 0.5 * dt * k1u
        k2e = -1j * np.dot(gmc * phh.conj(), u2) - 1j * omega * dmh * f2
        k2f = -1j * omega * dmh.conjugate() * e2
        k2u = -1j * gm * phh * e2

        e3 = e + 0.5 * dt * k2e
        f3 = f + 0.5 * dt * k2f
        u3 = u + 0.5 * dt * k2u
        k3e = -1j * np.dot(gmc * phh.conj(), u3) - 1j * omega * dmh * f3
        k3f = -1j * omega * dmh.conjugate() * e3
        k3u = -1j * gm * phh * e3

        e4 = e + dt * k3e
        f4 = f + dt * k3f
        u4 = u + dt * k3u
        k4e = -1j * np.dot(gmc * ph1.conj(), u4) - 1j * omega * dm1 * f4
        k4f = -1j * omega * dm1.conjugate() * e4
        k4u = -1j * gm * ph1 * e4

        e = e + dt / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e)
        f = f + dt / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        u = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        E[i + 1], F[i + 1] = e, f
        norm[i + 1] = abs(e) ** 2 + abs(f) ** 2 + np.sum(u.real ** 2 + u.imag ** 2)
        if (i + 1) % store_every == 0:
            snaps[(i + 1) // store_every] = u
    return E, F, norm, snaps
