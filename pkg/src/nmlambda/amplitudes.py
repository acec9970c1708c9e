"""Closed-form single-excitation amplitudes.

The wavefunction of one cavity subsystem is

    [E(t)|e> + F(t)|f> + G(t)|g>] |0> + int U(x, t) |g> |1_x> dx

with ``x = omega - omega_c`` the photon frequency relative to the cavity.
E follows from the roots of the characteristic cubic; F and U are exact
time integrals of their equations of motion driven by E. Every amplitude
except G is proportional to F(0) = cos(theta/2), so the ``unit_*`` helpers
return amplitudes per unit F(0).

Array arguments broadcast: ``t`` and ``x`` may be scalars or arrays.
"""

import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import roots_array
from .numerics import adaptive_integrate, integrate_real_line

SERIES_THRESHOLD = 1e-9
DEFAULT_WINDOW = 200.0
MAX_INITIAL_PANELS = 8192


def oscillation_panels(t, width):
    """Initial panel count giving about four periods of exp(i x t) per panel."""
    return int(min(MAX_INITIAL_PANELS, 1 + abs(t) * width / (8.0 * math.pi)))


def expm1_over(z, t):
    """(exp(z t) - 1) / z, with the removable singularity at z = 0 handled by series."""
    z = np.asarray(z, dtype=complex)
    t = np.asarray(t, dtype=float)
    small = np.abs(z) < SERIES_THRESHOLD
    zs = np.where(small, 1.0, z)
    zt = z * t
    series = t * (1.0 + zt / 2.0 + zt * zt / 6.0 + zt ** 3 / 24.0)
    return np.where(small, series, np.expm1(zs * t) / zs)


def mode_function(x, kappa=1.0):
    """Cavity mode function alpha(x) = sqrt(kappa/pi) / (x + i kappa)."""
    return math.sqrt(kappa / math.pi) / (np.asarray(x, dtype=float) + 1j * kappa)


def _out(value):
    value = np.asarray(value)
    return complex(value) if value.ndim == 0 else value


def unit_e(params, t):
    s, c = roots_array(params)
    t = np.asarray(t, dtype=float)
    return np.sum(c * np.exp(s * t[..., None]), axis=-1)


def unit_f(params, t):
    s, c = roots_array(params)
    t = np.asarray(t, dtype=float)
    z = s + 1j * params.delta_l
    terms = c * expm1_over(z, t[..., None])
    return 1.0 - 1j * params.omega_drive * np.sum(terms, axis=-1)


def unit_u(params, t, x):
    s, c = roots_array(params)
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    z = s + 1j * (params.delta + x[..., None])
    acc = np.sum(c * expm1_over(z, np.asarray(t)[..., None]), axis=-1)
    return -1j * params.g * mode_function(x, params.kappa) * acc


def amp_E(params, init, t):
    """Upper-level amplitude E(t) = F(0) sum_k c_k exp(s_k t)."""
    return _out(init.f0 * unit_e(params, t))


def amp_F(params, init, t):
    """Lower excited-level amplitude.

    F(t) = F(0) [1 - i Omega sum_k c_k (exp((s_k + i delta_l) t) - 1) / (s_k + i delta_l)]
    """
    return _out(init.f0 * unit_f(params, t))


def amp_G(init, t):
    """Ground-level amplitude, constant in time."""
    t = np.asarray(t, dtype=float)
    return _out(np.full(t.shape, init.g0, dtype=complex))


def amp_U(params, init, t, x):
    """One-photon amplitude at relative frequency ``x``.

    U(x, t) = -i g alpha(x) F(0) sum_k c_k (exp((s_k + i(delta + x)) t) - 1) / (s_k + i(delta + x))
    """
    return _out(init.f0 * unit_u(params, t, x))


@dataclass(frozen=True)
class AmplitudeSet:
    t: object
    E: object
    F: object
    G: object
    photon_weight: object


def amplitude_set(params, init, t):
    """Amplitudes at time(s) ``t`` with the one-photon weight fixed by normalization."""
    E = amp_E(params, init, t)
    F = amp_F(params, init, t)
    G = amp_G(init, t)
    weight = np.maximum(0.0, 1.0 - np.abs(E) ** 2 - np.abs(F) ** 2 - np.abs(G) ** 2)
    if np.ndim(weight) == 0:
        weight = float(weight)
    return AmplitudeSet(t, E, F, G, weight)


def populations(params, init, t):
    """(P_e, P_f, P_g_total, photon_weight); P_g_total includes the photon sector."""
    amps = amplitude_set(params, init, t)
    p_e = np.abs(amps.E) ** 2
    p_f = np.abs(amps.F) ** 2
    p_g = np.abs(amps.G) ** 2 + amps.photon_weight
    if np.ndim(p_e) == 0:
        return float(p_e), float(p_f), float(p_g), float(amps.photon_weight)
    return p_e, p_f, p_g, amps.photon_weight


def photon_norm(params, init, t, window=DEFAULT_WINDOW, rel_tol=1e-10):
    """Quadrature of int |U(x, t)|^2 dx over the whole real line.

    Independent of :func:`amplitude_set`, which infers the same weight from
    normalization.
    """
    scale = init.f0 ** 2
    if scale == 0.0:
        return 0.0

    def integrand(x):
        u = unit_u(params, t, x)
        return u.real ** 2 + u.imag ** 2

    width = 2.0 * window * params.kappa
    return scale * integrate_real_line(integrand, 0.5 * width, rel_tol=rel_tol,
                                       initial_panels=oscillation_panels(t, width))


@dataclass(frozen=True)
class PulseShape:
    """Detection pulse Theta(x) in relative frequency, with unit L2 norm.

    Build with :meth:`lorentzian_matched`, :meth:`flat_band` or
    :meth:`tabulated`.
    """

    kind: str
    kappa: float = 1.0
    halfwidth: Optional[float] = None
    x: Optional[np.ndarray] = field(default=None, compare=False)
    values: Optional[np.ndarray] = field(default=None, compare=False)

    @classmethod
    def lorentzian_matched(cls, kappa=1.0):
        """Theta(x) = sqrt(kappa/pi) / (x + i kappa), the cavity mode function itself.

        The mirror choice 1/(x - i kappa) is useless as a detection mode: its
        conjugate is analytic in the upper half plane together with U, so
        the overlap vanishes identically.
        """
        return cls("lorentzian", kappa=float(kappa))

    @classmethod
    def flat_band(cls, halfwidth):
        if not halfwidth > 0:
            raise ValueError("flat-band halfwidth must be positive")
        return cls("flat", halfwidth=float(halfwidth))

    @classmethod
    def tabulated(cls, x, values):
        """Linearly interpolated samples, zero outside the sampled range.

        The samples are rescaled so that the interpolant has unit norm.
        """
        x = np.asarray(x, dtype=float)
        v = np.asarray(values, dtype=complex)
        if x.ndim != 1 or x.shape != v.shape or x.size < 2:
            raise ValueError("tabulated pulse needs matching 1-D sample arrays")
        if np.any(np.diff(x) <= 0):
            raise ValueError("tabulated pulse abscissae must be strictly increasing")
        a, b = v[:-1], v[1:]
        h = np.diff(x)
        norm2 = np.sum(h * (np.abs(a) ** 2 + (a * b.conj()).real + np.abs(b) ** 2) / 3.0)
        if not norm2 > 0:
            raise ValueError("tabulated pulse is identically zero")
        v = v / math.sqrt(norm2)
        x.flags.writeable = False
        v.flags.writeable = False
        return cls("tabulated", x=x, values=v)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "lorentzian":
            return mode_function(x, self.kappa)
        if self.kind == "flat":
            inside = np.abs(x) <= self.halfwidth
            return np.where(inside, 1.0 / math.sqrt(2.0 * self.halfwidth), 0.0) + 0j
        re = np.interp(x, self.x, self.values.real, left=0.0, right=0.0)
        im = np.interp(x, self.x, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def support(self):
        """Finite (lo, hi) outside which Theta vanishes, or None for the whole line."""
        if self.kind == "flat":
            return (-self.halfwidth, self.halfwidth)
        if self.kind == "tabulated":
            return (float(self.x[0]), float(self.x[-1]))
        return None

    def integrate(self, f, window=DEFAULT_WINDOW, rel_tol=1e-10, order=16, t=0.0):
        """Integrate ``f`` over this pulse's support.

        The Lorentzian pulse has unbounded support and is truncated to
        ``[-window, window]`` (in units of kappa). A nonzero ``t`` presplits
        the range for integrands oscillating like exp(i x t).
        """
        support = self.support()
        if support is None:
            support = (-window * self.kappa, window * self.kappa)
        panels = oscillation_panels(t, support[1] - support[0])
        return adaptive_integrate(f, support[0], support[1], rel_tol=rel_tol, order=order,
                                  initial_panels=panels)

    def norm(self):
        """Quadrature of int |Theta|^2 dx (analytic 1 for the Lorentzian)."""
        if self.kind == "lorentzian":
            return 1.0
        return self.integrate(lambda x: np.abs(self(x)) ** 2, rel_tol=1e-12)


def overlap_w(params, t, pulse=None, window=DEFAULT_WINDOW, rel_tol=1e-10, order=16):
    """Shared photon-pulse overlap w(t) = int u(x, t) conj(Theta(x)) dx.

    ``u`` is the photon amplitude per unit F(0); the overlap of subsystem j
    is F_j(0) w(t).
    """
    if pulse is None:
        pulse = PulseShape.lorentzian_matched(params.kappa)
    if t == 0.0 or params.omega_drive == 0.0 or params.g == 0.0:
        return 0j
    if pulse.kind == "tabulated":
        return _overlap(params, float(t), pulse, window, rel_tol, order)
    return _overlap_cached(params, float(t), pulse, window, rel_tol, order)


def _overlap(params, t, pulse, window, rel_tol, order):
    return complex(
        pulse.integrate(lambda x: unit_u(params, t, x) * np.conj(pulse(x)), window, rel_tol, order,
                        t=t)
    )


# analytic pulses hash by value; tabulated ones compare equal regardless of
# their samples, so they bypass the cache
_overlap_cached = functools.lru_cache(maxsize=4096)(_overlap)
