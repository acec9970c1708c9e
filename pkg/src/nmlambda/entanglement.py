"""Atom-field and atom-atom entanglement measures.

Basis order is (e, f, g) for each atom; two-atom objects use the product
basis with atom 1 as the row (major) index.
"""

import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import PulseShape, amplitude_set, overlap_w, unit_e, unit_f
from .errors import NoPhoton
from .numerics import gauss_legendre, hermitian_eigen, pure_state_negativity

NO_PHOTON_THRESHOLD = 1e-20
E, F, G = 0, 1, 2
BASIS = ("e", "f", "g")


def reduced_density(params, init, t):
    """Reduced density matrix of one atom (3x3, basis e, f, g).

    The photon sector only adds weight to the |g><g| entry, which equals
    1 - |E|^2 - |F|^2.
    """
    amps = amplitude_set(params, init, t)
    a = np.array([amps.E, amps.F, amps.G], dtype=complex)
    rho = np.outer(a, a.conj())
    rho[G, G] = 1.0 - abs(amps.E) ** 2 - abs(amps.F) ** 2
    return rho


def linear_entropy(rho):
    """1 - Tr(rho^2); between 0 (pure) and 1 - 1/d (maximally mixed)."""
    rho = np.asarray(rho)
    return float(1.0 - np.sum(np.abs(rho) ** 2, axis=(-2, -1)))


def _bloch_nodes(theta_order, phi_order):
    """Nodes and weights for the normalized sphere average (weights sum to 1)."""
    rule = gauss_legendre(theta_order)
    theta = np.arccos(rule.nodes)
    w_theta = rule.weights / 2.0
    phi = 2.0 * np.pi * np.arange(phi_order) / phi_order
    w_phi = np.full(phi_order, 1.0 / phi_order)
    return theta, w_theta, phi, w_phi


def avg_linear_entropy(params, t, quad_order=32, phi_order=16):
    """Bloch-sphere average of the atom-field linear entropy at time ``t``.

    Gauss-Legendre in cos(theta) and the periodic trapezoid rule in phi. The
    integrand uses S_A = 2 p (|E|^2 + |F|^2), with p the one-photon weight,
    which equals 1 - Tr(rho^2) for this rho and avoids cancellation near t = 0.
    """
    if quad_order < 8:
        raise ValueError("quad_order must be at least 8")
    theta, w_theta, phi, w_phi = _bloch_nodes(quad_order, phi_order)
    e = complex(unit_e(params, t))
    f = complex(unit_f(params, t))
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    c2 = np.cos(th / 2.0) ** 2
    excited = c2 * (abs(e) ** 2 + abs(f) ** 2)
    photon = np.maximum(0.0, c2 - excited)
    s = 2.0 * photon * excited
    return float(np.einsum("i,j,ij->", w_theta, w_phi, s))


@dataclass(frozen=True)
class TwoAtomPureState:
    """Normalized post-measurement coefficients ``coeffs[i, j]`` of |i>_1 |j>_2.

    ``weight`` is the squared norm before normalization.
    """

    coeffs: np.ndarray
    weight: float


def _coefficient_matrix(e, f, w, init1, init2):
    """Unnormalized coefficients of <Psi|psi_1 psi_2> for the antisymmetric photon Bell state."""
    f1, f2 = init1.f0, init2.f0
    o1, o2 = f1 * w, f2 * w
    m = np.zeros((3, 3), dtype=complex)
    m[E, G] = f1 * e * o2
    m[G, E] = -f2 * e * o1
    m[F, G] = f1 * f * o2
    m[G, F] = -f2 * f * o1
    m[G, G] = init1.g0 * o2 - init2.g0 * o1
    return m


def bsm_project(params, init1, init2, t, pulse=None):
    """Heralded two-atom state after projecting both photons onto the Bell state.

    Raises
    ------
    NoPhoton
        If the projection probability weight is below 1e-20 (for example at
        t = 0, or with both atoms starting in |g>).
    """
    if pulse is None:
        pulse = PulseShape.lorentzian_matched(params.kappa)
    w = overlap_w(params, t, pulse) if t > 0 else 0j
    e = complex(unit_e(params, t))
    f = complex(unit_f(params, t))
    m = _coefficient_matrix(e, f, w, init1, init2)
    weight = float(np.sum(np.abs(m) ** 2))
    if not weight >= NO_PHOTON_THRESHOLD:
        raise NoPhoton(f"Bell-state projection weight {weight:.3e} is below threshold")
    coeffs = m / math.sqrt(weight)
    coeffs.flags.writeable = False
    return TwoAtomPureState(coeffs, weight)


def negativity(state):
    """Negativity from the Schmidt coefficients: ((sum_i s_i)^2 - 1) / 2."""
    return float(pure_state_negativity(_coeffs(state)))


def _coeffs(state):
    return state.coeffs if isinstance(state, TwoAtomPureState) else np.asarray(state, dtype=complex)


def two_atom_density(state):
    """9x9 projector |psi><psi| in the product basis (atom 1 major)."""
    v = _coeffs(state).reshape(9)
    return np.outer(v, v.conj())


def partial_transpose(rho, subsystem=0):
    """Partial transpose of a 9x9 two-qutrit operator on atom 1 (0) or atom 2 (1)."""
    r = np.asarray(rho).reshape(3, 3, 3, 3)
    if subsystem == 0:
        r = r.transpose(2, 1, 0, 3)
    else:
        r = r.transpose(0, 3, 2, 1)
    return r.reshape(9, 9)


def negativity_via_pt(state):
    """Negativity as the summed magnitude of the negative partial-transpose eigenvalues."""
    rho_pt = partial_transpose(two_atom_density(state))
    eig = hermitian_eigen(rho_pt).eigenvalues
    return float(-np.sum(eig[eig < 0.0]))


def _phase_averaged(e, f, theta1, theta2, swap=False):
    """Negativity averaged over the relative phase phi_1 - phi_2.

    For these states the Schmidt product s_1 s_2 does not depend on the
    phases, so the negativity is A / (B - C cos(phi_1 - phi_2)); its phase
    average is A / sqrt(B^2 - C^2), the geometric mean of the values at
    relative phase 0 and pi. Both values come from the singular-value route.
    """
    theta1, theta2 = np.broadcast_arrays(np.asarray(theta1, float), np.asarray(theta2, float))
    c1, s1 = np.cos(theta1 / 2.0), np.sin(theta1 / 2.0)
    c2, s2 = np.cos(theta2 / 2.0), np.sin(theta2 / 2.0)
    if swap:
        c1, s1, c2, s2 = c2, s2, c1, s1
    vals = []
    for rel_phase in (1.0, -1.0):
        m = np.zeros(theta1.shape + (3, 3), dtype=complex)
        a = c1 * c2
        m[..., E, G] = a * e
        m[..., G, E] = -a * e
        m[..., F, G] = a * f
        m[..., G, F] = -a * f
        m[..., G, G] = rel_phase * s1 * c2 - s2 * c1
        n = pure_state_negativity(m.reshape(-1, 3, 3)).reshape(theta1.shape)
        vals.append(np.nan_to_num(n, nan=0.0))
    return np.sqrt(vals[0] * vals[1])


def _avg_negativity_unit(e, f, quad_order, swap=False):
    """Sphere-averaged negativity given the per-unit-F(0) amplitudes e(t), f(t)."""
    rule = gauss_legendre(quad_order)
    outer, w_outer = rule.scaled(0.0, np.pi)
    # the integrand is symmetric in the two polar angles; integrate the
    # triangle theta_2 <= theta_1 so the diagonal ridge sits on a panel edge
    x = 0.5 * (rule.nodes + 1.0)
    inner = outer[:, None] * x[None, :]
    w_inner = 0.5 * outer[:, None] * rule.weights[None, :]
    th1 = np.broadcast_to(outer[:, None], inner.shape)
    vals = _phase_averaged(e, f, th1, inner, swap=swap)
    integrand = np.sin(th1) * np.sin(inner) * vals
    total = np.sum(w_outer * np.sum(w_inner * integrand, axis=1))
    # 1/(16 pi^2) * (2 pi)^2 from the phases, times 2 for the triangle
    return float(total / 2.0)


def _avg_negativity_product(e, f, quad_order, phi_order):
    theta, w_theta, phi, w_phi = _bloch_nodes(quad_order, phi_order)
    t1, p1, t2, p2 = np.meshgrid(theta, phi, theta, phi, indexing="ij")
    weights = np.einsum("i,j,k,l->ijkl", w_theta, w_phi, w_theta, w_phi)
    c1, c2 = np.cos(t1 / 2.0), np.cos(t2 / 2.0)
    g1 = np.sin(t1 / 2.0) * np.exp(1j * p1)
    g2 = np.sin(t2 / 2.0) * np.exp(1j * p2)
    m = np.zeros(t1.shape + (3, 3), dtype=complex)
    a = c1 * c2
    m[..., E, G] = a * e
    m[..., G, E] = -a * e
    m[..., F, G] = a * f
    m[..., G, F] = -a * f
    m[..., G, G] = g1 * c2 - g2 * c1
    n = pure_state_negativity(m.reshape(-1, 3, 3)).reshape(t1.shape)
    return float(np.sum(weights * np.nan_to_num(n, nan=0.0)))


def avg_negativity(params, t, quad_order=32, method="triangle", phi_order=16):
    """Average negativity over all pure product initial states at time ``t``.

    ``method="triangle"`` (default) averages the relative phase exactly and
    integrates the polar angles with Gauss-Legendre on the triangle
    theta_2 <= theta_1. ``method="product"`` is the plain product rule
    (Gauss-Legendre in cos(theta_k), trapezoid in phi_k) over all four
    angles; it converges slowly because of the ridge at theta_1 = theta_2.

    The detection pulse cancels from the normalized state, so it is not a
    parameter. Nodes where no photon can be detected contribute zero.
    """
    if not t > 0:
        raise ValueError("average negativity needs t > 0")
    e = complex(unit_e(params, t))
    f = complex(unit_f(params, t))
    if method == "triangle":
        return _avg_negativity_unit(e, f, quad_order)
    if method == "product":
        return _avg_negativity_product(e, f, quad_order, phi_order)
    raise ValueError(f"unknown method {method!r}")
