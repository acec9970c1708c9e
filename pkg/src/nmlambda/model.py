"""Characteristic cubic of the Laplace-transformed atomic amplitude.

Eliminating the field and the drive from the single-excitation equations
leaves one integro-differential equation for the upper-level amplitude E(t)
with the exponential memory kernel ``g^2 exp(-(kappa + i delta) t)``. Its
Laplace transform is rational, with denominator the monic cubic built by
:func:`cubic_coefficients`; the roots ``s_k`` and the partial-fraction
residues ``c_k`` give ``E(t) = F(0) sum_k c_k exp(s_k t)``.

All quantities are in units where ``kappa`` is the reference rate
(``kappa = 1`` by default).
"""

import cmath
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NearDegenerateRoots, NoConvergence, UndefinedRegime
from .numerics import newton_polish

DEGENERACY_TOL = 1e-9
REGIME_FACTOR = 10.0


@dataclass(frozen=True)
class PhysicalParams:
    """Cavity, atom and drive parameters.

    Attributes
    ----------
    g : atom-cavity coupling.
    omega_drive : Rabi coupling of the classical drive.
    kappa : cavity decay rate (reference scale).
    delta : cavity detuning, omega_c - (omega_e - omega_g).
    delta_l : drive detuning, omega_l - (omega_e - omega_f).
    """

    g: float
    omega_drive: float
    kappa: float = 1.0
    delta: float = 0.0
    delta_l: float = 0.0

    def __post_init__(self):
        for name in ("g", "omega_drive", "kappa", "delta", "delta_l"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, float(value))
        if self.g < 0 or self.omega_drive < 0:
            raise ValueError("g and omega_drive must be non-negative")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")

    def replace(self, **changes):
        fields = dict(g=self.g, omega_drive=self.omega_drive, kappa=self.kappa,
                      delta=self.delta, delta_l=self.delta_l)
        fields.update(changes)
        return PhysicalParams(**fields)


@dataclass(frozen=True)
class InitialAtomState:
    """Bloch angles of the initial superposition cos(theta/2)|f> + sin(theta/2) e^{i phi}|g>."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("Bloch angles must be finite")
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "theta", float(min(max(self.theta, 0.0), math.pi)))
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def f0(self):
        # sin of the complement is exactly 0 at theta = pi, unlike cos(pi/2)
        return math.sin(0.5 * (math.pi - self.theta))

    @property
    def g0(self):
        return math.sin(0.5 * self.theta) * cmath.exp(1j * self.phi)


@dataclass(frozen=True)
class CubicSolution:
    roots: tuple
    residues: tuple


class Regime(enum.Enum):
    MARKOVIAN = "Markovian"
    NON_MARKOVIAN = "NonMarkovian"
    INTERMEDIATE = "Intermediate"


def cubic_coefficients(params):
    """(a2, a1, a0) of the monic cubic s^3 + a2 s^2 + a1 s + a0."""
    g2 = params.g ** 2
    w2 = params.omega_drive ** 2
    cav = complex(params.kappa, params.delta)  # kappa + i delta
    a2 = complex(params.kappa, params.delta + params.delta_l)
    a1 = g2 + w2 + 1j * params.delta_l * cav
    a0 = w2 * cav + 1j * g2 * params.delta_l
    return a2, a1, a0


def _cardano(a2, a1, a0):
    shift = a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2 ** 3 / 27.0 - a2 * a1 / 3.0 + a0
    disc = cmath.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    # pick the branch with the larger |u^3| to avoid cancellation
    u3 = -q / 2.0 + disc
    if abs(-q / 2.0 - disc) > abs(u3):
        u3 = -q / 2.0 - disc
    if u3 == 0:
        return [-shift] * 3
    u = u3 ** (1.0 / 3.0)
    unity = [1.0, complex(-0.5, math.sqrt(3) / 2), complex(-0.5, -math.sqrt(3) / 2)]
    return [w * u - p / (3.0 * w * u) - shift for w in unity]


def _sort_key(root, scale):
    return (round(root.real / scale, 9), root.imag)


def _polish(poly, seed):
    try:
        return newton_polish(poly, seed)
    except NoConvergence:
        # clustered roots converge only linearly; keep the seed
        return seed


def _quadratic(b, c):
    """Roots of s^2 + b s + c without cancellation."""
    disc = cmath.sqrt(b * b - 4.0 * c)
    q = -0.5 * (b + disc if abs(b + disc) >= abs(b - disc) else b - disc)
    if q == 0:
        return 0j, 0j
    return q, c / q


def solve_cubic(coeffs, check_degenerate=True):
    """Roots of s^3 + a2 s^2 + a1 s + a0, sorted by real part then imaginary part.

    Cardano seeds are polished by Newton's method on the original cubic. The
    most isolated root is then divided out and the remaining pair comes from
    the deflated quadratic, which stays accurate when two roots cluster.

    Raises
    ------
    NearDegenerateRoots
        If two roots are closer than ``1e-9`` times the largest root
        magnitude (only when ``check_degenerate``).
    """
    a2, a1, a0 = (complex(c) for c in coeffs)
    if not all(cmath.isfinite(c) for c in (a2, a1, a0)):
        raise ValueError("cubic coefficients must be finite")
    poly = (1.0, a2, a1, a0)
    seeds = [_polish(poly, z) for z in _cardano(a2, a1, a0)]
    gaps = [min(abs(seeds[k] - seeds[j]) for j in range(3) if j != k) for k in range(3)]
    lone = seeds[max(range(3), key=lambda k: gaps[k])]
    # synthetic division by (s - lone)
    b1 = a2 + lone
    b0 = a1 + lone * b1
    roots = [lone] + [_polish(poly, z) for z in _quadratic(b1, b0)]
    scale = max(1.0, max(abs(r) for r in roots))
    roots.sort(key=lambda r: _sort_key(r, scale))
    if check_degenerate:
        _check_distinct(roots)
    return tuple(roots)


def _check_distinct(roots):
    biggest = max(abs(r) for r in roots)
    gap = min(abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3))
    if gap < DEGENERACY_TOL * biggest:
        raise NearDegenerateRoots(
            f"roots {roots} are degenerate to {gap:.3e}; residue formulas are singular"
        )


def residues(params, roots):
    """Partial-fraction residues c_k = -i Omega (s_k + kappa + i delta) / prod_{j != k} (s_k - s_j)."""
    if params.omega_drive == 0.0:
        return (0j, 0j, 0j)
    roots = tuple(complex(r) for r in roots)
    _check_distinct(roots)
    cav = complex(params.kappa, params.delta)
    out = []
    for k in range(3):
        sk = roots[k]
        den = 1.0
        for j in range(3):
            if j != k:
                den *= sk - roots[j]
        out.append(-1j * params.omega_drive * (sk + cav) / den)
    return tuple(out)


def _undriven_roots(params):
    """Without drive the cubic factorizes as (s + i delta_l)(s^2 + (kappa + i delta) s + g^2)."""
    roots = [complex(0.0, -params.delta_l)]
    roots += _quadratic(complex(params.kappa, params.delta), params.g ** 2)
    scale = max(1.0, max(abs(r) for r in roots))
    roots.sort(key=lambda r: _sort_key(r, scale))
    return tuple(roots)


@functools.lru_cache(maxsize=4096)
def solve(params):
    """Roots and residues for ``params`` (cached; ``params`` is immutable).

    With no drive all residues vanish, so root degeneracy is tolerated and
    the factorized cubic is solved directly.
    """
    coeffs = cubic_coefficients(params)
    if params.omega_drive == 0.0:
        return CubicSolution(_undriven_roots(params), (0j, 0j, 0j))
    roots = solve_cubic(coeffs)
    return CubicSolution(roots, residues(params, roots))


def classify_regime(params):
    """Label the reservoir regime from the ratio of correlation to relaxation time.

    Non-Markovian when 1/kappa >= 10/g, Markovian when 1/g >= 10/kappa.
    """
    if params.g == 0.0:
        raise UndefinedRegime("relaxation time 1/g is undefined for g = 0")
    ratio = params.g / params.kappa
    if ratio >= REGIME_FACTOR:
        return Regime.NON_MARKOVIAN
    if ratio * REGIME_FACTOR <= 1.0:
        return Regime.MARKOVIAN
    return Regime.INTERMEDIATE


def roots_array(params):
    sol = solve(params)
    return np.array(sol.roots), np.array(sol.residues)
