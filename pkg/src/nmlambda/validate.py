"""Self-check suite run by ``nmlambda validate``.

Every check measures one number and compares it with a tolerance. The quick
level covers the analytic identities; the full level adds the grid oracle
and quadrature convergence studies.
"""

import time
from dataclasses import dataclass

import numpy as np

from .amplitudes import PulseShape, amplitude_set, overlap_w, photon_norm
from .entanglement import (TwoAtomPureState, avg_linear_entropy, avg_negativity, bsm_project,
                           negativity, negativity_via_pt)
from .model import InitialAtomState, PhysicalParams, cubic_coefficients, solve
from .numerics import gauss_legendre
from .oracle import integrate_schrodinger, max_deviation

SEED = 20240517
FIG2 = PhysicalParams(10.0, 10.0, 1.0, 15.0, -15.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float

    @property
    def passed(self):
        return bool(self.value <= self.tol)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<34s} value={self.value:.3e} tol={self.tol:.1e} {status}"


def _random_params(rng, n):
    out = []
    for _ in range(n):
        g, om = rng.uniform(0, 20, 2)
        d, dl = rng.uniform(-20, 20, 2)
        out.append(PhysicalParams(g, om, 1.0, d, dl))
    return out


def check_cubic(rng):
    vieta = ident = resid = 0.0
    for p in _random_params(rng, 1000):
        a2, a1, a0 = cubic_coefficients(p)
        sol = solve(p)
        s = np.array(sol.roots)
        c = np.array(sol.residues)
        vieta = max(vieta, abs(s.sum() + a2), abs(np.prod(s) + a0))
        ident = max(ident, abs(c.sum()), abs(np.dot(c, s) + 1j * p.omega_drive))
        scale = max(1.0, abs(a2), abs(a1), abs(a0))
        resid = max(resid, float(np.max(np.abs(s ** 3 + a2 * s ** 2 + a1 * s + a0))) / scale)
    return [("vieta", vieta, 1e-10), ("residue_identities", ident, 1e-9),
            ("cubic_residual", resid, 1e-9)]


def check_quadrature():
    err = 0.0
    for n in (2, 4, 8):
        rule = gauss_legendre(n)
        for k in range(2 * n):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            err = max(err, abs(np.dot(rule.weights, rule.nodes ** k) - exact))
    return [("gauss_legendre_exactness", err, 1e-13)]


def check_norm(rng, n_cases):
    worst = 0.0
    for p in _random_params(rng, n_cases):
        init = InitialAtomState(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        t = rng.uniform(0.05, 5.0)
        amps = amplitude_set(p, init, t)
        worst = max(worst, abs(photon_norm(p, init, t) - amps.photon_weight))
    return [("norm_quadrature", worst, 1e-6)]


def check_routes(rng):
    worst = 0.0
    for _ in range(100):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        state = TwoAtomPureState(m / np.linalg.norm(m), 1.0)
        worst = max(worst, abs(negativity(state) - negativity_via_pt(state)))
    return [("negativity_route_equivalence", worst, 1e-10)]


def check_pulse_independence():
    i1, i2 = InitialAtomState(np.pi / 3, 0.4), InitialAtomState(np.pi / 5, 1.1)
    a = bsm_project(FIG2, i1, i2, 1.0, PulseShape.lorentzian_matched())
    b = bsm_project(FIG2, i1, i2, 1.0, PulseShape.flat_band(50.0))
    # compare rays: remove the relative global phase
    phase = np.vdot(b.coeffs.ravel(), a.coeffs.ravel())
    phase /= abs(phase)
    return [("pulse_independence", float(np.max(np.abs(a.coeffs - phase * b.coeffs))), 1e-10)]


def check_oracle():
    init = InitialAtomState()
    traj = integrate_schrodinger(FIG2, init)
    dev_e, dev_f = max_deviation(traj, FIG2, init)
    drift = float(np.max(np.abs(traj.norm - 1.0)))
    return [("oracle_dev_E", dev_e, 1e-3), ("oracle_dev_F", dev_f, 1e-3),
            ("oracle_norm_drift", drift, 1e-6)]


def check_convergence():
    w16 = overlap_w(FIG2, 1.0, order=16)
    w32 = overlap_w(FIG2, 1.0, order=32)
    s32 = avg_linear_entropy(FIG2, 1.0, 32)
    s64 = avg_linear_entropy(FIG2, 1.0, 64)
    n32 = avg_negativity(FIG2, 3.0, 32)
    n64 = avg_negativity(FIG2, 3.0, 64)
    return [("overlap_order_doubling", abs(w16 - w32) / abs(w32), 1e-8),
            ("avg_entropy_order_doubling", abs(s32 - s64), 1e-8),
            ("avg_negativity_order_doubling", abs(n32 - n64), 1e-6)]


def run_validate(level="quick", tol_scale=1.0):
    """Run the suite; returns (list of CheckResult, elapsed seconds)."""
    if level not in ("quick", "full"):
        raise ValueError(f"level must be quick or full, got {level!r}")
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    raw = []
    raw += check_cubic(rng)
    raw += check_quadrature()
    raw += check_norm(rng, 5 if level == "quick" else 20)
    raw += check_routes(rng)
    raw += check_pulse_independence()
    if level == "full":
        raw += check_oracle()
        raw += check_convergence()
    results = [CheckResult(name, float(value), tol * tol_scale) for name, value, tol in raw]
    return results, time.perf_counter() - start
