import cmath
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nmlambda.errors import NearDegenerateRoots, UndefinedRegime
from nmlambda.model import (InitialAtomState, PhysicalParams, Regime, classify_regime,
                            cubic_coefficients, residues, solve, solve_cubic)
from nmlambda.oracle import integrate_schrodinger

from conftest import RESONANT, random_params


# -- coefficients -----------------------------------------------------------

def test_coefficients_resonant():
    assert cubic_coefficients(PhysicalParams(10, 10, 1, 0, 0)) == (1 + 0j, 200 + 0j, 100 + 0j)


def test_coefficients_detuned():
    a2, a1, a0 = cubic_coefficients(PhysicalParams(10, 10, 1, 15, -15))
    assert a2 == 1 + 0j
    assert a1 == 425 - 15j
    assert a0 == 100 + 0j


def _symbolic_coefficients(g, om, kappa, delta, delta_l):
    # expand the characteristic polynomial from the Laplace-domain equations:
    # s E = -g^2/(s + kappa + i delta) E - i om Fhat, (s + i delta_l) Fhat = -i om E  (shifted frame)
    s = sp.symbols("s")
    i = sp.I
    poly = sp.expand((s * (s + kappa + i * delta) + g ** 2) * (s + i * delta_l)
                     + om ** 2 * (s + kappa + i * delta))
    p = sp.Poly(poly, s)
    c = [complex(sp.N(x)) for x in p.all_coeffs()]
    assert c[0] == 1
    return tuple(c[1:])


@pytest.mark.parametrize("args", [(10, 10, 1, 15, 0), (10, 10, 1, 15, -15), (3.5, 0.7, 1, -2, 9)])
def test_coefficients_symbolic_oracle(args):
    ours = cubic_coefficients(PhysicalParams(*args))
    ref = _symbolic_coefficients(*[sp.nsimplify(a) for a in args])
    for a, b in zip(ours, ref):
        assert abs(a - b) <= 1e-12 * max(1, abs(b))


def test_coefficients_cavity_detuned_value():
    assert cubic_coefficients(PhysicalParams(10, 10, 1, 15, 0)) == (1 + 15j, 200 + 0j, 100 + 1500j)


# -- roots ------------------------------------------------------------------

def test_cube_roots_of_unity():
    roots = solve_cubic((0, 0, -1))
    expected = sorted((cmath.exp(2j * math.pi * k / 3) for k in range(3)),
                      key=lambda z: (round(z.real, 9), z.imag))
    for r, e in zip(roots, expected):
        assert abs(r - e) <= 1e-12


@pytest.mark.parametrize("delta,delta_l", [(0, 0), (3, -7), (-12, 4.5)])
def test_undriven_root(delta, delta_l):
    p = PhysicalParams(5, 0, 1, delta, delta_l)
    roots = solve(p).roots
    assert min(abs(r + 1j * delta_l) for r in roots) <= 1e-12


def test_fig2_roots_companion_oracle():
    roots = solve_cubic((1, 200, 100))
    comp = np.array([[-1, -200, -100], [1, 0, 0], [0, 1, 0]], dtype=complex)
    ref = np.linalg.eigvals(comp)
    for r in roots:
        assert np.min(np.abs(ref - r)) <= 1e-10


def test_roots_sorted():
    roots = solve(PhysicalParams(7, 3, 1, 2, -5)).roots
    keys = [(round(r.real, 9), r.imag) for r in roots]
    assert keys == sorted(keys)


def test_near_degenerate_rejected():
    # (s - 1)^2 (s + 2)
    with pytest.raises(NearDegenerateRoots):
        solve_cubic((0, -3, 2))


def test_residual_bound(rng):
    for _ in range(200):
        coeffs = tuple(complex(*rng.normal(size=2) * 10) for _ in range(3))
        try:
            roots = solve_cubic(coeffs)
        except NearDegenerateRoots:
            continue
        scale = max(1, *(abs(c) for c in coeffs))
        for r in roots:
            assert abs(r ** 3 + coeffs[0] * r ** 2 + coeffs[1] * r + coeffs[2]) <= 1e-9 * scale


def test_random_params_identities(rng):
    worst = dict(resid=0.0, vieta=0.0, sum_c=0.0, sum_cs=0.0, re=-np.inf)
    for _ in range(1000):
        p = random_params(rng)
        a2, a1, a0 = cubic_coefficients(p)
        sol = solve(p)
        s, c = np.array(sol.roots), np.array(sol.residues)
        scale = max(1.0, abs(a2), abs(a1), abs(a0))
        worst["resid"] = max(worst["resid"], np.max(np.abs(s ** 3 + a2 * s ** 2 + a1 * s + a0)) / scale)
        # Vieta against the closed-form expressions, not the computed coefficients
        vs = -(1j * (p.delta + p.delta_l) + p.kappa)
        vp = -(p.omega_drive ** 2 * (1j * p.delta + p.kappa) + 1j * p.g ** 2 * p.delta_l)
        worst["vieta"] = max(worst["vieta"], abs(s.sum() - vs), abs(np.prod(s) - vp) / max(1, abs(vp)))
        worst["sum_c"] = max(worst["sum_c"], abs(c.sum()))
        worst["sum_cs"] = max(worst["sum_cs"], abs(np.dot(c, s) + 1j * p.omega_drive))
        worst["re"] = max(worst["re"], np.max(s.real))
    assert worst["resid"] <= 1e-9
    assert worst["vieta"] <= 1e-10
    assert worst["sum_c"] <= 1e-9
    assert worst["sum_cs"] <= 1e-9
    assert worst["re"] <= 1e-12


def test_root_set_invariant_under_reordered_evaluation(rng):
    for _ in range(50):
        p = random_params(rng)
        a2, a1, a0 = cubic_coefficients(p)
        # same coefficients assembled in a different order of operations
        b0 = 1j * p.g ** 2 * p.delta_l + (p.omega_drive ** 2 * p.kappa + 1j * p.omega_drive ** 2 * p.delta)
        b1 = (1j * p.delta_l * p.kappa - p.delta_l * p.delta) + p.omega_drive ** 2 + p.g ** 2
        b2 = p.kappa + 1j * p.delta_l + 1j * p.delta
        r1 = solve_cubic((a2, a1, a0))
        r2 = solve_cubic((b2, b1, b0))
        for r in r1:
            assert min(abs(r - q) for q in r2) <= 1e-10 * max(1, abs(r))


# -- residues ---------------------------------------------------------------

def test_residues_zero_without_drive():
    p = PhysicalParams(10, 0, 1, 1, 2)
    assert residues(p, solve(p).roots) == (0j, 0j, 0j)


def test_residue_sum_zero():
    p = PhysicalParams(10, 10, 1, 15, -15)
    assert abs(sum(solve(p).residues)) <= 1e-10


def test_residues_fit_from_oracle():
    init = InitialAtomState()
    traj = integrate_schrodinger(RESONANT, init)
    sol = solve(RESONANT)
    s = np.array(sol.roots)
    t = traj.times[::10]
    basis = np.exp(np.outer(t, s))
    fit, *_ = np.linalg.lstsq(basis, traj.E[::10], rcond=None)
    assert np.max(np.abs(fit - np.array(sol.residues))) <= 1e-4


def test_residues_degenerate_roots_rejected():
    with pytest.raises(NearDegenerateRoots):
        residues(PhysicalParams(1, 1), (1 + 0j, 1 + 0j, 2 + 0j))


# -- regimes ----------------------------------------------------------------

@pytest.mark.parametrize("g,expected", [(10.0, Regime.NON_MARKOVIAN), (0.1, Regime.MARKOVIAN),
                                        (1.0, Regime.INTERMEDIATE), (50.0, Regime.NON_MARKOVIAN),
                                        (0.01, Regime.MARKOVIAN), (9.99, Regime.INTERMEDIATE)])
def test_regimes(g, expected):
    assert classify_regime(PhysicalParams(g, 1.0)) is expected


def test_regime_labels():
    assert Regime.NON_MARKOVIAN.value == "NonMarkovian"
    assert Regime.MARKOVIAN.value == "Markovian"


def test_regime_undefined():
    with pytest.raises(UndefinedRegime):
        classify_regime(PhysicalParams(0.0, 1.0))


# -- data types -------------------------------------------------------------

@pytest.mark.parametrize("kw", [dict(g=-1, omega_drive=1), dict(g=1, omega_drive=-1),
                                dict(g=1, omega_drive=1, kappa=0), dict(g=math.nan, omega_drive=1),
                                dict(g=1, omega_drive=1, delta=math.inf)])
def test_params_validation(kw):
    with pytest.raises(ValueError):
        PhysicalParams(**kw)


def test_initial_state_amplitudes():
    init = InitialAtomState(math.pi / 2, math.pi / 3)
    assert abs(init.f0 ** 2 + abs(init.g0) ** 2 - 1) <= 1e-15
    assert init.f0 == pytest.approx(1 / math.sqrt(2))
    assert cmath.phase(init.g0) == pytest.approx(math.pi / 3)
    with pytest.raises(ValueError):
        InitialAtomState(4.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 20), st.floats(0, 20), st.floats(-20, 20), st.floats(-20, 20))
def test_solution_properties(g, om, d, dl):
    p = PhysicalParams(g, om, 1.0, d, dl)
    try:
        sol = solve(p)
    except NearDegenerateRoots:
        return
    s, c = np.array(sol.roots), np.array(sol.residues)
    assert np.all(s.real <= 1e-12)
    assert abs(c.sum()) <= 1e-9
    assert abs(np.dot(c, s) + 1j * om) <= 1e-9
