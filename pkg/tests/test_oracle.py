import math

import numpy as np
import pytest

from nmlambda.amplitudes import photon_norm
from nmlambda.entanglement import linear_entropy, reduced_density
from nmlambda.errors import StepTooLarge
from nmlambda.model import InitialAtomState, PhysicalParams
from nmlambda.oracle import FrequencyGrid, integrate_schrodinger, max_deviation, max_stable_step

from conftest import FIG2, RESONANT, random_init, random_params

F_STATE = InitialAtomState()


def test_grid_couplings_reproduce_spectral_weight():
    grid = FrequencyGrid()
    gm = grid.couplings(FIG2)
    # integral of |alpha|^2 over +-200 kappa is (2/pi) arctan(200)
    expected = FIG2.g ** 2 * 2 / math.pi * math.atan(200.0)
    assert np.sum(np.abs(gm) ** 2) == pytest.approx(expected, rel=1e-5)


def test_grid_validation():
    with pytest.raises(ValueError):
        FrequencyGrid(1.0, 2.0, 11)
    with pytest.raises(ValueError):
        FrequencyGrid(-1.0, 1.0, 1)


def test_undriven_is_trivial():
    p = PhysicalParams(10.0, 0.0, 1.0, 15.0, -15.0)
    init = InitialAtomState(0.8, 0.3)
    traj = integrate_schrodinger(p, init, t_end=1.0)
    assert np.max(np.abs(traj.E)) == 0.0
    assert np.max(np.abs(traj.F - init.f0)) == 0.0
    assert np.max(np.abs(traj.U_modes)) == 0.0
    assert max_deviation(traj, p, init) == (0.0, 0.0)


def test_rabi_flopping_without_cavity():
    p = PhysicalParams(0.0, 10.0, 1.0, 0.0, 0.0)
    traj = integrate_schrodinger(p, F_STATE, t_end=2.0)
    t = traj.times
    assert np.max(np.abs(np.abs(traj.F) ** 2 - np.cos(10 * t) ** 2)) <= 1e-6
    assert np.max(np.abs(np.abs(traj.E) ** 2 - np.sin(10 * t) ** 2)) <= 1e-6
    dev_e, dev_f = max_deviation(traj, p, F_STATE)
    assert dev_e <= 1e-6 and dev_f <= 1e-6


def test_fig2_oracle_agreement(fig2_trajectory):
    dev_e, dev_f = max_deviation(fig2_trajectory, FIG2, F_STATE)
    assert dev_e <= 1e-3
    assert dev_f <= 1e-3


def test_fig2_norm_conserved(fig2_trajectory):
    assert np.max(np.abs(fig2_trajectory.norm - 1.0)) <= 1e-6


def test_fig2_snapshots_match_norm(fig2_trajectory):
    tr = fig2_trajectory
    idx = np.searchsorted(tr.times, tr.snapshot_times - 1e-12)
    total = (np.abs(tr.E[idx]) ** 2 + np.abs(tr.F[idx]) ** 2 + abs(tr.G) ** 2
             + np.sum(np.abs(tr.U_modes) ** 2, axis=1))
    assert np.max(np.abs(total - 1.0)) <= 1e-6


def test_photon_norm_matches_oracle_modes(fig2_trajectory):
    tr = fig2_trajectory
    k = len(tr.snapshot_times) // 2
    t = tr.snapshot_times[k]
    oracle = np.sum(np.abs(tr.U_modes[k]) ** 2)
    # the oracle only sees the +-200 window; the tail holds ~1e-3 of the weight
    assert photon_norm(FIG2, F_STATE, t) == pytest.approx(oracle, abs=5e-3)


def test_purity_matches_oracle(fig2_trajectory):
    tr = fig2_trajectory
    i = int(np.argmin(np.abs(tr.times - 1.0)))
    pe, pf = abs(tr.E[i]) ** 2, abs(tr.F[i]) ** 2
    pg = 1.0 - pe - pf
    purity = (pe + pf) ** 2 + pg ** 2
    s = linear_entropy(reduced_density(FIG2, F_STATE, tr.times[i]))
    assert 1.0 - s == pytest.approx(purity, abs=1e-3)


def test_random_parameters_conserve_norm(rng):
    for _ in range(3):
        p = random_params(rng, g_max=10.0, d_max=10.0)
        init = random_init(rng)
        traj = integrate_schrodinger(p, init, t_end=1.0)
        assert np.max(np.abs(traj.norm - 1.0)) <= 1e-6
        dev_e, dev_f = max_deviation(traj, p, init)
        assert dev_e <= 1e-3 and dev_f <= 1e-3


def test_step_halving():
    a = integrate_schrodinger(FIG2, F_STATE, t_end=2.0, dt=5e-4)
    b = integrate_schrodinger(FIG2, F_STATE, t_end=2.0, dt=2.5e-4)
    assert abs(a.E[-1] - b.E[-1]) <= 1e-5


def test_step_too_large():
    bound = max_stable_step(FIG2, FrequencyGrid())
    with pytest.raises(StepTooLarge):
        integrate_schrodinger(FIG2, F_STATE, dt=2 * bound)


def test_time_window_limits():
    with pytest.raises(ValueError):
        integrate_schrodinger(FIG2, F_STATE, t_end=11.0)
    with pytest.raises(ValueError):
        integrate_schrodinger(FIG2, F_STATE, t_end=0.0)


def test_grid_refinement_sits_on_truncation_floor():
    devs = []
    for n in (1001, 2001, 4001):
        traj = integrate_schrodinger(FIG2, F_STATE, FrequencyGrid(-200, 200, n))
        devs.append(max_deviation(traj, FIG2, F_STATE)[0])
    assert max(devs) <= 1e-4
    # refining the spacing changes nothing above the window floor
    assert max(devs) - min(devs) <= 1e-6


def test_window_widening_reduces_deviation():
    devs = []
    for half, n in ((100, 2001), (200, 4001), (400, 8001)):
        grid = FrequencyGrid(-half, half, n)
        dt = min(5e-4, max_stable_step(FIG2, grid))
        devs.append(max_deviation(integrate_schrodinger(FIG2, F_STATE, grid, dt=dt),
                                  FIG2, F_STATE)[0])
    assert devs[0] > devs[1] > devs[2]


# -- population transfer in the resonant case --------------------------------

@pytest.fixture(scope="module")
def resonant_pg():
    traj = integrate_schrodinger(RESONANT, F_STATE)
    return traj.times, 1.0 - np.abs(traj.E) ** 2 - np.abs(traj.F) ** 2


def test_coarse_grained_ground_population_non_decreasing(resonant_pg):
    t, pg = resonant_pg
    edges = np.arange(0.0, 5.0 + 1e-9, 0.5)
    means = [pg[(t >= a) & (t < b)].mean() for a, b in zip(edges[:-1], edges[1:])]
    assert np.all(np.diff(means) >= 0)


def test_ground_population_passes_099(resonant_pg):
    t, pg = resonant_pg
    assert np.any(pg[t <= 5.0] >= 0.99)


@pytest.mark.xfail(strict=True, reason="the resonant ground population settles near 0.955, "
                                       "not above 0.99, once the Rabi transient ends")
def test_ground_population_final_value(resonant_pg):
    _, pg = resonant_pg
    assert pg[-1] >= 0.99
