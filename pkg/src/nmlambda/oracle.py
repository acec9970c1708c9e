"""Brute-force reference: discretized reservoir plus fixed-step RK4.

The photon continuum is replaced by ``n_modes`` equally spaced modes in the
relative frequency x, each coupled with ``g * alpha(x_m) * sqrt(dx)`` so that
the discrete spectral density reproduces the Lorentzian one. The equations
are integrated in the interaction picture with the phase factors
``exp(i (delta + x_m) t)`` and ``exp(-i delta_l t)`` kept explicitly; nothing
here uses the characteristic cubic.
"""

import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import amp_E, amp_F, mode_function
from .errors import StepTooLarge
from .numerics._backend import kernels

NORM_DRIFT_LIMIT = 1e-4


@dataclass(frozen=True)
class FrequencyGrid:
    x_min: float = -200.0
    x_max: float = 200.0
    n_modes: int = 4001

    def __post_init__(self):
        if not self.x_min < 0 < self.x_max:
            raise ValueError("frequency grid must straddle the cavity frequency")
        if self.n_modes < 2:
            raise ValueError("need at least two modes")

    @property
    def spacing(self):
        return (self.x_max - self.x_min) / (self.n_modes - 1)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n_modes)

    def couplings(self, params):
        """Per-mode couplings g_m = g alpha(x_m) sqrt(dx)."""
        return params.g * mode_function(self.x, params.kappa) * math.sqrt(self.spacing)


@dataclass(frozen=True)
class OracleTrajectory:
    times: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: complex
    norm: np.ndarray
    snapshot_times: np.ndarray
    U_modes: np.ndarray


def max_stable_step(params, grid):
    fastest = max(params.g, params.omega_drive, abs(params.delta) + max(abs(grid.x_min), grid.x_max),
                  abs(params.delta_l), params.kappa)
    return 0.2 / fastest


def integrate_schrodinger(params, init, grid=None, t_end=5.0, dt=5e-4, n_snapshots=51):
    """Integrate the mode-discretized Schrodinger equation from t = 0 to ``t_end``.

    ``E`` and ``F`` are stored at every step; mode amplitudes at about
    ``n_snapshots`` evenly spaced steps.

    Raises
    ------
    StepTooLarge
        If ``dt`` exceeds ``0.2 / max(g, Omega, |delta| + x_max, |delta_l|, kappa)``
        or the total norm drifts by more than 1e-4.
    """
    grid = grid or FrequencyGrid()
    if dt > max_stable_step(params, grid) * (1 + 1e-12):
        raise StepTooLarge(f"dt={dt} exceeds the stability bound {max_stable_step(params, grid):.3e}")
    if not 0 < t_end <= 10.0 / params.kappa:
        raise ValueError("t_end must lie in (0, 10/kappa]")
    nsteps = int(round(t_end / dt))
    store_every = max(1, nsteps // max(1, n_snapshots - 1))
    E, F, norm, snaps = kernels.rk4_oracle(
        grid.couplings(params), params.delta + grid.x, params.omega_drive, params.delta_l,
        0j, complex(init.f0), dt, nsteps, store_every,
    )
    g0 = init.g0
    norm = np.asarray(norm) + abs(g0) ** 2
    drift = float(np.max(np.abs(norm - 1.0)))
    if drift > NORM_DRIFT_LIMIT:
        raise StepTooLarge(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_LIMIT:g}")
    times = np.arange(nsteps + 1) * dt
    snapshot_times = np.arange(np.asarray(snaps).shape[0]) * store_every * dt
    return OracleTrajectory(times, np.asarray(E), np.asarray(F), g0, norm, snapshot_times,
                            np.asarray(snaps))


def max_deviation(traj, params, init):
    """Largest |closed form - oracle| for E and for F over the stored times."""
    dev_e = float(np.max(np.abs(amp_E(params, init, traj.times) - traj.E)))
    dev_f = float(np.max(np.abs(amp_F(params, init, traj.times) - traj.F)))
    return dev_e, dev_f
