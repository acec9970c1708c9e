"""Newton polishing of polynomial roots."""

import numpy as np

from ..errors import NoConvergence

_EPS = np.finfo(float).eps


def _horner(coeffs, s):
    p = coeffs[0]
    dp = 0.0
    bound = abs(coeffs[0])
    for a in coeffs[1:]:
        dp = dp * s + p
        p = p * s + a
        bound = bound * abs(s) + abs(a)
    return p, dp, bound


def newton_polish(coeffs, guess, tol=1e-12, max_iter=50):
    """Refine a root of ``coeffs[0] s^n + ... + coeffs[n]`` by Newton's method.

    Iterates until the step stalls at rounding level, then requires
    ``|p(root)| <= tol * sum_i |coeffs[i]| |root|^i``.
    """
    coeffs = [complex(c) for c in coeffs]
    s = complex(guess)
    best = s
    best_res = np.inf
    for _ in range(max_iter):
        p, dp, bound = _horner(coeffs, s)
        res = abs(p)
        if res < best_res:
            best, best_res = s, res
        if res == 0.0 or dp == 0:
            break
        step = p / dp
        s = s - step
        if abs(step) <= 4 * _EPS * max(abs(s), 1e-300):
            p, _, bound = _horner(coeffs, s)
            if abs(p) < best_res:
                best, best_res = s, abs(p)
            break
    _, _, bound = _horner(coeffs, best)
    if best_res > tol * max(bound, 1e-300):
        raise NoConvergence(f"Newton polishing stalled at residual {best_res:.3e}")
    return best
