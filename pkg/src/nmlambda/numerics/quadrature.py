"""Gauss-Legendre rules and adaptive panel quadrature."""

import functools
import heapq
from dataclasses import dataclass

import numpy as np

from ..errors import QuadratureNotConverged

MAX_ORDER = 512


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes (strictly increasing, in [-1, 1]) and weights."""

    nodes: np.ndarray
    weights: np.ndarray

    def scaled(self, a, b):
        """Nodes and weights mapped from [-1, 1] onto [a, b]."""
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        return mid + half * self.nodes, half * self.weights


def _legendre_with_derivative(n, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # derivative from the standard relation (1 - x^2) P_n' = n (P_{n-1} - x P_n)
    dp = n * (p0 - x * p1) / (1.0 - x * x)
    return p1, dp


@functools.lru_cache(maxsize=None)
def _rule(n):
    if n == 1:
        return np.array([0.0]), np.array([2.0])
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    # Tricomi asymptotic guess for the positive roots, largest first
    theta = np.pi * (4 * i - 1) / (4 * n + 2)
    x = (1.0 - (n - 1) / (8.0 * n**3)) * np.cos(theta)
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-16:
            break
    p, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    if n % 2:
        x[-1] = 0.0
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_legendre(n):
    """Return the ``n``-point Gauss-Legendre rule on [-1, 1]."""
    n = int(n)
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"Gauss-Legendre order must be in [1, {MAX_ORDER}], got {n}")
    nodes, weights = _rule(n)
    return QuadratureRule(nodes, weights)


def _panel(f, a, b, lo, hi):
    x_lo, w_lo = lo.scaled(a, b)
    x_hi, w_hi = hi.scaled(a, b)
    i_lo = np.dot(w_lo, f(x_lo))
    i_hi = np.dot(w_hi, f(x_hi))
    return i_hi, abs(i_hi - i_lo)


def _initial_panels(f, edges, lo, hi):
    """Evaluate many panels with one vectorized call per rule."""
    a, b = edges[:-1, None], edges[1:, None]
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    x_lo = mid + half * lo.nodes
    x_hi = mid + half * hi.nodes
    i_lo = np.sum(half * lo.weights * f(x_lo.ravel()).reshape(x_lo.shape), axis=1)
    i_hi = np.sum(half * hi.weights * f(x_hi.ravel()).reshape(x_hi.shape), axis=1)
    return i_hi, np.abs(i_hi - i_lo)


def adaptive_integrate(f, a, b, rel_tol=1e-8, abs_tol=0.0, order=16, max_depth=24,
                       max_panels=20000, initial_panels=1):
    """Integrate a vectorized function over [a, b] by adaptive panel bisection.

    Each panel is integrated with Gauss-Legendre rules of order ``order`` and
    ``2 * order``; their difference is the panel error estimate. The panel
    with the largest error is bisected until the summed error estimate is
    at most ``max(rel_tol * |I|, abs_tol)``. ``initial_panels`` equal panels
    are evaluated up front in one batch, which saves most of the bisection
    work for integrands with a known number of oscillations.

    Raises
    ------
    QuadratureNotConverged
        If a panel deeper than ``max_depth`` would need splitting.
    """
    lo = gauss_legendre(order)
    hi = gauss_legendre(2 * order)
    initial_panels = max(1, int(initial_panels))
    edges = np.linspace(a, b, initial_panels + 1)
    vals, errs = _initial_panels(f, edges, lo, hi)
    # heap of (-err, seq, a, b, depth, val); seq keeps ordering deterministic
    heap = [(-float(errs[k]), k, float(edges[k]), float(edges[k + 1]), 0, vals[k])
            for k in range(initial_panels)]
    heapq.heapify(heap)
    total = np.sum(vals)
    total_err = float(np.sum(errs))
    seq = initial_panels
    max_panels = max(max_panels, 4 * initial_panels)
    while total_err > max(rel_tol * abs(total), abs_tol):
        neg_err, _, pa, pb, depth, pval = heapq.heappop(heap)
        if depth >= max_depth or seq >= max_panels:
            raise QuadratureNotConverged(
                f"adaptive quadrature on [{a}, {b}] stalled: error estimate "
                f"{total_err:.3e} vs target {max(rel_tol * abs(total), abs_tol):.3e}"
            )
        mid = 0.5 * (pa + pb)
        v1, e1 = _panel(f, pa, mid, lo, hi)
        v2, e2 = _panel(f, mid, pb, lo, hi)
        total = total - pval + v1 + v2
        total_err = total_err + neg_err + e1 + e2
        heapq.heappush(heap, (-e1, seq, pa, mid, depth + 1, v1))
        heapq.heappush(heap, (-e2, seq + 1, mid, pb, depth + 1, v2))
        seq += 2
        if (seq - initial_panels) % 1024 == 0:
            # re-sum to stop drift in the running totals
            total = sum(item[5] for item in heap)
            total_err = sum(-item[0] for item in heap)
    total = sum(item[5] for item in sorted(heap, key=lambda item: item[2]))
    return complex(total) if np.iscomplexobj(total) else float(total)


def integrate_real_line(f, window, rel_tol=1e-8, abs_tol=0.0, order=16, initial_panels=1):
    """Integrate over the whole real line.

    The interior [-window, window] is handled directly; each tail is mapped
    onto (0, 1] with ``x = window / u``. The integrand must decay faster
    than 1/|x|.
    """
    interior = adaptive_integrate(f, -window, window, rel_tol, abs_tol, order,
                                  initial_panels=initial_panels)

    def right(u):
        return f(window / u) * (window / (u * u))

    def left(u):
        return f(-window / u) * (window / (u * u))

    # the tails are small; target their error relative to the interior
    tail_abs = max(abs_tol, rel_tol * abs(interior))
    tails = adaptive_integrate(right, 0.0, 1.0, 0.0, tail_abs, order) + adaptive_integrate(
        left, 0.0, 1.0, 0.0, tail_abs, order
    )
    return interior + tails

