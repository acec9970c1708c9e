"""Dataset builders behind the CLI subcommands.

Each ``run_*`` takes resolved scenarios and returns a :class:`Table`. When
the scenarios carry series names the table is in long format with a
leading ``series`` column. Work is spread over a thread pool, but rows are
always emitted in input order, so output does not depend on ``threads``.
"""

import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .amplitudes import amplitude_set
from .config import with_axis_value
from .entanglement import (BASIS, avg_linear_entropy, avg_negativity, bsm_project, linear_entropy,
                           negativity, reduced_density, two_atom_density)
from .errors import NumericalError

AMPLITUDE_COLUMNS = ["t", "re_E", "im_E", "re_F", "im_F", "re_G", "im_G", "photon_weight",
                     "P_e", "P_f", "P_g_total"]
ENTROPY_COLUMNS = ["t", "S_A", "S_A_avg"]
NEGATIVITY_COLUMNS = ["t", "N", "N_avg", "weight"]
DENSITY_COLUMNS = ["row", "col", "re", "im"]
POPULATION_COLUMNS = ["P_e", "P_f", "P_g_total", "photon_weight"]


@dataclass
class Table:
    header: list
    rows: list = field(default_factory=list)
    warnings: int = 0

    def to_csv(self):
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    value = float(value)
    if value == 0.0:
        value = 0.0  # drop the sign of negative zero
    return format(value, ".17g")


def _pmap(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _long(cfgs, header, per_cfg):
    named = any(c.name for c in cfgs)
    table = Table((["series"] if named else []) + header)
    for cfg in cfgs:
        rows, warn = per_cfg(cfg)
        table.warnings += warn
        for row in rows:
            table.rows.append(([cfg.name] if named else []) + list(row))
    return table


def run_amplitudes(cfgs, threads=1):
    def one(cfg):
        t = cfg.times()
        amps = amplitude_set(cfg.params, cfg.init1, t)
        E, F, G, w = amps.E, amps.F, amps.G, amps.photon_weight
        p_e, p_f = np.abs(E) ** 2, np.abs(F) ** 2
        p_g = np.abs(G) ** 2 + w
        rows = zip(cfg.output_time(t), E.real, E.imag, F.real, F.imag, G.real, G.imag, w,
                   p_e, p_f, p_g)
        return list(rows), 0

    return _long(cfgs, AMPLITUDE_COLUMNS, one)


def run_entropy(cfgs, threads=1):
    def one(cfg):
        def row(t):
            s = linear_entropy(reduced_density(cfg.params, cfg.init1, t))
            s_av = None
            if cfg.average:
                s_av = avg_linear_entropy(cfg.params, t, cfg.quad_order, cfg.quad_order_phi)
            return (cfg.output_time(t), s, s_av)

        return _pmap(row, cfg.times(), threads), 0

    return _long(cfgs, ENTROPY_COLUMNS, one)


def run_negativity(cfgs, threads=1):
    def one(cfg):
        pulse = cfg.pulse_shape()

        def row(t):
            # no photon has leaked at t = 0, so the heralded state is undefined
            n = weight = n_av = None
            if t > 0:
                try:
                    state = bsm_project(cfg.params, cfg.init1, cfg.init2, t, pulse)
                    n, weight = negativity(state), state.weight
                except NumericalError:
                    pass
                if cfg.average:
                    n_av = avg_negativity(cfg.params, t, cfg.quad_order)
            return (cfg.output_time(t), n, n_av, weight)

        return _pmap(row, cfg.times(), threads), 0

    return _long(cfgs, NEGATIVITY_COLUMNS, one)


def run_density(cfgs, threads=1):
    """9x9 two-atom density matrix at ``cfg.t``; states labelled like ``fg``."""
    labels = ["".join(p) for p in itertools.product(BASIS, BASIS)]

    def one(cfg):
        state = bsm_project(cfg.params, cfg.init1, cfg.init2, cfg.t, cfg.pulse_shape())
        rho = two_atom_density(state)
        rows = [(labels[i], labels[j], rho[i, j].real, rho[i, j].imag)
                for i in range(9) for j in range(9)]
        return rows, 0

    return _long(cfgs, DENSITY_COLUMNS, one)


def observable_value(cfg):
    """Observable selected by ``cfg.observable`` at ``cfg.t``; always a tuple."""
    p, t = cfg.params, cfg.t
    obs = cfg.observable
    if obs == "linear_entropy":
        return (linear_entropy(reduced_density(p, cfg.init1, t)),)
    if obs == "avg_linear_entropy":
        return (avg_linear_entropy(p, t, cfg.quad_order, cfg.quad_order_phi),)
    if obs == "negativity":
        return (negativity(bsm_project(p, cfg.init1, cfg.init2, t, cfg.pulse_shape())),)
    if obs == "avg_negativity":
        return (avg_negativity(p, t, cfg.quad_order),)
    amps = amplitude_set(p, cfg.init1, t)
    p_e, p_f = abs(amps.E) ** 2, abs(amps.F) ** 2
    return (p_e, p_f, abs(amps.G) ** 2 + amps.photon_weight, amps.photon_weight)


def _axis_values(axis):
    name, lo, hi, count = axis
    return name, np.linspace(lo, hi, count)


def run_sweep(cfgs, threads=1):
    """Grid of the configured observable over one or two axes, axis-major order.

    Cells whose evaluation raises a numerical error are left empty and
    counted in ``Table.warnings``.
    """
    def one(cfg):
        if cfg.axis1 is None:
            raise ValueError("sweep needs axis1")
        axes = [_axis_values(cfg.axis1)]
        if cfg.axis2 is not None:
            axes.append(_axis_values(cfg.axis2))
        width = 4 if cfg.observable == "populations" else 1
        cells = list(itertools.product(*[vals for _, vals in axes]))

        def cell(point):
            c = cfg
            for (name, _), v in zip(axes, point):
                c = with_axis_value(c, name, float(v))
            try:
                return observable_value(c), 0
            except NumericalError:
                return (None,) * width, 1

        results = _pmap(cell, cells, threads)
        rows = [tuple(_axis_out(cfg, name, v) for (name, _), v in zip(axes, point)) + res
                for point, (res, _) in zip(cells, results)]
        return rows, sum(w for _, w in results)

    first = cfgs[0]
    names = [first.axis1[0]] if first.axis1 else []
    if first.axis2:
        names.append(first.axis2[0])
    cols = POPULATION_COLUMNS if first.observable == "populations" else [first.observable]
    return _long(cfgs, names + cols, one)


def _axis_out(cfg, name, value):
    if name == "t":
        return cfg.output_time(value)
    return value
