"""Data tables behind the signal, sensitivity and gain figures.

Parameter defaults live in :data:`FIGURE_MANIFEST`; callers override any
of ``phi_min``, ``phi_max``, ``phi_steps``, ``nbar_list``, ``nu`` and
``tail_epsilon``.  Every emitted number is a direct library-call result.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

from .estimation import (
    bgsl,
    coherent_kerr_scaling,
    gain_asymptote_tmsv,
    qfi_ec_series,
    qfi_tmsv_closed,
    sensitivity_gain,
    sensitivity_report,
)
from .signals import evaluate_signal, tf_parity_series, tmsv_parity_series
from .special import truncation_cutoff
from .states import TMSV, state_for_mean_photons
from .tables import FigureTable, write_table

__all__ = ["FIGURE_MANIFEST", "FIGURE_IDS", "run_figure", "parallel_map"]

FIGURE_MANIFEST = {
    "manifest_version": 1,
    "defaults": {"nu": 1, "tail_epsilon": 1e-12},
    # nbar_list for fig2a is the total photon number 2n of |n, n>
    "fig2a": {"phi_min": 0.0, "phi_max": math.pi / 2, "phi_steps": 201, "nbar_list": [2, 4, 6]},
    "fig2b": {"phi_min": 0.0, "phi_max": math.pi / 2, "phi_steps": 201, "nbar_list": [2, 3, 4]},
    "fig3": {"nbar_list": [float(x) for x in range(2, 21, 2)]},
    "fig4": {"nbar_list": np.geomspace(1.0, 1000.0, 61).tolist()},
}
FIGURE_IDS = ("fig2a", "fig2b", "fig3", "fig4")
_OVERRIDABLE = {"phi_min", "phi_max", "phi_steps", "nbar_list", "nu", "tail_epsilon"}

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """``[func(x) for x in items]``, optionally on a thread pool; order is preserved."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _params(figure_id: str, overrides: dict | None) -> dict:
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; expected one of {', '.join(FIGURE_IDS)}")
    params = dict(FIGURE_MANIFEST["defaults"])
    params.update(FIGURE_MANIFEST[figure_id])
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _OVERRIDABLE:
            raise ValueError(f"unknown override {key!r}")
        params[key] = value
    if "phi_steps" in params:
        if int(params["phi_steps"]) < 2 or params["phi_min"] >= params["phi_max"]:
            raise ValueError("phi range needs phi_min < phi_max and phi_steps >= 2")
    if not params["nbar_list"]:
        raise ValueError("nbar_list must not be empty")
    return params


def _phi_grid(p: dict) -> np.ndarray:
    return np.linspace(float(p["phi_min"]), float(p["phi_max"]), int(p["phi_steps"]))


def _fig2a(p, workers):
    phi = _phi_grid(p)
    specs = [state_for_mean_photons("tf", float(x)) for x in p["nbar_list"]]
    cols = parallel_map(lambda s: evaluate_signal(tf_parity_series(s.n), phi), specs, workers)
    columns = {"phi": phi}
    prov = {"phi": "linspace(phi_min, phi_max, phi_steps)"}
    for s, col in zip(specs, cols):
        name = f"tf_2n={2 * s.n}"
        columns[name] = col
        prov[name] = f"evaluate_signal(tf_parity_series({s.n}), phi)"
    return columns, prov


def _fig2b(p, workers):
    phi = _phi_grid(p)
    eps = float(p["tail_epsilon"])
    nbars = [float(x) for x in p["nbar_list"]]
    cols = parallel_map(
        lambda x: evaluate_signal(tmsv_parity_series(x, truncation_cutoff(TMSV(x), eps)), phi),
        nbars,
        workers,
    )
    columns = {"phi": phi}
    prov = {"phi": "linspace(phi_min, phi_max, phi_steps)"}
    for x, col in zip(nbars, cols):
        name = f"tmsv_nbar={x:g}"
        columns[name] = col
        prov[name] = f"evaluate_signal(tmsv_parity_series({x:g}, truncation_cutoff(tmsv, {eps:g})), phi)"
    return columns, prov


def _fig3_row(x: float, nu: int, eps: float) -> dict:
    nan = math.nan
    row = {"nbar": x}
    half = x / 2.0
    if half == round(half) and half >= 1:
        tf = sensitivity_report(state_for_mean_photons("tf", x), nu, eps)
        row["tf_parity"], row["tf_qcr"] = tf.delta_phi_parity, tf.qcr_bound
    else:
        row["tf_parity"], row["tf_qcr"] = nan, nan
    tm = sensitivity_report(TMSV(x), nu, eps)
    ec = sensitivity_report(state_for_mean_photons("ec", x), nu, eps)
    row.update(
        tmsv_parity=tm.delta_phi_parity,
        tmsv_qcr=tm.qcr_bound,
        ec_parity=ec.delta_phi_parity,
        ec_qcr=ec.qcr_bound,
        coherent_n3_2=coherent_kerr_scaling(x, nu),
        bgsl_n2=bgsl(x, 2, nu),
        tmsv_generalized=tm.generalized_limit,
    )
    return row


def _fig3(p, workers):
    nu, eps = int(p["nu"]), float(p["tail_epsilon"])
    rows = parallel_map(lambda x: _fig3_row(float(x), nu, eps), p["nbar_list"], workers)
    columns = {k: [r[k] for r in rows] for k in rows[0]}
    prov = {
        "nbar": "mean total photon number",
        "tf_parity": "sensitivity_report(tf(n=nbar/2)).delta_phi_parity [phi -> 0+]",
        "tf_qcr": "sensitivity_report(tf(n=nbar/2)).qcr_bound",
        "tmsv_parity": "sensitivity_report(tmsv(nbar)).delta_phi_parity [phi -> 0+]",
        "tmsv_qcr": "sensitivity_report(tmsv(nbar)).qcr_bound",
        "ec_parity": "sensitivity_report(ec(alpha(nbar))).delta_phi_parity [phi -> 0+]",
        "ec_qcr": "sensitivity_report(ec(alpha(nbar))).qcr_bound",
        "coherent_n3_2": "coherent_kerr_scaling(nbar, nu)",
        "bgsl_n2": "bgsl(nbar, 2, nu)",
        "tmsv_generalized": "sensitivity_report(tmsv(nbar)).generalized_limit",
    }
    return columns, prov


def _fig4_row(x: float, eps: float) -> dict:
    ec = state_for_mean_photons("ec", x)
    return {
        "nbar": x,
        "gain_tmsv": sensitivity_gain(qfi_tmsv_closed(x), x),
        "gain_ec": sensitivity_gain(qfi_ec_series(ec.alpha, truncation_cutoff(ec, eps)), x),
        "gain_tmsv_asymptote": gain_asymptote_tmsv(),
    }


def _fig4(p, workers):
    eps = float(p["tail_epsilon"])
    rows = parallel_map(lambda x: _fig4_row(float(x), eps), p["nbar_list"], workers)
    columns = {k: [r[k] for r in rows] for k in rows[0]}
    prov = {
        "nbar": "mean total photon number",
        "gain_tmsv": "sensitivity_gain(qfi_tmsv_closed(nbar), nbar)",
        "gain_ec": "sensitivity_gain(qfi_ec_series(alpha(nbar)), nbar)",
        "gain_tmsv_asymptote": "gain_asymptote_tmsv()",
    }
    return columns, prov


_BUILDERS = {"fig2a": _fig2a, "fig2b": _fig2b, "fig3": _fig3, "fig4": _fig4}


def run_figure(
    figure_id: str,
    overrides: dict | None = None,
    out: str | None = None,
    fmt: str = "csv",
    workers: int = 1,
) -> FigureTable:
    """Build the table for ``figure_id`` and write it to ``out`` when given."""
    params = _params(figure_id, overrides)
    columns, prov = _BUILDERS[figure_id](params, workers)
    table = FigureTable(figure_id, columns, prov)
    if out is not None:
        write_table(table, out, fmt)
    return table
