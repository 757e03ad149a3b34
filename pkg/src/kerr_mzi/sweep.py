"""Sweep configuration (JSON files or CLI flags) and sweep execution."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .estimation import (
    bgsl,
    coherent_kerr_scaling,
    fourth_moment_total_photon,
    generalized_limit,
    parity_signal_for_state,
    qcr_bound,
    qfi_for_state,
    sensitivity_report,
)
from .figures import parallel_map
from .signals import evaluate_signal, signal_derivative
from .special import truncation_cutoff
from .states import STATE_TAGS, EntangledCoherent, InputStateSpec, TMSV, make_state, state_for_mean_photons
from .tables import FORMATS, FigureTable, write_table

__all__ = [
    "ConfigError",
    "SweepConfig",
    "QUANTITIES",
    "parse_config",
    "config_from_mapping",
    "run_sweep",
    "with_overrides",
]

QUANTITIES = ("signal", "qfi", "sensitivity", "bounds")


class ConfigError(ValueError):
    """Invalid sweep configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class SweepConfig:
    state_tag: str
    state: InputStateSpec | None = None
    phi_min: float = 0.0
    phi_max: float = math.pi / 2
    phi_steps: int = 201
    nbar_list: tuple = ()
    nu: int = 1
    tail_epsilon: float = 1e-12
    output_path: str | None = None
    format: str = "csv"
    quantity: str = "signal"

    def __post_init__(self):
        if self.state_tag not in STATE_TAGS:
            raise ConfigError("state", f"unknown state tag {self.state_tag!r}")
        if not self.phi_min < self.phi_max:
            raise ConfigError("phi_min", f"phi_min ({self.phi_min}) must be < phi_max ({self.phi_max})")
        if self.phi_steps < 2:
            raise ConfigError("phi_steps", f"must be >= 2, got {self.phi_steps}")
        if not 0.0 < self.tail_epsilon < 1.0:
            raise ConfigError("tail_epsilon", f"must lie in (0, 1), got {self.tail_epsilon}")
        if self.nu < 1:
            raise ConfigError("nu", f"must be a positive integer, got {self.nu}")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(FORMATS)}, got {self.format!r}")
        if self.quantity not in QUANTITIES:
            raise ConfigError("quantity", f"must be one of {', '.join(QUANTITIES)}, got {self.quantity!r}")
        if not self.nbar_list and self.state is None:
            raise ConfigError("nbar_list", "must be non-empty when the state carries no parameter")

    def states(self) -> list[InputStateSpec]:
        if not self.nbar_list:
            return [self.state]
        out = []
        for x in self.nbar_list:
            try:
                out.append(state_for_mean_photons(self.state_tag, float(x)))
            except ValueError as exc:
                raise ConfigError("nbar_list", str(exc)) from None
        return out

    def phi_grid(self) -> np.ndarray:
        return np.linspace(self.phi_min, self.phi_max, self.phi_steps)


_FIELD_TYPES = {
    "phi_min": float,
    "phi_max": float,
    "phi_steps": int,
    "nu": int,
    "tail_epsilon": float,
    "output_path": str,
    "format": str,
    "quantity": str,
}


def _coerce(name, value, typ):
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(name, f"expected an integer, got {value!r}")
        return int(value)
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(name, f"expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(name, f"expected a string, got {value!r}")
    return value


def _parse_state(raw) -> tuple[str, InputStateSpec | None]:
    if isinstance(raw, str):
        tag, params = raw.lower(), {}
    elif isinstance(raw, dict):
        params = dict(raw)
        tag = params.pop("kind", params.pop("tag", None))
        if not isinstance(tag, str):
            raise ConfigError("state", "object form needs a 'kind' string")
        tag = tag.lower()
    else:
        raise ConfigError("state", f"expected a tag string or an object, got {raw!r}")
    if tag not in STATE_TAGS:
        raise ConfigError("state", f"unknown state tag {tag!r}; expected one of {', '.join(STATE_TAGS)}")
    unknown = set(params) - {"n", "nbar", "alpha"}
    if unknown:
        raise ConfigError("state", f"unknown parameter(s) {sorted(unknown)}")
    if not params:
        return tag, None
    try:
        return tag, make_state(tag, **params)
    except (TypeError, ValueError) as exc:
        raise ConfigError("state", str(exc)) from None


def config_from_mapping(data: dict) -> SweepConfig:
    """Validate a config mapping and fill defaults (nu=1, tail_epsilon=1e-12, format=csv)."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    if "state" not in data:
        raise ConfigError("state", "missing required field")
    known = set(_FIELD_TYPES) | {"state", "nbar_list"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")
    tag, spec = _parse_state(data["state"])
    kwargs = {}
    for name, typ in _FIELD_TYPES.items():
        if name in data and data[name] is not None:
            kwargs[name] = _coerce(name, data[name], typ)
    if "nbar_list" in data:
        raw = data["nbar_list"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("nbar_list", "must be a non-empty list of numbers")
        kwargs["nbar_list"] = tuple(_coerce("nbar_list", x, float) for x in raw)
    return SweepConfig(state_tag=tag, state=spec, **kwargs)


def parse_config(path: str | Path) -> SweepConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"not valid JSON ({exc})") from None
    return config_from_mapping(data)


# -- execution -------------------------------------------------------------


def _policy(spec, eps):
    return truncation_cutoff(spec, eps) if isinstance(spec, (TMSV, EntangledCoherent)) else None


def _signal_table(cfg: SweepConfig, workers: int) -> FigureTable:
    phi = cfg.phi_grid()
    specs = cfg.states()
    sigs = parallel_map(lambda s: parity_signal_for_state(s, cfg.tail_epsilon), specs, workers)
    columns, prov = {"phi": phi}, {"phi": "linspace(phi_min, phi_max, phi_steps)"}
    for spec, sig in zip(specs, sigs):
        columns[f"signal[{spec.label}]"] = evaluate_signal(sig, phi)
        prov[f"signal[{spec.label}]"] = "evaluate_signal"
        columns[f"slope[{spec.label}]"] = signal_derivative(sig, phi)
        prov[f"slope[{spec.label}]"] = "signal_derivative"
    return FigureTable(f"sweep:signal:{cfg.state_tag}", columns, prov)


def _row_table(cfg: SweepConfig, workers: int, row_fn, name: str) -> FigureTable:
    rows = parallel_map(row_fn, cfg.states(), workers)
    columns = {k: [r[k] for r in rows] for k in rows[0]}
    return FigureTable(f"sweep:{name}:{cfg.state_tag}", columns, {k: name for k in columns})


def run_sweep(config: SweepConfig, workers: int = 1) -> FigureTable:
    """Evaluate ``config.quantity`` for each requested state; write to ``output_path`` if set."""
    nu, eps = config.nu, config.tail_epsilon
    if config.quantity == "signal":
        table = _signal_table(config, workers)
    elif config.quantity == "qfi":

        def row(spec):
            F = qfi_for_state(spec, eps)
            return {"nbar": spec.mean_photons, "qfi": F, "qcr_bound": qcr_bound(F, nu)}

        table = _row_table(config, workers, row, "qfi")
    elif config.quantity == "sensitivity":
        table = _row_table(config, workers, lambda s: sensitivity_report(s, nu, eps).as_row(), "sensitivity")
    else:

        def row(spec):
            x = spec.mean_photons
            m4 = fourth_moment_total_photon(spec, _policy(spec, eps))
            return {
                "nbar": x,
                "bgsl": bgsl(x, 2, nu),
                "coherent_n3_2": coherent_kerr_scaling(x, nu),
                "fourth_moment": m4,
                "generalized_limit": generalized_limit(m4, nu),
            }

        table = _row_table(config, workers, row, "bounds")
    if config.output_path:
        write_table(table, config.output_path, config.format)
    return table


def with_overrides(config: SweepConfig, **changes) -> SweepConfig:
    return replace(config, **{k: v for k, v in changes.items() if v is not None})
