"""Scenario files and built-in presets.

A scenario document is a flat JSON object with unit-suffixed keys. Angles are
in degrees here and converted to radians only when a ``ScenarioConfig`` is
built. ``quantization_bits: null`` means unquantized phases.

Besides the scenario keys a document may carry:

``preset``         name of a built-in experiment used as the starting point
``sweep_axis``     one of ``theta_deg, n_elements, alpha, d_te_m, quantization_bits``
``sweep_values``   strictly increasing list of axis values
``series``         list of objects overriding scenario keys, one curve each
``metric``         ``rate`` or ``outage``; the quantity drawn in the plot
"""
from __future__ import annotations

import copy
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .channel import LinkBudget
from .geometry import Topology
from .montecarlo import DEFAULT_OUTAGE_TRIALS, DEFAULT_RATE_TRIALS, ScenarioConfig
from .ris import MAX_BITS


class ConfigError(ValueError):
    """Invalid scenario input; ``key`` names the offending element."""

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class MissingFile(ConfigError):
    pass


class MalformedDocument(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class InvariantViolation(ConfigError):
    pass


SCENARIO_DEFAULTS: dict[str, Any] = {
    "d_tr_m": 20.0,
    "d_te_m": 30.0,
    "d_tl_m": 40.0,
    "theta_deg": 10.0,
    "p_tx_dbm": 20.0,
    "noise_dbm": -100.0,
    "c0_db": 30.0,
    "d0_m": 1.0,
    "alpha": 2.5,
    "blockage_db": 50.0,
    "n_elements": 50,
    "quantization_bits": None,
    "include_ris": True,
    "include_direct": True,
    "r_th_bps_hz": 2.5,
}
RUN_KEYS = {"trials": DEFAULT_RATE_TRIALS, "seed": 0}
EXPERIMENT_KEYS = ("preset", "sweep_axis", "sweep_values", "series", "metric")

# sweep key in documents -> axis name used by montecarlo.sweep
SWEEP_AXES = {
    "theta_deg": "theta",
    "n_elements": "n_elements",
    "alpha": "alpha",
    "d_te_m": "d_te",
    "quantization_bits": "quantization_bits",
}
METRICS = ("rate", "outage")

_THETA_5 = [float(x) for x in range(0, 61, 5)]
_THETA_10 = [float(x) for x in range(0, 61, 10)]

PRESETS: dict[str, dict[str, Any]] = {
    "fig5b": {
        "description": "secrecy rate vs RIS angle, with and without RIS, unquantized",
        "d_tr_m": 20.0,
        "d_te_m": 50.0,
        "d_tl_m": 40.0,
        "quantization_bits": None,
        "r_th_bps_hz": 2.5,
        "trials": DEFAULT_RATE_TRIALS,
        "sweep_axis": "theta_deg",
        "sweep_values": _THETA_10,
        "series": [
            {"alpha": a, "include_ris": ris} for a, ris in itertools.product((2.5, 3.0), (True, False))
        ],
        "metric": "rate",
    },
    "fig5c": {
        "description": "secrecy rate vs number of RIS elements for 1/2/3-bit and continuous phases",
        "d_tr_m": 20.0,
        "d_te_m": 30.0,
        "d_tl_m": 40.0,
        "theta_deg": 10.0,
        "alpha": 2.5,
        "r_th_bps_hz": 2.5,
        "trials": DEFAULT_RATE_TRIALS,
        "sweep_axis": "n_elements",
        "sweep_values": list(range(10, 101, 10)),
        "series": [{"quantization_bits": b} for b in (1, 2, 3, None)],
        "metric": "rate",
    },
    "fig5e": {
        "description": "secrecy rate vs RIS angle with 3-bit phases",
        "d_tr_m": 20.0,
        "d_tl_m": 40.0,
        "quantization_bits": 3,
        "r_th_bps_hz": 3.0,
        "trials": DEFAULT_RATE_TRIALS,
        "sweep_axis": "theta_deg",
        "sweep_values": _THETA_5,
        "series": [
            {"d_te_m": d, "alpha": a} for d, a in itertools.product((30.0, 35.0), (2.5, 3.0))
        ],
        "metric": "rate",
    },
}
PRESETS["fig5d"] = {
    **PRESETS["fig5c"],
    "description": "secrecy outage probability vs number of RIS elements",
    "trials": DEFAULT_OUTAGE_TRIALS,
    "metric": "outage",
}
PRESETS["fig5f"] = {
    **PRESETS["fig5e"],
    "description": "secrecy outage probability vs RIS angle with 3-bit phases",
    "trials": DEFAULT_OUTAGE_TRIALS,
    "metric": "outage",
}
PRESETS = dict(sorted(PRESETS.items()))


@dataclass(frozen=True)
class Experiment:
    """A fully expanded sweep: shared parameters, curves and x-axis values."""

    name: str
    params: dict[str, Any]  # scenario keys plus trials and seed
    series: tuple[dict[str, Any], ...]
    sweep_axis: str
    sweep_values: tuple
    metric: str = "rate"

    def point(self, series_index: int, value) -> dict[str, Any]:
        """Flat scenario parameters of one curve at one axis value."""
        p = {**self.params, **self.series[series_index]}
        p[self.sweep_axis] = value
        return p

    def series_label(self, series_index: int) -> str:
        s = self.series[series_index]
        if not s:
            return self.name
        return ";".join(f"{k}={_fmt_value(v)}" for k, v in s.items())

    def base_config(self, series_index: int) -> ScenarioConfig:
        return to_scenario(self.point(series_index, self.sweep_values[0]))

    def internal_axis(self) -> tuple[str, list]:
        axis = SWEEP_AXES[self.sweep_axis]
        if axis == "theta":
            return axis, [math.radians(v) for v in self.sweep_values]
        return axis, list(self.sweep_values)

    def to_document(self) -> dict[str, Any]:
        doc = dict(self.params)
        doc["sweep_axis"] = self.sweep_axis
        doc["sweep_values"] = list(self.sweep_values)
        doc["series"] = [dict(s) for s in self.series]
        doc["metric"] = self.metric
        return doc


def _fmt_value(v) -> str:
    if v is None:
        return "inf"
    if isinstance(v, bool):
        return "on" if v else "off"
    return f"{v:g}" if isinstance(v, float) else str(v)


def to_scenario(p: dict[str, Any]) -> ScenarioConfig:
    """Build a ScenarioConfig from validated flat parameters."""
    return ScenarioConfig(
        topology=Topology(p["d_tr_m"], p["d_te_m"], p["d_tl_m"], math.radians(p["theta_deg"])),
        budget=LinkBudget(
            p_tx_dbm=p["p_tx_dbm"],
            noise_dbm=p["noise_dbm"],
            c0_db=p["c0_db"],
            d0_m=p["d0_m"],
            alpha=p["alpha"],
            blockage_db=p["blockage_db"],
        ),
        n_elements=p["n_elements"],
        quantization_bits=p["quantization_bits"],
        include_ris=p["include_ris"],
        include_direct=p["include_direct"],
        r_th=p["r_th_bps_hz"],
        trials=p["trials"],
        seed=p["seed"],
    )


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _check_value(key: str, v, path: str):
    """Type and range check of one scenario key; returns the normalized value."""
    bad = lambda msg: InvariantViolation(f"{msg}, got {v!r}", path)  # noqa: E731
    if key in ("include_ris", "include_direct"):
        if not isinstance(v, bool):
            raise bad("must be true or false")
        return v
    if key == "quantization_bits":
        if v is None:
            return None
        if not _is_int(v) or not 1 <= v <= MAX_BITS:
            raise bad(f"must be null or an integer in [1, {MAX_BITS}]")
        return v
    if key in ("n_elements", "trials"):
        if not _is_int(v) or v < 1:
            raise bad("must be a positive integer")
        return v
    if key == "seed":
        if not _is_int(v) or not 0 <= v < 2**64:
            raise bad("must be an integer in [0, 2**64)")
        return v
    if not _is_number(v):
        raise bad("must be a finite number")
    v = float(v)
    if key in ("d_tr_m", "d_te_m", "d_tl_m", "d0_m", "alpha") and not v > 0:
        raise bad("must be positive")
    if key in ("c0_db", "blockage_db", "r_th_bps_hz") and v < 0:
        raise bad("must be nonnegative")
    if key == "theta_deg" and not 0 <= v < 90:
        raise bad("must lie in [0, 90)")
    return v


def _check_scenario_keys(d: dict, path_prefix: str) -> dict:
    out = {}
    for k, v in d.items():
        path = f"{path_prefix}{k}"
        if k not in SCENARIO_DEFAULTS and k not in RUN_KEYS:
            raise UnknownKey("unknown key", path)
        out[k] = _check_value(k, v, path)
    return out


def expand(doc: dict[str, Any], name: str = "custom") -> Experiment:
    """Validate a scenario document and expand it into an Experiment."""
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be a JSON object")
    doc = copy.deepcopy(doc)
    for k in doc:
        if k not in SCENARIO_DEFAULTS and k not in RUN_KEYS and k not in EXPERIMENT_KEYS:
            raise UnknownKey("unknown key", k)

    merged: dict[str, Any] = {}
    preset = doc.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise InvariantViolation(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}", "preset")
        merged.update({k: v for k, v in copy.deepcopy(PRESETS[preset]).items() if k != "description"})
        name = preset
    merged.update(doc)

    series = merged.pop("series", None) or [{}]
    if not isinstance(series, list) or not all(isinstance(s, dict) for s in series):
        raise MalformedDocument("must be a list of objects", "series")
    axis = merged.pop("sweep_axis", "theta_deg")
    if axis not in SWEEP_AXES:
        raise InvariantViolation(f"must be one of {sorted(SWEEP_AXES)}, got {axis!r}", "sweep_axis")
    metric = merged.pop("metric", "rate")
    if metric not in METRICS:
        raise InvariantViolation(f"must be one of {METRICS}, got {metric!r}", "metric")

    values = merged.pop("sweep_values", None)

    params = {**SCENARIO_DEFAULTS, **RUN_KEYS}
    params.update(_check_scenario_keys(merged, ""))

    if values is None:
        values = [params[axis]]
    if not isinstance(values, list) or not values:
        raise MalformedDocument("must be a non-empty list", "sweep_values")
    values = [_check_value(axis, v, f"sweep_values[{i}]") for i, v in enumerate(values)]
    keys = [math.inf if v is None else v for v in values]
    if any(b <= a for a, b in zip(keys, keys[1:])):
        raise InvariantViolation("must be strictly increasing", "sweep_values")

    checked_series = []
    for i, s in enumerate(series):
        s = _check_scenario_keys(s, f"series[{i}].")
        for k in ("trials", "seed", axis):
            if k in s:
                raise InvariantViolation("may not vary between series", f"series[{i}].{k}")
        if s not in checked_series:
            checked_series.append(s)
    params = dict(params)
    params.pop(axis, None)
    exp = Experiment(name, params, tuple(checked_series), axis, tuple(values), metric)

    # every point must form a valid scenario
    for i in range(len(exp.series)):
        for v in exp.sweep_values:
            try:
                to_scenario(exp.point(i, v))
            except ValueError as exc:
                raise InvariantViolation(str(exc), f"series[{i}]") from exc
    return exp


def parse_config(path) -> Experiment:
    """Read and validate a JSON scenario file."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}", str(path))
    try:
        doc = json.loads(path.read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"not valid JSON ({exc})", str(path)) from exc
    return expand(doc, name=path.stem)


def load(preset_or_file: str) -> Experiment:
    if preset_or_file in PRESETS:
        return expand({"preset": preset_or_file})
    return parse_config(preset_or_file)


def parse_override(item: str) -> tuple[str, Any]:
    """``key=value`` with the value read as JSON when possible."""
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise MalformedDocument(f"override must look like key=value, got {item!r}", "--set")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(exp: Experiment, overrides: list[tuple[str, Any]]) -> Experiment:
    """Pin keys across the whole experiment.

    A key that varies between series is pinned in every series (duplicates
    are merged); pinning the sweep axis reduces the sweep to that one value.
    """
    doc = exp.to_document()
    for key, value in overrides:
        if key == "sweep_values" or key == exp.sweep_axis:
            doc["sweep_values"] = value if key == "sweep_values" else [value]
            continue
        if key not in SCENARIO_DEFAULTS and key not in RUN_KEYS and key != "metric":
            raise UnknownKey("unknown key", f"--set {key}")
        doc[key] = value
        for s in doc["series"]:
            s.pop(key, None)
    return expand(doc, name=exp.name)


def dump_config(exp: Experiment, path) -> None:
    Path(path).write_text(json.dumps(exp.to_document(), indent=2) + "\n")
