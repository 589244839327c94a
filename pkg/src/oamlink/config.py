"""Scenario config files: YAML (JSON accepted, being a YAML subset).

All keys are optional; omitted values fall back to the reference
configuration.  Angles are given in degrees here and converted to radians
once, at this boundary.  Unknown keys are rejected so typos fail loudly
before any computation starts.
"""

from dataclasses import replace
import math
from pathlib import Path

import yaml

from .channel import ChannelParams, OfdmGrid, SPEED_OF_LIGHT
from .geometry import LinkPose, UcaConfig
from .metrics import PowerAllocation
from .oam import ModeSet, default_mode_set
from .experiments import Scenario


class ConfigError(ValueError):
    """Config file failed to parse or violated a scenario invariant."""


_KNOWN_KEYS = {
    "name",
    "element_count",
    "mode_count",
    "modes",
    "beta_db",
    "center_frequency_hz",
    "subcarrier_spacing_hz",
    "subcarrier_count",
    "tx_radius_m",
    "rx_radius_m",
    "tx_radius_wavelengths",
    "rx_radius_wavelengths",
    "distance_m",
    "distance_wavelengths",
    "alpha_deg",
    "gamma_deg",
    "snr_db",
    "noise_power",
    "power_split",
    "symbol_power",
    "steering",
    "anchor",
    "report_mode",
    "eval_subcarrier",
    "seed",
    "sweep",
    "metrics",
}


def _load_raw(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"config parse error{where}: {exc}") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping, got {type(raw).__name__}")
    return raw


def _radius(raw: dict, side: str, lam0: float, default: float) -> float:
    meters = raw.get(f"{side}_radius_m")
    wavelengths = raw.get(f"{side}_radius_wavelengths")
    if meters is not None and wavelengths is not None:
        raise ConfigError(f"give {side}_radius_m or {side}_radius_wavelengths, not both")
    if meters is not None:
        return float(meters)
    if wavelengths is not None:
        return float(wavelengths) * lam0
    return default


def scenario_from_dict(raw: dict, name: str = "scenario") -> Scenario:
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {sorted(unknown)}")

    try:
        f_c = float(raw.get("center_frequency_hz", 3.5e9))
        lam0 = SPEED_OF_LIGHT / f_c
        grid = OfdmGrid(
            center_frequency=f_c,
            subcarrier_spacing=float(raw.get("subcarrier_spacing_hz", 60e3)),
            subcarrier_count=int(raw.get("subcarrier_count", 1620)),
        )

        n = int(raw.get("element_count", 15))
        tx = UcaConfig(n, _radius(raw, "tx", lam0, 10 * lam0))
        rx = UcaConfig(n, _radius(raw, "rx", lam0, 10 * lam0))

        if raw.get("distance_m") is not None and raw.get("distance_wavelengths") is not None:
            raise ConfigError("give distance_m or distance_wavelengths, not both")
        if raw.get("distance_m") is not None:
            distance = float(raw["distance_m"])
        else:
            distance = float(raw.get("distance_wavelengths", 300)) * lam0
        pose = LinkPose(
            center_distance=distance,
            alpha=math.radians(float(raw.get("alpha_deg", 0.0))),
            gamma=math.radians(float(raw.get("gamma_deg", 0.0))),
        )
        params = ChannelParams(beta_db=float(raw.get("beta_db", 24.7)), tx=tx, rx=rx, pose=pose)

        if "modes" in raw and "mode_count" in raw:
            raise ConfigError("give modes or mode_count, not both")
        if "modes" in raw:
            modes = ModeSet(tuple(int(m) for m in raw["modes"]))
        else:
            modes = default_mode_set(int(raw.get("mode_count", 15)))

        symbol_power = raw.get("symbol_power")
        alloc = PowerAllocation(
            snr_db=float(raw.get("snr_db", 20.0)),
            noise_power=float(raw.get("noise_power", 0.01)),
            split=str(raw.get("power_split", "per-mode")),
            symbol_power=None if symbol_power is None else float(symbol_power),
        )

        sweep = []
        for axis in raw.get("sweep", []):
            if not isinstance(axis, dict) or set(axis) != {"parameter", "values"}:
                raise ConfigError(
                    "each sweep axis must be a mapping with keys 'parameter' and 'values'"
                )
            values = axis["values"]
            if not isinstance(values, (list, tuple)):
                raise ConfigError(f"sweep values for {axis['parameter']!r} must be a list")
            sweep.append((str(axis["parameter"]), tuple(values)))

        scenario = Scenario(
            name=str(raw.get("name", name)),
            params=params,
            grid=grid,
            modes=modes,
            alloc=alloc,
            steering=str(raw.get("steering", "none")),
            anchor=None if raw.get("anchor") is None else int(raw["anchor"]),
            report_mode=int(raw.get("report_mode", 1)),
            eval_subcarrier=int(raw.get("eval_subcarrier", 0)),
            seed=int(raw.get("seed", 0)),
            sweep=tuple(sweep),
            metrics=tuple(raw.get("metrics", ("avg_cg", "avg_imi"))),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise ConfigError(str(exc)) from exc

    if scenario.anchor is not None and not 1 <= scenario.anchor <= grid.subcarrier_count:
        raise ConfigError(
            f"anchor {scenario.anchor} out of range 1..{grid.subcarrier_count}"
        )
    return scenario


def parse_config(path) -> Scenario:
    """Load, validate and fully resolve a scenario config file."""
    return scenario_from_dict(_load_raw(path), name=Path(path).stem)
