"""Scenario definitions and sweep runners.

Every table/figure runner is a preset over the same generic Cartesian
sweep engine (``run_sweep``), so preset output and an equivalent hand-built
sweep are identical row for row.  Sweep points are independent; a thread
pool may evaluate them concurrently and the merge order is always the
lexicographic product order of the axes.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import hashlib
import itertools
import json
import math
import threading

import numpy as np

from . import __version__
from .channel import (
    ChannelParams,
    OfdmGrid,
    SPEED_OF_LIGHT,
    exact_channel_at,
    exact_channel_tensor,
)
from .geometry import LinkPose, UcaConfig, oblique_factors
from .metrics import PowerAllocation, sinr_from_gain_imi, spectral_efficiency
from .oam import ModeSet, default_mode_set, make_fourier
from .steering import default_anchor, steering_phases

STEERING_CASES = ("aligned", "ma", "abs", "dbs")
KNOWN_PARAMETERS = (
    "oblique_deg",
    "alpha_deg",
    "gamma_deg",
    "steering",
    "snr_db",
    "element_count",
    "bandwidth_mhz",
    "subcarrier",
)
KNOWN_METRICS = (
    "cg",
    "imi",
    "avg_cg",
    "avg_imi",
    "sinr",
    "se",
    "kp_rr_rho",
    "kg_rr_rho",
)


@dataclass(frozen=True)
class Scenario:
    """A fully resolved experiment: link configuration plus sweep axes."""

    name: str
    params: ChannelParams
    grid: OfdmGrid
    modes: ModeSet
    alloc: PowerAllocation
    steering: str = "none"  # none | abs | dbs (base scheme when not swept)
    anchor: int | None = None
    report_mode: int = 1
    eval_subcarrier: int = 0  # 0 = band edge f_L, where the reference tables live
    seed: int = 0
    sweep: tuple[tuple[str, tuple], ...] = ()
    metrics: tuple[str, ...] = ("avg_cg", "avg_imi")

    def __post_init__(self):
        self.modes.validate_for(self.params.element_count)
        if self.report_mode not in self.modes.modes:
            raise ValueError(
                f"report_mode {self.report_mode} not in mode set {self.modes.modes}"
            )
        if self.steering not in ("none", "abs", "dbs"):
            raise ValueError(f"unknown steering scheme {self.steering!r}")
        for name, values in self.sweep:
            if name not in KNOWN_PARAMETERS:
                raise ValueError(f"unknown sweep parameter {name!r}")
            if len(values) == 0:
                raise ValueError(f"sweep axis {name!r} has no values")
            if name == "steering":
                bad = [v for v in values if v not in STEERING_CASES]
                if bad:
                    raise ValueError(f"unknown steering case(s) {bad}")
            elif any(not math.isfinite(float(v)) for v in values):
                raise ValueError(f"non-finite value in sweep axis {name!r}")
        for metric in self.metrics:
            if metric not in KNOWN_METRICS:
                raise ValueError(f"unknown metric {metric!r}")

    @property
    def resolved_anchor(self) -> int:
        return default_anchor(self.grid) if self.anchor is None else self.anchor


def table1_scenario(
    name: str = "table1",
    element_count: int = 15,
    mode_count: int = 15,
    alpha_deg: float = 0.0,
    gamma_deg: float = 0.0,
    snr_db: float = 20.0,
    **kwargs,
) -> Scenario:
    """Reference configuration: 15-element arrays at 3.5 GHz, radii of ten
    wavelengths, 300-wavelength separation, 100 MHz band of 1620 subcarriers."""
    f_c = 3.5e9
    lam0 = SPEED_OF_LIGHT / f_c
    uca = UcaConfig(element_count=element_count, radius=10 * lam0)
    pose = LinkPose(
        center_distance=300 * lam0,
        alpha=math.radians(alpha_deg),
        gamma=math.radians(gamma_deg),
    )
    return Scenario(
        name=name,
        params=ChannelParams(beta_db=24.7, tx=uca, rx=uca, pose=pose),
        grid=OfdmGrid(center_frequency=f_c, subcarrier_spacing=60e3, subcarrier_count=1620),
        modes=default_mode_set(mode_count),
        alloc=PowerAllocation(snr_db=snr_db, noise_power=0.01),
        **kwargs,
    )


def scenario_to_dict(s: Scenario) -> dict:
    """Canonical plain-data form of a scenario, used for fingerprints and
    config echo in output metadata."""
    return {
        "name": s.name,
        "element_count": s.params.element_count,
        "beta_db": s.params.beta_db,
        "tx_radius_m": s.params.tx.radius,
        "rx_radius_m": s.params.rx.radius,
        "tx_initial_azimuth": s.params.tx.initial_azimuth,
        "rx_initial_azimuth": s.params.rx.initial_azimuth,
        "distance_m": s.params.pose.center_distance,
        "alpha_rad": s.params.pose.alpha,
        "gamma_rad": s.params.pose.gamma,
        "center_frequency_hz": s.grid.center_frequency,
        "subcarrier_spacing_hz": s.grid.subcarrier_spacing,
        "subcarrier_count": s.grid.subcarrier_count,
        "modes": list(s.modes.modes),
        "snr_db": s.alloc.snr_db,
        "noise_power": s.alloc.noise_power,
        "power_split": s.alloc.split,
        "symbol_power": s.alloc.symbol_power,
        "steering": s.steering,
        "anchor": s.resolved_anchor,
        "report_mode": s.report_mode,
        "eval_subcarrier": s.eval_subcarrier,
        "seed": s.seed,
        "sweep": [[name, list(values)] for name, values in s.sweep],
        "metrics": list(s.metrics),
    }


def scenario_fingerprint(s: Scenario) -> str:
    payload = json.dumps(scenario_to_dict(s), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True)
class ResultSet:
    """Rows of (axis values, metric values) plus provenance metadata."""

    fingerprint: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    meta: dict


class _PointEvaluator:
    """Evaluates one sweep point; caches whole-band gain/IMI profiles so
    sweeps over subcarrier or SNR do not rebuild the channel."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self._cache: dict = {}
        self._lock = threading.Lock()

    # -- configuration resolution -------------------------------------

    def _resolve(self, overrides: dict):
        s = self.scenario
        alpha = s.params.pose.alpha
        gamma = s.params.pose.gamma
        if "oblique_deg" in overrides:
            alpha = gamma = math.radians(float(overrides["oblique_deg"]))
        if "alpha_deg" in overrides:
            alpha = math.radians(float(overrides["alpha_deg"]))
        if "gamma_deg" in overrides:
            gamma = math.radians(float(overrides["gamma_deg"]))

        scheme = overrides.get("steering", {"none": "ma"}.get(s.steering, s.steering))
        if scheme == "aligned":
            alpha = gamma = 0.0
            scheme = "ma"

        n = int(overrides.get("element_count", s.params.element_count))
        tx = replace(s.params.tx, element_count=n)
        rx = replace(s.params.rx, element_count=n)
        pose = replace(s.params.pose, alpha=alpha, gamma=gamma)
        params = ChannelParams(beta_db=s.params.beta_db, tx=tx, rx=rx, pose=pose)

        grid = s.grid
        if "bandwidth_mhz" in overrides:
            spacing = float(overrides["bandwidth_mhz"]) * 1e6 / grid.subcarrier_count
            grid = replace(grid, subcarrier_spacing=spacing)

        alloc = s.alloc
        if "snr_db" in overrides:
            alloc = replace(alloc, snr_db=float(overrides["snr_db"]))

        subcarrier = int(overrides.get("subcarrier", s.eval_subcarrier))
        return params, grid, alloc, scheme, subcarrier

    # -- channel evaluation -------------------------------------------

    def _gain_imi_at(self, params, grid, scheme, subcarrier):
        """Per-mode (CG, IMI) at one subcarrier (0 = band edge)."""
        key = ("point", self._params_key(params), self._grid_key(grid), scheme, subcarrier)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        k = grid.wavenumber(subcarrier)
        fourier = make_fourier(self.scenario.modes, params.element_count)
        rows = fourier
        if scheme == "abs":
            k_a = grid.wavenumber(self.scenario.resolved_anchor)
            rows = fourier * np.exp(1j * steering_phases(params.rx, params.pose, k_a))
        elif scheme == "dbs":
            rows = fourier * np.exp(1j * steering_phases(params.rx, params.pose, k))
        h = exact_channel_at(params, k).entries
        h_oam = rows @ h @ fourier.conj().T
        power = np.abs(h_oam) ** 2
        cg = np.diag(power).copy()
        result = (cg, power.sum(axis=1) - cg)
        with self._lock:
            self._cache[key] = result
        return result

    def _band_gain_imi(self, params, grid, scheme):
        """(P, U) channel gain and IMI across the whole subcarrier grid."""
        key = ("band", self._params_key(params), self._grid_key(grid), scheme)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        ks = grid.wavenumbers()
        fourier = make_fourier(self.scenario.modes, params.element_count)
        h = exact_channel_tensor(params, ks)
        if scheme == "dbs":
            phases = np.array(
                [steering_phases(params.rx, params.pose, k) for k in ks]
            )
            rows = fourier[None, :, :] * np.exp(1j * phases)[:, None, :]
            h_oam = np.einsum("pum,pmn,vn->puv", rows, h, fourier.conj())
        else:
            rows = fourier
            if scheme == "abs":
                k_a = grid.wavenumber(self.scenario.resolved_anchor)
                rows = fourier * np.exp(1j * steering_phases(params.rx, params.pose, k_a))
            h_oam = np.einsum("um,pmn,vn->puv", rows, h, fourier.conj())
        power = np.abs(h_oam) ** 2
        cg = np.einsum("puu->pu", power).copy()
        result = (cg, power.sum(axis=2) - cg)
        with self._lock:
            self._cache[key] = result
        return result

    @staticmethod
    def _params_key(params):
        return (
            params.element_count,
            params.beta_db,
            params.tx.radius,
            params.rx.radius,
            params.tx.initial_azimuth,
            params.rx.initial_azimuth,
            params.pose.center_distance,
            params.pose.alpha,
            params.pose.gamma,
        )

    @staticmethod
    def _grid_key(grid):
        return (grid.center_frequency, grid.subcarrier_spacing, grid.subcarrier_count)

    # -- metrics -------------------------------------------------------

    def evaluate(self, overrides: dict) -> tuple:
        params, grid, alloc, scheme, subcarrier = self._resolve(overrides)
        u_index = self.scenario.modes.index_of(self.scenario.report_mode)
        u_count = len(self.scenario.modes)
        values = []
        for metric in self.scenario.metrics:
            if metric in ("cg", "imi", "avg_cg", "avg_imi", "sinr"):
                if 1 <= subcarrier <= grid.subcarrier_count:
                    band_cg, band_imi = self._band_gain_imi(params, grid, scheme)
                    cg, imi = band_cg[subcarrier - 1], band_imi[subcarrier - 1]
                else:
                    cg, imi = self._gain_imi_at(params, grid, scheme, subcarrier)
                if metric == "cg":
                    values.append(float(cg[u_index]))
                elif metric == "imi":
                    values.append(float(imi[u_index]))
                elif metric == "avg_cg":
                    values.append(float(np.mean(cg)))
                elif metric == "avg_imi":
                    values.append(float(np.mean(imi)))
                else:
                    values.append(
                        float(sinr_from_gain_imi(cg, imi, alloc, u_count)[u_index])
                    )
            elif metric == "se":
                band_cg, band_imi = self._band_gain_imi(params, grid, scheme)
                grid_sinr = sinr_from_gain_imi(band_cg, band_imi, alloc, u_count)
                values.append(spectral_efficiency(grid_sinr))
            elif metric == "kp_rr_rho":
                rho = oblique_factors(params.pose).rho
                k_c = 2.0 * np.pi * grid.center_frequency / SPEED_OF_LIGHT
                values.append(float(k_c * params.rx.radius * rho))
            elif metric == "kg_rr_rho":
                rho = oblique_factors(params.pose).rho
                k_g = grid.wavenumber(subcarrier) - grid.wavenumber(self.scenario.resolved_anchor)
                values.append(float(abs(k_g) * params.rx.radius * rho))
        return tuple(values)


def run_sweep(scenario: Scenario, threads: int = 1) -> ResultSet:
    """Cartesian-product evaluation of the scenario's metrics over its
    sweep axes.  Row order is the product order of the axes as given."""
    axes = scenario.sweep
    names = [name for name, _ in axes]
    points = list(itertools.product(*(values for _, values in axes)))
    evaluator = _PointEvaluator(scenario)

    def one(point):
        return evaluator.evaluate(dict(zip(names, point)))

    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, points))
    else:
        results = [one(point) for point in points]

    rows = tuple(tuple(point) + result for point, result in zip(points, results))
    return ResultSet(
        fingerprint=scenario_fingerprint(scenario),
        columns=tuple(names) + scenario.metrics,
        rows=rows,
        meta={
            "scenario": scenario.name,
            "version": __version__,
            "seed": scenario.seed,
            "power_split": scenario.alloc.split,
            "config": scenario_to_dict(scenario),
        },
    )


# -- table/figure presets ---------------------------------------------


def _preset(scenario: Scenario, name, sweep, metrics, **extra) -> Scenario:
    return replace(scenario, name=name, sweep=tuple(sweep), metrics=tuple(metrics), **extra)


def table2_scenario(base: Scenario | None = None) -> Scenario:
    base = base or table1_scenario()
    return _preset(
        base,
        "table2",
        [("oblique_deg", (1, 5, 10, 15, 20))],
        ("kp_rr_rho", "kg_rr_rho"),
        eval_subcarrier=0,
    )


def table3_scenario(base: Scenario | None = None) -> Scenario:
    base = base or table1_scenario()
    return _preset(
        base,
        "table3",
        [("steering", ("ma", "abs", "dbs")), ("oblique_deg", (5, 15))],
        ("cg", "imi"),
        eval_subcarrier=0,
        report_mode=1,
    )


def fig3_scenario(base: Scenario | None = None) -> Scenario:
    base = base or table1_scenario()
    return _preset(
        base,
        "fig3",
        [
            ("oblique_deg", (1, 5, 10, 15, 20)),
            ("subcarrier", tuple(range(1, base.grid.subcarrier_count + 1))),
        ],
        ("sinr",),
        report_mode=1,
    )


def fig4_scenario(base: Scenario | None = None, step_deg: float = 1.0) -> Scenario:
    base = base or table1_scenario()
    alphas = tuple(np.arange(0.0, 20.0 + 0.5 * step_deg, step_deg).tolist())
    return _preset(
        base,
        "fig4",
        [
            ("alpha_deg", alphas),
            ("gamma_deg", (0, 10, 20)),
            ("steering", ("ma", "abs", "dbs")),
        ],
        ("avg_cg", "avg_imi"),
        eval_subcarrier=0,
    )


def fig5_scenario(base: Scenario | None = None, snr_grid=tuple(range(0, 21))) -> Scenario:
    base = base or table1_scenario()
    return _preset(
        base,
        "fig5",
        [
            ("oblique_deg", (10, 15, 20)),
            ("steering", ("aligned", "ma", "abs", "dbs")),
            ("snr_db", tuple(snr_grid)),
        ],
        ("se",),
    )


def fig6_scenario(base: Scenario | None = None, snr_grid=tuple(range(0, 21))) -> Scenario:
    base = base or table1_scenario(alpha_deg=20, gamma_deg=20)
    return _preset(
        base,
        "fig6",
        [
            ("element_count", (15, 32)),
            ("steering", ("aligned", "ma", "abs", "dbs")),
            ("snr_db", tuple(snr_grid)),
        ],
        ("se",),
    )


def run_table2(scenario: Scenario | None = None, threads: int = 1) -> ResultSet:
    return run_sweep(table2_scenario(scenario), threads)


def run_table3(scenario: Scenario | None = None, threads: int = 1) -> ResultSet:
    return run_sweep(table3_scenario(scenario), threads)


def run_fig3(scenario: Scenario | None = None, threads: int = 1) -> ResultSet:
    return run_sweep(fig3_scenario(scenario), threads)


def run_fig4(scenario: Scenario | None = None, threads: int = 1) -> ResultSet:
    return run_sweep(fig4_scenario(scenario), threads)


def run_fig5(scenario: Scenario | None = None, threads: int = 1) -> ResultSet:
    return run_sweep(fig5_scenario(scenario), threads)


def run_fig6(scenario: Scenario | None = None, threads: int = 1) -> ResultSet:
    return run_sweep(fig6_scenario(scenario), threads)
