"""Per-mode link metrics and the symbol-level Monte-Carlo validator.

Channel gain is the squared magnitude of a mode's diagonal coupling, IMI
the power leaking in from all other modes.  SINR combines the two with the
symbol and noise powers; spectral efficiency aggregates log2(1 + SINR)
over modes and averages over subcarriers.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix
from .numerics import db_to_linear_power
from .oam import ModeSet, OamChannel
from .steering import SteeringWeights


@dataclass(frozen=True)
class PowerAllocation:
    """Symbol power per mode, noise power, and the SNR that ties them.

    With the default per-mode split every mode transmits at the stated SNR
    independently; the total split divides one power budget equally across
    the modes.  An explicit symbol_power overrides the SNR-derived value.
    """

    snr_db: float = 20.0
    noise_power: float = 0.01
    split: str = "per-mode"  # per-mode | total
    symbol_power: float | None = None

    def __post_init__(self):
        if self.split not in ("per-mode", "total"):
            raise ValueError(f"unknown power split {self.split!r}")
        if self.noise_power < 0:
            raise ValueError(f"noise_power must be >= 0, got {self.noise_power}")
        if self.symbol_power is not None and not self.symbol_power > 0:
            raise ValueError(f"symbol_power must be > 0, got {self.symbol_power}")

    def mode_symbol_power(self, n_modes: int) -> float:
        if self.symbol_power is not None:
            return self.symbol_power
        power = db_to_linear_power(self.snr_db) * self.noise_power
        if self.split == "total":
            power /= n_modes
        if not power > 0:
            raise ValueError("derived symbol power is not positive; "
                             "set symbol_power explicitly when noise_power is 0")
        return power


@dataclass(frozen=True)
class GainImi:
    """Per-mode channel gain and inter-mode interference power."""

    channel_gain: np.ndarray
    imi: np.ndarray

    @property
    def avg_cg(self) -> float:
        return float(np.mean(self.channel_gain))

    @property
    def avg_imi(self) -> float:
        return float(np.mean(self.imi))


def channel_gain_and_imi(ch: OamChannel) -> GainImi:
    power = np.abs(ch.entries) ** 2
    cg = np.diag(power).copy()
    return GainImi(channel_gain=cg, imi=power.sum(axis=1) - cg)


def sinr(ch: OamChannel, alloc: PowerAllocation) -> np.ndarray:
    """Per-mode SINR: diagonal signal power over off-diagonal interference
    plus noise, all modes transmitting at the allocated symbol power."""
    gi = channel_gain_and_imi(ch)
    ex = alloc.mode_symbol_power(len(ch.modes))
    return gi.channel_gain * ex / (gi.imi * ex + alloc.noise_power)


def sinr_from_gain_imi(cg: np.ndarray, imi: np.ndarray, alloc: PowerAllocation, n_modes: int) -> np.ndarray:
    ex = alloc.mode_symbol_power(n_modes)
    return cg * ex / (imi * ex + alloc.noise_power)


def sir_large_n(ch: OamChannel, alloc: PowerAllocation) -> np.ndarray:
    """Interference-only SINR ceiling (the large-array limit where thermal
    noise vanishes).  Modes with zero IMI get +inf."""
    gi = channel_gain_and_imi(ch)
    out = np.full(len(gi.channel_gain), np.inf)
    nz = gi.imi > 0
    out[nz] = gi.channel_gain[nz] / gi.imi[nz]
    return out


def spectral_efficiency(sinr_grid: np.ndarray) -> float:
    """Sum log2(1 + SINR) over modes, averaged over subcarriers.

    ``sinr_grid`` has shape (subcarriers, modes); a 1-D input is treated
    as a single subcarrier.
    """
    grid = np.atleast_2d(np.asarray(sinr_grid, dtype=float))
    return float(np.mean(np.sum(np.log2(1.0 + grid), axis=1)))


@dataclass(frozen=True)
class MonteCarloSpec:
    symbols: int = 100_000
    seed: int = 0
    constellation: str = "gaussian"  # gaussian | qpsk

    def __post_init__(self):
        if self.symbols < 1:
            raise ValueError(f"symbols must be >= 1, got {self.symbols}")
        if self.constellation not in ("gaussian", "qpsk"):
            raise ValueError(f"unknown constellation {self.constellation!r}")


def _draw_symbols(rng: np.random.Generator, count: int, constellation: str) -> np.ndarray:
    if constellation == "qpsk":
        bits = rng.integers(0, 4, size=count)
        return np.exp(1j * (np.pi / 4 + np.pi / 2 * bits))
    return (rng.standard_normal(count) + 1j * rng.standard_normal(count)) / np.sqrt(2.0)


def monte_carlo_link(
    ch: ChannelMatrix,
    fourier: np.ndarray,
    modes: ModeSet,
    weights: SteeringWeights | None,
    alloc: PowerAllocation,
    spec: MonteCarloSpec,
) -> np.ndarray:
    """Empirical per-mode SINR from drawn symbols pushed through the
    despiralized receive pipeline.

    Each (mode, subcarrier) symbol stream and the noise stream get their
    own seeded generator derived from (seed, subcarrier, mode), so results
    do not depend on evaluation order or parallelism.
    """
    n = ch.entries.shape[0]
    u_count = len(modes)
    rows = fourier if weights is None else fourier * weights.weights[None, :]
    h_oam = rows @ ch.entries @ fourier.conj().T

    sub = ch.subcarrier if ch.subcarrier is not None else 0
    ex = alloc.mode_symbol_power(u_count)
    scale = np.sqrt(ex)

    x = np.empty((u_count, spec.symbols), dtype=complex)
    for u in range(u_count):
        rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(sub, u)))
        x[u] = scale * _draw_symbols(rng, spec.symbols, spec.constellation)

    noise_rng = np.random.default_rng(
        np.random.SeedSequence(spec.seed, spawn_key=(sub, u_count))
    )
    z = np.sqrt(alloc.noise_power / 2.0) * (
        noise_rng.standard_normal((n, spec.symbols))
        + 1j * noise_rng.standard_normal((n, spec.symbols))
    )
    z_modes = rows @ z

    out = np.empty(u_count)
    for u in range(u_count):
        signal = h_oam[u, u] * x[u]
        interference = h_oam[u] @ x - signal
        sig_power = np.mean(np.abs(signal) ** 2)
        junk_power = np.mean(np.abs(interference) ** 2) + np.mean(np.abs(z_modes[u]) ** 2)
        out[u] = sig_power / junk_power if junk_power > 0 else np.inf
    return out
