"""Free-space channel matrices and the OFDM subcarrier grid.

Two builders are provided: the exact one uses true Euclidean element
distances; the approximate one uses the far-field phase with a uniform
amplitude.  Both are kept first-class so the approximation gap itself is
measurable.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import (
    LinkPose,
    UcaConfig,
    exact_distance_matrix,
    farfield_distance_matrix,
)
from .numerics import db_to_linear_power

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class OfdmGrid:
    """Subcarrier plan: center frequency, spacing and count.

    Subcarrier p (1-based, matching the usual OFDM numbering) sits at
    f_L + p * spacing where f_L = f_c - (P/2) * spacing is the lowest
    frequency of the system.  Index 0 is accepted as the band edge f_L
    itself, which is where the reference tables are evaluated.
    """

    center_frequency: float
    subcarrier_spacing: float
    subcarrier_count: int

    def __post_init__(self):
        if self.subcarrier_count < 1:
            raise ValueError(
                f"subcarrier_count must be >= 1, got {self.subcarrier_count}"
            )
        if not self.subcarrier_spacing > 0:
            raise ValueError(
                f"subcarrier_spacing must be > 0, got {self.subcarrier_spacing}"
            )
        if not self.lowest_frequency > 0:
            raise ValueError(
                "lowest frequency f_c - (P/2)*spacing must be > 0, got "
                f"{self.lowest_frequency}"
            )

    @property
    def bandwidth(self) -> float:
        return self.subcarrier_count * self.subcarrier_spacing

    @property
    def lowest_frequency(self) -> float:
        return self.center_frequency - (self.subcarrier_count / 2) * self.subcarrier_spacing

    @property
    def center_wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.center_frequency

    def subcarrier_frequency(self, p: int) -> float:
        if not 0 <= p <= self.subcarrier_count:
            raise IndexError(
                f"subcarrier index {p} out of range 0..{self.subcarrier_count}"
            )
        return self.lowest_frequency + p * self.subcarrier_spacing

    def wavenumber(self, p: int) -> float:
        return 2.0 * np.pi * self.subcarrier_frequency(p) / SPEED_OF_LIGHT

    def frequencies(self) -> np.ndarray:
        """Per-subcarrier frequencies for p = 1..P."""
        p = np.arange(1, self.subcarrier_count + 1)
        return self.lowest_frequency + p * self.subcarrier_spacing

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * self.frequencies() / SPEED_OF_LIGHT


@dataclass(frozen=True)
class ChannelParams:
    """Everything the channel builders need besides the frequency."""

    beta_db: float
    tx: UcaConfig
    rx: UcaConfig
    pose: LinkPose

    def __post_init__(self):
        if self.tx.element_count != self.rx.element_count:
            raise ValueError(
                "tx and rx element counts must match, got "
                f"{self.tx.element_count} and {self.rx.element_count}"
            )

    @property
    def beta_linear(self) -> float:
        return db_to_linear_power(self.beta_db)

    @property
    def element_count(self) -> int:
        return self.tx.element_count


@dataclass(frozen=True)
class ChannelMatrix:
    """N x N element-to-element channel at one wavenumber."""

    entries: np.ndarray
    wavenumber: float
    subcarrier: int | None = None


def freespace_coefficient(d: float, k: float, beta_linear: float) -> complex:
    """Line-of-sight coefficient (beta / (2 k d)) * exp(-j k d)."""
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    if not k > 0:
        raise ValueError(f"wavenumber must be > 0, got {k}")
    return beta_linear / (2.0 * k * d) * np.exp(-1j * k * d)


def exact_channel_at(params: ChannelParams, k: float) -> ChannelMatrix:
    """Exact-distance channel matrix at wavenumber k."""
    if not k > 0:
        raise ValueError(f"wavenumber must be > 0, got {k}")
    d = exact_distance_matrix(params.tx, params.rx, params.pose)
    h = params.beta_linear / (2.0 * k * d) * np.exp(-1j * k * d)
    return ChannelMatrix(entries=h, wavenumber=k)


def approx_channel_at(params: ChannelParams, k: float) -> ChannelMatrix:
    """Far-field channel matrix at wavenumber k: uniform amplitude
    beta / (2 k D), phase from the completed-square distance."""
    if not k > 0:
        raise ValueError(f"wavenumber must be > 0, got {k}")
    d = farfield_distance_matrix(params.tx, params.rx, params.pose)
    amp = params.beta_linear / (2.0 * k * params.pose.center_distance)
    return ChannelMatrix(entries=amp * np.exp(-1j * k * d), wavenumber=k)


def _check_subcarrier(grid: OfdmGrid, p: int):
    if not 1 <= p <= grid.subcarrier_count:
        raise IndexError(
            f"subcarrier index {p} out of range 1..{grid.subcarrier_count}"
        )


def build_channel_exact(params: ChannelParams, grid: OfdmGrid, p: int) -> ChannelMatrix:
    _check_subcarrier(grid, p)
    ch = exact_channel_at(params, grid.wavenumber(p))
    return ChannelMatrix(entries=ch.entries, wavenumber=ch.wavenumber, subcarrier=p)


def build_channel_approx(params: ChannelParams, grid: OfdmGrid, p: int) -> ChannelMatrix:
    _check_subcarrier(grid, p)
    ch = approx_channel_at(params, grid.wavenumber(p))
    return ChannelMatrix(entries=ch.entries, wavenumber=ch.wavenumber, subcarrier=p)


def exact_channel_tensor(params: ChannelParams, wavenumbers: np.ndarray) -> np.ndarray:
    """(K, N, N) stack of exact channel matrices, one per wavenumber.

    The distance matrix is frequency-independent, so it is computed once
    and broadcast across the wavenumber axis.
    """
    k = np.asarray(wavenumbers, dtype=float)[:, None, None]
    d = exact_distance_matrix(params.tx, params.rx, params.pose)[None, :, :]
    return params.beta_linear / (2.0 * k * d) * np.exp(-1j * k * d)
