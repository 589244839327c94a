"""Mode sets, despiralization, and the effective mode-domain channel.

The partial Fourier matrix maps the N element signals into U mode outputs.
``effective_oam_channel`` is the exact mode-domain channel; the closed-form
entry approximates it with a product of two Bessel terms and is valid for
small oblique angles and large element counts.
"""

from dataclasses import dataclass
import math

import numpy as np

from .channel import ChannelMatrix, ChannelParams
from .geometry import ObliqueFactors, UcaConfig
from .numerics import bessel_j


@dataclass(frozen=True)
class ModeSet:
    """Ordered, distinct OAM mode numbers multiplexed on the channel."""

    modes: tuple[int, ...]

    def __post_init__(self):
        if len(self.modes) == 0:
            raise ValueError("mode set must be non-empty")
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"mode numbers must be distinct, got {self.modes}")

    def __len__(self) -> int:
        return len(self.modes)

    def index_of(self, mode: int) -> int:
        return self.modes.index(mode)

    def validate_for(self, n_elements: int):
        if len(self.modes) > n_elements:
            raise ValueError(
                f"mode count {len(self.modes)} exceeds element count {n_elements}"
            )
        residues: dict[int, int] = {}
        for mode in self.modes:
            r = mode % n_elements
            if r in residues:
                raise ValueError(
                    f"modes {residues[r]} and {mode} coincide modulo {n_elements}"
                )
            residues[r] = mode


def default_mode_set(n_modes: int) -> ModeSet:
    """Symmetric mode set around zero: e.g. 15 modes -> -7..7."""
    lo = -(n_modes // 2)
    return ModeSet(tuple(range(lo, lo + n_modes)))


def make_fourier(modes: ModeSet, n_elements: int) -> np.ndarray:
    """U x N partial Fourier matrix; row u despiralizes mode modes[u]."""
    modes.validate_for(n_elements)
    ell = np.asarray(modes.modes)[:, None]
    n = np.arange(n_elements)[None, :]
    return np.exp(-2j * np.pi * ell * n / n_elements) / math.sqrt(n_elements)


@dataclass(frozen=True)
class OamChannel:
    """U x U mode-domain channel at one wavenumber, optionally steered."""

    entries: np.ndarray
    modes: ModeSet
    wavenumber: float
    steering: str = "none"  # none | abs | dbs


def effective_oam_channel(ch: ChannelMatrix, fourier: np.ndarray, modes: ModeSet) -> OamChannel:
    """Mode-domain channel F H F^H for an unsteered receiver."""
    if fourier.shape != (len(modes), ch.entries.shape[0]):
        raise ValueError(
            f"Fourier matrix shape {fourier.shape} inconsistent with "
            f"{len(modes)} modes and {ch.entries.shape[0]} elements"
        )
    return OamChannel(
        entries=fourier @ ch.entries @ fourier.conj().T,
        modes=modes,
        wavenumber=ch.wavenumber,
    )


def xi_factor(t: int, factors: ObliqueFactors, rx: UcaConfig, k: float) -> complex:
    """Misalignment sum over the receive elements.

    Exact finite-sum form; its integral limit is what produces the J_t
    factor in the closed-form entry.
    """
    az = rx.element_azimuths()
    phase = -1j * k * rx.radius * factors.rho * np.sin(az - factors.phi) - 1j * az * t
    return complex(np.sum(np.exp(phase)))


def misaligned_prefactor(k: float, params: ChannelParams, ell_v: int, t: int, phi: float) -> complex:
    """Complex prefactor of the closed-form mode-coupling entry."""
    n = params.element_count
    d = params.pose.center_distance
    return (
        n * params.beta_linear / (2.0 * k * d)
        * np.exp(-1j * k * d + 1j * np.pi * ell_v / 2.0 - 1j * np.pi * t - 1j * phi * t)
    )


def closed_form_entry(
    u: int,
    v: int,
    modes: ModeSet,
    params: ChannelParams,
    k: float,
    factors: ObliqueFactors,
) -> complex:
    """Bessel-product approximation of the (u, v) mode-domain entry.

    u, v are 0-based indices into the mode set.  Accuracy degrades with
    oblique angle; the tests quantify the error rather than the code
    enforcing a validity region.
    """
    ell_u, ell_v = modes.modes[u], modes.modes[v]
    t = ell_u - ell_v
    rt, rr = params.tx.radius, params.rx.radius
    d = params.pose.center_distance
    pre = misaligned_prefactor(k, params, ell_v, t, factors.phi)
    return pre * bessel_j(ell_v, k * rr * rt / d) * bessel_j(t, k * rr * factors.rho)
