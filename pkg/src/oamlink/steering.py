"""Receive-side beam steering: analog (one fixed anchor frequency) and
digital (per-subcarrier) phase compensation.

Both schemes share one per-element phase formula; they differ only in the
wavenumber it is evaluated at.  Analog steering therefore cancels the
misalignment phases exactly at the anchor subcarrier and leaves a residual
that grows with the frequency deviation from the anchor.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, ChannelParams, OfdmGrid, SPEED_OF_LIGHT
from .geometry import LinkPose, ObliqueFactors, UcaConfig
from .numerics import bessel_j
from .oam import ModeSet, OamChannel, misaligned_prefactor


@dataclass(frozen=True)
class SteeringWeights:
    """Unit-modulus per-element weights plus the wavenumber they target."""

    weights: np.ndarray
    scheme: str  # abs | dbs
    wavenumber: float


@dataclass(frozen=True)
class FrequencyDeviation:
    """Signed subcarrier offset from the analog anchor and its wavenumber gap."""

    g: int
    k_g: float


def default_anchor(grid: OfdmGrid) -> int:
    """Anchor at the band center, which minimizes the worst-case deviation."""
    return grid.subcarrier_count // 2


def frequency_deviation(grid: OfdmGrid, p: int, anchor: int) -> FrequencyDeviation:
    g = p - anchor
    return FrequencyDeviation(g=g, k_g=2.0 * np.pi * g * grid.subcarrier_spacing / SPEED_OF_LIGHT)


def steering_phases(rx: UcaConfig, pose: LinkPose, k: float) -> np.ndarray:
    """Per-element compensation phases at wavenumber k."""
    az = rx.element_azimuths()
    return k * rx.radius * (
        -np.cos(az) * np.sin(pose.gamma) + np.sin(az) * np.sin(pose.alpha) * np.cos(pose.gamma)
    )


def abs_weights(rx: UcaConfig, pose: LinkPose, grid: OfdmGrid, anchor: int | None = None) -> SteeringWeights:
    """Analog steering weights: one phase vector fixed at the anchor frequency."""
    a = default_anchor(grid) if anchor is None else anchor
    if not 1 <= a <= grid.subcarrier_count:
        raise IndexError(f"anchor index {a} out of range 1..{grid.subcarrier_count}")
    k_a = grid.wavenumber(a)
    return SteeringWeights(
        weights=np.exp(1j * steering_phases(rx, pose, k_a)), scheme="abs", wavenumber=k_a
    )


def dbs_weights(rx: UcaConfig, pose: LinkPose, grid: OfdmGrid, p: int) -> SteeringWeights:
    """Digital steering weights, recomputed at the subcarrier's own frequency."""
    if not 1 <= p <= grid.subcarrier_count:
        raise IndexError(f"subcarrier index {p} out of range 1..{grid.subcarrier_count}")
    k_p = grid.wavenumber(p)
    return SteeringWeights(
        weights=np.exp(1j * steering_phases(rx, pose, k_p)), scheme="dbs", wavenumber=k_p
    )


def dbs_weights_at(rx: UcaConfig, pose: LinkPose, k: float) -> SteeringWeights:
    """Digital steering weights at an explicit wavenumber (band-edge use)."""
    return SteeringWeights(
        weights=np.exp(1j * steering_phases(rx, pose, k)), scheme="dbs", wavenumber=k
    )


def steered_oam_channel(
    ch: ChannelMatrix, fourier: np.ndarray, modes: ModeSet, w: SteeringWeights
) -> OamChannel:
    """Mode-domain channel with the steering weights folded into each
    despiralization row: (w * F) H F^H."""
    n = ch.entries.shape[0]
    if fourier.shape != (len(modes), n):
        raise ValueError(
            f"Fourier matrix shape {fourier.shape} inconsistent with "
            f"{len(modes)} modes and {n} elements"
        )
    if w.weights.shape != (n,):
        raise ValueError(f"weight vector shape {w.weights.shape} != ({n},)")
    steered_rows = fourier * w.weights[None, :]
    return OamChannel(
        entries=steered_rows @ ch.entries @ fourier.conj().T,
        modes=modes,
        wavenumber=ch.wavenumber,
        steering=w.scheme,
    )


def closed_form_abs_entry(
    u: int,
    v: int,
    modes: ModeSet,
    params: ChannelParams,
    k: float,
    k_g: float,
    factors: ObliqueFactors,
) -> complex:
    """Residual mode coupling after analog steering: the misalignment Bessel
    factor survives, but with the small deviation wavenumber k_g in place of
    the full k."""
    ell_u, ell_v = modes.modes[u], modes.modes[v]
    t = ell_u - ell_v
    rt, rr = params.tx.radius, params.rx.radius
    d = params.pose.center_distance
    pre = misaligned_prefactor(k, params, ell_v, t, factors.phi)
    return pre * bessel_j(ell_v, k * rr * rt / d) * bessel_j(t, k_g * rr * factors.rho)


def closed_form_dbs_entry(
    u: int, v: int, modes: ModeSet, params: ChannelParams, k: float
) -> complex:
    """Mode coupling after digital steering: diagonal-only, angle-independent."""
    ell_u, ell_v = modes.modes[u], modes.modes[v]
    if ell_u != ell_v:
        return 0.0 + 0.0j
    n = params.element_count
    rt, rr = params.tx.radius, params.rx.radius
    d = params.pose.center_distance
    pre = (
        n * params.beta_linear / (2.0 * k * d)
        * np.exp(-1j * k * d + 1j * np.pi * ell_v / 2.0)
    )
    return pre * bessel_j(ell_v, k * rr * rt / d)
