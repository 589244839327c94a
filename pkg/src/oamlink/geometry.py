"""Array element placement and element-pair distances.

The transmit array lies in the z=0 plane centered at the origin.  The
receive array is tilted about the x-axis (angle alpha) and the y-axis
(angle gamma), then translated to distance D along boresight.  All angles
are radians; degrees exist only at the CLI boundary.
"""

from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True)
class UcaConfig:
    """One uniform circular array: element count, radius, azimuth offset."""

    element_count: int
    radius: float
    initial_azimuth: float = 0.0

    def __post_init__(self):
        if self.element_count < 1:
            raise ValueError(f"element_count must be >= 1, got {self.element_count}")
        if not self.radius > 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")

    def element_azimuths(self) -> np.ndarray:
        """Azimuth of every element: 2*pi*(i-1)/N + initial_azimuth, i=1..N."""
        n = self.element_count
        return 2.0 * np.pi * np.arange(n) / n + self.initial_azimuth

    def element_azimuth(self, i: int) -> float:
        if not 1 <= i <= self.element_count:
            raise IndexError(f"element index {i} out of range 1..{self.element_count}")
        return 2.0 * np.pi * (i - 1) / self.element_count + self.initial_azimuth


@dataclass(frozen=True)
class LinkPose:
    """Receive-array placement: center distance and the two oblique angles."""

    center_distance: float
    alpha: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.center_distance > 0:
            raise ValueError(
                f"center_distance must be > 0, got {self.center_distance}"
            )


@dataclass(frozen=True)
class ObliqueFactors:
    """Derived misalignment factors: nu = sin(gamma), mu = sin(alpha)cos(gamma),
    rho = hypot(mu, nu) and phi = atan2(nu, mu)."""

    nu: float
    mu: float
    rho: float
    phi: float


def rotation_x(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rotation_y(gamma: float) -> np.ndarray:
    c, s = math.cos(gamma), math.sin(gamma)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def transmit_element_positions(tx: UcaConfig) -> np.ndarray:
    """(N, 3) coordinates of the transmit elements in the z=0 plane."""
    az = tx.element_azimuths()
    return np.stack(
        [tx.radius * np.cos(az), tx.radius * np.sin(az), np.zeros_like(az)], axis=1
    )


def receive_element_positions(rx: UcaConfig, pose: LinkPose) -> np.ndarray:
    """(N, 3) coordinates of the receive elements after rotation + translation."""
    az = rx.element_azimuths()
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    cg, sg = math.cos(pose.gamma), math.sin(pose.gamma)
    x = rx.radius * np.cos(az) * cg + rx.radius * np.sin(az) * sa * sg
    y = rx.radius * np.sin(az) * ca
    z = pose.center_distance - rx.radius * np.cos(az) * sg + rx.radius * np.sin(az) * sa * cg
    return np.stack([x, y, z], axis=1)


def receive_element_position(m: int, rx: UcaConfig, pose: LinkPose) -> np.ndarray:
    """Coordinates of the m-th (1-based) receive element."""
    if not 1 <= m <= rx.element_count:
        raise IndexError(f"element index {m} out of range 1..{rx.element_count}")
    return receive_element_positions(rx, pose)[m - 1]


def exact_distance_matrix(tx: UcaConfig, rx: UcaConfig, pose: LinkPose) -> np.ndarray:
    """(M, N) Euclidean distances, entry (m, n) from tx element n to rx element m."""
    t = transmit_element_positions(tx)
    r = receive_element_positions(rx, pose)
    return np.linalg.norm(r[:, None, :] - t[None, :, :], axis=2)


def exact_distance(n: int, m: int, tx: UcaConfig, rx: UcaConfig, pose: LinkPose) -> float:
    """Distance from the n-th transmit element to the m-th receive element."""
    if not 1 <= n <= tx.element_count:
        raise IndexError(f"tx element index {n} out of range 1..{tx.element_count}")
    if not 1 <= m <= rx.element_count:
        raise IndexError(f"rx element index {m} out of range 1..{rx.element_count}")
    t = transmit_element_positions(tx)[n - 1]
    r = receive_element_position(m, rx, pose)
    return float(np.linalg.norm(r - t))


FARFIELD_RATIO = 10.0


def _check_farfield(tx: UcaConfig, rx: UcaConfig, pose: LinkPose):
    limit = FARFIELD_RATIO * max(tx.radius, rx.radius)
    if pose.center_distance < limit:
        raise ValueError(
            "far-field approximation requires center_distance >= "
            f"{FARFIELD_RATIO} * max radius ({limit:.6g} m), got "
            f"{pose.center_distance:.6g} m"
        )


def farfield_distance_matrix(tx: UcaConfig, rx: UcaConfig, pose: LinkPose) -> np.ndarray:
    """(M, N) far-field element distances from the completed-square expansion.

    Valid when the center distance dominates both radii; guarded by a
    D >= 10 * max(R_t, R_r) precondition.
    """
    _check_farfield(tx, rx, pose)
    d = pose.center_distance
    rt, rr = tx.radius, rx.radius
    ca, sa = math.cos(pose.alpha), math.sin(pose.alpha)
    cg, sg = math.cos(pose.gamma), math.sin(pose.gamma)
    pm = rx.element_azimuths()[:, None]
    pn = tx.element_azimuths()[None, :]
    return (
        d
        - (rt * rr / d) * np.sin(pm) * np.cos(pn) * sa * sg
        - (rt * rr / d) * (np.cos(pm) * np.cos(pn) * cg + np.sin(pm) * np.sin(pn) * ca)
        + rr * (-np.cos(pm) * sg + np.sin(pm) * sa * cg)
    )


def farfield_distance(n: int, m: int, tx: UcaConfig, rx: UcaConfig, pose: LinkPose) -> float:
    if not 1 <= n <= tx.element_count:
        raise IndexError(f"tx element index {n} out of range 1..{tx.element_count}")
    if not 1 <= m <= rx.element_count:
        raise IndexError(f"rx element index {m} out of range 1..{rx.element_count}")
    return float(farfield_distance_matrix(tx, rx, pose)[m - 1, n - 1])


def oblique_factors(pose: LinkPose) -> ObliqueFactors:
    """Reduce the two oblique angles to the (rho, phi) misalignment factors."""
    nu = math.sin(pose.gamma)
    mu = math.sin(pose.alpha) * math.cos(pose.gamma)
    rho = math.hypot(mu, nu)
    phi = math.atan2(nu, mu)
    return ObliqueFactors(nu=nu, mu=mu, rho=rho, phi=phi)
