"""Fast self-check suite behind the CLI ``validate`` command.

Each check exercises one structural invariant of the pipeline at a pinned
tolerance.  ``fault`` exists for testing the checks themselves: it injects
a known defect so a check must fail.
"""

from dataclasses import dataclass

import numpy as np

from .channel import exact_channel_at
from .experiments import table1_scenario
from .geometry import rotation_x, rotation_y
from .numerics import bessel_integral_oracle, bessel_j
from .oam import effective_oam_channel, make_fourier
from .steering import abs_weights, dbs_weights, steered_oam_channel


@dataclass(frozen=True)
class CheckResult:
    name: str
    tolerance: float
    measured: float
    passed: bool


def _fourier_orthonormality() -> tuple[float, float]:
    s = table1_scenario()
    f = make_fourier(s.modes, s.params.element_count)
    gram = f @ f.conj().T
    return 1e-13, float(np.max(np.abs(gram - np.eye(len(s.modes)))))


def _aligned_diagonalization() -> tuple[float, float]:
    s = table1_scenario()
    f = make_fourier(s.modes, s.params.element_count)
    ch = exact_channel_at(s.params, s.grid.wavenumber(s.grid.subcarrier_count // 2))
    h_oam = effective_oam_channel(ch, f, s.modes).entries
    off = np.abs(h_oam - np.diag(np.diag(h_oam)))
    return 1e-10, float(np.max(off) / np.min(np.abs(np.diag(h_oam))))


def _bessel_recurrence() -> tuple[float, float]:
    worst = 0.0
    xs = np.linspace(0.5, 50.0, 25)
    for n in range(-10, 11):
        lhs = np.array([bessel_j(n - 1, x) + bessel_j(n + 1, x) for x in xs])
        rhs = np.array([2 * n / x * bessel_j(n, x) for x in xs])
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return 1e-9, worst


def _bessel_oracle_agreement() -> tuple[float, float]:
    worst = 0.0
    for n in (-3, 0, 1, 5):
        for x in (0.0, 0.5, 2.0944, 7.73, 20.0):
            worst = max(worst, abs(bessel_j(n, x) - bessel_integral_oracle(n, x)))
    return 1e-9, worst


def _rotation_orthogonality() -> tuple[float, float]:
    worst = 0.0
    for angle in np.linspace(-1.5, 1.5, 7):
        for rot in (rotation_x(angle), rotation_y(angle)):
            worst = max(worst, float(np.max(np.abs(rot.T @ rot - np.eye(3)))))
            worst = max(worst, abs(np.linalg.det(rot) - 1.0))
    return 1e-14, worst


def _abs_dbs_coincidence(fault: str | None) -> tuple[float, float]:
    s = table1_scenario(alpha_deg=10, gamma_deg=10)
    f = make_fourier(s.modes, s.params.element_count)
    anchor = s.resolved_anchor
    ch = exact_channel_at(s.params, s.grid.wavenumber(anchor))
    w_a = abs_weights(s.params.rx, s.params.pose, s.grid, anchor)
    if fault == "flip-weight":
        flipped = w_a.weights.copy()
        flipped[0] = -flipped[0]
        w_a = type(w_a)(weights=flipped, scheme=w_a.scheme, wavenumber=w_a.wavenumber)
    w_d = dbs_weights(s.params.rx, s.params.pose, s.grid, anchor)
    h_a = steered_oam_channel(ch, f, s.modes, w_a).entries
    h_d = steered_oam_channel(ch, f, s.modes, w_d).entries
    return 0.0, float(np.max(np.abs(h_a - h_d)))


def run_validation(fault: str | None = None) -> list[CheckResult]:
    checks = [
        ("fourier-orthonormality", _fourier_orthonormality),
        ("aligned-diagonalization", _aligned_diagonalization),
        ("bessel-recurrence", _bessel_recurrence),
        ("bessel-oracle-agreement", _bessel_oracle_agreement),
        ("rotation-orthogonality", _rotation_orthogonality),
        ("abs-dbs-coincidence", lambda: _abs_dbs_coincidence(fault)),
    ]
    results = []
    for name, func in checks:
        tolerance, measured = func()
        results.append(
            CheckResult(
                name=name,
                tolerance=tolerance,
                measured=measured,
                passed=measured <= tolerance,
            )
        )
    return results
