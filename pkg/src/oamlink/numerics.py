"""Special functions and unit conversions used throughout the simulator.

Bessel functions of the first kind appear both in the closed-form channel
expressions and in the beam-steering residual analysis.  The quadrature
oracle evaluates the defining integral directly and exists so the tests can
cross-check ``bessel_j`` against an independent route.
"""

from dataclasses import dataclass
import math

from scipy.special import jv


class ConvergenceError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Adaptive-quadrature controls: absolute tolerance and halving budget."""

    tolerance: float = 1e-12
    max_depth: int = 40

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")


DEFAULT_QUADRATURE = QuadratureSpec()


def bessel_j(order: int, x: float) -> float:
    """Integer-order Bessel function of the first kind, J_n(x)."""
    if not math.isfinite(x):
        raise ValueError(f"bessel_j argument must be finite, got {x}")
    return float(jv(order, x))


def _simpson(f, a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(f, a, m, fa, flm, fm)
    right = _simpson(f, m, b, fm, frm, fb)
    if abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    if depth <= 0:
        raise ConvergenceError(
            "adaptive Simpson exceeded its interval-halving depth budget"
        )
    return _adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _adaptive(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def bessel_integral_oracle(
    order: int, x: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Evaluate (1/2pi) * integral_0^2pi cos(n*theta - x*sin(theta)) dtheta.

    This is the integral representation of J_n(x), computed by adaptive
    Simpson quadrature with interval halving.  Used as the independent test
    oracle for :func:`bessel_j`; not on any production code path.
    """
    if not math.isfinite(x):
        raise ValueError(f"oracle argument must be finite, got {x}")

    def integrand(theta):
        return math.cos(order * theta - x * math.sin(theta))

    a, b = 0.0, 2.0 * math.pi
    fa = integrand(a)
    fm = integrand(0.5 * (a + b))
    fb = integrand(b)
    whole = _simpson(integrand, a, b, fa, fm, fb)
    value = _adaptive(
        integrand, a, b, fa, fm, fb, whole, spec.tolerance, spec.max_depth
    )
    return value / (2.0 * math.pi)


def db_to_linear_power(db: float) -> float:
    """Convert a power-ratio quantity in dB to linear scale, 10^(db/10)."""
    if not math.isfinite(db):
        raise ValueError(f"dB value must be finite, got {db}")
    return 10.0 ** (db / 10.0)
