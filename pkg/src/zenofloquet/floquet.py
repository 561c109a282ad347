"""Transfer matrices and stability analysis of the switched two-segment drive.

The drive alternates between an amplifying segment (rate ``gamma`` for a
duration ``tau1``, hyperbolic quadrature flow) and a photon-conserving
exchange segment (rate ``omega`` for ``tau2``, rotational flow).  One full
period is advanced by the monodromy matrix ``A = A_s @ A_u``, and the global
motion is stable or unstable according to whether ``|tr A| / 2`` is below or
above one.  Only the dimensionless products ``gamma * tau1`` and
``omega * tau2`` enter any matrix element, so all trigonometric and
hyperbolic evaluations are done on the products directly.

Matrices act on a single quadrature pair ``(x, p)`` and are plain 2x2
float ndarrays with determinant 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

#: Half-trace distance from 1 below which a monodromy is reported Marginal.
DEFAULT_EPSILON = 1e-9

#: Tolerated determinant deviation for matrices fed to :func:`classify`.
DET_TOL = 1e-9


class InconsistentMatrixError(ValueError):
    """Raised when a matrix violates the unit-determinant precondition."""


class Classification(str, enum.Enum):
    """Three-way stability verdict for a periodic drive."""

    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"


def _require_finite_nonnegative(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")


@dataclass(frozen=True)
class DriveSchedule:
    """Parameters of one switched-drive run.

    Parameters
    ----------
    gamma : float
        Amplifying (down-conversion) coupling rate, 1/s, >= 0.
    tau1 : float
        Duration of the amplifying segment, s, >= 0.
    omega : float
        Linear mode-exchange coupling rate, 1/s, >= 0.
    tau2 : float
        Duration of the exchange segment, s, >= 0.
    periods : int
        Number of full periods N, >= 0.
    """

    gamma: float
    tau1: float
    omega: float
    tau2: float
    periods: int

    def __post_init__(self):
        for name in ("gamma", "tau1", "omega", "tau2"):
            _require_finite_nonnegative(name, float(getattr(self, name)))
        if int(self.periods) != self.periods or self.periods < 0:
            raise ValueError(f"periods must be a non-negative integer, got {self.periods!r}")
        if self.periods > 0 and self.period <= 0:
            raise ValueError("period tau1 + tau2 must be positive when periods > 0")

    @property
    def period(self) -> float:
        """Full modulation period T = tau1 + tau2 in seconds."""
        return self.tau1 + self.tau2

    @property
    def gamma_tau1(self) -> float:
        return self.gamma * self.tau1

    @property
    def omega_tau2(self) -> float:
        return self.omega * self.tau2

    @classmethod
    def from_products(cls, gamma_tau1, omega_tau2, periods=1,
                      tau1=1.0, tau2=1.0) -> "DriveSchedule":
        """Build a schedule from the dimensionless products with unit durations."""
        return cls(gamma=gamma_tau1 / tau1, tau1=tau1,
                   omega=omega_tau2 / tau2, tau2=tau2, periods=periods)


@dataclass(frozen=True)
class StabilityReport:
    """Stability verdict derived from a monodromy matrix.

    ``floquet_exponent`` is the per-unit-time growth rate
    ``ln(lambda_max) / period`` of the dominant monodromy eigenvalue; it is
    exactly zero unless the classification is unstable.
    """

    half_trace: float
    classification: Classification
    floquet_exponent: float
    period: float


@dataclass(frozen=True)
class ClassicalPendulumParams:
    """Rates and segment duration of the classical inverted-pendulum map.

    The physical regime requires ``k1 > k2 > 0``; both segments share the
    single duration ``tau``.
    """

    k1: float
    k2: float
    tau: float

    def __post_init__(self):
        for name in ("k1", "k2", "tau"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.k1 > self.k2 > 0:
            raise ValueError(f"require k1 > k2 > 0, got k1={self.k1}, k2={self.k2}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


def _hyperbolic_transfer(product: float) -> np.ndarray:
    c, s = math.cosh(product), math.sinh(product)
    return np.array([[c, s], [s, c]])


def _rotation_transfer(product: float) -> np.ndarray:
    c, s = math.cos(product), math.sin(product)
    return np.array([[c, s], [-s, c]])


def unstable_segment_matrix(gamma: float, tau1: float) -> np.ndarray:
    """Transfer matrix of the amplifying segment.

    Returns ``[[cosh(g), sinh(g)], [sinh(g), cosh(g)]]`` with
    ``g = gamma * tau1``; the flow stretches the ``x = p`` diagonal and
    squeezes the antidiagonal, with determinant exactly
    ``cosh^2 - sinh^2 = 1``.
    """
    _require_finite_nonnegative("gamma", gamma)
    _require_finite_nonnegative("tau1", tau1)
    return _hyperbolic_transfer(gamma * tau1)


def stable_segment_matrix(omega: float, tau2: float) -> np.ndarray:
    """Transfer matrix of the exchange segment.

    Returns the rotation ``[[cos(w), sin(w)], [-sin(w), cos(w)]]`` with
    ``w = omega * tau2``.
    """
    _require_finite_nonnegative("omega", omega)
    _require_finite_nonnegative("tau2", tau2)
    return _rotation_transfer(omega * tau2)


def monodromy(schedule: DriveSchedule) -> np.ndarray:
    """One-period map ``A = A_s @ A_u`` (amplifying segment acts first)."""
    a_u = unstable_segment_matrix(schedule.gamma, schedule.tau1)
    a_s = stable_segment_matrix(schedule.omega, schedule.tau2)
    return a_s @ a_u


def minus_mode_monodromy(schedule: DriveSchedule) -> np.ndarray:
    """One-period map of the time-reversed quadrature pair.

    The second decoupled pair evolves under both segment generators with
    opposite sign, so its monodromy is ``A_s(-w) @ A_u(-g)``.  Its trace
    equals the trace of :func:`monodromy`, hence the stability condition is
    shared by both pairs.
    """
    _require_finite_nonnegative("gamma", schedule.gamma)
    return _rotation_transfer(-schedule.omega_tau2) @ _hyperbolic_transfer(-schedule.gamma_tau1)


def classify(monodromy_matrix: np.ndarray, period: float,
             epsilon: float = DEFAULT_EPSILON) -> StabilityReport:
    """Classify a one-period map by its half-trace.

    Parameters
    ----------
    monodromy_matrix : (2, 2) array
        Area-preserving one-period map; its determinant must equal 1 within
        ``DET_TOL``.
    period : float
        Duration T of one period, used to convert the per-period eigenvalue
        growth into a rate.
    epsilon : float
        Width of the marginal band around half-trace 1.

    Returns
    -------
    StabilityReport
    """
    m = np.asarray(monodromy_matrix, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not math.isfinite(period) or period <= 0:
        raise ValueError(f"period must be positive and finite, got {period!r}")
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    det = a * d - b * c
    if abs(det - 1.0) > DET_TOL:
        raise InconsistentMatrixError(
            f"determinant {det!r} deviates from 1 by more than {DET_TOL}")
    half_trace = abs(a + d) / 2.0
    if half_trace > 1.0 + epsilon:
        classification = Classification.UNSTABLE
        exponent = math.log(half_trace + math.sqrt(half_trace**2 - 1.0)) / period
    elif half_trace < 1.0 - epsilon:
        classification = Classification.STABLE
        exponent = 0.0
    else:
        classification = Classification.MARGINAL
        exponent = 0.0
    return StabilityReport(half_trace=half_trace, classification=classification,
                           floquet_exponent=exponent, period=period)


def classify_schedule(schedule: DriveSchedule,
                      epsilon: float = DEFAULT_EPSILON) -> StabilityReport:
    """Monodromy construction and classification in one step."""
    return classify(monodromy(schedule), schedule.period, epsilon)


def small_tau_predicate(schedule: DriveSchedule) -> bool:
    """Leading-order stability predicate for short segments.

    Expanding the half-trace to second order in the segment products gives
    ``1 - ((omega*tau2)^2 - (gamma*tau1)^2) / 2``, so to this order the
    drive is stable exactly when ``omega * tau2 > gamma * tau1``.
    """
    return schedule.omega_tau2 > schedule.gamma_tau1


def propagate_plus_mode(schedule: DriveSchedule, x0: float, p0: float) -> np.ndarray:
    """Amplified-pair trajectory sampled at period boundaries.

    Returns an ``(N + 1, 2)`` array whose n-th row is ``A^n @ (x0, p0)``;
    row 0 is the initial condition.
    """
    a = monodromy(schedule)
    out = np.empty((schedule.periods + 1, 2))
    v = np.array([float(x0), float(p0)])
    out[0] = v
    for n in range(1, schedule.periods + 1):
        v = a @ v
        out[n] = v
    return out


def classical_pendulum_monodromy(params: ClassicalPendulumParams,
                                 epsilon: float = DEFAULT_EPSILON):
    """One-period map and verdict of the classical inverted pendulum.

    The pivot-driven pendulum alternates between an inverted (rate ``k1``)
    and a hanging (rate ``k2``) configuration, each lasting ``tau``:

    ``A1 = [[cosh(k1 t), sinh(k1 t)/k1], [k1 sinh(k1 t), cosh(k1 t)]]``
    ``A2 = [[cos(k2 t),  sin(k2 t)/k2], [-k2 sin(k2 t), cos(k2 t)]]``

    and the map for a full period ``2 tau`` is ``A2 @ A1``.  Unlike the
    rescaled quadrature matrices, the off-diagonal entries carry the rate
    and its inverse; the determinant is still 1.

    Returns
    -------
    (ndarray, StabilityReport)
    """
    k1, k2, tau = params.k1, params.k2, params.tau
    u1, u2 = k1 * tau, k2 * tau
    a1 = np.array([[math.cosh(u1), math.sinh(u1) / k1],
                   [k1 * math.sinh(u1), math.cosh(u1)]])
    a2 = np.array([[math.cos(u2), math.sin(u2) / k2],
                   [-k2 * math.sin(u2), math.cos(u2)]])
    a_cl = a2 @ a1
    return a_cl, classify(a_cl, 2.0 * tau, epsilon)
