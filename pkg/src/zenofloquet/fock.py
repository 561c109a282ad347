"""Exact truncated number-basis oracle for the switched drive.

States live in a per-mode photon-number basis truncated at a cutoff D
(inclusive), ordered lexicographically: two-mode basis index
``n_a * (D + 1) + n_b``, single-mode index ``n``.  Segment propagation is
exact unitary evolution ``exp(-i H t)`` obtained from a real-eigenvalue
decomposition of the (real symmetric) Hamiltonian.

Only the dimensionless angles ``gamma * tau1`` and ``omega * tau2`` enter a
segment unitary, so the eigendecompositions are computed once per
(Hamiltonian kind, cutoff) on the coupling-free generator and reused for
every schedule.  Both segment generators conserve a number-like quantity
(``n_a - n_b`` during amplification, ``n_a + n_b`` during exchange), which
splits them into small tridiagonal blocks; propagation works block by block.

Truncation is monitored, not assumed: any population above 90% of the cutoff
beyond 1e-8 marks the run truncation-unsafe rather than silently wrong.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from .floquet import DriveSchedule

#: Population fraction allowed in levels above HIGH_LEVEL_FRACTION * cutoff.
LEAKAGE_THRESHOLD = 1e-8
HIGH_LEVEL_FRACTION = 0.9

#: Largest cutoff the automatic policy will pick (the leakage monitor, not
#: the policy, is what certifies a run).
MAX_DEFAULT_CUTOFF = 60


class HamiltonianLabel(enum.Enum):
    """The four segment Hamiltonians of the switched drive."""

    TWO_MODE_UNSTABLE = "two_mode_unstable"      # G (a+ b+ + a b)
    TWO_MODE_STABLE = "two_mode_stable"          # W (a+ b + a b+)
    SINGLE_MODE_UNSTABLE = "single_mode_unstable"  # G/2 (a+^2 + a^2)
    SINGLE_MODE_STABLE = "single_mode_stable"      # W/2 (a+ a + a a+)

    @property
    def mode_count(self) -> int:
        return 2 if self.value.startswith("two") else 1


def _destroy(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), k=1)


def _generator_dense(label: HamiltonianLabel, cutoff: int) -> np.ndarray:
    """Coupling-free generator; real symmetric by construction."""
    a = _destroy(cutoff)
    if label.mode_count == 2:
        eye = np.eye(cutoff + 1)
        mode_a = np.kron(a, eye)
        mode_b = np.kron(eye, a)
        if label is HamiltonianLabel.TWO_MODE_UNSTABLE:
            x = mode_a @ mode_b
        else:
            x = mode_a.T @ mode_b
        return x + x.T
    if label is HamiltonianLabel.SINGLE_MODE_UNSTABLE:
        x = a @ a / 2.0
        return x + x.T
    # number operator plus the vacuum term: (a+ a + a a+)/2 = n + 1/2
    return np.diag(np.arange(cutoff + 1) + 0.5)


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense segment Hamiltonian over the truncated basis."""

    matrix: np.ndarray
    label: HamiltonianLabel
    coupling: float
    cutoff: int

    @property
    def mode_count(self) -> int:
        return self.label.mode_count


def build_hamiltonian(label: HamiltonianLabel, coupling: float,
                      cutoff: int) -> HamiltonianMatrix:
    """Segment Hamiltonian from standard ladder-operator actions.

    Creation out of the top level D maps to zero (hard truncation).  The
    matrix is real symmetric, hence Hermitian.
    """
    if int(cutoff) != cutoff or cutoff < 1:
        raise ValueError(f"cutoff must be an integer >= 1, got {cutoff!r}")
    if not math.isfinite(coupling) or coupling < 0:
        raise ValueError(f"coupling must be finite and >= 0, got {coupling!r}")
    matrix = coupling * _generator_dense(label, int(cutoff))
    matrix.setflags(write=False)
    return HamiltonianMatrix(matrix=matrix, label=label,
                             coupling=float(coupling), cutoff=int(cutoff))


def segment_unitary(hamiltonian: HamiltonianMatrix, duration: float) -> np.ndarray:
    """U = exp(-i H t) via Hermitian eigendecomposition.

    Raises a numeric error carrying the matrix condition if the
    eigendecomposition fails; the returned matrix satisfies
    ``max |U+ U - I| < 1e-10``.
    """
    if not math.isfinite(duration):
        raise ValueError(f"duration must be finite, got {duration!r}")
    h = hamiltonian.matrix
    try:
        w, v = eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ArithmeticError(
            f"eigendecomposition failed for {hamiltonian.label.value} "
            f"(cutoff {hamiltonian.cutoff}, |H|_max {np.abs(h).max():.3e}): {exc}"
        ) from exc
    u = (v * np.exp(-1j * w * duration)) @ v.conj().T
    err = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if err > 1e-10:
        raise ArithmeticError(f"unitarity defect {err:.3e} exceeds 1e-10")
    return u


# --- states -----------------------------------------------------------------

@dataclass(frozen=True)
class FockState:
    """Normalized amplitude vector over the truncated number basis."""

    mode_count: int
    cutoff: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.mode_count not in (1, 2):
            raise ValueError(f"mode_count must be 1 or 2, got {self.mode_count}")
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError(f"cutoff must be an integer >= 1, got {self.cutoff}")
        dim = (self.cutoff + 1) ** self.mode_count
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != dim:
            raise ValueError(f"expected {dim} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if norm == 0 or not math.isfinite(norm):
            raise ValueError("amplitudes must have finite nonzero norm")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.mode_count


def basis_index(cutoff: int, *occupations: int) -> int:
    """Lexicographic basis index of |n_a, n_b> (or |n> for one mode)."""
    for n in occupations:
        if not 0 <= n <= cutoff:
            raise ValueError(f"occupation {n} outside [0, {cutoff}]")
    if len(occupations) == 1:
        return occupations[0]
    n_a, n_b = occupations
    return n_a * (cutoff + 1) + n_b


def number_state(cutoff: int, *occupations: int) -> FockState:
    """|n> or |n_a, n_b>; the cutoff must host every requested occupation."""
    amps = np.zeros((cutoff + 1) ** len(occupations), dtype=complex)
    amps[basis_index(cutoff, *occupations)] = 1.0
    return FockState(mode_count=len(occupations), cutoff=cutoff, amplitudes=amps)


def vacuum_state(cutoff: int, mode_count: int = 2) -> FockState:
    return number_state(cutoff, *([0] * mode_count))


def coherent_state(cutoff: int, alphas) -> FockState:
    """Product coherent state; rejects cutoffs that truncate > 1e-10 of norm."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    n = np.arange(cutoff + 1)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1.0, cutoff + 1)))))
    amps = None
    for alpha in alphas:
        if alpha == 0:
            single = np.zeros(cutoff + 1, dtype=complex)
            single[0] = 1.0
        else:
            single = np.exp(-abs(alpha) ** 2 / 2.0 + n * np.log(alpha) - log_fact / 2.0)
        lost = 1.0 - np.linalg.norm(single) ** 2
        if lost > 1e-10:
            raise ValueError(
                f"cutoff {cutoff} too small for |alpha|^2 = {abs(alpha)**2:.3g} "
                f"(truncated weight {lost:.2e})")
        amps = single if amps is None else np.kron(amps, single)
    return FockState(mode_count=alphas.size, cutoff=cutoff, amplitudes=amps)


@lru_cache(maxsize=None)
def _number_diagonals(cutoff: int, mode_count: int):
    n = np.arange(cutoff + 1.0)
    if mode_count == 1:
        n.setflags(write=False)
        return (n,)
    n_a = np.repeat(n, cutoff + 1)
    n_b = np.tile(n, cutoff + 1)
    n_a.setflags(write=False)
    n_b.setflags(write=False)
    return n_a, n_b


@lru_cache(maxsize=None)
def _high_level_mask(cutoff: int, mode_count: int) -> np.ndarray:
    level = HIGH_LEVEL_FRACTION * cutoff
    diags = _number_diagonals(cutoff, mode_count)
    mask = diags[0] > level
    for d in diags[1:]:
        mask = mask | (d > level)
    mask.setflags(write=False)
    return mask


def leakage_fraction(state: FockState) -> float:
    """Population in levels with any occupation above 0.9 * cutoff."""
    mask = _high_level_mask(state.cutoff, state.mode_count)
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def is_truncation_safe(state: FockState,
                       threshold: float = LEAKAGE_THRESHOLD) -> bool:
    return leakage_fraction(state) < threshold


def expectation(state: FockState, observable) -> float:
    """Expectation value of a number observable or a basis projector.

    ``observable`` is ``"na"``/``"nb"`` (two-mode), ``"n"`` (single-mode),
    ``"ntotal"``, or an integer basis index whose projector probability
    ``|amplitude|^2`` is returned.
    """
    probs = np.abs(state.amplitudes) ** 2
    if isinstance(observable, (int, np.integer)):
        if not 0 <= observable < state.dim:
            raise IndexError(f"basis index {observable} outside [0, {state.dim})")
        return float(probs[observable])
    diags = _number_diagonals(state.cutoff, state.mode_count)
    if observable == "ntotal":
        return float(sum(d @ probs for d in diags))
    if state.mode_count == 2:
        if observable == "na":
            return float(diags[0] @ probs)
        if observable == "nb":
            return float(diags[1] @ probs)
    elif observable == "n":
        return float(diags[0] @ probs)
    raise ValueError(f"unknown observable {observable!r} for "
                     f"{state.mode_count}-mode state")


# --- block propagation engine ------------------------------------------------

def _tridiagonal_block(indices, offdiag, diag=None):
    m = len(indices)
    if diag is None:
        diag = np.zeros(m)
    if m == 1:
        w, v = diag.copy(), np.eye(1)
    else:
        w, v = eigh_tridiagonal(diag, offdiag)
    idx = np.asarray(indices, dtype=np.intp)
    for arr in (idx, w, v):
        arr.setflags(write=False)
    return idx, w, v


@lru_cache(maxsize=None)
def _segment_blocks(label: HamiltonianLabel, cutoff: int):
    """Eigendecomposed conserved-quantity blocks of the unit-coupling generator."""
    d = cutoff
    blocks = []
    if label is HamiltonianLabel.TWO_MODE_UNSTABLE:
        # amplification conserves n_a - n_b; chains |n, n - delta>
        for delta in range(-d, d + 1):
            ns = np.arange(max(delta, 0), min(d, d + delta) + 1)
            idx = ns * (d + 1) + (ns - delta)
            off = np.sqrt((ns[:-1] + 1.0) * (ns[:-1] - delta + 1.0))
            blocks.append(_tridiagonal_block(idx, off))
    elif label is HamiltonianLabel.TWO_MODE_STABLE:
        # exchange conserves n_a + n_b; chains |k, s - k>
        for s in range(0, 2 * d + 1):
            ks = np.arange(max(0, s - d), min(d, s) + 1)
            idx = ks * (d + 1) + (s - ks)
            off = np.sqrt((ks[:-1] + 1.0) * (s - ks[:-1]))
            blocks.append(_tridiagonal_block(idx, off))
    elif label is HamiltonianLabel.SINGLE_MODE_UNSTABLE:
        # pair creation conserves photon parity; chains n, n+2, ...
        for parity in (0, 1):
            if parity > d:
                continue
            ns = np.arange(parity, d + 1, 2)
            off = np.sqrt((ns[:-1] + 1.0) * (ns[:-1] + 2.0)) / 2.0
            blocks.append(_tridiagonal_block(ns, off))
    elif label is HamiltonianLabel.SINGLE_MODE_STABLE:
        idx = np.arange(d + 1, dtype=np.intp)
        w = np.arange(d + 1) + 0.5
        idx.setflags(write=False)
        w.setflags(write=False)
        blocks.append((idx, w, None))  # already diagonal
    return tuple(blocks)


def _apply_segment(amplitudes: np.ndarray, label: HamiltonianLabel,
                   cutoff: int, angle: float) -> np.ndarray:
    """exp(-i * angle * generator) applied blockwise to an amplitude vector."""
    if angle == 0.0:
        return amplitudes
    out = amplitudes.copy()
    for idx, w, v in _segment_blocks(label, cutoff):
        phases = np.exp(-1j * w * angle)
        if v is None:
            out[idx] = phases * amplitudes[idx]
        else:
            out[idx] = v @ (phases * (v.T @ amplitudes[idx]))
    return out


def _segment_labels(mode_count: int):
    if mode_count == 2:
        return HamiltonianLabel.TWO_MODE_UNSTABLE, HamiltonianLabel.TWO_MODE_STABLE
    return HamiltonianLabel.SINGLE_MODE_UNSTABLE, HamiltonianLabel.SINGLE_MODE_STABLE


@dataclass(frozen=True)
class FockTrajectory:
    """Per-period records of a truncated propagation.

    ``status`` is ``"ok"``, ``"truncation-unsafe"`` (leakage monitor tripped
    at ``first_unsafe_period``; later numbers are not trustworthy) or
    ``"photon-cap"`` (early stop requested via ``photon_cap``).
    """

    n_per_mode: np.ndarray
    n_total: np.ndarray
    norm_drift: np.ndarray
    leakage: np.ndarray
    status: str
    first_unsafe_period: int | None
    periods_completed: int
    states: tuple | None = field(default=None)

    @property
    def truncation_safe(self) -> bool:
        return self.first_unsafe_period is None

    def __len__(self):
        return self.n_total.size

    def __getitem__(self, index):
        if self.states is None:
            raise TypeError("trajectory was recorded without states")
        return self.states[index]


def propagate(state: FockState, schedule: DriveSchedule, *,
              record_states: bool = True,
              leakage_threshold: float = LEAKAGE_THRESHOLD,
              stop_on_unsafe: bool = False,
              photon_cap: float | None = None) -> FockTrajectory:
    """Propagate through N periods, recording observables at each boundary.

    Each period applies the amplifying segment (angle ``gamma * tau1``) then
    the exchange segment (angle ``omega * tau2``).  The state is renormalized
    every period and the pre-renormalization drift logged.  Leakage past the
    monitor threshold marks the trajectory truncation-unsafe from that period
    on; with ``stop_on_unsafe`` (or a ``photon_cap``) propagation stops early.
    """
    if not isinstance(state, FockState):
        raise ValueError("initial state must be a FockState")
    label_u, label_s = _segment_labels(state.mode_count)
    cutoff = state.cutoff
    theta_u = schedule.gamma_tau1
    theta_s = schedule.omega_tau2

    psi = state.amplitudes.copy()
    diags = _number_diagonals(cutoff, state.mode_count)
    mask = _high_level_mask(cutoff, state.mode_count)

    def observables(vec):
        probs = np.abs(vec) ** 2
        per_mode = np.array([d @ probs for d in diags])
        return per_mode, float(probs[mask].sum())

    per_mode0, leak0 = observables(psi)
    if leak0 >= leakage_threshold:
        raise ValueError(
            f"initial state is not cutoff-safe (leakage {leak0:.2e} at cutoff {cutoff})")

    n_rec = [per_mode0]
    drift_rec = [0.0]
    leak_rec = [leak0]
    states = [state] if record_states else None
    status = "ok"
    first_unsafe = None
    completed = 0

    for n in range(1, schedule.periods + 1):
        psi = _apply_segment(psi, label_u, cutoff, theta_u)
        psi = _apply_segment(psi, label_s, cutoff, theta_s)
        norm = np.linalg.norm(psi)
        psi = psi / norm
        per_mode, leak = observables(psi)
        n_rec.append(per_mode)
        drift_rec.append(float(norm - 1.0))
        leak_rec.append(leak)
        if record_states:
            states.append(FockState(state.mode_count, cutoff, psi))
        completed = n
        if leak >= leakage_threshold and first_unsafe is None:
            first_unsafe = n
            status = "truncation-unsafe"
            if stop_on_unsafe:
                break
        if photon_cap is not None and sum(per_mode) > photon_cap:
            if status == "ok":
                status = "photon-cap"
            break

    n_per_mode = np.array(n_rec)
    return FockTrajectory(
        n_per_mode=n_per_mode,
        n_total=n_per_mode.sum(axis=1),
        norm_drift=np.array(drift_rec),
        leakage=np.array(leak_rec),
        status=status,
        first_unsafe_period=first_unsafe,
        periods_completed=completed,
        states=tuple(states) if record_states else None,
    )


def default_cutoff(gamma_tau1: float, periods: int,
                   cap: int = MAX_DEFAULT_CUTOFF) -> int:
    """Heuristic cutoff for squeezing-dominated runs, capped at ``cap``.

    Sized from the worst case of uninterrupted amplification over all
    periods; the leakage monitor, not this guess, certifies a run.
    """
    squeeze = math.sinh(min(periods * gamma_tau1, 20.0)) ** 2
    return int(min(cap, max(20, math.ceil(10.0 * squeeze + 10.0))))


@dataclass(frozen=True)
class ZenoScanPoint:
    """Outcome of one grid point of :func:`zeno_threshold_scan`."""

    omega_tau2: float
    outcome: str  # "growth" | "bounded" | "indeterminate"
    n_final: float
    periods_run: int


def zeno_threshold_scan(gamma_tau1: float, omega_tau2_grid, *,
                        periods: int = 150, growth_factor: float = 25.0,
                        cutoff: int | None = None,
                        leakage_threshold: float = LEAKAGE_THRESHOLD):
    """Classify photon growth from vacuum along a grid of exchange angles.

    A point is "growth" once the total photon number exceeds
    ``growth_factor`` times the yield of the first period (the natural scale
    of a single amplification pass from vacuum), "bounded" if it never does
    within ``periods``, and "indeterminate" if the leakage monitor trips
    before either verdict; indeterminate points are never classified.

    The stable/unstable transition along the grid brackets the curve
    ``cos(omega*tau2) cosh(gamma*tau1) = 1`` to within one grid step.  Just
    inside the stable side the photon envelope peaks near
    ``n_first / (2 * |half_trace - 1|)``, so resolving the boundary finer
    than the default grid-step scale needs a growth factor above that peak
    ratio and a cutoff that can hold the excursion.
    """
    grid = np.atleast_1d(np.asarray(omega_tau2_grid, dtype=float))
    if grid.size and (grid.min() < -1e-12 or grid.max() > math.pi + 1e-12):
        raise ValueError("omega_tau2 grid must lie within [0, pi]")
    if not 1 <= periods <= 200:
        raise ValueError("periods must be between 1 and 200 for the scan")
    if cutoff is None:
        cutoff = default_cutoff(gamma_tau1, periods)

    label_u, label_s = _segment_labels(2)
    diags = _number_diagonals(cutoff, 2)
    mask = _high_level_mask(cutoff, 2)
    vac = vacuum_state(cutoff, 2).amplitudes

    points = []
    for theta in grid:
        psi = vac.copy()
        outcome = "bounded"
        n_tot = 0.0
        n_ref = None
        ran = 0
        for n in range(1, periods + 1):
            psi = _apply_segment(psi, label_u, cutoff, gamma_tau1)
            psi = _apply_segment(psi, label_s, cutoff, float(theta))
            psi = psi / np.linalg.norm(psi)
            probs = np.abs(psi) ** 2
            n_tot = float((diags[0] + diags[1]) @ probs)
            ran = n
            if float(probs[mask].sum()) >= leakage_threshold:
                outcome = "indeterminate"
                break
            if n_ref is None:
                n_ref = n_tot
            elif n_ref > 1e-12 and n_tot > growth_factor * n_ref:
                outcome = "growth"
                break
        points.append(ZenoScanPoint(omega_tau2=float(theta), outcome=outcome,
                                    n_final=n_tot, periods_run=ran))
    return tuple(points)
