"""Stability analysis and simulation of a periodically switched two-mode drive.

The package has three computational layers plus a command-line front end:

* :mod:`zenofloquet.floquet` -- exact 2x2 segment transfer matrices, the
  one-period monodromy, and trace-based stability classification;
* :mod:`zenofloquet.gaussian` -- symplectic evolution of Gaussian states
  (means and covariances) through the switched schedule;
* :mod:`zenofloquet.fock` -- brute-force truncated number-basis propagation,
  used as the exact oracle for the Gaussian simulator;
* :mod:`zenofloquet.cli` -- ``sweep`` / ``simulate`` / ``estimate``
  subcommands with deterministic CSV/JSON output.
"""

from . import cli, floquet, fock, gaussian
from ._version import __version__
from .floquet import (
    Classification,
    ClassicalPendulumParams,
    DriveSchedule,
    StabilityReport,
    classical_pendulum_monodromy,
    classify,
    classify_schedule,
    minus_mode_monodromy,
    monodromy,
    propagate_plus_mode,
    small_tau_predicate,
    stable_segment_matrix,
    unstable_segment_matrix,
)
from .gaussian import GaussianState, PhotonNumbers, evolve, photon_numbers

__all__ = [
    "Classification",
    "ClassicalPendulumParams",
    "DriveSchedule",
    "GaussianState",
    "PhotonNumbers",
    "StabilityReport",
    "classical_pendulum_monodromy",
    "classify",
    "classify_schedule",
    "cli",
    "evolve",
    "floquet",
    "fock",
    "gaussian",
    "minus_mode_monodromy",
    "monodromy",
    "photon_numbers",
    "propagate_plus_mode",
    "small_tau_predicate",
    "stable_segment_matrix",
    "unstable_segment_matrix",
    "__version__",
]
