"""Exact single-photon statistics for delayed-choice interferometry.

Three experiment modes are covered:

* ``WHEELER``: a balanced Mach-Zehnder interferometer whose second beam
  splitter is removed (setting y=0, "open") or present (y=1, "closed")
  after the photon has entered. Lossless by construction.
* ``MODIFIED``: the interferometer stays closed; the measurement choice y
  instead applies a late phase shift sigma_y just before the second beam
  splitter. Arm transmittances t_a, t_b and detector efficiency eta model
  losses, with a third "no-click" outcome carrying the missing mass.
* ``QUANTUM_CONTROL``: the presence of the second beam splitter is
  conditioned on a two-level control prepared at angle alpha; measuring the
  control yields y as an outcome, so the statistics form a joint
  distribution p(d,y|x).

Port and phase conventions. The photon enters arm a of the first (balanced,
real) beam splitter; the preparation phase phi_x and transmittance t_a act
on arm a, the measurement phase sigma_y and t_b on arm b. The second beam
splitter sends (psi_a, psi_b) to ((psi_b - psi_a)/sqrt2, (psi_a + psi_b)/sqrt2),
placing detector E at the port whose click probability carries
+cos(phi - sigma). With the package-wide outcome convention d=0 at port E,
a closed lossless interferometer gives p(d=0|x) = cos^2(phi_x/2) and the
open one gives the phase-independent 1/2.

Detector efficiency is applied symmetrically to both click outcomes; the
emitted path state describes the field at the output ports and therefore
does not include eta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidConfig, ModeUnsupported
from .probability import (
    TABLE_TOL,
    Behavior,
    JointBehavior,
    Scenario,
    ThreeOutcomeBehavior,
    make_behavior,
    make_joint_behavior,
    make_three_outcome_behavior,
)

_AMP_TOL = 1e-12


class Mode(Enum):
    WHEELER = "wheeler"
    MODIFIED = "modified"
    QUANTUM_CONTROL = "quantum-control"


@dataclass(frozen=True)
class ExperimentConfig:
    """Interferometer settings for one experiment mode.

    phi lists the preparation phases phi_x in radians; sigma the late
    measurement phases sigma_y (MODIFIED mode only). Transmittances and
    efficiency live in (0, 1]. alpha is the control angle of the
    QUANTUM_CONTROL mode. Phases are arbitrary reals, no modular reduction.
    """

    mode: Mode
    phi: tuple[float, ...]
    sigma: tuple[float, ...] | None = None
    t_a: float = 1.0
    t_b: float = 1.0
    eta: float = 1.0
    alpha: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi", tuple(float(p) for p in self.phi))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", tuple(float(s) for s in self.sigma))
        if not self.phi:
            raise InvalidConfig("at least one preparation phase is required")
        for name in ("t_a", "t_b", "eta"):
            value = getattr(self, name)
            if not (0.0 < value <= 1.0):
                raise InvalidConfig(f"{name} must lie in (0, 1], got {value}")
        if self.mode is Mode.MODIFIED:
            if not self.sigma:
                raise InvalidConfig("MODIFIED mode needs at least one measurement phase sigma_y")
            if self.alpha is not None:
                raise InvalidConfig("alpha is only meaningful in QUANTUM_CONTROL mode")
        elif self.mode is Mode.WHEELER:
            if self.sigma is not None:
                raise InvalidConfig("WHEELER mode has fixed settings open/closed, sigma does not apply")
            if self.alpha is not None:
                raise InvalidConfig("alpha is only meaningful in QUANTUM_CONTROL mode")
        elif self.mode is Mode.QUANTUM_CONTROL:
            if self.alpha is None:
                raise InvalidConfig("QUANTUM_CONTROL mode requires the control angle alpha")
            if self.sigma is not None:
                raise InvalidConfig("QUANTUM_CONTROL mode has no sigma phases")

    @property
    def n_x(self) -> int:
        return len(self.phi)

    @property
    def n_y(self) -> int:
        if self.mode is Mode.MODIFIED:
            assert self.sigma is not None
            return len(self.sigma)
        return 2


@dataclass(frozen=True)
class PathState:
    """Single-photon state at the output ports, in the Fock basis |n_d n_e>.

    amp01 is the amplitude of |01> (photon at detector E), amp10 of |10>
    (photon at detector D). With arm losses the squared moduli sum to less
    than one.
    """

    amp01: complex
    amp10: complex

    def __post_init__(self) -> None:
        total = abs(self.amp01) ** 2 + abs(self.amp10) ** 2
        if total > 1.0 + _AMP_TOL:
            raise InvalidConfig(f"path state norm {total} exceeds 1")

    def click_probabilities(self) -> tuple[float, float]:
        """(p at port E, p at port D) before detector inefficiency."""
        return abs(self.amp01) ** 2, abs(self.amp10) ** 2


def wheeler_statistics(phi) -> Behavior:
    """Quantum statistics of the open/closed delayed-choice experiment.

    Setting y=0 (open) gives p(d|x,0) = 1/2 for both outcomes at every
    phase; y=1 (closed) gives p(d=0|x,1) = cos^2(phi_x/2).
    """
    phases = np.asarray(tuple(phi), dtype=float)
    if phases.ndim != 1 or phases.size == 0:
        raise InvalidConfig("phi must be a non-empty sequence of phases")
    scenario = Scenario(phases.size, 2, 2, 2)
    table = np.empty((2, phases.size, 2))
    table[:, :, 0] = 0.5
    table[0, :, 1] = np.cos(phases / 2.0) ** 2
    table[1, :, 1] = np.sin(phases / 2.0) ** 2
    return make_behavior(scenario, table, tol=TABLE_TOL)


def _closed_amplitudes(phi: float, sigma: float, t_a: float, t_b: float) -> tuple[complex, complex]:
    # Output of BS2 acting on (t_a e^{i phi}, t_b e^{i sigma})/sqrt2.
    psi_a = t_a * cmath.exp(1j * phi) / math.sqrt(2.0)
    psi_b = t_b * cmath.exp(1j * sigma) / math.sqrt(2.0)
    amp01 = (psi_a + psi_b) / math.sqrt(2.0)
    amp10 = (psi_b - psi_a) / math.sqrt(2.0)
    return amp01, amp10


def output_state(config: ExperimentConfig, x: int, y: int) -> PathState:
    """State emerging from the interferometer for preparation x, setting y.

    Squared moduli reproduce the click probabilities of the matching
    statistics operation (at unit detector efficiency). The quantum-control
    mode leaves the photon entangled with the control, so no pure path
    state exists and ModeUnsupported is raised.
    """
    if config.mode is Mode.QUANTUM_CONTROL:
        raise ModeUnsupported("the quantum-control photon is entangled with the control")
    if not (0 <= x < config.n_x and 0 <= y < config.n_y):
        raise InvalidConfig(f"(x={x}, y={y}) outside scenario ({config.n_x}, {config.n_y})")
    phi = config.phi[x]
    if config.mode is Mode.WHEELER:
        if y == 0:
            return PathState(amp01=1.0 / math.sqrt(2.0), amp10=cmath.exp(1j * phi) / math.sqrt(2.0))
        amp01, amp10 = _closed_amplitudes(phi, 0.0, 1.0, 1.0)
        return PathState(amp01=amp01, amp10=amp10)
    assert config.sigma is not None
    amp01, amp10 = _closed_amplitudes(phi, config.sigma[y], config.t_a, config.t_b)
    return PathState(amp01=amp01, amp10=amp10)


def modified_statistics(config: ExperimentConfig) -> ThreeOutcomeBehavior:
    """Three-outcome statistics of the always-closed experiment with losses.

    p(E-click|x,y) = eta * [ (t_a^2 + t_b^2)/4 + (t_a t_b / 2) cos(phi_x - sigma_y) ],
    p(D-click) flips the sign of the interference term, and the no-click
    outcome carries the remainder 1 - eta (t_a^2 + t_b^2)/2.
    """
    if config.mode is not Mode.MODIFIED:
        raise ModeUnsupported(f"modified_statistics needs MODIFIED mode, got {config.mode}")
    assert config.sigma is not None
    phi = np.asarray(config.phi)[:, None]
    sigma = np.asarray(config.sigma)[None, :]
    base = 0.25 * (config.t_a**2 + config.t_b**2)
    fringe = 0.5 * config.t_a * config.t_b * np.cos(phi - sigma)
    scenario = Scenario(config.n_x, config.n_y, 3, 2)
    table = np.empty((3, config.n_x, config.n_y))
    table[0] = config.eta * (base + fringe)
    table[1] = config.eta * (base - fringe)
    table[2] = 1.0 - config.eta * (config.t_a**2 + config.t_b**2) / 2.0
    return make_three_outcome_behavior(scenario, table, tol=TABLE_TOL)


def qdce_statistics(config: ExperimentConfig) -> JointBehavior:
    """Joint statistics p(d,y|x) of the quantum-controlled experiment.

    The control starts in cos(alpha)|0> + sin(alpha)|1> and is measured in
    its computational basis, yielding y; y=0 leaves the interferometer open
    (uniform outcome), y=1 closes it (cos^2 fringe):

        p(d, y=0 | x) = cos^2(alpha) / 2
        p(0, y=1 | x) = sin^2(alpha) cos^2(phi_x / 2)
        p(1, y=1 | x) = sin^2(alpha) sin^2(phi_x / 2)
    """
    if config.mode is not Mode.QUANTUM_CONTROL:
        raise ModeUnsupported(f"qdce_statistics needs QUANTUM_CONTROL mode, got {config.mode}")
    assert config.alpha is not None
    phi = np.asarray(config.phi)
    cos2a = math.cos(config.alpha) ** 2
    sin2a = math.sin(config.alpha) ** 2
    scenario = Scenario(config.n_x, 2, 2, 2)
    table = np.empty((2, 2, config.n_x))
    table[0, 0, :] = cos2a / 2.0
    table[1, 0, :] = cos2a / 2.0
    table[0, 1, :] = sin2a * np.cos(phi / 2.0) ** 2
    table[1, 1, :] = sin2a * np.sin(phi / 2.0) ** 2
    return make_joint_behavior(scenario, table, tol=TABLE_TOL)
