"""Parameterized coupler/phase networks compiled to unitaries.

Mode indices are 1-based everywhere in this package, matching the way
chip modes are labeled.  A directional coupler on modes (i, i+1) with
power reflectivity eta applies the block

    [[T, iR], [iR, T]],   T = sqrt(1 - eta),  R = sqrt(eta),

and a phase shifter multiplies mode i by exp(i*phi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Canonical 5-mode layout: couplers on (1,2),(3,4),(2,3),(4,5) twice over,
# each preceded by a phase on its upper arm, plus output phases on modes 1-3.
DEFAULT_MODES = 5
COUPLER_UPPER_MODES = (1, 3, 2, 4, 1, 3, 2, 4)
OUTPUT_PHASE_MODES = (1, 2, 3)
RANDOM_ETA_RANGE = (0.2, 0.8)


def wrap_phases(phis) -> np.ndarray:
    """Angles reduced into [0, 2*pi)."""
    w = np.mod(np.asarray(phis, dtype=float), TWO_PI)
    w[w >= TWO_PI] = 0.0
    return w


@dataclass(frozen=True)
class Coupler:
    """Directional coupler on adjacent modes (mode, mode+1), 1-based."""

    mode: int
    eta: float

    def __post_init__(self):
        if self.mode < 1:
            raise ValueError(f"coupler mode must be >= 1, got {self.mode}")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"reflectivity must lie in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class PhaseShifter:
    """Phase shifter exp(i*phi) on a single mode, 1-based."""

    mode: int
    phi: float

    def __post_init__(self):
        if self.mode < 1:
            raise ValueError(f"phase mode must be >= 1, got {self.mode}")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError(f"phase must lie in [0, 2*pi), got {self.phi}")


CircuitElement = Coupler | PhaseShifter


@dataclass(frozen=True)
class OpticalCircuit:
    """Ordered element list (input-to-output order) over mode_count modes."""

    mode_count: int
    elements: tuple[CircuitElement, ...]

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode count must be a positive integer")
        object.__setattr__(self, "elements", tuple(self.elements))
        for e in self.elements:
            _check_element(e, self.mode_count)

    def couplers(self) -> list[Coupler]:
        return [e for e in self.elements if isinstance(e, Coupler)]

    def phases(self) -> list[PhaseShifter]:
        return [e for e in self.elements if isinstance(e, PhaseShifter)]


def _check_element(element: CircuitElement, m: int) -> None:
    if isinstance(element, Coupler):
        if element.mode > m - 1:
            raise ValueError(
                f"coupler on modes ({element.mode}, {element.mode + 1}) "
                f"does not fit in {m} modes"
            )
    elif isinstance(element, PhaseShifter):
        if element.mode > m:
            raise ValueError(f"phase on mode {element.mode} does not fit in {m} modes")
    else:
        raise ValueError(f"unknown circuit element {element!r}")


def element_unitary(element: CircuitElement, m: int) -> np.ndarray:
    """m x m unitary of a single coupler or phase shifter."""
    _check_element(element, m)
    u = np.eye(m, dtype=np.complex128)
    if isinstance(element, Coupler):
        i = element.mode - 1
        t = math.sqrt(1.0 - element.eta)
        r = math.sqrt(element.eta)
        u[i, i] = t
        u[i + 1, i + 1] = t
        u[i, i + 1] = 1j * r
        u[i + 1, i] = 1j * r
    else:
        u[element.mode - 1, element.mode - 1] = complex(
            math.cos(element.phi), math.sin(element.phi)
        )
    return u


def compile_circuit(circuit: OpticalCircuit) -> np.ndarray:
    """Product of element unitaries, later elements applied after earlier ones."""
    u = np.eye(circuit.mode_count, dtype=np.complex128)
    for element in circuit.elements:
        u = element_unitary(element, circuit.mode_count) @ u
    return u


def default_topology(etas, phis) -> OpticalCircuit:
    """The canonical 5-mode network: 8 couplers and 11 phase shifters.

    etas[k] is the reflectivity of the k-th coupler in column order
    (1,2),(3,4),(2,3),(4,5),(1,2),(3,4),(2,3),(4,5); phis[k] for k < 8
    sits on the upper arm just before that coupler, and phis[8:] are
    output phases on modes 1, 2, 3.
    """
    etas = [float(e) for e in etas]
    phis = [float(p) for p in phis]
    if len(etas) != len(COUPLER_UPPER_MODES):
        raise ValueError(f"expected {len(COUPLER_UPPER_MODES)} reflectivities, got {len(etas)}")
    if len(phis) != len(COUPLER_UPPER_MODES) + len(OUTPUT_PHASE_MODES):
        raise ValueError(
            f"expected {len(COUPLER_UPPER_MODES) + len(OUTPUT_PHASE_MODES)} phases, got {len(phis)}"
        )
    elements: list[CircuitElement] = []
    for k, mode in enumerate(COUPLER_UPPER_MODES):
        elements.append(PhaseShifter(mode, phis[k]))
        elements.append(Coupler(mode, etas[k]))
    for j, mode in enumerate(OUTPUT_PHASE_MODES):
        elements.append(PhaseShifter(mode, phis[len(COUPLER_UPPER_MODES) + j]))
    return OpticalCircuit(DEFAULT_MODES, tuple(elements))


def random_circuit(seed: int) -> OpticalCircuit:
    """Default topology with eta ~ U[0.2, 0.8] and phi ~ U[0, 2*pi), seeded."""
    rng = np.random.default_rng(seed)
    etas = rng.uniform(*RANDOM_ETA_RANGE, size=len(COUPLER_UPPER_MODES))
    phis = rng.uniform(0.0, TWO_PI, size=len(COUPLER_UPPER_MODES) + len(OUTPUT_PHASE_MODES))
    return default_topology(etas, wrap_phases(phis))
