"""Ancilla-qubit Ramsey measurement of HW observables.

System ``S`` (dimension ``d``) and a probe qubit start in ``rho x |dn><dn|``.
The qubit gets a pi/2 rotation, then the conditional displacement
``U = 1 x |dn><dn| + D(p) x |up><up|``, then a second pi/2 rotation, and is
measured.  The qubit basis is ordered ``(dn, up)`` and the qubit is the
least significant tensor factor.

``R(phi) = (1/sqrt 2) [[1, e^{i phi}], [-e^{-i phi}, 1]]``.  With this
matrix the first rotation needs phase ``-pi/4`` (and the second ``0``) for
``E_up - E_dn = Q(p)/sqrt 2`` to hold with ``chi = (1 + i)/2``; phase
``+pi/4`` measures the ``chi*`` observable instead (they coincide only for
``d = 2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochVector, DensityMatrix, decompose
from .errors import DimensionError, InconsistencyError, ValidationError
from .hw_basis import PhasePoint, displacement, points
from .numerics import STRUCT_TOL

FIRST_PHASE = -math.pi / 4
SECOND_PHASE = 0.0
PROB_TOL = 1e-9

DN = np.array([1.0, 0.0])
UP = np.array([0.0, 1.0])


def rotation(phi: float) -> np.ndarray:
    """Unitary pi/2 rotation of the probe qubit with phase ``phi``."""
    return np.array(
        [[1.0, np.exp(1j * phi)], [-np.exp(-1j * phi), 1.0]], dtype=np.complex128
    ) / math.sqrt(2)


def conditional_displacement(p: PhasePoint) -> np.ndarray:
    """``1 x |dn><dn| + D(p) x |up><up|`` on ``S x qubit``."""
    d = p.d
    return np.kron(np.eye(d), np.outer(DN, DN)) + np.kron(displacement(p), np.outer(UP, UP))


@dataclass(frozen=True)
class RamseyCircuit:
    point: PhasePoint
    first_phase: float = FIRST_PHASE
    second_phase: float = SECOND_PHASE

    @property
    def d(self) -> int:
        return self.point.d

    def unitary(self) -> np.ndarray:
        eye = np.eye(self.d)
        return (
            np.kron(eye, rotation(self.second_phase))
            @ conditional_displacement(self.point)
            @ np.kron(eye, rotation(self.first_phase))
        )

    def kraus(self) -> tuple[np.ndarray, np.ndarray]:
        """``M_j = <j| U |dn>`` as ``d x d`` operators on S, for j = up, dn."""
        u = self.unitary().reshape(self.d, 2, self.d, 2)
        return u[:, 1, :, 0], u[:, 0, :, 0]

    def povm(self) -> tuple[np.ndarray, np.ndarray]:
        m_up, m_dn = self.kraus()
        return m_up.conj().T @ m_up, m_dn.conj().T @ m_dn


def povm_elements(p: PhasePoint, **phases) -> tuple[np.ndarray, np.ndarray]:
    """``(E_up, E_dn)`` with ``E_up + E_dn = 1`` and ``E_up - E_dn = Q(p)/sqrt 2``."""
    return RamseyCircuit(p, **phases).povm()


def exact_probabilities(rho, p: PhasePoint) -> tuple[float, float]:
    m = rho.matrix if isinstance(rho, DensityMatrix) else DensityMatrix(rho).matrix
    if m.shape != (p.d, p.d):
        raise DimensionError(f"state of shape {m.shape} cannot be probed at a d={p.d} point")
    e_up, e_dn = povm_elements(p)
    p_up = float(np.real(np.sum(m * e_up.T)))
    p_dn = float(np.real(np.sum(m * e_dn.T)))
    for name, val in (("p_up", p_up), ("p_dn", p_dn)):
        if not -PROB_TOL <= val <= 1 + PROB_TOL:
            raise InconsistencyError(f"{name}={val!r} outside [0, 1]")
    if abs(p_up + p_dn - 1) > STRUCT_TOL:
        raise InconsistencyError(f"probabilities sum to {p_up + p_dn!r}")
    return p_up, p_dn


@dataclass(frozen=True)
class MeasurementRecord:
    point: PhasePoint
    shots: int
    count_up: int
    count_down: int
    seed: int | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise ValidationError(f"shots must be >= 1, got {self.shots}")
        if self.count_up < 0 or self.count_down < 0 or self.count_up + self.count_down != self.shots:
            raise ValidationError(
                f"counts {self.count_up} + {self.count_down} do not add up to shots={self.shots}"
            )


def point_rng(seed, p: PhasePoint) -> np.random.Generator:
    """Independent stream per ``(seed, point)`` so results don't depend on scheduling."""
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng(np.random.SeedSequence([int(seed), p.d, p.l, p.m]))


def sample_from_probability(p_up: float, p: PhasePoint, shots: int, seed=None) -> MeasurementRecord:
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    rng = point_rng(seed, p)
    up = int(rng.binomial(int(shots), min(max(p_up, 0.0), 1.0)))
    return MeasurementRecord(p, int(shots), up, int(shots) - up, seed)


def sample(rho, p: PhasePoint, shots: int, seed=None) -> MeasurementRecord:
    """Simulate ``shots`` Ramsey cycles; the up-count is binomial at ``p_up``."""
    p_up, _ = exact_probabilities(rho, p)
    return sample_from_probability(p_up, p, shots, seed)


def estimate(record: MeasurementRecord) -> float:
    """Unbiased estimate of ``<Q(p)>``: ``sqrt 2 (n_up - n_dn) / shots``."""
    return math.sqrt(2) * (record.count_up - record.count_down) / record.shots


def estimate_bloch(rho, shots_per_point: int | None, seed=None) -> BlochVector:
    """Bloch vector estimated point by point.

    ``shots_per_point=None`` returns the exact vector from the POVM
    probabilities (shot-noise free).
    """
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)
    if len(rho.parties) != 1:
        raise DimensionError("estimate_bloch works on a single party")
    d = rho.d
    if shots_per_point is None:
        comps = []
        for p in points(d, include_origin=False):
            p_up, p_dn = exact_probabilities(rho, p)
            comps.append(math.sqrt(2) * (p_up - p_dn))
        return BlochVector(d, np.array(comps))
    if shots_per_point < 1:
        raise ValidationError(f"shots_per_point must be >= 1, got {shots_per_point}")
    comps = [estimate(sample(rho, p, shots_per_point, seed)) for p in points(d, include_origin=False)]
    return BlochVector(d, np.array(comps))


def exact_bloch(rho) -> BlochVector:
    return decompose(rho)
