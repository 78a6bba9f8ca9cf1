"""Bloch vectors in the HW observable basis.

A single-party state is encoded as the ``d**2 - 1`` real numbers
``<Q(l, m)> = Tr{rho Q(l, m)}`` in row-major ``(l, m)`` order, skipping the
origin, and decoded with ``rho = (1/d)(1 + sum_p v[p] Q(p))``.

The generalized Gell-Mann family is provided for comparison.  It uses the
textbook normalization ``Tr{lambda_a lambda_b} = 2 delta_ab``, whereas HW
observables are normalized to ``d``; correlation values in the two bases are
therefore not directly comparable without rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .hw_basis import HWObservable, PhasePoint, basis_stack, hw_observable
from .numerics import STRUCT_TOL, SPECTRAL_TOL, as_matrix, hermiticity_error, kron

PSD_TOL = SPECTRAL_TOL


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density operator on ``prod(parties)`` dimensions.

    ``parties`` lists the local dimensions, most significant factor first.
    Construction checks Hermiticity and unit trace; positivity is checked
    unless ``check_psd=False`` (used for reconstructions of arbitrary Bloch
    vectors, which may leave the state space).
    """

    matrix: np.ndarray = field(repr=False)
    parties: tuple[int, ...] = ()
    check_psd: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        parties = tuple(int(x) for x in self.parties) or (m.shape[0],)
        if int(np.prod(parties)) != m.shape[0]:
            raise DimensionError(f"parties {parties} do not multiply to {m.shape[0]}")
        if any(x < 2 for x in parties):
            raise DimensionError(f"every local dimension must be >= 2, got {parties}")
        problems = []
        herr = hermiticity_error(m)
        if herr > STRUCT_TOL:
            problems.append(f"not Hermitian (max |rho - rho^dagger| = {herr:.3e})")
        tr = np.trace(m)
        if abs(tr - 1) > STRUCT_TOL:
            problems.append(f"trace is {tr.real:.12g}{tr.imag:+.3g}j, not 1")
        if self.check_psd and not problems:
            lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
            if lo < -PSD_TOL:
                problems.append(f"not positive semidefinite (min eigenvalue {lo:.3e})")
        if problems:
            raise ValidationError("invalid density matrix: " + "; ".join(problems))
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "parties", parties)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))[0])

    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))

    def expectation(self, op) -> float:
        """Real part of ``Tr{rho op}`` (``op`` assumed Hermitian)."""
        op = op.matrix if isinstance(op, HWObservable) else as_matrix(op)
        if op.shape != self.matrix.shape:
            raise DimensionError(f"operator shape {op.shape} vs state shape {self.matrix.shape}")
        return float(np.real(np.sum(self.matrix * op.T)))


@dataclass(frozen=True, eq=False)
class BlochVector:
    d: int
    components: np.ndarray

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=np.float64).reshape(-1)
        if comps.shape[0] != self.d * self.d - 1:
            raise DimensionError(f"Bloch vector for d={self.d} needs {self.d ** 2 - 1} components, got {comps.shape[0]}")
        if not np.all(np.isfinite(comps)):
            raise ValidationError("Bloch vector has non-finite components")
        comps = comps.copy()
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    def __getitem__(self, p: PhasePoint) -> float:
        if p.d != self.d or p.is_origin:
            raise KeyError(p)
        return float(self.components[p.index - 1])

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BlochVector)
            and other.d == self.d
            and np.array_equal(other.components, self.components)
        )


def _as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def decompose(rho) -> BlochVector:
    """HW Bloch vector of a single-party state."""
    rho = _as_state(rho)
    if len(rho.parties) != 1:
        raise DimensionError(f"decompose expects a single party, got parties {rho.parties}")
    qs = basis_stack(rho.d)
    vals = np.einsum("ij,kji->k", rho.matrix, qs)
    imag = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if imag > STRUCT_TOL:
        raise ValidationError(f"Bloch components have imaginary residue {imag:.3e}")
    return BlochVector(rho.d, vals.real)


def reconstruct_matrix(v: BlochVector) -> np.ndarray:
    qs = basis_stack(v.d)
    return (np.eye(v.d) + np.tensordot(v.components, qs, axes=1)) / v.d


def reconstruct(v: BlochVector) -> DensityMatrix:
    """``(1/d)(1 + sum v[p] Q(p))``; positivity is not enforced.

    Use :meth:`DensityMatrix.min_eigenvalue` to see whether the result is a
    physical state.
    """
    return DensityMatrix(reconstruct_matrix(v), check_psd=False)


def _op_matrix(op, dim: int) -> np.ndarray:
    if op is None:
        return np.eye(dim)
    m = op.matrix if isinstance(op, HWObservable) else as_matrix(op)
    if m.shape != (dim, dim):
        raise DimensionError(f"operator of shape {m.shape} does not act on a d={dim} party")
    return m


def correlation(rho, ops: Sequence) -> float:
    """``Tr{rho (op_1 x op_2 x ...)}``.

    ``ops`` has one entry per party: an :class:`HWObservable`, a matrix, or
    ``None`` for the identity.
    """
    rho = _as_state(rho)
    if len(ops) != len(rho.parties):
        raise DimensionError(f"{len(ops)} operators given for {len(rho.parties)} parties")
    mats = [_op_matrix(op, dim) for op, dim in zip(ops, rho.parties)]
    val = np.sum(rho.matrix * kron(*mats).T)
    if abs(val.imag) > SPECTRAL_TOL:
        raise ValidationError(f"correlation has imaginary part {val.imag:.3e}; operators not Hermitian?")
    return float(val.real)


def conjugate_observable(q: HWObservable) -> HWObservable:
    """Entrywise complex conjugate, relabelled.

    ``Q(l, m)* = s Q(l, -m)`` with ``s = (-1)**l`` when ``m != 0`` and ``s = 1``
    otherwise; the sign comes from reducing ``-m`` into ``[0, d)``.
    """
    p = q.point
    label = PhasePoint(p.d, p.l, -p.m)
    flip = -1 if (p.m != 0 and p.l % 2 == 1) else 1
    mat = np.conj(q.matrix)
    mat.setflags(write=False)
    return HWObservable(label, mat, sign=q.sign * flip)


def gell_mann_basis(d: int) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices: symmetric, antisymmetric, then diagonal.

    Normalized so that ``Tr{l_a l_b} = 2 delta_ab``.
    """
    if int(d) != d or d < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = s[k, j] = 1
            sym.append(s)
            a = np.zeros((d, d), dtype=np.complex128)
            a[j, k], a[k, j] = -1j, 1j
            anti.append(a)
    for l in range(1, d):
        g = np.zeros((d, d), dtype=np.complex128)
        g[np.arange(l), np.arange(l)] = 1
        g[l, l] = -l
        diag.append(g * np.sqrt(2 / (l * (l + 1))))
    return sym + anti + diag


def hw_pair_correlations(rho, d: int) -> np.ndarray:
    """``<Q(p) x Q(p)*>`` for every non-origin point ``p`` of a bipartite state."""
    out = []
    for q in (hw_observable(p) for p in _nonorigin(d)):
        out.append(correlation(rho, [q, conjugate_observable(q).matrix]))
    return np.array(out)


def ggm_pair_correlations(rho, d: int) -> np.ndarray:
    """``<l x l*>`` for every generalized Gell-Mann matrix ``l``."""
    return np.array([correlation(rho, [g, np.conj(g)]) for g in gell_mann_basis(d)])


def _nonorigin(d: int):
    return [PhasePoint(d, l, m) for l in range(d) for m in range(d) if (l, m) != (0, 0)]
