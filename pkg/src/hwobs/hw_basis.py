"""Clock/shift matrices, discrete displacements and Hermitian HW observables.

Conventions
-----------
- ``Z|j> = w^j |j>`` with ``w = exp(2 pi i / d)``; ``X|j> = |j+1 mod d>``.
- ``D(l, m) = Z^l X^m exp(-i pi l m / d)`` with ``(l, m)`` the canonical
  representatives in ``[0, d)``.
- ``Q(l, m) = chi D(l, m) + chi* D(l, m)^dagger`` with ``chi = (1 + i)/2``,
  so that ``Tr{Q(p) Q(p')} = d delta_{p,p'}`` and ``Q(0, 0) = 1``.
- Phase points map to amplitudes as ``alpha = sqrt(pi/d) (m + i l)``.

Because of the ``exp(-i pi l m / d)`` factor, ``D`` is *not* periodic in
``l`` or ``m`` with period ``d`` (it picks up a sign).  Points are therefore
always reduced to ``[0, d)`` before a matrix is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .numerics import SPECTRAL_TOL, hermitian_eigenvalues

CHI = (1 + 1j) / 2


def _check_dim(d) -> int:
    if isinstance(d, bool) or int(d) != d or int(d) < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


@dataclass(frozen=True, order=True)
class PhasePoint:
    """Grid point ``(l, m)`` of the discrete ``d x d`` phase space.

    Arbitrary integers are accepted and reduced mod ``d``.
    """

    d: int
    l: int
    m: int

    def __post_init__(self):
        d = _check_dim(self.d)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "l", int(self.l) % d)
        object.__setattr__(self, "m", int(self.m) % d)

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        if other.d != self.d:
            raise ValidationError(f"cannot add points of dimension {self.d} and {other.d}")
        return PhasePoint(self.d, self.l + other.l, self.m + other.m)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(self.d, -self.l, -self.m)

    @property
    def is_origin(self) -> bool:
        return self.l == 0 and self.m == 0

    @property
    def index(self) -> int:
        """Row-major position in :func:`full_basis` (origin is 0)."""
        return self.l * self.d + self.m

    def as_tuple(self) -> tuple[int, int]:
        return (self.l, self.m)

    def __str__(self) -> str:
        return f"({self.l},{self.m})"


def points(d: int, *, include_origin: bool = True) -> list[PhasePoint]:
    """All phase points in row-major ``(l, m)`` order."""
    d = _check_dim(d)
    pts = [PhasePoint(d, l, m) for l in range(d) for m in range(d)]
    return pts if include_origin else pts[1:]


def clock_matrix(d: int) -> np.ndarray:
    d = _check_dim(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def shift_matrix(d: int) -> np.ndarray:
    d = _check_dim(d)
    # column j has its 1 in row j+1 mod d
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


@lru_cache(maxsize=4096)
def _displacement(d: int, l: int, m: int) -> np.ndarray:
    j = np.arange(d)
    out = np.zeros((d, d), dtype=np.complex128)
    # Z^l X^m |j> = w^{l (j+m)} |j+m>
    out[(j + m) % d, j] = np.exp(2j * np.pi * l * ((j + m) % d) / d - 1j * np.pi * l * m / d)
    out.setflags(write=False)
    return out


def displacement(p: PhasePoint) -> np.ndarray:
    """Unitary displacement ``D(l, m)``; returns a fresh writable array."""
    return _displacement(p.d, p.l, p.m).copy()


@lru_cache(maxsize=4096)
def _observable_matrix(d: int, l: int, m: int) -> np.ndarray:
    if l == 0 and m == 0:
        q = np.eye(d, dtype=np.complex128)
    else:
        dm = _displacement(d, l, m)
        q = CHI * dm + np.conj(CHI) * dm.conj().T
    q.setflags(write=False)
    return q


@dataclass(frozen=True, eq=False)
class HWObservable:
    """A Hermitian HW observable together with its phase-space label.

    ``matrix == sign * Q(point)``.  ``sign`` is +1 for everything built by
    :func:`hw_observable`; it can be -1 for conjugated observables.
    """

    point: PhasePoint
    matrix: np.ndarray = field(repr=False)
    sign: int = 1

    @property
    def d(self) -> int:
        return self.point.d

    @property
    def amplitude(self) -> complex:
        return amplitude_of(self.point)

    def __repr__(self) -> str:
        s = "" if self.sign == 1 else "-"
        return f"HWObservable({s}Q{self.point}, d={self.d})"


def hw_observable(p: PhasePoint) -> HWObservable:
    return HWObservable(p, _observable_matrix(p.d, p.l, p.m))


def Q(d: int, l: int, m: int) -> np.ndarray:
    """Shorthand for the matrix of ``Q(l, m)`` in dimension ``d``."""
    p = PhasePoint(d, l, m)
    return _observable_matrix(p.d, p.l, p.m).copy()


def full_basis(d: int) -> list[HWObservable]:
    """All ``d**2`` observables, row-major in ``(l, m)``, identity first."""
    return [hw_observable(p) for p in points(d)]


def basis_stack(d: int, *, include_origin: bool = False) -> np.ndarray:
    """Observable matrices stacked into a ``(n, d, d)`` array."""
    return np.stack([_observable_matrix(p.d, p.l, p.m) for p in points(d, include_origin=include_origin)])


# -- amplitudes -------------------------------------------------------------

def amplitude_of(p: PhasePoint) -> complex:
    """``alpha = sqrt(pi/d) (m + i l)``."""
    s = math.sqrt(math.pi / p.d)
    return complex(s * p.m, s * p.l)


def phase_point_of(alpha: complex, d: int, *, tol: float = 1e-9) -> PhasePoint:
    """Inverse of :func:`amplitude_of`; integer coordinates are reduced mod ``d``.

    Raises ValidationError if ``alpha`` is not on the grid within ``tol``.
    """
    d = _check_dim(d)
    alpha = complex(alpha)
    s = math.sqrt(math.pi / d)
    m_f, l_f = alpha.real / s, alpha.imag / s
    m_i, l_i = round(m_f), round(l_f)
    if abs(m_f - m_i) > tol or abs(l_f - l_i) > tol:
        raise ValidationError(
            f"amplitude {alpha} is off the d={d} grid; nearest grid point is "
            f"(l={l_i % d}, m={m_i % d})"
        )
    return PhasePoint(d, l_i, m_i)


# -- spectrum ---------------------------------------------------------------

def spectrum(q: HWObservable | np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of an observable."""
    mat = q.matrix if isinstance(q, HWObservable) else q
    return hermitian_eigenvalues(mat)


def spectrum_magnitudes(d: int) -> np.ndarray:
    """Closed-form magnitudes ``sqrt(1 + sin(4 pi n / d))`` for ``n = 0..d-1``."""
    d = _check_dim(d)
    n = np.arange(d)
    return np.sqrt(np.clip(1.0 + np.sin(4 * np.pi * n / d), 0.0, None))


def q_max_squared(d: int) -> float:
    """``1 + max_n sin(4 pi n / d)``; ``n`` ranges over one period ``0..d-1``."""
    d = _check_dim(d)
    n = np.arange(d)
    return float(1.0 + np.max(np.sin(4 * np.pi * n / d)))


def q_max(d: int) -> float:
    return math.sqrt(q_max_squared(d))


def spectrum_in_formula_set(q: HWObservable, tol: float = SPECTRAL_TOL) -> bool:
    mags = np.abs(spectrum(q))
    allowed = spectrum_magnitudes(q.d)
    return bool(np.all(np.min(np.abs(mags[:, None] - allowed[None, :]), axis=1) <= tol))
