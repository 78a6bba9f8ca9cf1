"""Dense complex-matrix helpers.

Everything here is a thin, validated layer over numpy.  Matrices are plain
``numpy.ndarray`` objects of dtype ``complex128``; the functions never mutate
their inputs.

Tolerances used throughout the package:

- structural checks (Hermiticity, unitarity, unit trace): ``STRUCT_TOL = 1e-10``
- spectral comparisons: ``SPECTRAL_TOL = 1e-9``
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

STRUCT_TOL = 1e-10
SPECTRAL_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a 2-D complex128 array, rejecting NaN/Inf."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains non-finite entries")
    return m


def _require_square(m: np.ndarray, what: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {m.shape}")


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    m = as_matrix(a)
    _require_square(m)
    return complex(np.trace(m))


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices; first factor is most significant."""
    if not factors:
        raise DimensionError("kron needs at least one factor")
    return reduce(np.kron, (as_matrix(f) for f in factors))


def frobenius_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product Tr{a^dagger b}."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a + b


def scale(c: complex, a) -> np.ndarray:
    return complex(c) * as_matrix(a)


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b + b @ a


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b - b @ a


def max_abs(a) -> float:
    """Entrywise max-norm."""
    return float(np.max(np.abs(np.asarray(a))))


def hermiticity_error(a) -> float:
    m = as_matrix(a)
    _require_square(m)
    return max_abs(m - m.conj().T)


def is_hermitian(a, tol: float = STRUCT_TOL) -> bool:
    return hermiticity_error(a) <= tol


def unitarity_error(a) -> float:
    m = as_matrix(a)
    _require_square(m)
    return max_abs(m.conj().T @ m - np.eye(m.shape[0]))


def hermitian_eigenvalues(a, *, vectors: bool = False, tol: float = STRUCT_TOL):
    """Ascending real eigenvalues of a Hermitian matrix.

    With ``vectors=True`` returns ``(values, vectors)`` where the columns of
    ``vectors`` are orthonormal eigenvectors.

    Raises ValidationError when ``max|a - a^dagger| > tol``.
    """
    m = as_matrix(a)
    _require_square(m)
    asym = hermiticity_error(m)
    if asym > tol:
        raise ValidationError(f"matrix is not Hermitian (max |a - a^dagger| = {asym:.3e})")
    h = 0.5 * (m + m.conj().T)
    if vectors:
        w, v = np.linalg.eigh(h)
        return w, v
    return np.linalg.eigvalsh(h)


def operator_infinity_norm(a) -> float:
    """Largest singular value (spectral norm)."""
    m = as_matrix(a)
    _require_square(m)
    if not np.any(m):
        return 0.0
    return float(np.linalg.norm(m, 2))


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every party not listed in ``keep``.

    ``dims`` are the local dimensions in big-endian order (party 0 is the
    most significant tensor factor).
    """
    m = as_matrix(m)
    dims = [int(x) for x in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionError(f"matrix shape {m.shape} does not match parties {dims}")
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep={keep} out of range for {n} parties")
    t = m.reshape(dims + dims)
    # trace out from the highest index down so axis numbers stay valid
    for p in reversed(range(n)):
        if p in keep:
            continue
        cur = t.ndim // 2
        t = np.trace(t, axis1=p, axis2=p + cur)
    kd = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(kd, kd)
