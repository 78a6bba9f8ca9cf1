"""Reference states, noise, and seeded random states.

Composite indices are big-endian: party 0 is the most significant factor,
so ``|j_0 j_1 ... >`` sits at index ``j_0 * d**(n-1) + ... + j_{n-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bloch import DensityMatrix
from .errors import ValidationError
from .numerics import kron


class StateKind:
    MAX_ENTANGLED = "max_entangled"
    GHZ = "ghz"
    MAX_MIXED = "max_mixed"
    PURE_KET = "pure_ket"
    ISOTROPIC_MIX = "isotropic_mix"

    ALL = (MAX_ENTANGLED, GHZ, MAX_MIXED, PURE_KET, ISOTROPIC_MIX)


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a reference state.

    ``isotropic_mix`` mixes the state described by ``base`` (or a GHZ state
    when ``base`` is None) with white noise at state fraction ``p``.
    """

    kind: str
    dims: tuple[int, ...] = (2,)
    p: float = 1.0
    ket: tuple[complex, ...] | None = None
    base: "StateSpec | None" = field(default=None)

    def __post_init__(self):
        if self.kind not in StateKind.ALL:
            raise ValidationError(f"unknown state kind {self.kind!r}")
        dims = tuple(int(x) for x in self.dims)
        if not dims or any(x < 2 for x in dims):
            raise ValidationError(f"dimensions must be >= 2, got {self.dims}")
        object.__setattr__(self, "dims", dims)
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"mixing fraction p={self.p} outside [0, 1]")
        if self.kind == StateKind.PURE_KET:
            if self.ket is None or len(self.ket) != int(np.prod(dims)):
                raise ValidationError("pure_ket needs ket amplitudes matching the total dimension")
            object.__setattr__(self, "ket", tuple(complex(a) for a in self.ket))
        if self.kind in (StateKind.MAX_ENTANGLED, StateKind.GHZ) and len(set(dims)) != 1:
            raise ValidationError(f"{self.kind} needs equal local dimensions, got {dims}")
        if self.kind == StateKind.MAX_ENTANGLED and len(dims) != 2:
            raise ValidationError("max_entangled is bipartite")
        if self.base is not None:
            if self.kind != StateKind.ISOTROPIC_MIX:
                raise ValidationError(f"only isotropic_mix takes a base state, not {self.kind}")
            if self.base.dims != dims:
                raise ValidationError(f"base dims {self.base.dims} differ from dims {dims}")
        elif self.kind == StateKind.ISOTROPIC_MIX and len(set(dims)) != 1:
            raise ValidationError(f"isotropic_mix without a base mixes a GHZ state and needs equal dims, got {dims}")

    def build(self) -> DensityMatrix:
        k = self.kind
        if k == StateKind.MAX_ENTANGLED:
            return max_entangled(self.dims[0])
        if k == StateKind.GHZ:
            return ghz(len(self.dims), self.dims[0])
        if k == StateKind.MAX_MIXED:
            return max_mixed(self.dims)
        if k == StateKind.PURE_KET:
            return pure_state(np.array(self.ket), self.dims)
        base = self.base.build() if self.base is not None else ghz(len(self.dims), self.dims[0])
        return isotropic_mix(base, self.p)


def pure_state(ket, dims: Sequence[int] | None = None) -> DensityMatrix:
    psi = np.asarray(ket, dtype=np.complex128).reshape(-1)
    nrm = np.linalg.norm(psi)
    if nrm == 0 or not np.isfinite(nrm):
        raise ValidationError("ket must be a finite nonzero vector")
    psi = psi / nrm
    return DensityMatrix(np.outer(psi, psi.conj()), tuple(dims) if dims else (psi.size,))


def ghz(n: int, d: int) -> DensityMatrix:
    """Projector onto ``(1/sqrt d) sum_j |j>^n``."""
    if n < 2 or d < 2:
        raise ValidationError(f"ghz needs n >= 2 and d >= 2, got n={n}, d={d}")
    step = sum(d**k for k in range(n))
    psi = np.zeros(d**n, dtype=np.complex128)
    psi[np.arange(d) * step] = 1 / np.sqrt(d)
    return DensityMatrix(np.outer(psi, psi.conj()), (d,) * n)


def max_entangled(d: int) -> DensityMatrix:
    """``|phi_d> = (1/sqrt d) sum_j |j>|j>``."""
    return ghz(2, d)


def max_mixed(dims: Sequence[int] | int) -> DensityMatrix:
    dims = (dims,) if isinstance(dims, (int, np.integer)) else tuple(dims)
    D = int(np.prod(dims))
    return DensityMatrix(np.eye(D) / D, dims)


def isotropic_mix(rho: DensityMatrix, p: float) -> DensityMatrix:
    """``p rho + (1 - p) 1/D``."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing fraction p={p} outside [0, 1]")
    D = rho.d
    return DensityMatrix(p * rho.matrix + (1 - p) * np.eye(D) / D, rho.parties)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_density_matrix(d: int, rank: int | None = None, seed=None) -> np.ndarray:
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise ValidationError(f"rank must be in [1, {d}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_density(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Hilbert-Schmidt-type random state ``G G^dagger / Tr`` with ``G`` a ``d x rank`` Gaussian."""
    return DensityMatrix(random_density_matrix(d, rank, seed))


def random_product_state(dims: Sequence[int], seed=None, rank: int | None = None) -> DensityMatrix:
    rng = _rng(seed)
    dims = tuple(int(x) for x in dims)
    locals_ = [random_density_matrix(x, rank if rank is None else min(rank, x), rng) for x in dims]
    return DensityMatrix(kron(*locals_), dims)


def random_separable_state(dims: Sequence[int], terms: int, seed=None) -> DensityMatrix:
    """Convex mixture of ``terms`` random product states with Dirichlet weights."""
    rng = _rng(seed)
    w = rng.dirichlet(np.ones(terms))
    mats = [random_product_state(dims, rng).matrix for _ in range(terms)]
    return DensityMatrix(sum(wi * m for wi, m in zip(w, mats)), tuple(dims))


def permute_parties(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder tensor factors: new party ``k`` is old party ``perm[k]``."""
    n = len(rho.parties)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValidationError(f"{perm} is not a permutation of {n} parties")
    t = rho.matrix.reshape(rho.parties + rho.parties)
    t = t.transpose(perm + [n + k for k in perm])
    new = tuple(rho.parties[k] for k in perm)
    D = rho.d
    return DensityMatrix(t.reshape(D, D), new)
