"""Anticommutativity bound and the entanglement witnesses built on it.

For a set of orthogonal Hermitian observables ``{lambda_i}`` and
``K >= (1/2) sqrt(sum_{i != j} <{lambda_i, lambda_j}>^2)`` the Bloch
coefficients ``c_i = <lambda_i> / Tr(lambda_i^2)`` obey

    sum_i c_i^2 <= (max_i <lambda_i^2> + K) / (min_i Tr(lambda_i^2))^2.

The pair sum runs over *ordered* pairs ``i != j`` (each unordered pair is
counted twice); this is the reading under which the bound is provably
sound.  ``pairs="unordered"`` is available for comparison only.

A witness is a list of product terms; its value on a state is the sum of
moduli of the term correlations.  On states that are product across a cut
``A|B`` the value is at most ``sqrt(bound_A * bound_B)`` where
``bound_X = max_i ||lambda_i||^2 + K_X`` for the local operator sets (for HW
observables normalized to ``d``).  Convexity extends this to all states that
are separable across the cut.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bloch import DensityMatrix, conjugate_observable, correlation
from .errors import DimensionError, ValidationError
from .hw_basis import HWObservable, PhasePoint, hw_observable
from .numerics import STRUCT_TOL, as_matrix, hermiticity_error, kron, operator_infinity_norm

ORTHO_TOL = 1e-9
VIOLATION_SLACK = 1e-9
# values this small are rounding noise of a zero witness value
ZERO_VALUE_TOL = 1e-12
PAIRS = ("ordered", "unordered")


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Hermitian, pairwise Frobenius-orthogonal observables with labels."""

    members: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        mats = tuple(as_matrix(m) for m in self.members)
        if mats:
            dim = mats[0].shape
            for k, m in enumerate(mats):
                if m.shape != dim or dim[0] != dim[1]:
                    raise DimensionError(f"member {k} has shape {m.shape}, expected square {dim}")
                herr = hermiticity_error(m)
                if herr > STRUCT_TOL:
                    raise ValidationError(f"member {k} is not Hermitian (asymmetry {herr:.3e})")
            for i, j in itertools.combinations(range(len(mats)), 2):
                ov = abs(np.vdot(mats[i], mats[j]))
                if ov > ORTHO_TOL:
                    raise ValidationError(f"members {i} and {j} are not orthogonal (|Tr| = {ov:.3e})")
        labels = tuple(self.labels) or tuple(f"#{k}" for k in range(len(mats)))
        if len(labels) != len(mats):
            raise ValidationError("labels and members differ in length")
        object.__setattr__(self, "members", mats)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_points(cls, pts: Sequence[PhasePoint]) -> "ObservableSet":
        return cls(tuple(hw_observable(p).matrix for p in pts), tuple(f"Q{p}" for p in pts))

    @classmethod
    def from_observables(cls, obs: Sequence[HWObservable]) -> "ObservableSet":
        return cls(tuple(o.matrix for o in obs), tuple(repr(o) for o in obs))

    def __len__(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    @property
    def norms(self) -> np.ndarray:
        """``Tr(lambda_i^2)`` per member."""
        return np.array([np.vdot(m, m).real for m in self.members])

    @property
    def normalization(self) -> float:
        """Smallest ``Tr(lambda_i^2)``; equals ``d`` for an HW set."""
        return float(self.norms.min())


def _pairs(n: int, pairs: str):
    if pairs not in PAIRS:
        raise ValidationError(f"pairs must be one of {PAIRS}, got {pairs!r}")
    return itertools.permutations(range(n), 2) if pairs == "ordered" else itertools.combinations(range(n), 2)


def _state_matrix(rho, dim: int) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else DensityMatrix(rho).matrix
    if m.shape != (dim, dim):
        raise DimensionError(f"state of shape {m.shape} vs observables of dimension {dim}")
    return m


def k_exact(rho, obs: ObservableSet, *, pairs: str = "ordered") -> float:
    """``(1/2) sqrt(sum_{i != j} Tr{rho {l_i, l_j}}^2)`` for a given state."""
    r = _state_matrix(rho, obs.dim)
    ms = obs.members
    total = 0.0
    for i, j in _pairs(len(ms), pairs):
        ac = ms[i] @ ms[j] + ms[j] @ ms[i]
        total += float(np.real(np.sum(r * ac.T))) ** 2
    return 0.5 * math.sqrt(total)


def anticommutator_norms(obs: ObservableSet) -> np.ndarray:
    """Symmetric matrix of ``||{l_i, l_j}||_inf`` (diagonal left at 0)."""
    n = len(obs)
    out = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        a, b = obs.members[i], obs.members[j]
        out[i, j] = out[j, i] = operator_infinity_norm(a @ b + b @ a)
    return out


def k_opnorm(obs: ObservableSet, *, pairs: str = "ordered") -> float:
    """State-independent ``(1/2) sqrt(sum_{i != j} ||{l_i, l_j}||_inf^2)``."""
    norms = anticommutator_norms(obs)
    return 0.5 * math.sqrt(sum(norms[i, j] ** 2 for i, j in _pairs(len(obs), pairs)))


def theorem_bound(obs: ObservableSet, rho=None, *, pairs: str = "ordered") -> float:
    """Upper bound on ``sum_i c_i^2``.

    With a state, uses ``max_i <l_i^2>`` and :func:`k_exact`; without one,
    the worst case ``max_i ||l_i^2||_inf`` and :func:`k_opnorm`.
    """
    if len(obs) == 0:
        raise ValidationError("theorem_bound needs a non-empty observable set")
    if rho is None:
        top = max(operator_infinity_norm(m @ m) for m in obs.members)
        k = k_opnorm(obs, pairs=pairs)
    else:
        r = _state_matrix(rho, obs.dim)
        top = max(float(np.real(np.sum(r * (m @ m).T))) for m in obs.members)
        k = k_exact(r, obs, pairs=pairs)
    return (top + k) / obs.normalization**2


def expectation_bound(obs: ObservableSet, rho=None, *, pairs: str = "ordered") -> float:
    """Upper bound on ``sum_i <l_i>^2``.

    ``<l_i> = c_i Tr(l_i^2)``, so the coefficient bound is scaled by
    ``(max_i Tr(l_i^2))^2``.  For HW sets this is ``q_max^2 + K``.
    """
    return theorem_bound(obs, rho, pairs=pairs) * float(obs.norms.max()) ** 2


def build_separable_bound(set_a: ObservableSet, set_b: ObservableSet, *, pairs: str = "ordered") -> float:
    """Bound on ``sum_i |<a_i x b_i>|`` over states separable across ``A|B``."""
    if len(set_a) == 0 or len(set_b) == 0:
        raise ValidationError("both observable sets must be non-empty")
    if len(set_a) != len(set_b):
        raise ValidationError(f"sets pair up term by term; sizes {len(set_a)} and {len(set_b)} differ")
    return math.sqrt(expectation_bound(set_a, pairs=pairs) * expectation_bound(set_b, pairs=pairs))


# -- witnesses --------------------------------------------------------------

class BoundKind:
    SEPARABLE = "separable"
    BISEPARABLE = "biseparable"
    ALL = (SEPARABLE, BISEPARABLE)


@dataclass(frozen=True)
class WitnessSpec:
    """A sum-of-moduli witness stored as data.

    ``terms[k][party]`` is an ``(l, m)`` label of an HW observable on that
    party or ``None`` for the identity.
    """

    parties: tuple[int, ...]
    terms: tuple[tuple, ...]
    bound: float
    bound_kind: str = BoundKind.SEPARABLE
    name: str = ""
    metadata: dict = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self):
        parties = tuple(int(x) for x in self.parties)
        if not parties or any(x < 2 for x in parties):
            raise ValidationError(f"local dimensions must be >= 2, got {self.parties}")
        if not self.terms:
            raise ValidationError("witness has no terms")
        norm_terms = []
        for k, term in enumerate(self.terms):
            if len(term) != len(parties):
                raise DimensionError(f"term {k} has {len(term)} factors for {len(parties)} parties")
            row = []
            for lab in term:
                if lab is None:
                    row.append(None)
                else:
                    l, m = (int(v) for v in lab)
                    row.append((l, m))
            norm_terms.append(tuple(row))
        if not (isinstance(self.bound, (int, float)) and math.isfinite(self.bound) and self.bound > 0):
            raise ValidationError(f"bound must be a positive finite number, got {self.bound!r}")
        if self.bound_kind not in BoundKind.ALL:
            raise ValidationError(f"bound_kind must be one of {BoundKind.ALL}")
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "terms", tuple(norm_terms))
        object.__setattr__(self, "bound", float(self.bound))

    def term_operators(self, k: int) -> list:
        """Per-party operators of term ``k`` (``None`` = identity)."""
        return [
            None if lab is None else hw_observable(PhasePoint(d, *lab))
            for lab, d in zip(self.terms[k], self.parties)
        ]

    def cut_sets(self, side: Sequence[int]) -> tuple[ObservableSet, ObservableSet]:
        """Observable sets on each side of the cut ``side | rest``."""
        side = sorted(set(side))
        rest = [k for k in range(len(self.parties)) if k not in side]
        if not side or not rest:
            raise ValidationError("a cut needs parties on both sides")

        def block(k, group):
            ops = self.term_operators(k)
            mats = [np.eye(self.parties[p]) if ops[p] is None else ops[p].matrix for p in group]
            label = "x".join("1" if self.terms[k][p] is None else "Q(%d,%d)" % self.terms[k][p] for p in group)
            return kron(*mats), label

        a = [block(k, side) for k in range(len(self.terms))]
        b = [block(k, rest) for k in range(len(self.terms))]
        return (
            ObservableSet(tuple(m for m, _ in a), tuple(s for _, s in a)),
            ObservableSet(tuple(m for m, _ in b), tuple(s for _, s in b)),
        )


@dataclass(frozen=True)
class WitnessReport:
    value: float
    bound: float
    violated: bool
    noise_threshold: float
    tolerable_noise: float
    term_values: tuple[float, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.violated != (self.value > self.bound + VIOLATION_SLACK):
            raise ValidationError(
                f"violated={self.violated} is inconsistent with value {self.value!r} and bound {self.bound!r}"
            )


def witness_terms_values(rho, spec: WitnessSpec) -> list[float]:
    rho = rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho, spec.parties)
    if tuple(rho.parties) != spec.parties:
        if rho.d != int(np.prod(spec.parties)):
            raise DimensionError(f"state parties {rho.parties} do not match witness parties {spec.parties}")
        rho = DensityMatrix(rho.matrix, spec.parties)
    return [correlation(rho, spec.term_operators(k)) for k in range(len(spec.terms))]


def evaluate_witness(rho, spec: WitnessSpec) -> WitnessReport:
    """Sum of moduli of term correlations compared with the spec's bound.

    ``noise_threshold`` is the critical state fraction ``p = bound / value``
    of ``p rho + (1 - p) 1/D`` (terms are traceless, so the value scales
    linearly in ``p``); ``tolerable_noise = 1 - noise_threshold``.  A value
    below ``ZERO_VALUE_TOL`` counts as zero and gives an infinite threshold.
    """
    vals = witness_terms_values(rho, spec)
    value = float(sum(abs(v) for v in vals))
    p_crit = spec.bound / value if value > ZERO_VALUE_TOL else math.inf
    return WitnessReport(
        value=value,
        bound=spec.bound,
        violated=value > spec.bound + VIOLATION_SLACK,
        noise_threshold=p_crit,
        tolerable_noise=1.0 - p_crit if math.isfinite(p_crit) else -math.inf,
        term_values=tuple(vals),
        name=spec.name,
    )


def symmetrized_terms(terms: Sequence[Sequence]) -> list[tuple]:
    """All distinct party permutations of each term, in first-seen order."""
    out: list[tuple] = []
    seen = set()
    for term in terms:
        for perm in itertools.permutations(tuple(term)):
            if perm not in seen:
                seen.add(perm)
                out.append(perm)
    return out


def conjugate_pair_terms(pts: Sequence[PhasePoint]) -> list[tuple]:
    """Bipartite terms ``Q(p) x Q(p)*`` (labels only; moduli ignore the sign)."""
    out = []
    for p in pts:
        c = conjugate_observable(hw_observable(p)).point
        out.append((p.as_tuple(), c.as_tuple()))
    return out
