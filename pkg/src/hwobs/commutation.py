"""Commutation structure of HW observables in discrete phase space.

Two observables at ``p = (l, m)`` and ``p' = (l', m')`` satisfy
``D(p) D(p') = w^s D(p') D(p)`` with ``s = m' l - m l'``.  Hence

- ``s = 0 (mod d)``            -> commuting,
- ``2 s = d (mod 2 d)``        -> anticommuting (needs even ``d``),
- anything else                -> neither.

The classification is done in integer arithmetic; matrix norms are only
computed as a cross-check and stored in :attr:`PairRelation.residual`.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hw_basis import PhasePoint, _observable_matrix, amplitude_of, points
from .numerics import operator_infinity_norm

SEARCH_CEILING = 8
VERIFY_TOL = 1e-10


class Relation(enum.Enum):
    COMMUTING = "commuting"
    ANTICOMMUTING = "anticommuting"
    NEITHER = "neither"


@dataclass(frozen=True)
class PairRelation:
    kind: Relation
    cross: float
    residual: float


def cross_product(a: complex, b: complex) -> float:
    """``Im(a b*)``; for grid amplitudes this is ``(pi/d)(m' l - m l')``."""
    a, b = complex(a), complex(b)
    return a.imag * b.real - a.real * b.imag


def symplectic_form(p1: PhasePoint, p2: PhasePoint) -> int:
    """Integer ``m2 l1 - m1 l2`` on canonical representatives."""
    if p1.d != p2.d:
        raise ValidationError(f"points live in different dimensions ({p1.d} vs {p2.d})")
    s = p2.m * p1.l - p1.m * p2.l
    assert abs(s) <= (p1.d - 1) ** 2
    return s


def relation_kind(p1: PhasePoint, p2: PhasePoint) -> Relation:
    d = p1.d
    s = symplectic_form(p1, p2)
    if s % d == 0:
        return Relation.COMMUTING
    if (2 * s) % (2 * d) == d:
        return Relation.ANTICOMMUTING
    return Relation.NEITHER


def classify_pair(p1: PhasePoint, p2: PhasePoint) -> PairRelation:
    kind = relation_kind(p1, p2)
    q1 = _observable_matrix(p1.d, p1.l, p1.m)
    q2 = _observable_matrix(p2.d, p2.l, p2.m)
    if kind is Relation.ANTICOMMUTING:
        residual = operator_infinity_norm(q1 @ q2 + q2 @ q1)
    elif kind is Relation.COMMUTING:
        residual = operator_infinity_norm(q1 @ q2 - q2 @ q1)
    else:
        residual = min(
            operator_infinity_norm(q1 @ q2 + q2 @ q1),
            operator_infinity_norm(q1 @ q2 - q2 @ q1),
        )
    cross = abs(cross_product(amplitude_of(p1), amplitude_of(p2)))
    return PairRelation(kind, cross, residual)


def _anticommuting_adjacency(d: int) -> tuple[list[PhasePoint], np.ndarray]:
    pts = points(d, include_origin=False)
    n = len(pts)
    adj = np.zeros((n, n), dtype=bool)
    for i, j in itertools.combinations(range(n), 2):
        if relation_kind(pts[i], pts[j]) is Relation.ANTICOMMUTING:
            adj[i, j] = adj[j, i] = True
    return pts, adj


def _verified(ps) -> bool:
    mats = [_observable_matrix(p.d, p.l, p.m) for p in ps]
    return all(
        operator_infinity_norm(a @ b + b @ a) < VERIFY_TOL for a, b in itertools.combinations(mats, 2)
    )


def anticommuting_subsets(d: int, size: int) -> list[tuple[PhasePoint, ...]]:
    """Every pairwise-anticommuting subset of non-identity points of the given size.

    Exhaustive over all ``C(d**2 - 1, size)`` candidates, in lexicographic
    canonical order.
    """
    pts, adj = _anticommuting_adjacency(d)
    n = len(pts)
    if size < 1 or size > n:
        return []
    if size == 1:
        return [(p,) for p in pts]
    combos = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), size)),
        dtype=np.int64,
        count=math.comb(n, size) * size,
    ).reshape(-1, size)
    ok = np.ones(len(combos), dtype=bool)
    for a, b in itertools.combinations(range(size), 2):
        ok &= adj[combos[:, a], combos[:, b]]
    return [tuple(pts[i] for i in row) for row in combos[ok]]


def find_anticommuting_triples(d: int) -> list[tuple[PhasePoint, PhasePoint, PhasePoint]]:
    """All pairwise-anticommuting triples, each verified numerically."""
    triples = anticommuting_subsets(d, 3)
    for t in triples:
        if not _verified(t):
            raise AssertionError(f"triple {t} classified anticommuting but failed numeric check")
    return triples


def max_anticommuting_set_size(d: int, *, ceiling: int = SEARCH_CEILING) -> int:
    """Size of the largest pairwise-anticommuting set of non-identity observables.

    For odd ``d`` no pair anticommutes and the answer is 1 (a single
    observable is trivially such a set).  Quadruples are searched
    exhaustively; larger sets cannot exist if no quadruple does.
    """
    if int(d) != d or d < 2:
        raise ValidationError(f"dimension must be an integer >= 2, got {d!r}")
    if d > ceiling:
        raise ValidationError(f"d={d} exceeds the exhaustive-search ceiling {ceiling}")
    best = 1
    for size in (2, 3, 4):
        if anticommuting_subsets(d, size):
            best = size
        else:
            break
    if best == 4:
        raise AssertionError(f"found a pairwise-anticommuting quadruple for d={d}")
    return best


def anticommute(a: np.ndarray, b: np.ndarray, tol: float = VERIFY_TOL) -> bool:
    return operator_infinity_norm(a @ b + b @ a) < tol


def commute(a: np.ndarray, b: np.ndarray, tol: float = VERIFY_TOL) -> bool:
    return operator_infinity_norm(a @ b - b @ a) < tol
