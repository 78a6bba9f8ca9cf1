"""Hand-transcribed reference matrices of Q(l, m) for d = 3 and d = 4.

These tables are typed in entry by entry from the published explicit
representation and are deliberately *not* generated by
:mod:`hwobs.hw_basis`; they serve as an independent golden reference.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

c = (1 + 1j) / 2
cs = c.conjugate()
w = cmath.exp(2j * math.pi / 3)
ws = w.conjugate()
r = 1 / math.sqrt(2)
i = 1j

_D3 = {
    (0, 0): [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    (0, 1): [[0, cs, c], [c, 0, cs], [cs, c, 0]],
    (0, 2): [[0, c, cs], [cs, 0, c], [c, cs, 0]],
    (1, 0): [[c + cs, 0, 0], [0, c * w + cs * ws, 0], [0, 0, c * ws + cs * w]],
    (1, 1): [[0, -cs * w, -c * w], [-c * ws, 0, -cs], [-cs * ws, -c, 0]],
    (1, 2): [[0, c * ws, cs * ws], [cs * w, 0, c], [c * w, cs, 0]],
    (2, 0): [[c + cs, 0, 0], [0, c * ws + cs * w, 0], [0, 0, c * w + cs * ws]],
    (2, 1): [[0, cs * ws, c * ws], [c * w, 0, cs], [cs * w, c, 0]],
    (2, 2): [[0, c * w, cs * w], [cs * ws, 0, c], [c * ws, cs, 0]],
}

_D4 = {
    (0, 0): [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    (0, 1): [[0, cs, 0, c], [c, 0, cs, 0], [0, c, 0, cs], [cs, 0, c, 0]],
    (0, 2): [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    (0, 3): [[0, c, 0, cs], [cs, 0, c, 0], [0, cs, 0, c], [c, 0, cs, 0]],
    (1, 0): [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
    (1, 1): [[0, -i * r, 0, r], [i * r, 0, -r, 0], [0, -r, 0, i * r], [r, 0, -i * r, 0]],
    (1, 2): [[0, 0, -i, 0], [0, 0, 0, i], [i, 0, 0, 0], [0, -i, 0, 0]],
    (1, 3): [[0, -i * r, 0, -r], [i * r, 0, r, 0], [0, r, 0, i * r], [-r, 0, -i * r, 0]],
    (2, 0): [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
    (2, 1): [[0, -c, 0, cs], [-cs, 0, c, 0], [0, cs, 0, -c], [c, 0, -cs, 0]],
    (2, 2): [[0, 0, -1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, 1, 0, 0]],
    (2, 3): [[0, -cs, 0, c], [-c, 0, cs, 0], [0, c, 0, -cs], [cs, 0, -c, 0]],
    (3, 0): [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
    (3, 1): [[0, -r, 0, -i * r], [-r, 0, -i * r, 0], [0, i * r, 0, r], [i * r, 0, r, 0]],
    (3, 2): [[0, 0, i, 0], [0, 0, 0, i], [-i, 0, 0, 0], [0, -i, 0, 0]],
    (3, 3): [[0, r, 0, -i * r], [r, 0, -i * r, 0], [0, i * r, 0, -r], [i * r, 0, -r, 0]],
}

TABLES = {3: _D3, 4: _D4}


def reference_matrix(d: int, l: int, m: int) -> np.ndarray:
    return np.array(TABLES[d][(l, m)], dtype=np.complex128)


def reference_points(d: int) -> list[tuple[int, int]]:
    return sorted(TABLES[d])


def compare(d: int, tol: float = 1e-12) -> list[tuple[tuple[int, int], float]]:
    """Max entrywise deviation of each constructed matrix from the table.

    Returns ``[(point, deviation), ...]`` for the points exceeding ``tol``.
    """
    from .hw_basis import Q

    if d not in TABLES:
        raise KeyError(f"no reference table for d={d}; available: {sorted(TABLES)}")
    bad = []
    for (l, m), ref in TABLES[d].items():
        dev = float(np.max(np.abs(Q(d, l, m) - np.array(ref, dtype=np.complex128))))
        if dev > tol:
            bad.append(((l, m), dev))
    return bad
