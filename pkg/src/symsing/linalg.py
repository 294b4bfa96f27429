"""Exact linear algebra for sign matrices: rank mod q, kernels, determinants.

Two independent singularity oracles are kept deliberately separate: the
rank over Z_q (row reduction with modular inverses) and the integer
determinant (fraction-free elimination, exact).  The enumeration scans
cross-check them against each other on every matrix they visit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import GuardError
from .matrices import ResidueVector, SignMatrix, validate_modulus

DET_DIMENSION_LIMIT = 12
KERNEL_LOG2_LIMIT = 20.0


@dataclass(frozen=True)
class RankResult:
    """Rank over Z_q plus the derived kernel data."""

    q: int
    rank: int
    nullity: int

    @property
    def kernel_size(self) -> int:
        """Number of kernel vectors, q**nullity, exact."""
        return self.q ** self.nullity


def rank_mod_q(matrix: SignMatrix, q: int) -> RankResult:
    """Rank of the matrix over Z_q."""
    validate_modulus(q)
    rank = _kernels.rank_mod(matrix.to_words(), matrix.n, q)
    return RankResult(q=q, rank=rank, nullity=matrix.n - rank)


def det_integer(matrix: SignMatrix) -> int:
    """Exact integer determinant.

    Guarded at n <= 12: the fraction-free intermediates are minors of a
    sign matrix, and by Hadamard's bound those fit comfortably in 64-bit
    words only up to that size.
    """
    if matrix.n > DET_DIMENSION_LIMIT:
        raise GuardError(
            f"integer determinant guard allows n <= {DET_DIMENSION_LIMIT}, got {matrix.n}"
        )
    return _kernels.det_bareiss(matrix.to_words(), matrix.n)


def is_singular(matrix: SignMatrix, mode: str = "rational", q: int | None = None) -> bool:
    """Singularity over the rationals (integer det) or over Z_q (rank)."""
    if mode == "rational":
        return det_integer(matrix) == 0
    if mode == "mod-q":
        if q is None:
            raise ValueError("mode 'mod-q' requires q")
        return rank_mod_q(matrix, q).nullity > 0
    raise ValueError(f"mode must be 'rational' or 'mod-q', got {mode!r}")


def _rref_mod(mat: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Z_q; returns (rref, pivot columns)."""
    m = mat.copy() % q
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), q - 2, q)) % q
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = (m[i] - m[i, c] * m[r]) % q
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def kernel_vectors(matrix: SignMatrix, q: int) -> Iterator[ResidueVector]:
    """All x with (matrix @ x) = 0 mod q, zero vector first.

    Enumerates q**nullity vectors by sweeping the free coordinates of the
    reduced row echelon form, so the count is guarded: nullity * log2(q)
    must stay at or below 20 (about a million vectors).
    """
    validate_modulus(q)
    n = matrix.n
    rref, pivots = _rref_mod(matrix.to_dense(), q)
    nullity = n - len(pivots)
    if nullity * math.log2(q) > KERNEL_LOG2_LIMIT + 1e-9:
        raise GuardError(
            f"kernel has q**{nullity} = {q}**{nullity} vectors; "
            f"the guard allows nullity * log2(q) <= {KERNEL_LOG2_LIMIT}"
        )
    free_cols = [c for c in range(n) if c not in pivots]
    free_block = rref[: len(pivots)][:, free_cols] if free_cols else None
    for assignment in itertools.product(range(q), repeat=len(free_cols)):
        x = np.zeros(n, dtype=np.int64)
        if free_cols:
            x[free_cols] = assignment
            back = (free_block @ np.array(assignment, dtype=np.int64)) % q
            for r, c in enumerate(pivots):
                x[c] = (-back[r]) % q
        yield ResidueVector(q, tuple(int(t) for t in x))
