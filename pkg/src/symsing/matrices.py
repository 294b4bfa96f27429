"""Symmetric sign matrices: packed representation, enumeration, sampling.

A symmetric n-by-n matrix with entries in {+1, -1} is stored as its
packed upper triangle (see ``symsing._bits`` for the exact layout).  The
packed integer, rendered as a zero-padded hex string, is the canonical
serialisation used in JSON output and failure reports.

Exhaustive enumeration walks packed codes in increasing order, so code 0
is the all +1 matrix and any contiguous code range corresponds to fixing
a high-bit prefix.  Sampling is counter-based: matrix ``index`` under
``seed`` is a pure function of (seed, index), which makes every draw
reproducible and lets disjoint index ranges be farmed out to threads
with no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from ._bits import (
    packed_length,
    sample_words,
    tri_index,
    words_to_code,
    code_to_words,
)
from .errors import GuardError

ENUM_BIT_LIMIT = 30
MAX_DIMENSION = 64
MODULUS_LIMIT = 1 << 31


def is_odd_prime(q: int) -> bool:
    """True when q is an odd prime (trial division; q stays desk-sized)."""
    if q < 3 or q % 2 == 0:
        return False
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def validate_modulus(q: int) -> None:
    """Reject moduli that are not odd primes in the supported range."""
    if not isinstance(q, int):
        raise ValueError(f"modulus must be an odd prime >= 3, got {q!r}")
    if q >= MODULUS_LIMIT:
        # Guard before primality: trial division on a huge q is itself
        # the heavy work the guard exists to refuse.
        raise GuardError(f"modulus {q} exceeds the 2**31 arithmetic guard")
    if not is_odd_prime(q):
        raise ValueError(f"modulus must be an odd prime >= 3, got {q!r}")


def next_valid_modulus(n: int, exponent: float = 2.0) -> int:
    """Smallest admissible odd prime >= round(sqrt(n) / log(n)**exponent).

    This is the natural modulus scale for dimension n: large enough that
    the union bound over residues stays summable, small enough that the
    cosine decay per non-vanishing pair is effective.  The result is
    floored at 3.  For n = 1 the logarithm vanishes and the bare square
    root is used.  Rounding is Python's round (banker's at .5 ties).
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if exponent < 0:
        raise ValueError(f"exponent must be >= 0, got {exponent}")
    denom = math.log(n) ** exponent if n >= 2 else 1.0
    target = max(3, round(math.sqrt(n) / denom))
    q = target if target % 2 == 1 else target + 1
    while not is_odd_prime(q):
        q += 2
    return q


def _check_dimension(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_DIMENSION:
        raise ValueError(f"dimension must be an integer in [1, {MAX_DIMENSION}], got {n!r}")


def _check_enumerable(n: int) -> None:
    m = packed_length(n)
    if m > ENUM_BIT_LIMIT:
        raise GuardError(
            f"enumeration needs 2**{m} matrices at n={n}; the guard allows at most 2**{ENUM_BIT_LIMIT}"
        )


@dataclass(frozen=True)
class SignMatrix:
    """Symmetric n-by-n matrix over {+1, -1}, packed into an integer."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        _check_dimension(self.n)
        m = packed_length(self.n)
        if not isinstance(self.bits, int) or not 0 <= self.bits < (1 << m):
            raise ValueError(f"packed code must lie in [0, 2**{m})")

    @property
    def packed_length(self) -> int:
        return packed_length(self.n)

    def entry(self, i: int, j: int) -> int:
        """Entry (i, j) as +1 or -1; symmetric, no orientation on (i, j)."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"entry ({i}, {j}) outside a {self.n}x{self.n} matrix")
        if i > j:
            i, j = j, i
        t = tri_index(self.n, i, j)
        bit = (self.bits >> (self.packed_length - 1 - t)) & 1
        return -1 if bit else 1

    def to_dense(self) -> np.ndarray:
        out = np.empty((self.n, self.n), dtype=np.int64)
        for i in range(self.n):
            for j in range(i, self.n):
                out[i, j] = out[j, i] = self.entry(i, j)
        return out

    def to_words(self) -> np.ndarray:
        """Little-endian 64-bit word form consumed by the kernels."""
        return code_to_words(self.bits, self.n)

    def to_hex(self) -> str:
        """Canonical hex serialisation, most significant bit = entry (0, 0)."""
        width = (self.packed_length + 3) // 4
        return format(self.bits, f"0{width}x")

    @classmethod
    def from_hex(cls, n: int, text: str) -> "SignMatrix":
        return cls(n, int(text, 16))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SignMatrix":
        n = len(rows)
        _check_dimension(n)
        code = 0
        m = packed_length(n)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("rows must form a square matrix")
            for j in range(n):
                if rows[i][j] not in (1, -1):
                    raise ValueError(f"entries must be +1 or -1, got {rows[i][j]!r}")
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix must be symmetric; ({i},{j}) breaks it")
                if i <= j and rows[i][j] == -1:
                    code |= 1 << (m - 1 - tri_index(n, i, j))
        return cls(n, code)

    @classmethod
    def from_words(cls, n: int, words) -> "SignMatrix":
        return cls(n, words_to_code(words, n))


@dataclass(frozen=True)
class ResidueVector:
    """Vector over Z_q with entries reduced to [0, q)."""

    q: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        validate_modulus(self.q)
        if len(self.entries) == 0:
            raise ValueError("vector must have at least one entry")
        if any(not isinstance(x, int) or not 0 <= x < self.q for x in self.entries):
            raise ValueError(f"entries must be integers reduced to [0, {self.q})")

    @classmethod
    def of(cls, values: Sequence[int], q: int) -> "ResidueVector":
        validate_modulus(q)
        return cls(q, tuple(int(x) % q for x in values))

    @classmethod
    def zero(cls, n: int, q: int) -> "ResidueVector":
        return cls.of([0] * n, q)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


@dataclass(frozen=True)
class RngStream:
    """Position in the counter-based sample stream for one seed."""

    seed: int
    index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")
        if self.index < 0:
            raise ValueError("index must be >= 0")

    def advanced(self, k: int) -> "RngStream":
        return RngStream(self.seed, self.index + k)


def enumerate_symmetric(n: int, start: int = 0, stop: int | None = None) -> Iterator[SignMatrix]:
    """Yield matrices for packed codes [start, stop) in increasing order."""
    _check_dimension(n)
    _check_enumerable(n)
    total = 1 << packed_length(n)
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise ValueError(f"code range [{start}, {stop}) outside [0, {total}]")
    for code in range(start, stop):
        yield SignMatrix(n, code)


def sample_symmetric(n: int, stream: RngStream) -> SignMatrix:
    """Matrix at ``stream.index`` of the counter-based stream for ``stream.seed``."""
    _check_dimension(n)
    words = sample_words(stream.seed, stream.index, n)
    return SignMatrix(n, words_to_code(words, n))


def mat_vec_mod_q(matrix: SignMatrix, a: ResidueVector) -> ResidueVector:
    """The product (matrix @ a) reduced mod a.q."""
    if a.n != matrix.n:
        raise ValueError(f"vector length {a.n} does not match dimension {matrix.n}")
    res = (matrix.to_dense() @ a.as_array()) % a.q
    return ResidueVector(a.q, tuple(int(x) for x in res))


@dataclass(frozen=True)
class ProbabilityEstimate:
    """A probability together with how it was obtained.

    Enumeration results carry the exact fraction (numerator over
    denominator); sampled results carry the sample count and a plug-in
    standard error instead.
    """

    probability: float
    method: str
    numerator: int | None = None
    denominator: int | None = None
    samples: int | None = None
    stderr: float | None = None


def exact_event_probability(n: int, q: int, a: ResidueVector, v: ResidueVector) -> ProbabilityEstimate:
    """Exact Pr[M a = v mod q] over all 2**(n(n+1)/2) symmetric sign matrices."""
    _check_dimension(n)
    _check_enumerable(n)
    validate_modulus(q)
    if a.q != q or v.q != q:
        raise ValueError("vector moduli must match q")
    if a.n != n or v.n != n:
        raise ValueError("vector lengths must match n")
    total = 1 << packed_length(n)
    hits = _kernels.matvec_match_count(n, q, 0, total, a.as_array(), v.as_array())
    return ProbabilityEstimate(
        probability=hits / total,
        method="enumeration",
        numerator=hits,
        denominator=total,
    )
