"""Packed representation, enumeration order, sampling, exact event counts."""

import math

import numpy as np
import pytest

from symsing import (
    GuardError,
    ProbabilityEstimate,
    ResidueVector,
    RngStream,
    SignMatrix,
    enumerate_symmetric,
    exact_event_probability,
    is_odd_prime,
    mat_vec_mod_q,
    next_valid_modulus,
    sample_symmetric,
    validate_modulus,
)
from symsing._bits import (
    packed_length,
    sample_words,
    splitmix64,
    splitmix64_array,
    tri_index,
    words_to_code,
)


def test_tri_index_is_row_major_upper_triangle():
    n = 5
    expected = 0
    for i in range(n):
        for j in range(i, n):
            assert tri_index(n, i, j) == expected
            expected += 1
    assert expected == packed_length(n)


def test_packed_code_zero_is_all_plus_one():
    m = SignMatrix(3, 0)
    assert (m.to_dense() == 1).all()


def test_most_significant_bit_is_entry_zero_zero():
    n = 3
    m = packed_length(n)
    mat = SignMatrix(n, 1 << (m - 1))
    assert mat.entry(0, 0) == -1
    dense = mat.to_dense()
    assert dense[0, 0] == -1
    assert (dense.sum() == n * n - 2)


def test_entry_reads_are_symmetric():
    mat = SignMatrix(4, 0b0110010011)
    dense = mat.to_dense()
    assert (dense == dense.T).all()
    for i in range(4):
        for j in range(4):
            assert mat.entry(i, j) == dense[i, j]


def test_from_rows_roundtrip():
    rows = [[1, -1, 1], [-1, -1, -1], [1, -1, 1]]
    mat = SignMatrix.from_rows(rows)
    assert mat.to_dense().tolist() == rows
    assert SignMatrix(3, mat.bits) == mat


def test_from_rows_rejects_asymmetry_and_bad_entries():
    with pytest.raises(ValueError):
        SignMatrix.from_rows([[1, 1], [-1, 1]])
    with pytest.raises(ValueError):
        SignMatrix.from_rows([[1, 0], [0, 1]])


def test_hex_serialisation_roundtrip():
    for n in (1, 3, 7):
        m = packed_length(n)
        code = (0x5A5A5A5A5A5A5A5A >> (64 - m)) & ((1 << m) - 1)
        mat = SignMatrix(n, code)
        text = mat.to_hex()
        assert len(text) == (m + 3) // 4
        assert SignMatrix.from_hex(n, text) == mat


def test_words_roundtrip_matches_code():
    mat = SignMatrix(6, 0b101100111010001011101)
    assert SignMatrix.from_words(6, mat.to_words()) == mat


def test_enumeration_is_complete_distinct_and_increasing():
    n = 3
    seen = [mat.bits for mat in enumerate_symmetric(n)]
    assert seen == sorted(seen)
    assert len(set(seen)) == 1 << packed_length(n)


def test_enumeration_range_partition():
    n = 3
    total = 1 << packed_length(n)
    first = [m.bits for m in enumerate_symmetric(n, 0, total // 2)]
    second = [m.bits for m in enumerate_symmetric(n, total // 2, total)]
    assert first + second == list(range(total))


def test_enumeration_guard():
    with pytest.raises(GuardError):
        list(enumerate_symmetric(8))


def test_splitmix_reference_values():
    # First outputs of the keyed stream; frozen so any change to the
    # generator or its counter offset is loud.
    assert splitmix64(0, 0) == 0xE220A8397B1DCDAF
    assert splitmix64(0, 1) == 0x6E789E6AA1B965F4
    assert splitmix64(0xFE12, 0) == splitmix64(0xFE12, 0)
    arr = splitmix64_array(0xFE12, np.arange(4, dtype=np.uint64))
    assert [int(x) for x in arr] == [splitmix64(0xFE12, k) for k in range(4)]


def test_sampling_is_a_pure_function_of_seed_and_index():
    a = sample_symmetric(6, RngStream(123, 41))
    b = sample_symmetric(6, RngStream(123, 41))
    c = sample_symmetric(6, RngStream(123, 42))
    d = sample_symmetric(6, RngStream(124, 41))
    assert a == b
    assert a != c
    assert a != d
    assert RngStream(123, 40).advanced(1) == RngStream(123, 41)


def test_sampling_matches_word_stream():
    n, seed, index = 5, 0xFE12, 7
    words = sample_words(seed, index, n)
    assert sample_symmetric(n, RngStream(seed, index)).bits == words_to_code(words, n)


def test_sample_entry_frequencies_are_balanced():
    # Law of large numbers at the bit level: the fraction of -1 entries
    # over 12000 draws of a 5x5 matrix stays within 4 sigma of 1/2.
    n, draws = 5, 12000
    m = packed_length(n)
    ones = 0
    for index in range(draws):
        code = sample_symmetric(n, RngStream(0xFE12, index)).bits
        ones += bin(code).count("1")
    frac = ones / (draws * m)
    sigma = 0.5 / math.sqrt(draws * m)
    assert abs(frac - 0.5) < 4 * sigma


def test_sample_matrices_hit_all_small_codes():
    # With 3 packed bits, 400 draws cover all 8 matrices and the counts
    # are nowhere near degenerate.
    counts = {}
    for index in range(400):
        code = sample_symmetric(2, RngStream(99, index)).bits
        counts[code] = counts.get(code, 0) + 1
    assert set(counts) == set(range(8))
    assert min(counts.values()) > 20


def test_mat_vec_mod_q_hand_example():
    mat = SignMatrix.from_rows([[1, -1], [-1, -1]])
    a = ResidueVector.of([1, 2], 5)
    # row 0: 1*1 + (-1)*2 = -1 = 4; row 1: (-1)*1 + (-1)*2 = -3 = 2
    assert mat_vec_mod_q(mat, a) == ResidueVector.of([4, 2], 5)


def test_mat_vec_linearity():
    rng = np.random.default_rng(5)
    q = 7
    for _ in range(25):
        mat = sample_symmetric(6, RngStream(1, int(rng.integers(0, 1000))))
        x = ResidueVector.of([int(t) for t in rng.integers(0, q, 6)], q)
        y = ResidueVector.of([int(t) for t in rng.integers(0, q, 6)], q)
        sx = mat_vec_mod_q(mat, x).as_array()
        sy = mat_vec_mod_q(mat, y).as_array()
        sxy = mat_vec_mod_q(mat, ResidueVector.of([int(t) for t in (x.as_array() + y.as_array()) % q], q)).as_array()
        assert ((sx + sy) % q == sxy).all()


def test_exact_event_probability_hand_case():
    # n=1: M = (+-1), a = (1) over q=3; M a is 1 or 2, never 0.
    one = ResidueVector.of([1], 3)
    zero = ResidueVector.zero(1, 3)
    res = exact_event_probability(1, 3, one, zero)
    assert res == ProbabilityEstimate(0.0, "enumeration", numerator=0, denominator=2)
    # and M a = a picks out exactly M = (+1)
    hit = exact_event_probability(1, 3, one, one)
    assert (hit.numerator, hit.denominator) == (1, 2)


def test_exact_event_probability_matches_direct_enumeration():
    n, q = 3, 3
    a = ResidueVector.of([1, 2, 1], q)
    v = ResidueVector.of([0, 1, 2], q)
    direct = sum(
        1
        for mat in enumerate_symmetric(n)
        if mat_vec_mod_q(mat, a) == v
    )
    res = exact_event_probability(n, q, a, v)
    assert res.numerator == direct
    assert res.denominator == 1 << packed_length(n)


def test_exact_event_probability_total_mass():
    # Summing the event count over all v recovers every matrix once.
    n, q = 2, 3
    a = ResidueVector.of([1, 1], q)
    total = 0
    for v0 in range(q):
        for v1 in range(q):
            total += exact_event_probability(n, q, a, ResidueVector.of([v0, v1], q)).numerator
    assert total == 1 << packed_length(n)


def test_is_odd_prime():
    assert [p for p in range(50) if is_odd_prime(p)] == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def test_validate_modulus_rejects_bad_inputs():
    for bad in (1, 2, 4, 9, 15):
        with pytest.raises(ValueError):
            validate_modulus(bad)
    validate_modulus(3)
    with pytest.raises(GuardError):
        validate_modulus(2305843009213693951)  # Mersenne prime above the 2**31 guard


def test_next_valid_modulus_frozen_values():
    assert next_valid_modulus(10_000, 0) == 101
    assert next_valid_modulus(100, 0) == 11
    assert next_valid_modulus(9, 5) == 3
    assert next_valid_modulus(2) == 3
    assert next_valid_modulus(1) == 3


def test_next_valid_modulus_is_odd_prime_and_scales():
    for n in (10, 1000, 10**6):
        for c in (0.0, 1.0, 2.0):
            q = next_valid_modulus(n, c)
            assert is_odd_prime(q)
            assert q >= max(3, round(math.sqrt(n) / math.log(n) ** c))


def test_dimension_and_code_validation():
    with pytest.raises(ValueError):
        SignMatrix(0, 0)
    with pytest.raises(ValueError):
        SignMatrix(65, 0)
    with pytest.raises(ValueError):
        SignMatrix(2, 8)  # needs 3 bits, 8 is out of range
    with pytest.raises(ValueError):
        ResidueVector.of([], 3)
    with pytest.raises(ValueError):
        ResidueVector(3, (3,))
