#!/usr/bin/env python3
"""
Test LDPC codes: construction, alist I/O, systematic encoding and the
syndrome-target BP and bit-flipping decoders.

Usage:
    pytest tests/test_ldpc.py -v
"""

import os
import sys

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cvqkd.codes.ldpc import (
    ParityCheckMatrix,
    construct_regular,
    decode_bf,
    decode_bp,
    encode,
    example_matrix_10_5,
    load_alist,
    save_alist,
    syndrome,
)
from cvqkd.core.constants import db_to_linear
from cvqkd.core.errors import AlistParseError, EncodingSetupError, ParameterError
from cvqkd.core.rng import random_bits, stream_for


def _encodable(n, seed):
    for offset in range(16):
        H = construct_regular(n, 3, 6, seed=seed + offset)
        try:
            H.encoder
        except EncodingSetupError:
            continue
        return H
    pytest.fail("no full-rank matrix found")


@pytest.fixture(scope="module")
def code_1024():
    return _encodable(1024, seed=1)


@pytest.fixture(scope="module")
def code_96():
    return construct_regular(96, 3, 6, seed=5)


def _channel_llr(bits, snr, rng):
    received = (1.0 - 2.0 * bits) + rng.standard_normal(bits.size) / np.sqrt(snr)
    return 2.0 * snr * received


class TestConstruction:
    """Test progressive edge-growth construction."""

    def test_small_profile(self):
        H = construct_regular(10, 2, 4, seed=0)
        dense = H.to_dense()
        assert dense.shape == (5, 10)
        assert H.rate == pytest.approx(0.5)
        assert set(dense.sum(axis=0)) == {2}
        assert set(dense.sum(axis=1)) == {4}

    def test_regular_1024(self, code_1024):
        assert (code_1024.n_rows, code_1024.n_cols) == (512, 1024)
        assert (code_1024.d_v, code_1024.d_c) == (3, 6)
        assert code_1024.n_edges == 3 * 1024
        assert code_1024.girth_at_least_six()

    def test_deterministic_given_seed(self):
        assert construct_regular(120, 3, 6, seed=9) == construct_regular(120, 3, 6, seed=9)

    def test_infeasible_degrees(self):
        with pytest.raises(ParameterError):
            construct_regular(10, 3, 6, seed=0)
        with pytest.raises(ParameterError):
            construct_regular(12, 4, 3, seed=0)

    def test_duplicate_adjacency_rejected(self):
        with pytest.raises(ParameterError):
            ParityCheckMatrix(n_rows=1, n_cols=4, check_neighbors=(np.array([0, 0, 1]),))

    def test_out_of_range_adjacency_rejected(self):
        with pytest.raises(ParameterError):
            ParityCheckMatrix(n_rows=1, n_cols=4, check_neighbors=(np.array([0, 4]),))


class TestAlist:
    """Test alist parsing and writing."""

    def test_round_trip(self, code_96):
        assert load_alist(save_alist(code_96)) == code_96

    def test_example_matrix(self):
        H = example_matrix_10_5()
        loaded = load_alist(save_alist(H))
        np.testing.assert_array_equal(loaded.to_dense(), H.to_dense())
        assert (loaded.d_v, loaded.d_c) == (2, 4)

    def test_zero_padding_ignored(self):
        text = "3 2\n1 2\n1 1 1\n2 1\n1\n1\n2\n1 2\n3 0\n"
        H = load_alist(text)
        np.testing.assert_array_equal(H.to_dense(), [[1, 1, 0], [0, 0, 1]])

    def test_truncated_file(self, code_96):
        lines = save_alist(code_96).splitlines()
        with pytest.raises(AlistParseError) as excinfo:
            load_alist("\n".join(lines[:-3]))
        assert excinfo.value.line_number == len(lines) - 2

    def test_out_of_range_index(self):
        text = "2 1\n1 2\n1 1\n2\n1\n2\n1 3\n"
        with pytest.raises(AlistParseError, match="out of range"):
            load_alist(text)

    def test_non_integer_token(self):
        with pytest.raises(AlistParseError) as excinfo:
            load_alist("2 1\n1 x\n")
        assert excinfo.value.line_number == 2
        assert excinfo.value.to_dict()["error_code"] == "ALIST_PARSE_ERROR"


class TestSyndromeAndEncoding:
    """Test the GF(2) syndrome and the systematic encoder."""

    def test_zero_bits(self):
        H = example_matrix_10_5()
        assert not syndrome(np.zeros(10, dtype=np.uint8), H).any()

    def test_unit_vector_selects_column(self):
        H = example_matrix_10_5()
        e1 = np.zeros(10, dtype=np.uint8)
        e1[0] = 1
        assert syndrome(e1, H).tolist() == [1, 1, 0, 0, 0]

    def test_linearity(self, code_96):
        rng = stream_for(21)
        a, b = random_bits(rng, 96), random_bits(rng, 96)
        np.testing.assert_array_equal(
            syndrome(a ^ b, code_96), syndrome(a, code_96) ^ syndrome(b, code_96)
        )

    def test_length_mismatch(self, code_96):
        with pytest.raises(ParameterError):
            syndrome(np.zeros(95, dtype=np.uint8), code_96)

    def test_codewords_have_zero_syndrome(self, code_1024):
        rng = stream_for(22)
        encoder = code_1024.encoder
        assert not encode(np.zeros(encoder.k, dtype=np.uint8), code_1024).any()
        for _ in range(20):
            info = random_bits(rng, encoder.k)
            codeword = encode(info, code_1024)
            assert not syndrome(codeword, code_1024).any()
            np.testing.assert_array_equal(encoder.extract_info(codeword), info)
            np.testing.assert_array_equal(codeword[encoder.systematic_positions], info)

    def test_rank_deficient_rejected(self):
        # every column has weight 2, so the five rows sum to zero
        H = example_matrix_10_5()
        with pytest.raises(EncodingSetupError) as excinfo:
            H.encoder
        assert excinfo.value.rank == 4
        assert excinfo.value.rows == 5

    def test_wrong_info_length(self, code_1024):
        with pytest.raises(ParameterError):
            encode(np.zeros(3, dtype=np.uint8), code_1024)


class TestBeliefPropagation:
    """Test the syndrome-target sum-product decoder."""

    def test_clean_codeword_converges_immediately(self, code_1024):
        codeword = encode(random_bits(stream_for(23), code_1024.encoder.k), code_1024)
        outcome = decode_bp(8.0 * (1.0 - 2.0 * codeword), code_1024)
        assert outcome.converged
        assert outcome.iterations_used == 0
        np.testing.assert_array_equal(outcome.bits, codeword)

    def test_clean_word_with_its_syndrome(self, code_96):
        b = random_bits(stream_for(24), 96)
        outcome = decode_bp(4.0 * (1.0 - 2.0 * b), code_96, syndrome(b, code_96))
        assert outcome.converged and outcome.iterations_used == 0
        np.testing.assert_array_equal(outcome.bits, b)

    def test_degree_one_check(self):
        # check 0 touches only variable 0, so its outgoing message has no other inputs
        H = load_alist(save_alist(ParityCheckMatrix.from_dense([[1, 0, 0], [1, 1, 0], [0, 1, 1]])))
        x = np.array([0, 1, 1], dtype=np.uint8)
        target = syndrome(x, H)
        np.testing.assert_array_equal(target, [0, 1, 0])
        for wrong in (-0.5, -2.0):
            outcome = decode_bp(np.array([wrong, -4.0, -4.0]), H, target)
            assert outcome.converged
            assert outcome.iterations_used == 1
            np.testing.assert_array_equal(outcome.bits, x)

    def test_rejects_bad_shapes(self, code_96):
        with pytest.raises(ParameterError):
            decode_bp(np.zeros(95), code_96)
        with pytest.raises(ParameterError):
            decode_bp(np.zeros(96), code_96, np.zeros(3, dtype=np.uint8))
        with pytest.raises(ParameterError):
            decode_bp(np.zeros(96), code_96, max_iter=0)

    def test_converged_implies_syndrome_match(self, code_96):
        rng = stream_for(25)
        snr = db_to_linear(1.0)
        for _ in range(50):
            b = random_bits(rng, 96)
            target = syndrome(b, code_96)
            outcome = decode_bp(_channel_llr(b, snr, rng), code_96, target, max_iter=20)
            if outcome.converged:
                np.testing.assert_array_equal(syndrome(outcome.bits, code_96), target)

    def test_syndrome_decoding_waterfall(self, code_1024):
        rng = stream_for(26)
        snr = db_to_linear(2.2)
        trials = 300
        successes = 0
        for _ in range(trials):
            b = random_bits(rng, 1024)
            outcome = decode_bp(_channel_llr(b, snr, rng), code_1024, syndrome(b, code_1024))
            successes += np.array_equal(outcome.bits, b)
        assert successes / trials >= 0.9

    def test_coset_symmetry_is_exact(self, code_1024):
        """Decoding b against its syndrome mirrors decoding 0 with flipped LLRs."""
        rng = stream_for(27)
        snr = db_to_linear(1.6)
        for _ in range(100):
            b = random_bits(rng, 1024)
            noise = rng.standard_normal(1024) / np.sqrt(snr)
            signs = 1.0 - 2.0 * b
            llr_b = 2.0 * snr * (signs + noise)
            against_b = decode_bp(llr_b, code_1024, syndrome(b, code_1024), max_iter=30)
            against_zero = decode_bp(llr_b * signs, code_1024, None, max_iter=30)
            np.testing.assert_array_equal(against_b.bits ^ b, against_zero.bits)
            assert against_b.converged == against_zero.converged
            assert against_b.iterations_used == against_zero.iterations_used

    def test_bf_worse_than_bp(self, code_1024):
        rng = stream_for(28)
        snr = db_to_linear(3.0)
        bp_errors = bf_errors = 0
        for _ in range(100):
            b = random_bits(rng, 1024)
            llr = _channel_llr(b, snr, rng)
            target = syndrome(b, code_1024)
            bp_errors += not np.array_equal(decode_bp(llr, code_1024, target).bits, b)
            hard = (llr < 0).astype(np.uint8)
            bf_errors += not np.array_equal(decode_bf(hard, code_1024, target).bits, b)
        assert bf_errors > bp_errors


class TestBitFlipping:
    """Test Gallager bit flipping against a target syndrome."""

    def test_error_free_input(self, code_96):
        b = random_bits(stream_for(29), 96)
        outcome = decode_bf(b, code_96, syndrome(b, code_96))
        assert outcome.converged and outcome.iterations_used == 0

    def test_every_single_error_corrected_in_one_round(self, code_96):
        b = random_bits(stream_for(30), 96)
        target = syndrome(b, code_96)
        for position in range(96):
            corrupted = b.copy()
            corrupted[position] ^= 1
            outcome = decode_bf(corrupted, code_96, target)
            assert outcome.converged
            assert outcome.iterations_used == 1
            np.testing.assert_array_equal(outcome.bits, b)

    def test_does_not_modify_input(self, code_96):
        hard = np.ones(96, dtype=np.uint8)
        decode_bf(hard, code_96, max_iter=3)
        assert hard.all()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
