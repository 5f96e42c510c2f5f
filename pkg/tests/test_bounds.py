"""
Tests for the frozen constants and the length bounds built from them.
"""

import math
from fractions import Fraction

import pytest

from nextbit_coder.bounds import (
    at_least_floor,
    bernoulli_floor,
    c3,
    constant,
    expected_length_bound,
    floored_log2,
    in_expected_regime,
    kappa_for_epsilon,
    length_bound,
    load_constants,
    worst_case_bound,
)
from nextbit_coder.container import container_bits, gamma_length, serialize
from nextbit_coder.models import BitString, Encoding


def binary_entropy(p: float) -> float:
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


class TestConstants:
    """Test cases for the frozen constants."""

    def test_values(self):
        """Test the packaged constants."""
        assert load_constants() == {
            "C1": 4,
            "C2": 8,
            "C4": 9,
            "c3_offset": 3,
            "fallback_factor": 4,
            "min_log_argument": 65536,
        }

    def test_c1_covers_a_light_entry(self):
        """Test gamma(i) + 1 <= C1 * log2 ell for every index up to ell."""
        for ell in (2, 3, 7, 64, 255, 1024):
            assert gamma_length(ell) + 1 <= constant("C1") * math.log2(ell)

    def test_c3_and_kappa(self):
        """Test the worst-case constant and kappa for eps = 1/4."""
        assert kappa_for_epsilon(Fraction(1, 4)) == 16
        assert c3(16) == 8 * 18 + 3


class TestBounds:
    """Test cases for the bound formulas."""

    def test_floored_log2(self):
        """Test that small arguments are floored at 2^16."""
        assert floored_log2(1) == 16.0
        assert floored_log2(1 << 16) == 16.0
        assert floored_log2(1 << 24) == 24.0

    def test_length_bound(self):
        """Test -log D + m * C1 * log ell + C2 * log(n ell q) + 3."""
        assert length_bound(10.0, 0, 256, 256, 256) == 10.0 + 8 * 24 + 3
        assert length_bound(10.0, 2, 256, 256, 256) == 10.0 + 2 * 4 * 8 + 8 * 24 + 3
        assert length_bound(0.0, 0, 2, 2, 8) == 8 * 16 + 3

    def test_worst_case_bound(self):
        """Test (1 + eps) * -log D + C3 * log max(n, ell)."""
        bound = worst_case_bound(4.0, Fraction(1, 4), 4, 4, 8)
        assert bound == pytest.approx(5.0 + c3(8) * 2)

    def test_expected_regime(self):
        """Test the q range the expected-length constant covers."""
        assert in_expected_regime(256, 256, 256)
        assert in_expected_regime(1024, 256, 1024)
        assert not in_expected_regime(256, 256, 255)
        assert not in_expected_regime(256, 256, 257)
        assert in_expected_regime(4, 8, 8)

    def test_expected_bound_rejects_raw_container(self):
        """Test that sending iid(9/10) strings verbatim exceeds the expected bound."""
        h = 256 * binary_entropy(0.9)
        bound = expected_length_bound(h, 256, 256)
        assert bound == pytest.approx(h + 9 * 16)
        raw = Encoding.canonical(BitString((0,) * 256))
        assert container_bits(raw) == 8 * len(serialize(raw)) == 280
        assert container_bits(raw) > bound

    def test_statistical_floors(self):
        """Test the 3-sigma acceptance floors."""
        assert bernoulli_floor(0, 100) == 1.0
        assert bernoulli_floor(Fraction(1, 4), 300) == pytest.approx(0.75 - 0.075)
        assert at_least_floor(Fraction(2, 3), 500) == pytest.approx(
            2 / 3 - 3 * math.sqrt((2 / 9) / 500)
        )
