"""
Tests for the golden container vectors.
"""

import json
import shutil
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from nextbit_coder.errors import ConfigError, VectorMismatch
from nextbit_coder.models import BitString, SourceSpec
from nextbit_coder.vectors import (
    DEFAULT_VECTORS_PATH,
    build_vector,
    first_divergent_bit,
    load_vectors,
    parse_vector,
    vector_to_dict,
    verify_vector,
    verify_vectors,
    write_vectors,
)

B = BitString.from_str


class TestFirstDivergentBit:
    """Test cases for first_divergent_bit."""

    def test_equal(self):
        """Test identical inputs."""
        assert first_divergent_bit(b"\x38\x8c", b"\x38\x8c") is None
        assert first_divergent_bit(b"", b"") is None

    def test_within_byte(self):
        """Test MSB-first bit numbering."""
        assert first_divergent_bit(b"\x80", b"\x00") == 0
        assert first_divergent_bit(b"\x01", b"\x00") == 7
        assert first_divergent_bit(bytes.fromhex("388c94"), bytes.fromhex("388c95")) == 23

    def test_length_difference(self):
        """Test that a shorter input diverges where it ends."""
        assert first_divergent_bit(b"\xa8", b"\xa8\x00") == 8


class TestGoldenVectors:
    """Test cases for the packaged vectors."""

    def setup_method(self):
        """Setup test environment."""
        self.temp_dir = Path(tempfile.mkdtemp())
        self.vectors = load_vectors()

    def teardown_method(self):
        """Cleanup test environment."""
        if self.temp_dir.exists():
            shutil.rmtree(self.temp_dir)

    def test_packaged_vectors_verify(self):
        """Test that every packaged vector reproduces."""
        results = verify_vectors()
        assert len(results) == 3
        assert all(error is None for _, error in results)

    def test_pinned_bytes(self):
        """Test the hex of each packaged vector."""
        assert [v.expected.hex() for v in self.vectors] == ["388c94", "362350", "a8"]
        assert [str(v.decoded) for v in self.vectors] == ["10", "", "1"]

    def test_build_reproduces_file(self):
        """Test that rebuilding the vectors gives the packaged entries."""
        uniform = SourceSpec.uniform(2, 2)
        rebuilt = [
            build_vector("uniform ell=2, x=10, q=8, whole string", uniform, B("10"), 8),
            build_vector("uniform ell=2, x=10, q=8, empty suffix", uniform, B("10"), 8, k=3),
            build_vector(
                "iid_bernoulli p=1/20 ell=1, x=1, q=100, raw fallback",
                SourceSpec.iid_bernoulli(1, 1, Fraction(1, 20)),
                B("1"),
                100,
            ),
        ]
        assert rebuilt == self.vectors

    def test_write_then_load(self):
        """Test that write_vectors produces the same lines as the packaged file."""
        path = write_vectors(self.vectors, self.temp_dir / "v.jsonl")
        assert path.read_text(encoding="utf-8") == DEFAULT_VECTORS_PATH.read_text(
            encoding="utf-8"
        )

    def test_corrupted_bytes(self):
        """Test that a flipped last bit is reported at its index."""
        data = vector_to_dict(self.vectors[0])
        data["bytes"] = "388c95"
        with pytest.raises(VectorMismatch) as info:
            verify_vector(parse_vector(data))
        assert info.value.bit_index == 23
        assert "first divergent bit 23" in str(info.value)

    def test_corrupted_decoded(self):
        """Test a wrong decoded suffix."""
        data = vector_to_dict(self.vectors[0])
        data["decoded"] = "11"
        with pytest.raises(VectorMismatch) as info:
            verify_vector(parse_vector(data))
        assert info.value.bit_index == 1

    def test_verify_file_reports_failures(self):
        """Test that verify_vectors keeps going after a mismatch."""
        lines = [vector_to_dict(v) for v in self.vectors]
        lines[1]["bytes"] = "362351"
        path = self.temp_dir / "bad.jsonl"
        path.write_text("".join(json.dumps(d) + "\n" for d in lines), encoding="utf-8")
        errors = [error for _, error in verify_vectors(path)]
        assert errors[0] is None and errors[2] is None
        assert "first divergent bit 23" in errors[1]

    def test_parse_rejects(self):
        """Test field validation."""
        base = vector_to_dict(self.vectors[0])
        cases = {
            "bytes": "388C94",
            "x": "1a",
            "q": "8",
            "k": True,
        }
        for field, value in cases.items():
            data = dict(base, **{field: value})
            with pytest.raises(ConfigError, match=f"^{field}:"):
                parse_vector(data)

        del base["alpha"]
        with pytest.raises(ConfigError, match="^alpha: missing field"):
            parse_vector(base)

    def test_missing_file(self):
        """Test a vector path that does not exist."""
        with pytest.raises(ConfigError, match="does not exist"):
            load_vectors(self.temp_dir / "nope.jsonl")
