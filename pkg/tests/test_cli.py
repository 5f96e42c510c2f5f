"""
Tests for the command-line interface.
"""

import json
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from nextbit_coder.cli import create_parser, main, validate_args
from nextbit_coder.errors import ConfigError
from nextbit_coder.reporting import load_report


class TestCLI:
    """Test cases for the CLI."""

    def setup_method(self):
        """Setup test environment."""
        self.temp_dir = Path(tempfile.mkdtemp())
        self.uniform = self.temp_dir / "uniform.json"
        self.uniform.write_text(
            json.dumps({"kind": "uniform", "n": 2, "ell": 2}), encoding="utf-8"
        )
        self.bern = self.temp_dir / "bern.json"
        self.bern.write_text(
            json.dumps({"kind": "iid_bernoulli", "n": 10, "ell": 10, "p": "9/10"}),
            encoding="utf-8",
        )

    def teardown_method(self):
        """Cleanup test environment."""
        if self.temp_dir.exists():
            shutil.rmtree(self.temp_dir)

    def test_encode_prints_hex(self, capsys):
        """Test the ell=2 example from the command line."""
        code = main(
            ["encode", "--source", str(self.uniform), "--q", "8", "--bits", "10", "--alpha", "0"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == "388c94"

    def test_encode_to_file(self, capsys):
        """Test --out."""
        out = self.temp_dir / "x.bin"
        code = main(
            [
                "encode",
                "--source",
                str(self.uniform),
                "--q",
                "8",
                "--bits",
                "10",
                "--k",
                "3",
                "--alpha",
                "0",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        assert out.read_bytes().hex() == "362350"
        assert "✅ Wrote 3 bytes" in capsys.readouterr().out

    def test_decode_hex(self, capsys):
        """Test decoding without --q: the container carries q."""
        code = main(["decode", "--source", str(self.uniform), "--hex", "388c94"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "10"

    def test_decode_file_with_prefix(self, capsys):
        """Test --in and --prefix."""
        data = self.temp_dir / "x.bin"
        data.write_bytes(bytes.fromhex("362350"))
        code = main(
            ["decode", "--source", str(self.uniform), "--in", str(data), "--prefix", "10"]
        )
        assert code == 0
        assert capsys.readouterr().out.strip() == ""

    def test_decode_malformed(self, capsys):
        """Test that a malformed container is reported."""
        code = main(["decode", "--source", str(self.uniform), "--hex", "c1"])
        assert code == 1
        assert "❌ Error" in capsys.readouterr().err

    def test_check_vectors(self, capsys):
        """Test the packaged vectors from the command line."""
        assert main(["check", "--property", "vectors"]) == 0
        assert "🎯 3/3 vectors verified" in capsys.readouterr().out

    def test_missing_source(self, capsys):
        """Test that --source is required."""
        assert main(["encode", "--q", "8", "--bits", "10"]) == 1
        assert "❌ Error: --source" in capsys.readouterr().err

    def test_validate_args(self):
        """Test argument validation."""
        parser = create_parser()
        args = parser.parse_args(["bench", "--source", str(self.uniform)])
        with pytest.raises(ConfigError, match="^--q:"):
            validate_args(args)

        args = parser.parse_args(["check", "--property", "light", "--source", "missing.json"])
        with pytest.raises(ConfigError, match="does not exist"):
            validate_args(args)

        args = parser.parse_args(["check", "--property", "light", "--source", str(self.bern)])
        validate_args(args)

    def test_bench_writes_report(self):
        """Test an average-length bench with a report file."""
        out = self.temp_dir / "reports" / "avg.jsonl"
        code = main(
            [
                "bench",
                "--source",
                str(self.bern),
                "--q",
                "10",
                "--trials",
                "8",
                "--seed",
                "4",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        result = load_report(out)
        assert len(result.records) == 8
        assert result.summary.mode == "avg"
        assert result.summary.passed

    def test_check_light(self, capsys):
        """Test the light-bit check."""
        code = main(
            ["check", "--property", "light", "--source", str(self.bern), "--delta", "3/20"]
        )
        assert code == 0
        assert "✅ light_bound" in capsys.readouterr().out

    def test_check_roundtrip(self):
        """Test the exhaustive round-trip check."""
        code = main(["check", "--property", "roundtrip", "--source", str(self.uniform), "--q", "8"])
        assert code == 0

    def test_bad_rational(self, capsys):
        """Test that a bad --delta is a configuration error."""
        code = main(
            ["check", "--property", "light", "--source", str(self.bern), "--delta", "x/y"]
        )
        assert code == 1
        assert "--delta" in capsys.readouterr().err

    @patch("nextbit_coder.cli._run_encode")
    def test_keyboard_interrupt(self, mock_encode, capsys):
        """Test that Ctrl-C exits cleanly."""
        mock_encode.side_effect = KeyboardInterrupt()
        code = main(["encode", "--source", str(self.uniform), "--q", "8", "--bits", "10"])
        assert code == 1
        assert "Cancelled" in capsys.readouterr().err
