#!/usr/bin/env python3
"""
Regenerate the packaged golden vectors.

Only run this after an intentional change to the container format; the new
file must then be reviewed byte by byte.
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from nextbit_coder.models import BitString, SourceSpec  # noqa: E402
from nextbit_coder.vectors import (  # noqa: E402
    DEFAULT_VECTORS_PATH,
    build_vector,
    verify_vectors,
    write_vectors,
)


def build_all():
    uniform = SourceSpec.uniform(2, 2)
    x = BitString.from_str("10")
    return [
        build_vector("uniform ell=2, x=10, q=8, whole string", uniform, x, 8),
        build_vector("uniform ell=2, x=10, q=8, empty suffix", uniform, x, 8, k=3),
        build_vector(
            "iid_bernoulli p=1/20 ell=1, x=1, q=100, raw fallback",
            SourceSpec.iid_bernoulli(1, 1, Fraction(1, 20)),
            BitString.from_str("1"),
            100,
        ),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description="Regenerate golden container vectors")
    parser.add_argument("--out", type=str, help=f"Output file (default: {DEFAULT_VECTORS_PATH})")
    args = parser.parse_args()

    path = write_vectors(build_all(), args.out or DEFAULT_VECTORS_PATH)
    results = verify_vectors(path)
    for description, error in results:
        print(f"{'✅' if error is None else '❌'} {description}")
    print(f"📄 Wrote {len(results)} vectors to {path}")
    return 0 if all(error is None for _, error in results) else 1


if __name__ == "__main__":
    sys.exit(main())
