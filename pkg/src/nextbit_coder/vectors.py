"""
Golden vectors pinning the container format.

The vector file is JSON lines, one vector per line:

    {"description": ..., "source": {...}, "x": "10", "q": 8, "k": 1,
     "alpha": 0, "root_seed": 0, "bytes": "388c94", "decoded": "10"}

Vectors are encoded with the oracle predictor and the recorded advice, so the
container bytes depend only on the format and the coder arithmetic.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import regex

from .codec import NextBitCodec
from .container import deserialize, serialize
from .errors import ConfigError, VectorMismatch
from .models import Advice, BitString, GoldenVector, PredictorParams, SourceSpec
from .predictor import oracle_base_predictor
from .source_model import parse_source, source_to_dict

logger = logging.getLogger(__name__)

DEFAULT_VECTORS_PATH = Path(__file__).parent / "data" / "golden_vectors.jsonl"
HEX_PATTERN = regex.compile(r"^(?:[0-9a-f]{2})+$")
BITS_PATTERN = regex.compile(r"^[01]*$")


def first_divergent_bit(expected: bytes, actual: bytes) -> Optional[int]:
    """Index of the first differing bit, or None if the byte strings are equal."""
    for index, (a, b) in enumerate(zip(expected, actual)):
        if a != b:
            return 8 * index + (8 - (a ^ b).bit_length())
    if len(expected) != len(actual):
        return 8 * min(len(expected), len(actual))
    return None


def _codec(source: SourceSpec, q: int) -> NextBitCodec:
    params = PredictorParams(source.n, source.ell, q)
    return NextBitCodec(oracle_base_predictor(source, params.base_err), params)


def build_vector(
    description: str,
    source: SourceSpec,
    x: BitString,
    q: int,
    k: int = 1,
    alpha: int = 0,
    root_seed: int = 0,
) -> GoldenVector:
    """Encode the input and record the resulting bytes and decoded suffix."""
    codec = _codec(source, q)
    enc = codec.encode(x, k, root_seed, Advice(alpha))
    return GoldenVector(
        description=description,
        source=source,
        x=x,
        q=q,
        k=k,
        alpha=alpha,
        root_seed=root_seed,
        expected=serialize(enc),
        decoded=codec.decode(enc, x.prefix(k - 1), root_seed),
    )


def verify_vector(vector: GoldenVector) -> None:
    """Raise VectorMismatch unless the vector reproduces bit-exactly."""
    codec = _codec(vector.source, vector.q)
    actual = serialize(
        codec.encode(vector.x, vector.k, vector.root_seed, Advice(vector.alpha))
    )
    bit = first_divergent_bit(vector.expected, actual)
    if bit is not None:
        raise VectorMismatch(
            f"{vector.description}: encoded {actual.hex()}, expected "
            f"{vector.expected.hex()} (first divergent bit {bit})",
            bit,
        )

    decoded = codec.decode(
        deserialize(vector.expected), vector.x.prefix(vector.k - 1), vector.root_seed
    )
    if decoded != vector.decoded:
        index = next(
            (j for j, (a, b) in enumerate(zip(decoded, vector.decoded)) if a != b),
            min(len(decoded), len(vector.decoded)),
        )
        raise VectorMismatch(
            f"{vector.description}: decoded {decoded}, expected {vector.decoded}", index
        )


def vector_to_dict(vector: GoldenVector) -> Dict[str, Any]:
    """JSON-ready form of one vector, field order as in the packaged file."""
    return {
        "description": vector.description,
        "source": source_to_dict(vector.source),
        "x": str(vector.x),
        "q": vector.q,
        "k": vector.k,
        "alpha": vector.alpha,
        "root_seed": vector.root_seed,
        "bytes": vector.expected.hex(),
        "decoded": str(vector.decoded),
    }


def parse_vector(data: Dict[str, Any]) -> GoldenVector:
    for field in ("description", "source", "x", "q", "k", "alpha", "root_seed", "bytes", "decoded"):
        if field not in data:
            raise ConfigError("missing field", field)
    for field in ("x", "decoded"):
        if not isinstance(data[field], str) or not BITS_PATTERN.match(data[field]):
            raise ConfigError(f"expected a bit string, got {data[field]!r}", field)
    if not isinstance(data["bytes"], str) or not HEX_PATTERN.match(data["bytes"]):
        raise ConfigError(f"expected lowercase hex, got {data['bytes']!r}", "bytes")
    for field in ("q", "k", "alpha", "root_seed"):
        if isinstance(data[field], bool) or not isinstance(data[field], int):
            raise ConfigError(f"expected an integer, got {data[field]!r}", field)

    return GoldenVector(
        description=str(data["description"]),
        source=parse_source(data["source"]),
        x=BitString.from_str(data["x"]),
        q=data["q"],
        k=data["k"],
        alpha=data["alpha"],
        root_seed=data["root_seed"],
        expected=bytes.fromhex(data["bytes"]),
        decoded=BitString.from_str(data["decoded"]),
    )


def load_vectors(path: Union[str, Path, None] = None) -> List[GoldenVector]:
    """Read a JSON-lines vector file; the packaged one when ``path`` is None."""
    path = Path(path) if path is not None else DEFAULT_VECTORS_PATH
    if not path.exists():
        raise ConfigError(f"vector file does not exist: {path}")

    vectors = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                vectors.append(parse_vector(json.loads(line)))
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}:{number}: invalid JSON: {e}")
    return vectors


def write_vectors(vectors: List[GoldenVector], path: Union[str, Path]) -> Path:
    """Write one JSON object per vector and return the path."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        for vector in vectors:
            f.write(json.dumps(vector_to_dict(vector)) + "\n")
    return path


def verify_vectors(path: Union[str, Path, None] = None) -> List[Tuple[str, Optional[str]]]:
    """Verify every vector in the file; returns (description, error or None) per vector."""
    results = []
    for vector in load_vectors(path):
        try:
            verify_vector(vector)
            results.append((vector.description, None))
        except VectorMismatch as e:
            logger.warning(str(e))
            results.append((vector.description, str(e)))
    return results
