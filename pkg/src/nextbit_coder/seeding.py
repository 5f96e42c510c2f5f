"""
Counter-based seed splitting.

Every random choice in the library is a pure function of an integer seed. Child
seeds are derived by hashing the parent seed together with a path of labels
(trial number, position, role), so encoder and decoder never share a stream.
"""

import hashlib
import random
from typing import Any

import numpy as np


def derive_seed(root: int, *path: Any) -> int:
    """Derive a 64-bit child seed from ``root`` and a path of labels."""
    label = "/".join(str(part) for part in (root,) + path)
    digest = hashlib.sha256(label.encode("utf-8")).hexdigest()
    return int(digest[:16], 16)


def make_rng(seed: int) -> random.Random:
    """Exact integer draws (``randrange`` works for arbitrarily large bounds)."""
    return random.Random(seed)


def make_generator(seed: int) -> np.random.Generator:
    """numpy generator for distribution sampling (binomial, normal)."""
    return np.random.default_rng(seed)
