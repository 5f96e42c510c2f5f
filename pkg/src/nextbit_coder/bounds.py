"""
Length and probability bounds checked by the harness.

The constants are frozen in ``data/constants.json``; see
``docs/CONTAINER_FORMAT.md`` for how they follow from the container layout.
"""

import json
import math
from functools import lru_cache
from pathlib import Path
from typing import Dict

CONSTANTS_PATH = Path(__file__).parent / "data" / "constants.json"


@lru_cache(maxsize=1)
def load_constants() -> Dict[str, int]:
    """Integer entries of ``data/constants.json``, read once."""
    with open(CONSTANTS_PATH, "r", encoding="utf-8") as f:
        data = json.load(f)
    return {key: value for key, value in data.items() if isinstance(value, int)}


def constant(name: str) -> int:
    """One frozen constant by name (C1, C2, C4, ...)."""
    return load_constants()[name]


def fallback_factor() -> int:
    """Payloads wider than this many times ell fall back to the raw container."""
    return constant("fallback_factor")


def c3(kappa: int) -> int:
    """Worst-case header constant for q = ell**kappa."""
    return constant("C2") * (2 + kappa) + constant("c3_offset")


def kappa_for_epsilon(epsilon) -> int:
    """Smallest integer kappa with kappa >= C1 / epsilon."""
    return math.ceil(constant("C1") / epsilon)


def floored_log2(value: int) -> float:
    """log2 of value, never below log2(min_log_argument)."""
    return math.log2(max(value, constant("min_log_argument")))


def length_bound(neg_log_mass: float, m_light: int, n: int, ell: int, q: int) -> float:
    """-log D + m * C1 * log ell + C2 * log(n * ell * q) + 3."""
    return (
        neg_log_mass
        + m_light * constant("C1") * math.log2(max(ell, 2))
        + constant("C2") * floored_log2(n * ell * q)
        + 3
    )


def worst_case_bound(neg_log_mass: float, epsilon, n: int, ell: int, kappa: int) -> float:
    """(1 + eps) * -log D + C3(kappa) * log n, with n at least ell."""
    return (1 + float(epsilon)) * neg_log_mass + c3(kappa) * math.log2(max(n, ell, 2))


def in_expected_regime(n: int, ell: int, q: int) -> bool:
    """C4 is measured for ell <= q <= max(n, ell)."""
    return ell <= q <= max(n, ell)


def expected_length_bound(entropy: float, n: int, ell: int) -> float:
    """H + C4 * log(n * ell), for q inside ``in_expected_regime``."""
    return entropy + constant("C4") * floored_log2(n * ell)


def bernoulli_floor(p: float, trials: int) -> float:
    """Smallest acceptable frequency for an event of probability >= 1 - p."""
    p = float(p)
    return 1 - p - 3 * math.sqrt(p * (1 - p) / trials)


def at_least_floor(p: float, trials: int) -> float:
    """Smallest acceptable frequency for an event of probability >= p."""
    p = float(p)
    return p - 3 * math.sqrt(p * (1 - p) / trials)
