"""
Toy distribution families with exact probability oracles.

All probabilities are ``Fraction`` values. Sampler sources are conditioned by
enumerating their whole randomness table.
"""

import json
import logging
import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterator, Mapping, Tuple, Union

import regex

from .errors import ConfigError, InvalidLength, SupportTooLarge, ZeroMassPrefix
from .models import EMPTY, BitString, EntropyStat, SourceSpec
from .seeding import make_rng

logger = logging.getLogger(__name__)

MAX_ENUMERATION_ELL = 20
HALF = Fraction(1, 2)

RATIONAL_PATTERN = regex.compile(r"^\s*(?P<num>\d+)\s*(?:/\s*(?P<den>\d+)\s*)?$")


# --- Oracles ---


@lru_cache(maxsize=32)
def _prefix_counts(src: SourceSpec) -> Dict[Tuple[int, ...], int]:
    """Number of randomness strings whose output starts with each prefix."""
    counts: Counter = Counter()
    for output in src.table:
        bits = output.bits
        for i in range(len(bits) + 1):
            counts[bits[:i]] += 1
    return dict(counts)


def _has_zero_mass(src: SourceSpec, prefix: BitString) -> bool:
    if src.kind == "iid_bernoulli":
        if src.p == 0:
            return 1 in prefix.bits
        if src.p == 1:
            return 0 in prefix.bits
        return False
    if src.kind == "markov":
        if not prefix:
            return False
        if src.initial[prefix[0]] == 0:
            return True
        if all(value for row in src.transition for value in row):
            return False
        bits = prefix.bits
        return any(src.transition[a][b] == 0 for a, b in zip(bits, bits[1:]))
    if src.kind == "sampler":
        return _prefix_counts(src).get(prefix.bits, 0) == 0
    return False


def exact_conditional(src: SourceSpec, prefix: BitString, b: int) -> Fraction:
    """D*_n(b | prefix)."""
    if len(prefix) >= src.ell:
        raise InvalidLength(f"prefix length {len(prefix)} must be below ell={src.ell}")
    if b not in (0, 1):
        raise ValueError(f"Not a bit: {b!r}")
    if _has_zero_mass(src, prefix):
        raise ZeroMassPrefix(f"no sample of {src.kind} source extends prefix {prefix}")

    if src.kind == "uniform":
        return HALF
    if src.kind == "iid_bernoulli":
        return src.p if b == 1 else 1 - src.p
    if src.kind == "markov":
        if not prefix:
            return src.initial[b]
        return src.transition[prefix[-1]][b]

    counts = _prefix_counts(src)
    return Fraction(counts.get(prefix.bits + (b,), 0), counts[prefix.bits])


def prefix_mass(src: SourceSpec, prefix: BitString) -> Fraction:
    """Probability that a sample starts with ``prefix`` (0 when impossible)."""
    if len(prefix) > src.ell:
        raise InvalidLength(f"prefix length {len(prefix)} exceeds ell={src.ell}")

    if src.kind == "uniform":
        return Fraction(1, 2 ** len(prefix))
    if src.kind == "iid_bernoulli":
        ones = sum(prefix.bits)
        return src.p**ones * (1 - src.p) ** (len(prefix) - ones)
    if src.kind == "sampler":
        return Fraction(_prefix_counts(src).get(prefix.bits, 0), 1 << src.r)

    result = Fraction(1)
    for i in range(len(prefix)):
        result *= exact_conditional(src, prefix.prefix(i), prefix[i])
        if result == 0:
            break
    return result


def mass(src: SourceSpec, x: BitString) -> Fraction:
    """D_n(x); zero for strings outside the support."""
    if len(x) != src.ell:
        raise InvalidLength(f"expected {src.ell} bits, got {len(x)}")
    return prefix_mass(src, x)


def sample(src: SourceSpec, seed: int) -> BitString:
    """Draw x ~ D_n exactly, deterministically in ``seed``."""
    rng = make_rng(seed)

    if src.kind == "uniform":
        return BitString.from_int(rng.getrandbits(src.ell), src.ell)
    if src.kind == "sampler":
        return src.table[rng.randrange(1 << src.r)]

    x = EMPTY
    for _ in range(src.ell):
        p_one = exact_conditional(src, x, 1)
        draw = rng.randrange(p_one.denominator)
        x = x.append(1 if draw < p_one.numerator else 0)
    return x


def light_count(
    src: SourceSpec, x: BitString, delta: Fraction, start: int, stop: int
) -> int:
    """m_delta^{start,stop}(x): positions i in [start, stop] with D*(x_i | x_[i-1]) <= delta.

    An empty range (start = stop + 1) counts zero.
    """
    if not 1 <= start <= stop + 1 or stop > len(x):
        raise InvalidLength(f"range [{start}, {stop}] invalid for length {len(x)}")
    return sum(
        1
        for i in range(start, stop + 1)
        if exact_conditional(src, x.prefix(i - 1), x[i - 1]) <= delta
    )


def _check_enumerable(src: SourceSpec, limit: int = MAX_ENUMERATION_ELL) -> None:
    if src.ell > limit:
        raise SupportTooLarge(f"ell={src.ell} exceeds enumeration limit {limit}")


def light_event_prob(src: SourceSpec, delta: Fraction) -> Fraction:
    """Pr_{x~D}[x has a delta-light next bit], by walking the prefix tree."""
    _check_enumerable(src)

    def walk(prefix: BitString) -> Fraction:
        if len(prefix) == src.ell:
            return Fraction(0)
        total = Fraction(0)
        for b in (0, 1):
            c = exact_conditional(src, prefix, b)
            if c == 0:
                continue
            total += c if c <= delta else c * walk(prefix.append(b))
        return total

    return walk(EMPTY)


def enumerate_support(
    src: SourceSpec, limit: int = MAX_ENUMERATION_ELL
) -> Iterator[Tuple[BitString, Fraction]]:
    """Yield every positive-mass string with its mass, in lexicographic order."""
    _check_enumerable(src, limit)

    def walk(prefix: BitString, weight: Fraction) -> Iterator[Tuple[BitString, Fraction]]:
        if len(prefix) == src.ell:
            yield prefix, weight
            return
        for b in (0, 1):
            c = exact_conditional(src, prefix, b)
            if c:
                yield from walk(prefix.append(b), weight * c)

    yield from walk(EMPTY, Fraction(1))


# --- Entropy ---


def neg_log2(value: Fraction) -> float:
    """-log2 of a positive rational, computed from big-integer logarithms."""
    value = Fraction(value)
    if value <= 0:
        raise ValueError("-log2 is undefined for non-positive values")
    return math.log2(value.denominator) - math.log2(value.numerator)


def _binary_entropy(p: Fraction) -> float:
    if p in (0, 1):
        return 0.0
    return float(p) * neg_log2(p) + float(1 - p) * neg_log2(1 - p)


def entropy(src: SourceSpec) -> EntropyStat:
    """H(D_n) in closed form where possible, by enumeration otherwise."""
    if src.kind == "uniform":
        return EntropyStat(float(src.ell), "closed_form")
    if src.kind == "iid_bernoulli":
        return EntropyStat(src.ell * _binary_entropy(src.p), "closed_form")
    if src.kind == "markov":
        # H(X1) + sum_i H(X_i | X_{i-1}) with exact marginals
        marginal = list(src.initial)
        total = _binary_entropy(src.initial[1])
        for _ in range(1, src.ell):
            total += sum(
                float(marginal[a]) * _binary_entropy(src.transition[a][1])
                for a in (0, 1)
                if marginal[a]
            )
            marginal = [
                marginal[0] * src.transition[0][b] + marginal[1] * src.transition[1][b]
                for b in (0, 1)
            ]
        return EntropyStat(total, "closed_form")

    _check_enumerable(src)
    outputs = Counter(entry.bits for entry in src.table)
    size = 1 << src.r
    total = math.fsum(
        (count / size) * neg_log2(Fraction(count, size)) for count in outputs.values()
    )
    return EntropyStat(total, "enumeration")


# --- Configuration ---


def parse_rational(value: Any, field: str) -> Fraction:
    """Parse ``"num/den"`` or an integer into an exact rational."""
    if isinstance(value, bool):
        raise ConfigError("expected a rational, got a boolean", field)
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected 'num/den', got {value!r}", field)
    match = RATIONAL_PATTERN.match(value)
    if not match:
        raise ConfigError(f"expected 'num/den', got {value!r}", field)
    den = int(match.group("den")) if match.group("den") else 1
    if den == 0:
        raise ConfigError("zero denominator", field)
    return Fraction(int(match.group("num")), den)


def _require_int(data: Mapping[str, Any], field: str) -> int:
    if field not in data:
        raise ConfigError("missing field", field)
    value = data[field]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", field)
    return value


def parse_source(data: Mapping[str, Any]) -> SourceSpec:
    """Build a SourceSpec from a decoded JSON mapping."""
    if not isinstance(data, Mapping):
        raise ConfigError("source configuration must be a JSON object")
    kind = data.get("kind")
    if kind is None:
        raise ConfigError("missing field", "kind")
    n = _require_int(data, "n")
    ell = _require_int(data, "ell")

    if kind == "uniform":
        return SourceSpec.uniform(n, ell)
    if kind == "iid_bernoulli":
        if "p" not in data:
            raise ConfigError("missing field", "p")
        return SourceSpec.iid_bernoulli(n, ell, parse_rational(data["p"], "p"))
    if kind == "markov":
        initial = data.get("initial")
        transition = data.get("transition")
        if not isinstance(initial, list) or len(initial) != 2:
            raise ConfigError("expected a list of two rationals", "initial")
        if not isinstance(transition, list) or len(transition) != 2:
            raise ConfigError("expected a 2x2 list of rationals", "transition")
        init = [parse_rational(v, f"initial[{j}]") for j, v in enumerate(initial)]
        rows = []
        for a, row in enumerate(transition):
            if not isinstance(row, list) or len(row) != 2:
                raise ConfigError("expected two rationals", f"transition[{a}]")
            rows.append([parse_rational(v, f"transition[{a}][{b}]") for b, v in enumerate(row)])
        return SourceSpec.markov(n, ell, init, rows)
    if kind == "sampler":
        r = _require_int(data, "r")
        table = data.get("table")
        if not isinstance(table, list):
            raise ConfigError("expected a list of bit strings", "table")
        entries = []
        for j, entry in enumerate(table):
            if not isinstance(entry, str):
                raise ConfigError(f"expected a bit string, got {entry!r}", f"table[{j}]")
            try:
                entries.append(BitString.from_str(entry))
            except ValueError as e:
                raise ConfigError(str(e), f"table[{j}]")
        return SourceSpec.sampler(n, ell, r, entries)

    raise ConfigError(f"unknown kind {kind!r}", "kind")


def load_source(path: Union[str, Path]) -> SourceSpec:
    """Load a SourceSpec from a JSON configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"source file does not exist: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}")

    src = parse_source(data)
    logger.debug(f"Loaded {src.kind} source (n={src.n}, ell={src.ell}) from {path}")
    return src


def source_to_dict(src: SourceSpec) -> Dict[str, Any]:
    """Inverse of parse_source."""
    data: Dict[str, Any] = {"kind": src.kind, "n": src.n, "ell": src.ell}
    if src.kind == "iid_bernoulli":
        data["p"] = str(src.p)
    elif src.kind == "markov":
        data["initial"] = [str(v) for v in src.initial]
        data["transition"] = [[str(v) for v in row] for row in src.transition]
    elif src.kind == "sampler":
        data["r"] = src.r
        data["table"] = [str(entry) for entry in src.table]
    return data
