"""
Data models shared by the source oracles, the predictor, the codec and the harness.
"""

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from .errors import ConfigError, MalformedEncoding

SOURCE_KINDS = ("uniform", "iid_bernoulli", "markov", "sampler")
EXPERIMENT_MODES = ("avg", "worst", "cond", "robust")
MAX_SAMPLER_RANDOMNESS = 24
MAX_WORST_CASE_ELL = 16


@dataclass(frozen=True)
class BitString:
    """Finite sequence of bits; positions are 1-indexed in the prefix helpers."""

    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(self.bits)
        for bit in bits:
            if bit not in (0, 1):
                raise ValueError(f"Not a bit: {bit!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def _wrap(cls, bits: Tuple[int, ...]) -> "BitString":
        # bits must already be a tuple of 0/1
        obj = object.__new__(cls)
        object.__setattr__(obj, "bits", bits)
        return obj

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        """Parse a string of ``0`` and ``1`` characters (surrounding blanks ignored)."""
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"Not a bit string: {text!r}")
        return cls._wrap(tuple(1 if ch == "1" else 0 for ch in text))

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        """Big-endian binary of ``value`` in exactly ``width`` bits."""
        if width < 0 or value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        return cls._wrap(tuple((value >> (width - 1 - j)) & 1 for j in range(width)))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, index: Union[int, slice]):
        if isinstance(index, slice):
            return BitString._wrap(self.bits[index])
        return self.bits[index]

    def __add__(self, other: "BitString") -> "BitString":
        if isinstance(other, BitString):
            return BitString._wrap(self.bits + other.bits)
        return BitString(self.bits + tuple(other))

    def __str__(self) -> str:
        return "".join("1" if bit else "0" for bit in self.bits)

    def prefix(self, i: int) -> "BitString":
        """x_[i]: the first i bits (x_[0] is empty)."""
        if not 0 <= i <= len(self.bits):
            raise IndexError(f"prefix length {i} outside 0..{len(self.bits)}")
        return BitString._wrap(self.bits[:i])

    def suffix(self, k: int) -> "BitString":
        """x_[k:len]: bits from 1-indexed position k to the end (empty for k = len+1)."""
        if not 1 <= k <= len(self.bits) + 1:
            raise IndexError(f"suffix start {k} outside 1..{len(self.bits) + 1}")
        return BitString._wrap(self.bits[k - 1:])

    def append(self, bit: int) -> "BitString":
        """A new string with ``bit`` added at the end."""
        if bit not in (0, 1):
            raise ValueError(f"Not a bit: {bit!r}")
        return BitString._wrap(self.bits + (bit,))

    def to_int(self) -> int:
        value = 0
        for bit in self.bits:
            value = (value << 1) | bit
        return value


EMPTY = BitString()


def _check_probability(value: Fraction, name: str) -> Fraction:
    if not isinstance(value, Fraction):
        raise ConfigError("must be an exact rational", name)
    if not 0 <= value <= 1:
        raise ConfigError(f"probability {value} outside [0, 1]", name)
    return value


@dataclass(frozen=True)
class SourceSpec:
    """Distribution family D_n over {0,1}^ell with an exactly computable oracle."""

    kind: str
    n: int
    ell: int
    p: Optional[Fraction] = None
    initial: Optional[Tuple[Fraction, Fraction]] = None
    transition: Optional[Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]] = None
    r: Optional[int] = None
    table: Optional[Tuple[BitString, ...]] = None

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}", "kind")
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError("must be a positive integer", "n")
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ConfigError("must be a positive integer", "ell")

        if self.kind == "iid_bernoulli":
            if self.p is None:
                raise ConfigError("required for iid_bernoulli", "p")
            _check_probability(self.p, "p")
        elif self.kind == "markov":
            self._validate_markov()
        elif self.kind == "sampler":
            self._validate_sampler()

    def _validate_markov(self) -> None:
        if self.initial is None or len(self.initial) != 2:
            raise ConfigError("needs two probabilities", "initial")
        for j, value in enumerate(self.initial):
            _check_probability(value, f"initial[{j}]")
        if sum(self.initial) != 1:
            raise ConfigError("must sum to 1", "initial")

        if self.transition is None or len(self.transition) != 2:
            raise ConfigError("needs a 2x2 matrix", "transition")
        for a, row in enumerate(self.transition):
            if len(row) != 2:
                raise ConfigError("row needs two entries", f"transition[{a}]")
            for b, value in enumerate(row):
                _check_probability(value, f"transition[{a}][{b}]")
            if sum(row) != 1:
                raise ConfigError("row must sum to 1", f"transition[{a}]")

    def _validate_sampler(self) -> None:
        if not isinstance(self.r, int) or not 0 <= self.r <= MAX_SAMPLER_RANDOMNESS:
            raise ConfigError(
                f"randomness width must be in 0..{MAX_SAMPLER_RANDOMNESS}", "r"
            )
        if self.table is None or len(self.table) != 1 << self.r:
            raise ConfigError(f"needs exactly 2^r = {1 << self.r} entries", "table")
        for j, entry in enumerate(self.table):
            if len(entry) != self.ell:
                raise ConfigError(f"entry has length {len(entry)}, expected ell", f"table[{j}]")

    @classmethod
    def uniform(cls, n: int, ell: int) -> "SourceSpec":
        return cls("uniform", n, ell)

    @classmethod
    def iid_bernoulli(cls, n: int, ell: int, p: Fraction) -> "SourceSpec":
        """i.i.d. bits with P(bit = 1) = p."""
        return cls("iid_bernoulli", n, ell, p=Fraction(p))

    @classmethod
    def markov(cls, n: int, ell: int, initial, transition) -> "SourceSpec":
        """initial = (P(x1=0), P(x1=1)); transition[a][b] = P(next=b | current=a)."""
        return cls(
            "markov",
            n,
            ell,
            initial=tuple(Fraction(v) for v in initial),
            transition=tuple(tuple(Fraction(v) for v in row) for row in transition),
        )

    @classmethod
    def sampler(cls, n: int, ell: int, r: int, table) -> "SourceSpec":
        """Entry j of table is the output on randomness j (read as an r-bit integer)."""
        entries = tuple(
            entry if isinstance(entry, BitString) else BitString.from_str(entry)
            for entry in table
        )
        return cls("sampler", n, ell, r=r, table=entries)


@dataclass(frozen=True)
class Advice:
    """Shared noise multiplier alpha shipped inside the encoding."""

    alpha: int = 0

    def __post_init__(self):
        if not isinstance(self.alpha, int) or self.alpha < 0:
            raise ValueError(f"advice must be a non-negative integer, got {self.alpha!r}")


@dataclass(frozen=True)
class PredictorParams:
    """Parameter chain of the pseudo-deterministic wrapper at the modified q."""

    n: int
    ell: int
    q: int
    q_mod: int = field(init=False)
    base_err: int = field(init=False)
    grid: Fraction = field(init=False)
    noise_step: Fraction = field(init=False)
    advice_max: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("must be a positive integer", "n")
        if self.ell < 1:
            raise ConfigError("must be a positive integer", "ell")
        if not isinstance(self.q, int) or self.q < 1:
            raise ConfigError("must be a positive integer", "q")

        q_mod = self.ell * self.q + 1
        object.__setattr__(self, "q_mod", q_mod)
        object.__setattr__(self, "base_err", 32 * self.ell * q_mod**3)
        object.__setattr__(self, "grid", Fraction(1, 4 * q_mod**2))
        object.__setattr__(self, "noise_step", Fraction(1, 8 * self.ell * q_mod**3))
        object.__setattr__(self, "advice_max", 2 * self.ell * q_mod - 1)

    @property
    def light_threshold(self) -> Fraction:
        """q_i at or below this value is escaped into the light list."""
        return Fraction(2, self.q_mod)


@dataclass(frozen=True)
class Encoding:
    """Container produced by the encoder.

    For ``fallback=True`` only ``raw`` is meaningful and every other field keeps
    its canonical zero value, so the serialized form round-trips exactly.
    """

    fallback: bool
    raw: BitString = EMPTY
    v: BitString = EMPTY
    light: Tuple[Tuple[int, int], ...] = ()
    alpha: Advice = Advice(0)
    n: int = 0
    k: int = 0
    q: int = 0

    def __post_init__(self):
        light = tuple((int(i), int(b)) for i, b in self.light)
        object.__setattr__(self, "light", light)

        if self.fallback:
            if self.v or light or self.alpha.alpha or self.n or self.k or self.q:
                raise MalformedEncoding("fallback encoding carries only raw bits")
            return

        if self.raw:
            raise MalformedEncoding("raw bits are only allowed in a fallback encoding")
        if len(self.v) < 1:
            raise MalformedEncoding("v must hold at least one bit")
        if self.k < 1 or self.q < 1 or self.n < 0:
            raise MalformedEncoding("header fields out of range")
        previous = self.k - 1
        for index, bit in light:
            if index <= previous:
                raise MalformedEncoding(
                    f"light indices must be strictly increasing and >= k, got {index}"
                )
            if bit not in (0, 1):
                raise MalformedEncoding(f"light entry {index} carries non-bit {bit}")
            previous = index

    @classmethod
    def canonical(cls, raw: BitString) -> "Encoding":
        """The raw fallback container for a suffix."""
        return cls(fallback=True, raw=raw)


@dataclass
class CodecState:
    """Running interval [p_less, p_less + p_eq) of the arithmetic coder.

    Both ends are integer numerators over ``scale``. Each step splits the
    interval at a multiple of ``1 / unit``, so ``scale`` is a power of unit.
    """

    less: int = 0
    eq: int = 1
    scale: int = 1

    @property
    def p_less(self) -> Fraction:
        return Fraction(self.less, self.scale)

    @property
    def p_eq(self) -> Fraction:
        return Fraction(self.eq, self.scale)

    def split(self, q0: int, unit: int) -> int:
        """Numerator of p_less + p_eq * q0 / unit over ``scale * unit``."""
        return self.less * unit + self.eq * q0

    def narrow(self, bit: int, q0: int, unit: int) -> None:
        """Keep the part of the interval for ``bit`` when P~(0) = q0 / unit."""
        if bit:
            self.less = self.split(q0, unit)
            self.eq *= unit - q0
        else:
            self.less *= unit
            self.eq *= q0
        self.scale *= unit


@dataclass
class TrialReport:
    """One encode/decode trial."""

    trial_id: int
    x: str
    neg_log_mass: float
    mass: str
    m_light: int
    enc_bits: int
    decode_ok: bool
    fallback_used: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class EntropyStat:
    """Shannon entropy H(D_n) in bits."""

    entropy: float
    method: str


@dataclass
class ExperimentConfig:
    """Parameters of one harness run."""

    source: SourceSpec
    q: int
    k: int = 1
    trials: int = 100
    root_seed: int = 0
    predictor: str = "oracle"
    mode: str = "avg"
    epsilon: Fraction = Fraction(1, 4)
    kappa: Optional[int] = None
    self_test_trials: Optional[int] = None
    source_path: Optional[str] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("must be at least 1", "trials")
        if self.q < 1:
            raise ConfigError("must be a positive integer", "q")
        if self.mode not in EXPERIMENT_MODES:
            raise ConfigError(f"unknown mode {self.mode!r}", "mode")
        if not 1 <= self.k <= self.source.ell + 1:
            raise ConfigError(f"must be in 1..{self.source.ell + 1}", "k")
        if self.mode == "worst" and self.source.ell > MAX_WORST_CASE_ELL:
            raise ConfigError(
                f"worst-case mode requires ell <= {MAX_WORST_CASE_ELL}", "mode"
            )
        if self.epsilon <= 0:
            raise ConfigError("must be positive", "epsilon")


@dataclass
class ExperimentSummary:
    """Aggregate verdict of a harness run."""

    mode: str
    trials: int
    metrics: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    context: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "trials": self.trials,
            "metrics": dict(self.metrics),
            "checks": dict(self.checks),
            "passed": self.passed,
            "context": dict(self.context),
        }


@dataclass
class ExperimentResult:
    """Per-trial records and their aggregate."""

    records: List[TrialReport]
    summary: ExperimentSummary


@dataclass
class GoldenVector:
    """Pinned container bytes for one encode input."""

    description: str
    source: SourceSpec
    x: BitString
    q: int
    k: int
    alpha: int
    root_seed: int
    expected: bytes
    decoded: BitString
