"""
Arithmetic coder driven by the pseudo-deterministic next-bits predictor.

Encoder and decoder never share predictor randomness: each position i draws its
seed from ``derive_seed(root_seed, "enc", i)`` or ``derive_seed(root_seed, "dec", i)``.
Only the advice alpha travels inside the container.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .bounds import fallback_factor
from .container import container_bits
from .errors import CodingError, ConfigError, InvalidLength, MalformedEncoding
from .models import EMPTY, Advice, BitString, CodecState, Encoding, PredictorParams
from .predictor import BasePredictor, pseudo_predict, sample_advice
from .seeding import derive_seed

logger = logging.getLogger(__name__)


@dataclass
class EncodeTrace:
    """Encoder output together with the interval it ended in."""

    encoding: Encoding
    state: CodecState
    heavy: List[Tuple[int, Fraction]] = field(default_factory=list)
    light: List[int] = field(default_factory=list)
    width: int = 0

    @property
    def fallback_used(self) -> bool:
        return self.encoding.fallback


def _ceil_log2_ratio(a: int, b: int) -> int:
    """Smallest t >= 0 with a * 2**t >= b, for positive a <= b."""
    t = max(b.bit_length() - a.bit_length(), 0)
    while (a << t) < b:
        t += 1
    while t > 0 and (a << (t - 1)) >= b:
        t -= 1
    return t


def ceil_neg_log2(p: Fraction) -> int:
    """Exact ceil(-log2 p) for 0 < p <= 1."""
    if not 0 < p <= 1:
        raise ValueError(f"{p} outside (0, 1]")
    return _ceil_log2_ratio(p.numerator, p.denominator)


def binary_prefix(value: Fraction, width: int) -> BitString:
    """First ``width`` bits after the binary point of value in [0, 1), truncated."""
    scaled = math.floor(value * (1 << width))
    return BitString.from_int(scaled, width)


def as_real(v: BitString) -> Fraction:
    """0.v as an exact rational."""
    return Fraction(v.to_int(), 1 << len(v))


class NextBitCodec:
    """Enc_q / Dec_q for one predictor and parameter set."""

    def __init__(self, base: BasePredictor, params: PredictorParams):
        if base.source.ell != params.ell or base.source.n != params.n:
            raise ConfigError(
                f"predictor source (n={base.source.n}, ell={base.source.ell}) does not "
                f"match parameters (n={params.n}, ell={params.ell})",
                "params",
            )
        self.base = base
        self.params = params
        self.unit = params.grid.denominator

    def _predict0(self, prefix: BitString, alpha: Advice, seed: int) -> Fraction:
        return pseudo_predict(self.base, self.params, prefix, 0, alpha, seed)

    def _grid_units(self, q0: Fraction) -> int:
        units, rest = divmod(q0.numerator * self.unit, q0.denominator)
        if rest:
            raise CodingError(f"prediction {q0} is off the grid {self.params.grid}")
        return units

    def encode_traced(
        self,
        x: BitString,
        k: int,
        root_seed: int,
        alpha: Optional[Advice] = None,
    ) -> EncodeTrace:
        """Code x_[k:ell]; light bits are escaped and the rest narrow the interval."""
        params = self.params
        if len(x) != params.ell:
            raise InvalidLength(f"expected {params.ell} bits, got {len(x)}")
        if not 1 <= k <= params.ell + 1:
            raise InvalidLength(f"k={k} outside 1..{params.ell + 1}")
        if alpha is None:
            alpha = sample_advice(params, derive_seed(root_seed, "advice"))

        state = CodecState()
        light: List[Tuple[int, int]] = []
        heavy: List[Tuple[int, Fraction]] = []
        threshold = params.light_threshold

        for i in range(k, params.ell + 1):
            bit = x[i - 1]
            q0 = self._predict0(x.prefix(i - 1), alpha, derive_seed(root_seed, "enc", i))
            qi = q0 if bit == 0 else 1 - q0
            if qi <= threshold:
                light.append((i, bit))
                continue
            state.narrow(bit, self._grid_units(q0), self.unit)
            heavy.append((i, qi))

        width = _ceil_log2_ratio(state.eq, state.scale) + 1
        if width > fallback_factor() * params.ell:
            logger.debug(f"v needs {width} bits, falling back to the raw suffix")
            encoding = Encoding.canonical(x.suffix(k))
        else:
            # floor((p_less + p_eq / 2) * 2**width)
            midpoint = ((2 * state.less + state.eq) << width) // (2 * state.scale)
            v = BitString.from_int(midpoint, width)
            encoding = Encoding(
                fallback=False,
                v=v,
                light=tuple(light),
                alpha=alpha,
                n=params.n,
                k=k,
                q=params.q,
            )
        if light:
            logger.debug(f"escaped {len(light)} light bits at {[i for i, _ in light]}")

        return EncodeTrace(
            encoding=encoding,
            state=state,
            heavy=heavy,
            light=[i for i, _ in light],
            width=width,
        )

    def encode(
        self, x: BitString, k: int, root_seed: int, alpha: Optional[Advice] = None
    ) -> Encoding:
        return self.encode_traced(x, k, root_seed, alpha).encoding

    def _check_header(self, enc: Encoding, prefix: BitString) -> None:
        params = self.params
        if enc.n != params.n or enc.q != params.q:
            raise MalformedEncoding(
                f"container was made for n={enc.n}, q={enc.q}; "
                f"decoder runs n={params.n}, q={params.q}"
            )
        if enc.k != len(prefix) + 1:
            raise MalformedEncoding(
                f"container starts at k={enc.k} but the prefix has {len(prefix)} bits"
            )
        if enc.k > params.ell + 1:
            raise MalformedEncoding(f"k={enc.k} exceeds ell + 1 = {params.ell + 1}")
        if enc.light and enc.light[-1][0] > params.ell:
            raise MalformedEncoding(f"light index {enc.light[-1][0]} exceeds ell={params.ell}")
        if enc.alpha.alpha > params.advice_max:
            raise MalformedEncoding(f"advice {enc.alpha.alpha} exceeds {params.advice_max}")

    def decode(self, enc: Encoding, prefix: BitString, root_seed: int) -> BitString:
        """Recover x_[k:ell] from the container and the known prefix x_[k-1]."""
        params = self.params
        if len(prefix) > params.ell:
            raise InvalidLength(f"prefix has {len(prefix)} bits, ell={params.ell}")
        if enc.fallback:
            if len(prefix) + len(enc.raw) != params.ell:
                raise MalformedEncoding(
                    f"raw suffix of {len(enc.raw)} bits after a {len(prefix)}-bit prefix "
                    f"does not make ell={params.ell}"
                )
            return enc.raw
        self._check_header(enc, prefix)

        light = dict(enc.light)
        target, width = enc.v.to_int(), len(enc.v)
        state = CodecState()
        current = prefix
        for i in range(enc.k, params.ell + 1):
            if i in light:
                current = current.append(light[i])
                continue
            q0 = self._grid_units(
                self._predict0(current, enc.alpha, derive_seed(root_seed, "dec", i))
            )
            # 0.v >= split, both sides over scale * unit * 2**width
            split = state.split(q0, self.unit) << width
            bit = 1 if target * state.scale * self.unit >= split else 0
            current = current.append(bit)
            state.narrow(bit, q0, self.unit)
        return current.suffix(enc.k)


def encode(
    base: BasePredictor,
    params: PredictorParams,
    x: BitString,
    k: int,
    root_seed: int,
    alpha: Optional[Advice] = None,
) -> Encoding:
    """One-shot encode with a fresh codec."""
    return NextBitCodec(base, params).encode(x, k, root_seed, alpha)


def decode(
    base: BasePredictor,
    params: PredictorParams,
    enc: Encoding,
    prefix: BitString,
    root_seed: int,
) -> BitString:
    """One-shot decode given the known prefix x_[k-1]."""
    return NextBitCodec(base, params).decode(enc, prefix, root_seed)


# --- Robustified scheme ---


def self_test_trial_count(n: int, ell: int) -> int:
    """Trials estimating a success rate to within 1/(8 ell) with failure <= 2^-n."""
    return math.ceil(32 * ell * ell * (n + 1) * math.log(2))


def self_test_estimate(
    codec: NextBitCodec,
    x: BitString,
    root_seed: int,
    trials: int,
    length_bound: Optional[float] = None,
) -> Fraction:
    """Fraction of independent encode/decode runs that return x within the length bound."""
    successes = 0
    for t in range(trials):
        seed = derive_seed(root_seed, "selftest", t)
        try:
            enc = codec.encode(x, 1, seed)
            ok = codec.decode(enc, EMPTY, seed) == x
        except CodingError as e:
            logger.debug(f"self-test run {t} raised {type(e).__name__}: {e}")
            continue
        if ok and (length_bound is None or container_bits(enc) <= length_bound):
            successes += 1
    return Fraction(successes, trials)


def robustify_encode(
    base: BasePredictor,
    params: PredictorParams,
    x: BitString,
    root_seed: int,
    trials: Optional[int] = None,
    accept_threshold: Optional[Fraction] = None,
    length_bound: Optional[float] = None,
) -> Encoding:
    """Enc': ship Enc(x) if the self-test accepts it, otherwise x verbatim."""
    codec = NextBitCodec(base, params)
    if trials is None:
        trials = self_test_trial_count(params.n, params.ell)
    if accept_threshold is None:
        accept_threshold = 1 - Fraction(3, 4 * params.ell)

    estimate = self_test_estimate(
        codec, x, derive_seed(root_seed, "selftest"), trials, length_bound
    )
    if estimate >= accept_threshold:
        return codec.encode(x, 1, derive_seed(root_seed, "fresh"))
    logger.debug(f"self-test estimate {estimate} below {accept_threshold}, sending x")
    return Encoding.canonical(x)


def robustify_decode(
    base: BasePredictor, params: PredictorParams, enc: Encoding, root_seed: int
) -> BitString:
    """Dec': the container flag already distinguishes the two branches."""
    return NextBitCodec(base, params).decode(enc, EMPTY, derive_seed(root_seed, "fresh"))
