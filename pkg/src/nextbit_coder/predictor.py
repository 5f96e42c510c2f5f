"""
Next-bits predictors and the pseudo-deterministic wrapper.

A base predictor estimates D*(b | prefix) and may err (Monte-Carlo noise,
adversarial drift, outright faults). ``pseudo_predict`` adds the shared advice
noise and rounds to a coarse grid so that independent executions agree with
high probability.
"""

import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Optional

from .errors import ConfigError, InvalidLength
from .models import Advice, BitString, PredictorParams, SourceSpec
from .seeding import make_generator, make_rng
from .source_model import exact_conditional

logger = logging.getLogger(__name__)

INT64_TRIALS_LIMIT = 1 << 62
FAULT_RESOLUTION = 1 << 32


class BasePredictor(ABC):
    """Randomized estimator of D*(b | prefix) with a declared error parameter.

    Contract: for every supported prefix and bit, with probability at least
    1 - 1/error over the seed, the output is within 1/error of D*(b | prefix).
    """

    kind = "base"

    def __init__(self, source: SourceSpec, error: int):
        if error < 1:
            raise ConfigError("error parameter must be a positive integer", "err")
        self.source = source
        self.error = error

    @abstractmethod
    def __call__(self, prefix: BitString, b: int, seed: int) -> Fraction:
        """Estimate D*(b | prefix) using randomness ``seed``."""
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}(kind={self.source.kind}, error={self.error})"


class OraclePredictor(BasePredictor):
    """Exact conditional; ignores the seed and meets every error parameter."""

    kind = "oracle"

    def __call__(self, prefix: BitString, b: int, seed: int) -> Fraction:
        return exact_conditional(self.source, prefix, b)


class NoisyPredictor(BasePredictor):
    """Empirical frequency of ``trials`` conditioned samples.

    The count is drawn directly as Binomial(trials, D*), which has the same law
    as counting individual draws. Beyond numpy's int64 range the normal
    approximation of the binomial is used. The output K / trials is exact.
    """

    kind = "noisy"

    def __init__(self, source: SourceSpec, error: int, trials: int):
        super().__init__(source, error)
        if trials < 1:
            raise ConfigError("must be a positive integer", "trials")
        self.trials = trials

    def __call__(self, prefix: BitString, b: int, seed: int) -> Fraction:
        p = exact_conditional(self.source, prefix, b)
        if p in (0, 1):
            return p
        generator = make_generator(seed)
        if self.trials < INT64_TRIALS_LIMIT:
            count = int(generator.binomial(self.trials, float(p)))
        else:
            spread = math.sqrt(float(p * (1 - p)) * self.trials)
            shift = Fraction(spread * float(generator.standard_normal()))
            count = min(max(round(self.trials * p + shift), 0), self.trials)
        return Fraction(count, self.trials)


class AdversarialPredictor(BasePredictor):
    """Returns D* + 1/error or D* - 1/error, the sign chosen by the seed.

    Always inside its contract, but never the same value across seeds.
    """

    kind = "adversarial"

    def __call__(self, prefix: BitString, b: int, seed: int) -> Fraction:
        p = exact_conditional(self.source, prefix, b)
        drift = Fraction(1, self.error)
        value = p + drift if make_rng(seed).getrandbits(1) else p - drift
        return min(max(value, Fraction(0)), Fraction(1))


class FaultyPredictor(BasePredictor):
    """Violates its contract on a ``failure_rate`` fraction of calls."""

    kind = "faulty"

    def __init__(self, source: SourceSpec, error: int, failure_rate: Fraction):
        super().__init__(source, error)
        failure_rate = Fraction(failure_rate)
        if not 0 <= failure_rate <= 1:
            raise ConfigError(f"{failure_rate} outside [0, 1]", "failure_rate")
        self.failure_rate = failure_rate

    def __call__(self, prefix: BitString, b: int, seed: int) -> Fraction:
        rng = make_rng(seed)
        rate = self.failure_rate
        if rng.randrange(rate.denominator) < rate.numerator:
            return Fraction(rng.randrange(FAULT_RESOLUTION + 1), FAULT_RESOLUTION)
        return exact_conditional(self.source, prefix, b)


def trials_for_error(err: int) -> int:
    """Hoeffding sample count giving accuracy 1/err with failure at most 1/err."""
    return math.ceil(err * err * math.log(2 * err) / 2)


def oracle_base_predictor(src: SourceSpec, err: int) -> BasePredictor:
    """Exact conditionals, valid for any error parameter."""
    return OraclePredictor(src, err)


def noisy_base_predictor(
    src: SourceSpec, err: int, trials: Optional[int] = None
) -> BasePredictor:
    """Monte-Carlo estimator; ``trials`` defaults to the Hoeffding count for ``err``."""
    required = trials_for_error(err)
    if trials is None:
        trials = required
    elif trials < required:
        raise ConfigError(
            f"{trials} samples cannot reach error parameter {err} (need {required})",
            "trials",
        )
    return NoisyPredictor(src, err, trials)


def adversarial_base_predictor(src: SourceSpec, err: int) -> BasePredictor:
    """Seed-dependent drift of exactly 1/err around the exact conditional."""
    return AdversarialPredictor(src, err)


def faulty_base_predictor(
    src: SourceSpec, err: int, failure_rate: Fraction = Fraction(1, 10)
) -> BasePredictor:
    """Breaks its contract on a ``failure_rate`` fraction of calls."""
    return FaultyPredictor(src, err, failure_rate)


def build_base_predictor(spec: str, src: SourceSpec, err: int) -> BasePredictor:
    """Build a predictor from ``oracle``, ``noisy[:<trials>]``, ``adversarial``
    or ``faulty[:<rate>]``."""
    name, _, argument = spec.partition(":")
    try:
        if name == "oracle" and not argument:
            return oracle_base_predictor(src, err)
        if name == "noisy":
            return noisy_base_predictor(src, err, int(argument) if argument else None)
        if name == "adversarial" and not argument:
            return adversarial_base_predictor(src, err)
        if name == "faulty":
            rate = Fraction(argument) if argument else Fraction(1, 10)
            return faulty_base_predictor(src, err, rate)
    except ValueError as e:
        raise ConfigError(f"bad argument in {spec!r}: {e}", "predictor")
    raise ConfigError(f"unknown predictor {spec!r}", "predictor")


def round_to_grid(value: Fraction, grid: Fraction) -> Fraction:
    """Nearest multiple of ``grid``; ties go to the smaller multiple."""
    scaled = value / grid
    index = math.floor(scaled)
    if scaled - index > Fraction(1, 2):
        index += 1
    return index * grid


def pseudo_predict(
    base: BasePredictor,
    params: PredictorParams,
    prefix: BitString,
    b: int,
    advice: Advice,
    seed: int,
) -> Fraction:
    """The wrapper P~: noise alpha * noise_step, clamp to [0, 1], round to the grid.

    The base is always queried for b = 0; the b = 1 answer is the complement.
    """
    if base.error < params.base_err:
        raise ConfigError(
            f"base error parameter {base.error} is below {params.base_err}", "err"
        )
    if len(prefix) >= params.ell:
        raise InvalidLength(f"prefix length {len(prefix)} must be below ell={params.ell}")
    if advice.alpha > params.advice_max:
        raise ConfigError(f"advice {advice.alpha} exceeds {params.advice_max}", "alpha")

    v0 = base(prefix, 0, seed)
    shifted = min(max(v0 + advice.alpha * params.noise_step, Fraction(0)), Fraction(1))
    rounded = round_to_grid(shifted, params.grid)
    return rounded if b == 0 else 1 - rounded


def sample_advice(params: PredictorParams, seed: int) -> Advice:
    """Uniform advice in {0, ..., advice_max}."""
    return Advice(make_rng(seed).randrange(params.advice_max + 1))
