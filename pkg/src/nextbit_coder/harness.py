"""
Experiment runner and bound checker.

Every run is a pure function of its ExperimentConfig: samples, advice and
predictor seeds all derive from ``root_seed``. Summaries are computed from the
per-trial records plus a small context block by ``summarize``, so a report
written to disk re-aggregates to the same verdict.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional

import pandas as pd

from .bounds import (
    at_least_floor,
    bernoulli_floor,
    expected_length_bound,
    in_expected_regime,
    kappa_for_epsilon,
    length_bound,
    worst_case_bound,
)
from .codec import NextBitCodec, robustify_decode, robustify_encode
from .container import container_bits
from .errors import CodingError, ConfigError, SupportTooLarge
from .models import (
    MAX_WORST_CASE_ELL,
    BitString,
    ExperimentConfig,
    ExperimentResult,
    ExperimentSummary,
    PredictorParams,
    SourceSpec,
    TrialReport,
)
from .predictor import build_base_predictor, pseudo_predict, sample_advice
from .seeding import derive_seed
from .source_model import (
    entropy,
    enumerate_support,
    exact_conditional,
    light_count,
    light_event_prob,
    neg_log2,
    prefix_mass,
    sample,
)

MAX_LIGHT_CHECK_ELL = 12


def roundtrip_positions(ell: int) -> List[int]:
    """k values exercised by the round-trip check: whole string, midpoint, empty suffix."""
    return sorted({1, max(1, ell // 2), ell + 1})


def _success_floor(context: Dict[str, Any], trials: int) -> float:
    if context["predictor"] == "oracle":
        return 1.0
    return bernoulli_floor(Fraction(1, context["q_mod"]), trials)


# --- Aggregation ---


def _frame(records: List[TrialReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_dict() for r in records], columns=list(TrialReport.__annotations__))


def _summarize_trials(mode: str, df: pd.DataFrame, context: Dict[str, Any]) -> ExperimentSummary:
    n, ell, q = context["n"], context["ell"], context["q"]
    trials = len(df)
    bounds = [
        length_bound(nlm, m, n, ell, q) for nlm, m in zip(df["neg_log_mass"], df["m_light"])
    ]
    within = df["enc_bits"] <= pd.Series(bounds, index=df.index)

    metrics = {
        "mean_enc_bits": float(df["enc_bits"].mean()),
        "max_enc_bits": int(df["enc_bits"].max()),
        "success_rate": float(df["decode_ok"].mean()),
        "light_free_fraction": float((df["m_light"] == 0).mean()),
        "within_bound_rate": float(within.mean()),
        "fallback_rate": float(df["fallback_used"].mean()),
    }
    checks = {
        "decode_success": metrics["success_rate"] >= _success_floor(context, trials),
        "length_bound": metrics["within_bound_rate"]
        >= bernoulli_floor(Fraction(1, q * ell), trials),
    }

    if context.get("entropy") is not None:
        h = context["entropy"]
        metrics["entropy"] = h
        checks["entropy_floor"] = metrics["mean_enc_bits"] >= h - 1
        if in_expected_regime(n, ell, q):
            metrics["expected_length_bound"] = expected_length_bound(h, n, ell)
            checks["expected_length"] = (
                metrics["mean_enc_bits"] <= metrics["expected_length_bound"]
            )
    return ExperimentSummary(mode, trials, metrics, checks, dict(context))


def _summarize_worst(df: pd.DataFrame, context: Dict[str, Any]) -> ExperimentSummary:
    epsilon = Fraction(context["epsilon"])
    n, ell, kappa = context["n"], context["ell"], context["kappa"]
    bounds = pd.Series(
        [worst_case_bound(nlm, epsilon, n, ell, kappa) for nlm in df["neg_log_mass"]],
        index=df.index,
    )
    slack = bounds - df["enc_bits"]
    metrics = {
        "support_size": len(df),
        "max_enc_bits": int(df["enc_bits"].max()),
        "min_slack": float(slack.min()),
        "max_slack": float(slack.max()),
        "success_rate": float(df["decode_ok"].mean()),
    }
    checks = {
        "worst_case_bound": bool((slack >= 0).all()),
        "decode_success": bool(df["decode_ok"].all()),
    }
    return ExperimentSummary("worst", len(df), metrics, checks, dict(context))


def _summarize_robust(df: pd.DataFrame, context: Dict[str, Any]) -> ExperimentSummary:
    reps = context["repetitions"]
    grouped = df.groupby("x", sort=True)
    per_string = grouped["decode_ok"].mean()
    mean_bits = grouped["enc_bits"].mean()
    masses = grouped["mass"].first()
    weighted = math.fsum(
        float(Fraction(masses[x])) * float(mean_bits[x]) for x in mean_bits.index
    )
    bound = expected_length_bound(context["entropy"], context["n"], context["ell"]) + 1
    metrics = {
        "support_size": int(len(per_string)),
        "min_success_rate": float(per_string.min()),
        "fallback_rate": float(df["fallback_used"].mean()),
        "mean_enc_bits": weighted,
        "entropy": context["entropy"],
        "expected_length_bound": bound,
    }
    checks = {
        "per_string_success": metrics["min_success_rate"]
        >= at_least_floor(Fraction(2, 3), reps),
        "expected_length": weighted <= bound,
    }
    return ExperimentSummary("robust", len(df), metrics, checks, dict(context))


def _summarize_roundtrip(df: pd.DataFrame, context: Dict[str, Any]) -> ExperimentSummary:
    failures = int((~df["decode_ok"].astype(bool)).sum())
    rate = float(df["decode_ok"].mean())
    metrics = {"runs": len(df), "failures": failures, "success_rate": rate}
    checks = {"roundtrip": rate >= _success_floor(context, len(df))}
    return ExperimentSummary("roundtrip", len(df), metrics, checks, dict(context))


def summarize(mode: str, records: List[TrialReport], context: Dict[str, Any]) -> ExperimentSummary:
    """Aggregate per-trial records into a verdict. Deterministic in its inputs."""
    if not records:
        return ExperimentSummary(mode, 0, {}, {}, dict(context))
    df = _frame(records)
    if mode in ("avg", "cond"):
        return _summarize_trials(mode, df, context)
    if mode == "worst":
        return _summarize_worst(df, context)
    if mode == "robust":
        return _summarize_robust(df, context)
    if mode == "roundtrip":
        return _summarize_roundtrip(df, context)
    raise ConfigError(f"no aggregation for mode {mode!r}", "mode")


# --- Runner ---


class ExperimentRunner:
    """Drives encode/decode trials and checks the length and success bounds."""

    def __init__(self, log_level: str = "INFO"):
        """Initialize the runner.

        Args:
            log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        """
        self.logger = self._setup_logging(log_level)

    def _setup_logging(self, level: str) -> logging.Logger:
        """Setup logging configuration."""
        logger = logging.getLogger(__name__)
        logger.setLevel(getattr(logging, level.upper()))

        if not logger.handlers:
            handler = logging.StreamHandler()
            formatter = logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
            )
            handler.setFormatter(formatter)
            logger.addHandler(handler)

        return logger

    def _setup(self, cfg: ExperimentConfig, q: Optional[int] = None):
        src = cfg.source
        params = PredictorParams(src.n, src.ell, q if q is not None else cfg.q)
        base = build_base_predictor(cfg.predictor, src, params.base_err)
        return params, base, NextBitCodec(base, params)

    def _context(self, cfg: ExperimentConfig, params: PredictorParams, **extra) -> Dict[str, Any]:
        context = {
            "kind": cfg.source.kind,
            "n": params.n,
            "ell": params.ell,
            "q": params.q,
            "q_mod": params.q_mod,
            "predictor": cfg.predictor,
            "root_seed": cfg.root_seed,
        }
        context.update(extra)
        return context

    def _record(
        self,
        trial_id: int,
        src: SourceSpec,
        codec: NextBitCodec,
        x: BitString,
        k: int,
        seed: int,
    ) -> TrialReport:
        """Encode x_[k:ell], decode it back and measure the container."""
        params = codec.params
        prefix = x.prefix(k - 1)
        enc = codec.encode(x, k, derive_seed(seed, "encoder"))
        try:
            decoded = codec.decode(enc, prefix, derive_seed(seed, "decoder"))
            ok = decoded == x.suffix(k)
        except CodingError as e:
            self.logger.debug(f"trial {trial_id}: decode raised {type(e).__name__}: {e}")
            ok = False

        conditional = prefix_mass(src, x) / prefix_mass(src, prefix)
        m_light = (
            light_count(src, x, Fraction(1, params.q), k, params.ell) if k <= params.ell else 0
        )
        return TrialReport(
            trial_id=trial_id,
            x=str(x),
            neg_log_mass=neg_log2(conditional),
            mass=str(conditional),
            m_light=m_light,
            enc_bits=container_bits(enc),
            decode_ok=ok,
            fallback_used=enc.fallback,
        )

    def _sampled_trials(self, cfg: ExperimentConfig, mode: str, k: int) -> ExperimentResult:
        src = cfg.source
        params, _, codec = self._setup(cfg)
        self.logger.info(
            f"Running {cfg.trials} {mode} trials: {src.kind} n={src.n} ell={src.ell} "
            f"q={params.q} k={k} predictor={cfg.predictor}"
        )

        records = []
        for t in range(cfg.trials):
            x = sample(src, derive_seed(cfg.root_seed, "sample", t))
            trial_seed = derive_seed(cfg.root_seed, "trial", t)
            records.append(self._record(t, src, codec, x, k, trial_seed))

        h = entropy(src).entropy if k == 1 else None
        summary = summarize(mode, records, self._context(cfg, params, k=k, entropy=h))
        self._log_verdict(summary)
        return ExperimentResult(records, summary)

    def run_average_experiment(self, cfg: ExperimentConfig) -> ExperimentResult:
        """Whole-string coding of x ~ D_n against the per-trial and expected length bounds."""
        return self._sampled_trials(cfg, "avg", 1)

    def run_conditional_experiment(self, cfg: ExperimentConfig) -> ExperimentResult:
        """Suffix-given-prefix coding starting at position cfg.k."""
        return self._sampled_trials(cfg, "cond", cfg.k)

    def run_worst_case_enumeration(self, cfg: ExperimentConfig) -> ExperimentResult:
        """Checks (1 + eps) * -log D(x) + C3 * log n for every support string at q = ell**kappa."""
        src = cfg.source
        if src.ell > MAX_WORST_CASE_ELL:
            raise SupportTooLarge(
                f"worst-case enumeration needs ell <= {MAX_WORST_CASE_ELL}, got {src.ell}"
            )
        if cfg.predictor != "oracle":
            raise ConfigError("worst-case enumeration runs with the oracle predictor", "predictor")
        kappa = cfg.kappa if cfg.kappa is not None else kappa_for_epsilon(cfg.epsilon)
        q = max(src.ell, 2) ** kappa
        params, _, codec = self._setup(cfg, q)
        self.logger.info(
            f"Enumerating {src.kind} support (ell={src.ell}) at eps={cfg.epsilon}, "
            f"kappa={kappa}, q={q}"
        )

        records = [
            self._record(t, src, codec, x, 1, derive_seed(cfg.root_seed, "worst", t))
            for t, (x, _) in enumerate(enumerate_support(src))
        ]
        context = self._context(cfg, params, epsilon=str(cfg.epsilon), kappa=kappa)
        summary = summarize("worst", records, context)
        self._log_verdict(summary)
        return ExperimentResult(records, summary)

    def run_robustified_experiment(self, cfg: ExperimentConfig) -> ExperimentResult:
        """Enc'/Dec' over the whole support, cfg.trials repetitions per string."""
        src = cfg.source
        params, base, _ = self._setup(cfg)
        self.logger.info(
            f"Robustified scheme: {src.kind} ell={src.ell} q={params.q}, "
            f"{cfg.trials} repetitions per support string"
        )

        records = []
        for x, x_mass in enumerate_support(src):
            nlm = neg_log2(x_mass)
            m_light = light_count(src, x, Fraction(1, params.q), 1, params.ell)
            bound = length_bound(nlm, m_light, params.n, params.ell, params.q)
            for rep in range(cfg.trials):
                seed = derive_seed(cfg.root_seed, "robust", str(x), rep)
                enc = robustify_encode(
                    base, params, x, seed, trials=cfg.self_test_trials, length_bound=bound
                )
                try:
                    ok = robustify_decode(base, params, enc, seed) == x
                except CodingError:
                    ok = False
                records.append(
                    TrialReport(
                        trial_id=len(records),
                        x=str(x),
                        neg_log_mass=nlm,
                        mass=str(x_mass),
                        m_light=m_light,
                        enc_bits=container_bits(enc),
                        decode_ok=ok,
                        fallback_used=enc.fallback,
                    )
                )

        context = self._context(
            cfg, params, entropy=entropy(src).entropy, repetitions=cfg.trials
        )
        summary = summarize("robust", records, context)
        self._log_verdict(summary)
        return ExperimentResult(records, summary)

    def run_roundtrip_check(self, cfg: ExperimentConfig) -> ExperimentResult:
        """decode(encode(x, k)) = x_[k:ell] for every support string and every k tried."""
        src = cfg.source
        params, _, codec = self._setup(cfg)
        positions = roundtrip_positions(src.ell)
        self.logger.info(f"Round-trip over the {src.kind} support for k in {positions}")

        records = []
        for x, _ in enumerate_support(src):
            for k in positions:
                seed = derive_seed(cfg.root_seed, "roundtrip", str(x), k)
                records.append(self._record(len(records), src, codec, x, k, seed))

        summary = summarize("roundtrip", records, self._context(cfg, params, positions=positions))
        self._log_verdict(summary)
        return ExperimentResult(records, summary)

    def check_pseudodeterminism(self, cfg: ExperimentConfig) -> ExperimentSummary:
        """Agreement of two independent P~ runs and accuracy 1/q_mod^2 at every position.

        Each of cfg.trials draws samples x, an advice value and 2 * ell seeds.
        The complement property is checked on every call and must always hold.
        """
        src = cfg.source
        params, base, _ = self._setup(cfg)
        accuracy = Fraction(1, params.q_mod**2)
        self.logger.info(
            f"Pseudo-determinism: {cfg.trials} draws, predictor={cfg.predictor}, "
            f"q_mod={params.q_mod}"
        )

        good = 0
        complement_ok = 0
        calls = 0
        for t in range(cfg.trials):
            x = sample(src, derive_seed(cfg.root_seed, "sample", t))
            alpha = sample_advice(params, derive_seed(cfg.root_seed, "advice", t))
            all_positions = True
            for i in range(1, src.ell + 1):
                prefix, bit = x.prefix(i - 1), x[i - 1]
                seed_a = derive_seed(cfg.root_seed, "pseudodet", t, i, "a")
                seed_b = derive_seed(cfg.root_seed, "pseudodet", t, i, "b")
                value_a = pseudo_predict(base, params, prefix, bit, alpha, seed_a)
                value_b = pseudo_predict(base, params, prefix, bit, alpha, seed_b)
                other = pseudo_predict(base, params, prefix, 1 - bit, alpha, seed_a)
                calls += 1
                if value_a + other == 1:
                    complement_ok += 1
                target = exact_conditional(src, prefix, bit)
                if value_a != value_b or abs(value_a - target) > accuracy:
                    all_positions = False
            if all_positions:
                good += 1

        rate = good / cfg.trials
        complement_rate = complement_ok / calls
        context = self._context(cfg, params)
        summary = ExperimentSummary(
            mode="pseudodet",
            trials=cfg.trials,
            metrics={"all_positions_rate": rate, "complement_rate": complement_rate},
            checks={
                "pseudodeterminism": rate >= _success_floor(context, cfg.trials),
                "complement": complement_rate == 1.0,
            },
            context=context,
        )
        self._log_verdict(summary)
        return summary

    def check_light_bound(self, src: SourceSpec, delta: Fraction) -> ExperimentSummary:
        """Exact Pr[x has a delta-light next bit] <= ell * delta."""
        if src.ell > MAX_LIGHT_CHECK_ELL:
            raise SupportTooLarge(
                f"light-bit check enumerates at most ell={MAX_LIGHT_CHECK_ELL}, got {src.ell}"
            )
        prob = light_event_prob(src, delta)
        bound = src.ell * delta
        summary = ExperimentSummary(
            mode="light",
            trials=0,
            metrics={"probability": str(prob), "bound": str(bound), "delta": str(delta)},
            checks={"light_bound": prob <= bound},
            context={"kind": src.kind, "n": src.n, "ell": src.ell},
        )
        self._log_verdict(summary)
        return summary

    def run(self, cfg: ExperimentConfig) -> ExperimentResult:
        """Dispatch on cfg.mode."""
        if cfg.mode == "avg":
            return self.run_average_experiment(cfg)
        if cfg.mode == "cond":
            return self.run_conditional_experiment(cfg)
        if cfg.mode == "worst":
            return self.run_worst_case_enumeration(cfg)
        return self.run_robustified_experiment(cfg)

    def _log_verdict(self, summary: ExperimentSummary) -> None:
        for name, ok in summary.checks.items():
            if not ok:
                self.logger.warning(f"{summary.mode}: check {name!r} failed ({summary.metrics})")
        status = "passed" if summary.passed else "FAILED"
        self.logger.info(f"{summary.mode}: {status} over {summary.trials} trials")
