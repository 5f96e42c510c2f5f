"""
Tests for base predictors and the pseudo-deterministic wrapper.
"""

from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from nextbit_coder.errors import ConfigError, InvalidLength
from nextbit_coder.models import EMPTY, Advice, BitString, PredictorParams, SourceSpec
from nextbit_coder.predictor import (
    AdversarialPredictor,
    FaultyPredictor,
    NoisyPredictor,
    OraclePredictor,
    build_base_predictor,
    noisy_base_predictor,
    oracle_base_predictor,
    pseudo_predict,
    round_to_grid,
    sample_advice,
    trials_for_error,
)
from nextbit_coder.seeding import derive_seed
from nextbit_coder.source_model import exact_conditional

B = BitString.from_str


class TestPredictorParams:
    """Test cases for the parameter chain."""

    def test_uniform_example(self):
        """Test ell=2, q=8."""
        params = PredictorParams(2, 2, 8)
        assert params.q_mod == 17
        assert params.base_err == 32 * 2 * 17**3
        assert params.grid == Fraction(1, 1156)
        assert params.noise_step == Fraction(1, 8 * 2 * 17**3)
        assert params.advice_max == 67
        assert params.light_threshold == Fraction(2, 17)

    def test_noise_below_grid(self):
        """Test that the whole advice range moves a value by less than one grid step."""
        for ell, q in ((1, 1), (2, 8), (16, 16), (256, 256)):
            params = PredictorParams(ell, ell, q)
            assert params.noise_step < params.grid
            assert params.advice_max * params.noise_step < params.grid

    def test_rejects_bad_q(self):
        """Test validation."""
        with pytest.raises(ConfigError, match="^q:"):
            PredictorParams(2, 2, 0)


class TestBasePredictors:
    """Test cases for the base predictors."""

    def setup_method(self):
        """Setup test environment."""
        self.uniform = SourceSpec.uniform(4, 4)
        self.bern = SourceSpec.iid_bernoulli(4, 4, Fraction(9, 10))

    def test_oracle_ignores_seed(self):
        """Test that the oracle is exact."""
        base = oracle_base_predictor(self.bern, 100)
        assert base(B("1"), 1, 0) == Fraction(9, 10)
        assert base(B("1"), 1, 12345) == Fraction(9, 10)

    def test_trials_for_error(self):
        """Test the Hoeffding count."""
        assert trials_for_error(10) == 150

    def test_noisy_contract_instance(self):
        """Test accuracy 1/10 for most seeds at err = 10."""
        base = noisy_base_predictor(self.uniform, 10)
        assert base.trials == 150
        hits = sum(
            1
            for seed in range(200)
            if Fraction(2, 5) <= base(EMPTY, 0, seed) <= Fraction(3, 5)
        )
        assert hits >= 180

    def test_noisy_deterministic_in_seed(self):
        """Test that a fixed seed gives a fixed estimate."""
        base = noisy_base_predictor(self.bern, 100)
        assert base(EMPTY, 1, 7) == base(EMPTY, 1, 7)

    def test_noisy_too_few_trials(self):
        """Test that an undersized sample is refused."""
        with pytest.raises(ConfigError, match="^trials:"):
            noisy_base_predictor(self.uniform, 10, trials=149)

    def test_noisy_normal_branch(self):
        """Test sample counts beyond the int64 range."""
        base = NoisyPredictor(self.uniform, 10, trials=1 << 70)
        value = base(EMPTY, 0, 3)
        assert value.denominator <= 1 << 70
        assert abs(value - Fraction(1, 2)) < Fraction(1, 10**6)

    def test_noisy_exact_on_degenerate_conditional(self):
        """Test that probabilities 0 and 1 are returned as-is."""
        src = SourceSpec.iid_bernoulli(3, 3, Fraction(1))
        base = noisy_base_predictor(src, 10)
        assert base(EMPTY, 1, 0) == 1

    def test_adversarial_stays_in_contract(self):
        """Test that the adversary moves by exactly 1/err."""
        base = AdversarialPredictor(self.bern, 1000)
        values = {base(B("11"), 1, seed) for seed in range(40)}
        assert values == {Fraction(9, 10) + Fraction(1, 1000), Fraction(9, 10) - Fraction(1, 1000)}

    def test_faulty_rates(self):
        """Test the failure-rate extremes."""
        honest = FaultyPredictor(self.bern, 100, Fraction(0))
        assert all(honest(EMPTY, 1, seed) == Fraction(9, 10) for seed in range(20))

        broken = FaultyPredictor(self.bern, 100, Fraction(1))
        values = [broken(EMPTY, 1, seed) for seed in range(20)]
        assert all(0 <= v <= 1 for v in values)
        assert len(set(values)) > 1

    def test_build_from_spec(self):
        """Test the predictor name grammar."""
        assert isinstance(build_base_predictor("oracle", self.uniform, 10), OraclePredictor)
        noisy = build_base_predictor("noisy:200", self.uniform, 10)
        assert isinstance(noisy, NoisyPredictor) and noisy.trials == 200
        faulty = build_base_predictor("faulty:1/5", self.uniform, 10)
        assert isinstance(faulty, FaultyPredictor) and faulty.failure_rate == Fraction(1, 5)
        adversarial = build_base_predictor("adversarial", self.uniform, 10)
        assert isinstance(adversarial, AdversarialPredictor)

    def test_build_rejects_unknown(self):
        """Test bad predictor specs."""
        for spec in ("bogus", "noisy:abc", "oracle:3"):
            with pytest.raises(ConfigError, match="^predictor:"):
                build_base_predictor(spec, self.uniform, 10)


class TestPseudoPredict:
    """Test cases for the noise-and-rounding wrapper."""

    def setup_method(self):
        """Setup test environment."""
        self.src = SourceSpec.markov(6, 6, ["1/3", "2/3"], [["7/10", "3/10"], ["1/9", "8/9"]])
        self.params = PredictorParams(6, 6, 6)
        self.oracle = OraclePredictor(self.src, self.params.base_err)

    def test_uniform_example(self):
        """Test that 1/2 is already on the grid."""
        src = SourceSpec.uniform(2, 2)
        params = PredictorParams(2, 2, 8)
        base = OraclePredictor(src, params.base_err)
        assert pseudo_predict(base, params, EMPTY, 0, Advice(0), 0) == Fraction(1, 2)
        assert pseudo_predict(base, params, EMPTY, 1, Advice(0), 0) == Fraction(1, 2)

    def test_round_to_grid_ties_down(self):
        """Test the tie rule."""
        assert round_to_grid(Fraction(1, 2), Fraction(1)) == 0
        assert round_to_grid(Fraction(3, 4), Fraction(1)) == 1
        assert round_to_grid(Fraction(3, 2), Fraction(1)) == 1
        assert round_to_grid(Fraction(1, 3), Fraction(1, 4)) == Fraction(1, 4)

    def test_complement_and_grid_membership(self):
        """Test that b=0 and b=1 sum to one and b=0 lies on the grid."""
        base = AdversarialPredictor(self.src, self.params.base_err)
        prefixes = [EMPTY, B("0"), B("1"), B("10"), B("01101")]
        for seed in range(10):
            alpha = sample_advice(self.params, seed)
            for prefix in prefixes:
                v0 = pseudo_predict(base, self.params, prefix, 0, alpha, seed)
                v1 = pseudo_predict(base, self.params, prefix, 1, alpha, seed)
                assert v0 + v1 == 1
                assert (v0 / self.params.grid).denominator == 1

    def test_accuracy(self):
        """Test |P~ - D*| <= 1/q_mod^2 whenever the base is within 1/base_err."""
        base = AdversarialPredictor(self.src, self.params.base_err)
        bound = Fraction(1, self.params.q_mod**2)
        for alpha in (0, 1, self.params.advice_max // 2, self.params.advice_max):
            for seed in range(5):
                for prefix in (EMPTY, B("1"), B("0110")):
                    for b in (0, 1):
                        value = pseudo_predict(base, self.params, prefix, b, Advice(alpha), seed)
                        assert abs(value - exact_conditional(self.src, prefix, b)) <= bound

    def test_non_light_multiplicative_accuracy(self):
        """Test (1 - 1/q_mod) * D* <= P~ <= (1 + 1/q_mod) * D* for non-light bits."""
        sources = (self.src, SourceSpec.iid_bernoulli(6, 6, Fraction(1, 50)))
        ratio = Fraction(1, self.params.q_mod)
        alphas = (0, self.params.advice_max // 2, self.params.advice_max)
        checked = 0
        for src in sources:
            base = AdversarialPredictor(src, self.params.base_err)
            for length in range(src.ell):
                for bits in product((0, 1), repeat=length):
                    prefix = BitString(bits)
                    for b in (0, 1):
                        target = exact_conditional(src, prefix, b)
                        if target <= ratio:
                            continue
                        for alpha in alphas:
                            for seed in range(3):
                                value = pseudo_predict(
                                    base, self.params, prefix, b, Advice(alpha), seed
                                )
                                assert (1 - ratio) * target <= value <= (1 + ratio) * target
                                checked += 1
        assert checked == (2 * 63 + 63) * 9

    def test_oracle_is_seed_independent(self):
        """Test that the exact oracle makes P~ deterministic."""
        alpha = Advice(5)
        values = {
            pseudo_predict(self.oracle, self.params, B("011"), 1, alpha, seed) for seed in range(10)
        }
        assert len(values) == 1

    def test_rejects_weak_base(self):
        """Test the error-parameter precondition."""
        weak = OraclePredictor(self.src, self.params.base_err - 1)
        with pytest.raises(ConfigError, match="^err:"):
            pseudo_predict(weak, self.params, EMPTY, 0, Advice(0), 0)

    def test_rejects_full_prefix(self):
        """Test the prefix-length precondition."""
        with pytest.raises(InvalidLength):
            pseudo_predict(self.oracle, self.params, B("010101"), 0, Advice(0), 0)

    def test_rejects_advice_out_of_range(self):
        """Test the advice range."""
        with pytest.raises(ConfigError, match="^alpha:"):
            pseudo_predict(
                self.oracle, self.params, EMPTY, 0, Advice(self.params.advice_max + 1), 0
            )


class TestSampleAdvice:
    """Test cases for advice sampling."""

    def test_range_and_determinism(self):
        """Test bounds and reproducibility."""
        params = PredictorParams(3, 3, 5)
        for seed in range(50):
            alpha = sample_advice(params, seed)
            assert 0 <= alpha.alpha <= params.advice_max
            assert sample_advice(params, seed) == alpha

    def test_uniformity(self):
        """Test a chi-square statistic over 10^4 seeds with advice_max = 15."""
        params = PredictorParams(1, 1, 7)
        assert params.advice_max == 15
        draws = 10_000
        counts = Counter(
            sample_advice(params, derive_seed(0, "advice", s)).alpha for s in range(draws)
        )
        expected = draws / 16
        chi2 = sum((counts.get(a, 0) - expected) ** 2 / expected for a in range(16))
        assert chi2 < 50
