#include <gtest/gtest.h>

#include <cmath>

#include "opcover/conjectures.hpp"
#include "opcover/operator_probability.hpp"
#include "opcover/random_ops.hpp"

using namespace opcover;

namespace {

// Exact binomial pmf by the multiplicative recursion, independent of the
// library's count-vector enumeration.
long double binom_pmf(int n, int k, long double p) {
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c * std::pow(p, k) * std::pow(1.0L - p, n - k);
}

double binom_tail_ge(int n, int k0, double p) {
  long double s = 0;
  for (int k = k0; k <= n; ++k) s += binom_pmf(n, k, p);
  return static_cast<double>(s);
}

double binom_tail_le(int n, int k1, double p) {
  long double s = 0;
  for (int k = 0; k <= k1; ++k) s += binom_pmf(n, k, p);
  return static_cast<double>(s);
}

HermitianMatrix scalar(double x) { return HermitianMatrix::diagonal({x}); }

OperatorRV bernoulli(double p) { return OperatorRV({{1 - p, scalar(0.0)}, {p, scalar(1.0)}}); }

HermitianMatrix ket0() { return HermitianMatrix::diagonal({1.0, 0.0}); }
HermitianMatrix ket_plus() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return HermitianMatrix(m);
}

OperatorRV qubit_pair() { return OperatorRV::uniform({ket0(), ket_plus()}); }

}  // namespace

TEST(Moments, DeterministicVariable) {
  const auto a = HermitianMatrix::diagonal({0.3, -2.0});
  const auto x = OperatorRV::deterministic(a);
  EXPECT_TRUE(approx_equal(mean(x), a, 1e-15));
  EXPECT_LE(variance(x).matrix().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Moments, TwoPointUniform) {
  const auto x = OperatorRV::uniform({HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::diagonal({0.0, 1.0})});
  EXPECT_TRUE(approx_equal(mean(x), HermitianMatrix::identity(2) * 0.5, 1e-15));
  EXPECT_TRUE(approx_equal(variance(x), HermitianMatrix::identity(2) * 0.25, 1e-15));
}

TEST(Moments, VarianceIsAdditiveUnderIndependentSums) {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const auto x = OperatorRV::uniform({random_hermitian(rng, 3), random_hermitian(rng, 3)});
    const auto y = OperatorRV({{0.2, random_hermitian(rng, 3)}, {0.3, random_hermitian(rng, 3)},
                               {0.5, random_hermitian(rng, 3)}});
    const auto z = convolve(x, y);
    EXPECT_TRUE(approx_equal(variance(z), variance(x) + variance(y), 1e-10));
    EXPECT_TRUE(is_psd(variance(z)));
  }
}

TEST(OperatorRV, RejectsBadDistributions) {
  EXPECT_THROW(OperatorRV({{0.5, scalar(1.0)}, {0.6, scalar(0.0)}}), Error);
  EXPECT_THROW(OperatorRV({{0.5, scalar(1.0)}, {0.5, HermitianMatrix::identity(2)}}), Error);
  EXPECT_THROW(OperatorRV(std::vector<Atom>{}), Error);
}

TEST(Markov, WorkedExamples) {
  const auto zero = markov_tail(OperatorRV::deterministic(scalar(0.0)), scalar(1.0));
  EXPECT_EQ(zero.exact_or_empirical, 0.0);
  EXPECT_EQ(zero.bound, 0.0);

  const auto x = OperatorRV({{0.1, scalar(2.0)}, {0.9, scalar(0.0)}});
  const auto r = markov_tail(x, scalar(1.0));
  EXPECT_NEAR(r.exact_or_empirical, 0.1, 1e-12);
  EXPECT_NEAR(r.bound, 0.2, 1e-12);
  EXPECT_EQ(r.trials, 0u);

  const auto q = markov_tail(qubit_pair(), HermitianMatrix::identity(2) * 0.9);
  EXPECT_NEAR(q.exact_or_empirical, 1.0, 1e-12);
  EXPECT_NEAR(q.bound, 1.0 / 0.9, 1e-12);
}

TEST(Markov, SupportViolationIsTrivialNotFailure) {
  const auto x = OperatorRV::uniform({HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::diagonal({0.0, 1.0})});
  const auto r = markov_tail(x, HermitianMatrix::diagonal({2.0, 0.0}));
  EXPECT_TRUE(r.trivial_bound);
  EXPECT_TRUE(std::isinf(r.bound));
  EXPECT_TRUE(r.holds);
}

TEST(Chebyshev, WorkedExamples) {
  const auto det = chebyshev_tail(OperatorRV::deterministic(scalar(0.7)), scalar(0.1));
  EXPECT_EQ(det.exact_or_empirical, 0.0);
  EXPECT_NEAR(det.bound, 0.0, 1e-15);

  const auto coin = chebyshev_tail(bernoulli(0.5), scalar(0.4));
  EXPECT_NEAR(coin.exact_or_empirical, 1.0, 1e-12);
  EXPECT_NEAR(coin.bound, 1.5625, 1e-12);
}

TEST(Chebyshev, SingularDeltaThrows) {
  EXPECT_THROW(chebyshev_tail(qubit_pair(), HermitianMatrix::diagonal({1.0, 0.0})), Error);
}

TEST(Chebyshev, QubitEnsembleSuite) {
  Rng rng(404);
  for (int i = 0; i < 1000; ++i) {
    const auto x = OperatorRV::uniform({random_hermitian(rng, 2), random_hermitian(rng, 2)});
    const auto delta = random_psd(rng, 2, 2.0) + HermitianMatrix::identity(2) * 0.05;
    const auto r = chebyshev_tail(x, delta);
    ASSERT_LE(r.exact_or_empirical, std::min(1.0, r.bound) + 1e-12);
  }
}

TEST(WeakLaw, WorkedExamples) {
  EXPECT_EQ(weak_law_tail(OperatorRV::deterministic(scalar(0.4)), 7, scalar(0.01)).exact_or_empirical, 0.0);

  const auto r = weak_law_tail(bernoulli(0.5), 20, scalar(0.25));
  EXPECT_NEAR(r.exact_or_empirical, 2.0 * binom_tail_le(20, 4, 0.5), 1e-12);
  EXPECT_NEAR(r.exact_or_empirical, 0.01181793212890625, 1e-12);
  EXPECT_NEAR(r.bound, 0.2, 1e-12);

  const auto q = weak_law_tail(qubit_pair(), 8, HermitianMatrix::identity(2) * 0.3);
  EXPECT_EQ(q.method, TailMethod::exact);
  EXPECT_LE(q.exact_or_empirical, q.bound);
}

TEST(WeakLaw, OversizedEnumerationNeedsTrials) {
  // C(2502, 2) > 2e6 count vectors for a three-point support.
  const auto x = OperatorRV({{0.2, ket0()}, {0.3, ket_plus()}, {0.5, HermitianMatrix::identity(2) * 0.5}});
  try {
    weak_law_tail(x, 2500, HermitianMatrix::identity(2) * 0.3);
    FAIL() << "expected size overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size_overflow);
  }
  const auto r = weak_law_tail(x, 2500, HermitianMatrix::identity(2) * 0.3, {.trials = 2000, .seed = 9});
  EXPECT_EQ(r.method, TailMethod::monte_carlo);
  EXPECT_EQ(r.trials, 2000u);
}

TEST(Bernstein, OptimalScalarTReproducesDivergenceExponent) {
  const double a = 0.75, m = 0.5;
  const double t = chernoff_optimal_t(a, m);
  const auto tt = scalar(std::sqrt(t));
  for (int n : {1, 5, 20, 50}) {
    const double b = bernstein_bound(bernoulli(m), scalar(a), tt, n);
    EXPECT_NEAR(b, std::exp2(-n * binary_divergence(a, m)), 1e-10);
  }
}

TEST(Bernstein, DeterministicAtThresholdGivesDimension) {
  Rng rng(1);
  const auto a = random_hermitian(rng, 3);
  const auto t = random_psd(rng, 3) + HermitianMatrix::identity(3) * 0.2;
  EXPECT_NEAR(bernstein_bound(OperatorRV::deterministic(a), a, t, 9), 3.0, 1e-10);
}

TEST(Bernstein, DominatesEnumeratedTail) {
  const auto x = qubit_pair();
  const auto a = HermitianMatrix::identity(2) * 0.9;
  const double b = bernstein_bound(x, a, HermitianMatrix::identity(2), 10);
  const auto tail = sum_tail(x, 10, [&](const HermitianMatrix& s) { return not_leq(s, a * 10.0); }, {});
  EXPECT_GE(b, tail.probability);
}

TEST(Bernstein, SingularTThrows) {
  EXPECT_THROW(bernstein_bound(qubit_pair(), HermitianMatrix::identity(2), HermitianMatrix::diagonal({1.0, 0.0}), 2),
               Error);
}

TEST(Chernoff, EqualParametersAreVacuous) {
  const auto x = OperatorRV::uniform({HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::diagonal({0.0, 1.0})});
  EXPECT_NEAR(chernoff_tail(x, 6, 0.5, 0.5, TailSide::upper).bound, 2.0, 1e-15);
}

TEST(Chernoff, QubitBoundFormula) {
  const auto x = OperatorRV::uniform({HermitianMatrix::diagonal({1.0, 0.0}), HermitianMatrix::diagonal({0.0, 1.0})});
  const auto r = chernoff_tail(x, 50, 0.75, 0.5, TailSide::upper);
  EXPECT_NEAR(r.bound, 2.0 * std::exp2(-50 * 0.18872187554086717), 1e-15);
  EXPECT_NEAR(r.bound, 2.89e-3, 1e-5);
  EXPECT_NEAR(r.exact_or_empirical, 2.0 * binom_tail_ge(50, 38, 0.5), 1e-13);
}

TEST(Chernoff, ScalarBernoulliAgainstBinomialOracle) {
  const auto r = chernoff_tail(bernoulli(0.5), 50, 0.75, 0.5, TailSide::upper);
  const double oracle = binom_tail_ge(50, 38, 0.5);
  EXPECT_NEAR(r.exact_or_empirical, oracle, 1e-14);
  EXPECT_NEAR(oracle, 1.5293200080179759e-4, 1e-15);
  EXPECT_NEAR(r.bound, 1.4436194716084764e-3, 1e-15);
  EXPECT_LE(r.exact_or_empirical, r.bound);
}

TEST(Chernoff, LowerTailMirrorsUpperTail) {
  // D(a‖m) = D(1−a‖1−m): Y = 1 − X turns the lower tail into an upper tail.
  const auto x = bernoulli(0.7);
  const auto lower = chernoff_tail(x, 30, 0.5, 0.7, TailSide::lower);
  const auto upper = chernoff_tail(bernoulli(0.3), 30, 0.5, 0.3, TailSide::upper);
  EXPECT_NEAR(lower.bound, upper.bound, 1e-15);
  EXPECT_NEAR(lower.exact_or_empirical, upper.exact_or_empirical, 1e-14);
}

TEST(Chernoff, RejectsViolatedOrdering) {
  EXPECT_THROW(chernoff_tail(bernoulli(0.5), 10, 0.4, 0.5, TailSide::upper), Error);
  EXPECT_THROW(chernoff_tail(bernoulli(0.5), 10, 0.75, 0.3, TailSide::upper), Error);
  EXPECT_THROW(chernoff_tail(OperatorRV::deterministic(scalar(1.5)), 10, 1.0, 1.0, TailSide::upper), Error);
}

TEST(TwoSidedChernoff, WorkedExamples) {
  const auto m = HermitianMatrix::diagonal({0.4, 0.6});
  EXPECT_EQ(two_sided_chernoff(OperatorRV::deterministic(m), 9, 0.5).exact_or_empirical, 0.0);

  const auto r = two_sided_chernoff(bernoulli(0.5), 100, 0.4);
  EXPECT_NEAR(r.bound, 2.0 * std::exp2(-100 * 0.16 * 0.5 / (2 * std::log(2.0))), 1e-15);
  EXPECT_NEAR(r.bound, 0.0366, 1e-4);
  const double oracle = binom_tail_le(100, 29, 0.5) + binom_tail_ge(100, 71, 0.5);
  EXPECT_NEAR(r.exact_or_empirical, oracle, 1e-15);
  EXPECT_NEAR(oracle, 3.2160015295666335e-05, 1e-16);
}

TEST(TwoSidedChernoff, QubitPairMonteCarlo) {
  const auto x = qubit_pair();
  const double mu = mean(x).min_eigenvalue();
  EXPECT_NEAR(mu, (1 - 1 / std::sqrt(2.0)) / 2, 1e-12);
  const auto r = two_sided_chernoff(x, 200, 0.5, {.trials = 10000, .seed = 42, .force_monte_carlo = true});
  EXPECT_EQ(r.method, TailMethod::monte_carlo);
  EXPECT_LE(r.exact_or_empirical, r.bound);
  EXPECT_LT(r.bound, 1.0);
}

TEST(TwoSidedChernoff, StatedBoundCanFailWhereDivergenceBoundHolds) {
  // Scalar Bernoulli(0.05), n = 10000, ε = 1/2: exact tail by the binomial
  // recursion exceeds 2·2^(−nε²μ/(2 ln 2)) but not the divergence form.
  const int n = 10000;
  const double mu = 0.05;
  const double tail = binom_tail_le(n, 249, mu) + binom_tail_ge(n, 751, mu);
  EXPECT_GT(tail, two_sided_chernoff_bound(1, n, 0.5, mu));
  EXPECT_LT(tail, two_sided_chernoff_divergence_bound(1, n, 0.5, mu));
}

TEST(TwoSidedChernoff, NonPositiveMuThrows) {
  EXPECT_THROW(two_sided_chernoff(OperatorRV::uniform({HermitianMatrix::diagonal({1.0, 0.0})}), 4, 0.2), Error);
}

TEST(MonteCarlo, StandardErrorScalesAsInverseSqrtTrials) {
  const auto x = qubit_pair();
  const auto delta = HermitianMatrix::identity(2) * 0.15;
  const auto exact = weak_law_tail(x, 12, delta);
  const auto mc1 = weak_law_tail(x, 12, delta, {.trials = 4000, .seed = 17, .force_monte_carlo = true});
  const auto mc2 = weak_law_tail(x, 12, delta, {.trials = 8000, .seed = 17, .force_monte_carlo = true});
  ASSERT_GT(mc1.std_error, 0.0);
  EXPECT_NEAR(mc1.std_error / mc2.std_error, std::sqrt(2.0), 0.1);
  EXPECT_LE(std::abs(mc1.exact_or_empirical - exact.exact_or_empirical), 3 * mc1.std_error);
  EXPECT_LE(std::abs(mc2.exact_or_empirical - exact.exact_or_empirical), 3 * mc2.std_error);
}

TEST(MonteCarlo, ReproducibleAcrossWorkerCounts) {
  const auto x = qubit_pair();
  const auto a = two_sided_chernoff(x, 60, 0.3, {.trials = 3000, .seed = 5, .force_monte_carlo = true, .workers = 1});
  const auto b = two_sided_chernoff(x, 60, 0.3, {.trials = 3000, .seed = 5, .force_monte_carlo = true, .workers = 8});
  EXPECT_EQ(a.exact_or_empirical, b.exact_or_empirical);
}

TEST(Conjectures, LogExpEqualityForCommutingFamilies) {
  const auto r = conjecture_probe({.which = 2, .dim = 3, .count = 50, .seed = 3, .commuting = true});
  EXPECT_EQ(r.instances, 50u);
  EXPECT_NEAR(r.min_slack, 0.0, 1e-9);
}

TEST(Conjectures, TraceExpHoldsForTwoSummands) {
  const auto r = conjecture_probe({.which = 1, .dim = 2, .count = 1000, .seed = 12, .n = 2});
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.min_slack, -1e-9);
}

TEST(Conjectures, ProbesEmitReports) {
  const auto two = conjecture_probe({.which = 2, .dim = 2, .count = 1000, .seed = 1, .keep_slacks = true});
  EXPECT_EQ(two.slacks.size(), 1000u);
  const auto three = conjecture_probe({.which = 3, .dim = 2, .count = 50, .seed = 1, .n = 4});
  EXPECT_EQ(three.instances, 50u);
  EXPECT_TRUE(std::isfinite(three.min_slack));
}

TEST(Conjectures, InvalidArgumentsThrow) {
  EXPECT_THROW(conjecture_probe({.which = 4}), Error);
  EXPECT_THROW(conjecture_probe({.which = 1, .dim = 7}), Error);
}
