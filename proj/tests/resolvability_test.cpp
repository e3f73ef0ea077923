#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "opcover/random_ops.hpp"
#include "opcover/resolvability.hpp"

using namespace opcover;

namespace {

CVector ket(double a, double b) {
  CVector v(2);
  v << a, b;
  return v / v.norm();
}

CQChannel zero_plus() {
  return CQChannel({DensityOperator::pure(ket(1, 0)), DensityOperator::pure(ket(1, 1))});
}

SparseDistribution uniform_on(std::uint64_t count) {
  SparseDistribution p;
  for (std::uint64_t k = 0; k < count; ++k) p[k] = 1.0 / static_cast<double>(count);
  return p;
}

SparseDistribution random_sparse(Rng& rng, std::uint64_t count) {
  const auto v = random_distribution(rng, count);
  SparseDistribution p;
  for (std::uint64_t k = 0; k < count; ++k) p[k] = v[k];
  return p;
}

// Output distribution of a classical channel on yⁿ, computed symbol by symbol.
std::vector<double> classical_output(const std::map<std::uint64_t, double>& p,
                                     const std::vector<std::vector<double>>& w, int n) {
  const int a = static_cast<int>(w.size()), b = static_cast<int>(w[0].size());
  int ny = 1;
  for (int i = 0; i < n; ++i) ny *= b;
  std::vector<double> q(ny, 0.0);
  for (const auto& [x, px] : p) {
    std::vector<int> xs(n);
    std::uint64_t r = x;
    for (int i = n - 1; i >= 0; --i) xs[i] = static_cast<int>(r % a), r /= a;
    for (int y = 0; y < ny; ++y) {
      double prob = px;
      int s = y;
      for (int i = n - 1; i >= 0; --i) prob *= w[xs[i]][s % b], s /= b;
      q[y] += prob;
    }
  }
  return q;
}

Matrix direct_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST(Sequences, EncodeDecodeRoundTrip) {
  for (std::uint64_t k = 0; k < 81; ++k) EXPECT_EQ(encode_sequence(decode_sequence(k, 4, 3), 3), k);
  EXPECT_EQ(decode_sequence(6, 3, 2), (std::vector<int>{1, 1, 0}));
}

TEST(EvaluateQidCode, SingleEntryIdentityDecoder) {
  QIDCode code{1, {{{{0, 1.0}}, HermitianMatrix::identity(2)}}};
  const auto r = evaluate_qid_code(code, zero_plus());
  EXPECT_NEAR(r.lambda1, 0.0, 1e-14);
  EXPECT_EQ(r.lambda2, 0.0);
}

TEST(EvaluateQidCode, OrthogonalStatesArePerfect) {
  const auto w = embed_classical({{1, 0}, {0, 1}});
  QIDCode code{2, {}};
  for (int k = 0; k < 4; ++k) {
    std::vector<double> diag(4, 0.0);
    diag[k] = 1.0;
    code.entries.push_back({{{static_cast<std::uint64_t>(k), 1.0}}, HermitianMatrix::diagonal(diag)});
  }
  const auto r = evaluate_qid_code(code, w);
  EXPECT_NEAR(r.lambda1, 0.0, 1e-14);
  EXPECT_NEAR(r.lambda2, 0.0, 1e-14);
}

TEST(EvaluateQidCode, MatchesDirectTraces) {
  Rng rng(7);
  const auto w = zero_plus();
  QIDCode code{3, {}};
  for (int i = 0; i < 3; ++i) code.entries.push_back({random_sparse(rng, 8), random_effect(rng, 8)});
  const auto r = evaluate_qid_code(code, w);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix out = Matrix::Zero(8, 8);
      for (const auto& [k, v] : code.entries[j].P) {
        const auto xs = decode_sequence(k, 3, 2);
        out += v * direct_kron(direct_kron(w.state(xs[0]).matrix().matrix(), w.state(xs[1]).matrix().matrix()),
                               w.state(xs[2]).matrix().matrix());
      }
      const Matrix d = code.entries[i].D.matrix();
      const double expected =
          i == j ? (out * (Matrix::Identity(8, 8) - d)).trace().real() : (out * d).trace().real();
      EXPECT_NEAR(r.errors[i][j], expected, 1e-12);
    }
}

TEST(EvaluateQidCode, RejectsBadDecoder) {
  QIDCode code{1, {{{{0, 1.0}}, 2.0 * HermitianMatrix::identity(2)}}};
  EXPECT_THROW(evaluate_qid_code(code, zero_plus()), Error);
  QIDCode wrong_dim{1, {{{{0, 1.0}}, HermitianMatrix::identity(4)}}};
  EXPECT_THROW(evaluate_qid_code(wrong_dim, zero_plus()), Error);
}

TEST(PerTypeConditional, Examples) {
  const auto u = uniform_on(4);
  const auto c = per_type_conditional(u, EmpiricalDistribution{2, {1, 1}});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_DOUBLE_EQ(c.at(1), 0.5);
  EXPECT_DOUBLE_EQ(c.at(2), 0.5);
  const SparseDistribution single{{1, 0.25}, {2, 0.75}};
  EXPECT_EQ(per_type_conditional(single, EmpiricalDistribution{2, {1, 1}}), single);
  EXPECT_THROW(per_type_conditional(single, EmpiricalDistribution{2, {2, 0}}), Error);
}

TEST(PerTypeConditional, RecombinesToOriginal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto p = random_sparse(rng, 27);
    std::map<std::uint64_t, double> back;
    for (const auto& t : type_enumerate(3, 3)) {
      double mass = 0.0;
      for (const auto& [k, v] : p)
        if (type_of(decode_sequence(k, 3, 3), 3) == t) mass += v;
      if (mass == 0.0) continue;
      for (const auto& [k, v] : per_type_conditional(p, t)) back[k] += mass * v;
    }
    ASSERT_EQ(back.size(), p.size());
    for (const auto& [k, v] : p) EXPECT_NEAR(back[k], v, 1e-15);
  }
}

TEST(Regularize, IdenticalOutputsGiveZeroDistance) {
  const DensityOperator rho(HermitianMatrix::diagonal({0.7, 0.3}));
  const CQChannel w({rho, rho});
  Rng rng(3);
  const auto r = resolvability_regularize(random_sparse(rng, 8), w, 3, 0.6, 11);
  EXPECT_NEAR(r.measured_distance, 0.0, 1e-12);
}

TEST(Regularize, DeskScaleRunWithDerivedConstants) {
  Rng rng(5);
  const auto p = random_sparse(rng, 16);
  const auto start = std::chrono::steady_clock::now();
  const auto r = resolvability_regularize(p, zero_plus(), 4, 0.6, 2024);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 10.0);
  EXPECT_EQ(r.K, static_cast<std::uint64_t>(std::ceil(3.0 * 25.0 / 0.6)));
  EXPECT_EQ(r.K, 125u);
  EXPECT_EQ(r.mode, ConstantsMode::derived);
  EXPECT_NEAR(r.alpha, std::sqrt(2400.0) / 0.6, 1e-12);
  EXPECT_NEAR(r.eps, 0.0003, 1e-15);
  EXPECT_LE(r.support, r.K * r.L);
  EXPECT_LE(r.quantization_error, 0.2 + 1e-12);
  double total = 0.0;
  for (const auto& [k, v] : r.sparse_distribution) total += v;
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_GE(r.measured_distance, 0.0);
}

TEST(Regularize, RecombinationOfExactWeights) {
  Rng rng(9);
  const auto p = random_sparse(rng, 27);
  const auto w = CQChannel({random_density(rng, 2), random_density(rng, 2), random_density(rng, 2)});
  RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 1.0, .eps = 0.2, .tau = 0.2, .L = 5};
  const auto r = resolvability_regularize(p, w, 3, 0.5, 1, o);
  EXPECT_EQ(r.denominator, static_cast<std::int64_t>(r.K * 5));
  std::map<std::uint64_t, std::int64_t> rebuilt;
  std::int64_t weight = 0;
  for (const auto& t : r.per_type) {
    weight += t.weight;
    std::uint64_t drawn = 0;
    for (std::size_t j = 0; j < t.sequences.size(); ++j) {
      drawn += t.counts_drawn[j];
      if (t.counts_drawn[j] > 0 && t.weight > 0)
        rebuilt[t.sequences[j]] += t.weight * static_cast<std::int64_t>(t.counts_drawn[j]);
    }
    EXPECT_EQ(drawn, 5u);
  }
  EXPECT_EQ(weight, static_cast<std::int64_t>(r.K));
  EXPECT_EQ(rebuilt, r.numerators);
}

TEST(Regularize, UniformOnFewSequencesOfOneType) {
  // P uniform on 3 sequences of type (2,1); compared to (ε+τ)+√(8(ε+τ))+λ/3.
  const SparseDistribution p{{3, 1.0 / 3}, {5, 1.0 / 3}, {6, 1.0 / 3}};
  const double lambda = 0.6;
  const auto r = resolvability_regularize(p, zero_plus(), 3, lambda, 77);
  EXPECT_LE(r.support, 3u);
  const double bound = 2 * r.eps + std::sqrt(8 * 2 * r.eps) + lambda / 3;
  EXPECT_LE(r.measured_distance, bound);
}

TEST(Regularize, CommutingChannelMatchesClassicalTotalVariation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const std::vector<std::vector<double>> wc{random_distribution(rng, 3), random_distribution(rng, 3)};
    const auto p = random_sparse(rng, 8);
    RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 1.5, .eps = 0.3, .tau = 0.3, .L = 3};
    const auto r = resolvability_regularize(p, embed_classical(wc), 3, 0.5, seed, o);
    const auto q1 = classical_output(p, wc, 3);
    const auto q2 = classical_output(r.sparse_distribution, wc, 3);
    double tv = 0.0;
    for (std::size_t y = 0; y < q1.size(); ++y) tv += 0.5 * std::abs(q1[y] - q2[y]);
    EXPECT_NEAR(r.measured_distance, tv, 1e-9);
  }
}

TEST(Regularize, MeanDistanceDecreasesInL) {
  Rng rng(42);
  const auto p = random_sparse(rng, 8);
  const auto w = embed_classical({{0.8, 0.2}, {0.3, 0.7}});
  double previous = 2.0;
  for (std::uint64_t L : {1, 4, 16, 64}) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 100.0, .eps = 0.1, .tau = 0.1,
                              .L = L};
      mean += resolvability_regularize(p, w, 3, 0.3, s, o).measured_distance / 50.0;
    }
    EXPECT_LE(mean, previous + 1e-3) << "L=" << L;
    previous = mean;
  }
}

TEST(Regularize, SupportNeverExceedsKL) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto p = random_sparse(rng, 16);
    RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 0.5, .eps = 0.2, .tau = 0.2,
                            .L = 1, .K = 2};
    const auto r = resolvability_regularize(p, zero_plus(), 4, 0.5, seed, o);
    EXPECT_LE(r.support, 2u);
    EXPECT_FALSE(r.certified && r.measured_distance > 0.5 / 3);
  }
}

TEST(Regularize, RejectsBadArguments) {
  EXPECT_THROW(resolvability_regularize(uniform_on(4), zero_plus(), 2, 1.0, 0), Error);
  EXPECT_THROW(resolvability_regularize({{0, 0.5}}, zero_plus(), 2, 0.5, 0), Error);
  RegularizationOptions o{.mode = ConstantsMode::override_constants};
  EXPECT_THROW(resolvability_regularize(uniform_on(4), zero_plus(), 2, 0.5, 0, o), Error);
}

TEST(Regularize, DistinctnessIsExact) {
  const auto w = zero_plus();
  RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 100.0, .eps = 0.1, .tau = 0.1, .L = 2};
  const auto a = resolvability_regularize({{0, 1.0}}, w, 2, 0.5, 0, o);
  const auto b = resolvability_regularize({{0, 1.0}}, w, 2, 0.5, 1, o);
  const auto c = resolvability_regularize({{1, 1.0}}, w, 2, 0.5, 0, o);
  EXPECT_TRUE(same_regularized_distribution(a, b));
  EXPECT_FALSE(same_regularized_distribution(a, c));
}

TEST(PreservesId, IdentityRegularizationKeepsErrors) {
  const auto w = embed_classical({{0.9, 0.1}, {0.2, 0.8}});
  QIDCode code{2, {{{{0, 1.0}}, HermitianMatrix::diagonal({1, 0, 0, 0})},
                   {{{3, 1.0}}, HermitianMatrix::diagonal({0, 0, 0, 1})}}};
  std::vector<RegularizationResult> regs;
  for (const auto& e : code.entries) regs.push_back(resolvability_regularize(e.P, w, 2, 0.5, 0));
  const auto r = approximation_preserves_id(code, w, regs);
  EXPECT_NEAR(r.regularized.lambda1, r.original.lambda1, 1e-14);
  EXPECT_NEAR(r.regularized.lambda2, r.original.lambda2, 1e-14);
}

TEST(PreservesId, PerturbedPerfectCode) {
  const auto w = embed_classical({{1, 0}, {0, 1}});
  QIDCode code{1, {{{{0, 1.0}}, HermitianMatrix::diagonal({1, 0})}, {{{1, 1.0}}, HermitianMatrix::diagonal({0, 1})}}};
  RegularizationResult r0, r1;
  r0.sparse_distribution = {{0, 0.9}, {1, 0.1}};
  r0.measured_distance = 0.1;
  r1.sparse_distribution = {{1, 1.0}};
  const auto r = approximation_preserves_id(code, w, {r0, r1});
  EXPECT_LE(r.regularized.lambda1, 0.1 + 1e-15);
  EXPECT_LE(r.regularized.lambda2, 0.1 + 1e-15);
  EXPECT_THROW(approximation_preserves_id(code, w, {r0}), Error);
}

TEST(PreservesId, HoldsOnSeededPipelineRuns) {
  const auto w = zero_plus();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    QIDCode code{3, {{random_sparse(rng, 8), random_effect(rng, 8)}, {random_sparse(rng, 8), random_effect(rng, 8)}}};
    RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 1.0, .eps = 0.2, .tau = 0.2, .L = 2};
    std::vector<RegularizationResult> regs;
    for (std::size_t i = 0; i < 2; ++i)
      regs.push_back(resolvability_regularize(code.entries[i].P, w, 3, 0.5, derive_seed(seed, i), o));
    EXPECT_NO_THROW(approximation_preserves_id(code, w, regs));
  }
}

TEST(CountBounds, Arithmetic) {
  EXPECT_EQ(code_count_bound(1, 1, 2, 1), 1.0L);
  EXPECT_EQ(code_count_bound(125, 64, 2, 4), 32000.0L);
  EXPECT_EQ(code_count_bound(3, 5, 4, 7), 210.0L);
  EXPECT_EQ(strong_converse_bound(100, 0.6, 0.01), 61.0L);
  EXPECT_EQ(strong_converse_bound(10, 0.1, 0.2), 3.0L);
  EXPECT_NEAR(static_cast<double>(strong_converse_bound(7, 0.5, 1e-300)), 3.5, 1e-15);
  EXPECT_THROW(strong_converse_bound(1, 0.5, 0.0), Error);
}

TEST(CountBounds, StrongConverseDominatesEventually) {
  // log₂log₂ of exp(exp(n(C+δ))) grows linearly, log₂log₂ of the count bound
  // only logarithmically once K, L are fixed.
  const std::uint64_t K = 125, L = 1000;
  for (std::uint64_t n = 64; n <= 4096; n *= 2) {
    const long double cc = std::log2(code_count_bound(K, L, 2, n));
    EXPECT_GT(strong_converse_bound(n, 0.6, 0.01), cc) << n;
  }
  long double prev = 0.0L;
  for (double delta : {0.1, 0.01, 0.001, 1e-6}) {
    const auto v = strong_converse_bound(100, 0.6, delta);
    EXPECT_GE(v, 60.0L);
    if (prev > 0) EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(ResolutionProbe, IdenticalOutputsNeedOneAtom) {
  const DensityOperator rho(HermitianMatrix::diagonal({0.6, 0.4}));
  const CQChannel w({rho, rho});
  const auto r = resolution_probe(uniform_on(8), w, 3, 0.0 + 1e-12, 3);
  EXPECT_EQ(r.min_support, 1u);
}

TEST(ResolutionProbe, PointMassNeedsOneAtom) {
  for (double eps : {0.0, 0.1, 1.0}) EXPECT_EQ(resolution_probe({{5, 1.0}}, zero_plus(), 3, eps, 0).min_support, 1u);
}

TEST(ResolutionProbe, MonotoneInEps) {
  const auto candidates = resolution_candidates(uniform_on(16), zero_plus(), 4, 123);
  std::uint64_t prev = 0;
  for (double eps = 0.0; eps <= 2.0; eps += 0.05) {
    const auto r = select_min_support(candidates, eps);
    ASSERT_GT(r.min_support, 0u);
    if (prev > 0) EXPECT_LE(r.min_support, prev) << eps;
    prev = r.min_support;
  }
  EXPECT_EQ(select_min_support(candidates, 0.0).min_support, 16u);
  EXPECT_EQ(select_min_support(candidates, 2.0).min_support, 1u);
  const auto probe = resolution_probe(uniform_on(16), zero_plus(), 4, 0.5, 123);
  EXPECT_EQ(probe.min_support, select_min_support(candidates, 0.5).min_support);
}
