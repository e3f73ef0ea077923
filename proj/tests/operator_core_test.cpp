#include <gtest/gtest.h>

#include <cmath>

#include "opcover/operator_core.hpp"
#include "opcover/random_ops.hpp"

using namespace opcover;

namespace {

CVector ket(std::initializer_list<Complex> v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) out[i++] = c;
  return out;
}

// Independent oracle for the binary entropy in bits.
double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST(HermitianMatrix, RejectsNonHermitianInput) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(HermitianMatrix{m}, Error);
  try {
    HermitianMatrix h{m};
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_hermitian);
  }
}

TEST(HermitianMatrix, SpectralRoundTrip) {
  Rng rng(11);
  for (int dim = 1; dim <= 16; ++dim) {
    const HermitianMatrix a = random_hermitian(rng, dim);
    const HermitianMatrix back = reassemble(a.spectrum());
    EXPECT_LE((back.matrix() - a.matrix()).norm() / a.matrix().norm(), 1e-10) << "dim " << dim;
  }
}

TEST(PsdOrder, ScalarAndReflexive) {
  EXPECT_TRUE(psd_leq(HermitianMatrix::diagonal({0.0}), HermitianMatrix::diagonal({1.0})));
  EXPECT_TRUE(psd_leq(HermitianMatrix::identity(2), HermitianMatrix::identity(2)));
}

TEST(PsdOrder, IncomparablePair) {
  const auto a = HermitianMatrix::diagonal({1.0, 0.0});
  const auto b = HermitianMatrix::diagonal({0.0, 1.0});
  EXPECT_FALSE(psd_leq(a, b));
  EXPECT_FALSE(psd_leq(b, a));
}

TEST(PsdOrder, DimensionMismatchThrows) {
  EXPECT_THROW(psd_leq(HermitianMatrix::identity(2), HermitianMatrix::identity(3)), Error);
}

TEST(MatrixFunction, WorkedExamples) {
  EXPECT_TRUE(approx_equal(mexp(HermitianMatrix::zero(2)), HermitianMatrix::identity(2), 1e-14));
  EXPECT_TRUE(approx_equal(msqrt(HermitianMatrix::diagonal({4.0, 9.0})),
                           HermitianMatrix::diagonal({2.0, 3.0}), 1e-12));
  EXPECT_TRUE(approx_equal(matrix_function(HermitianMatrix::diagonal({1.0, 2.0}), MatrixFunction::log2()),
                           HermitianMatrix::diagonal({0.0, 1.0}), 1e-12));
}

TEST(MatrixFunction, LogOfNegativeOperatorThrows) {
  EXPECT_THROW(mlog(HermitianMatrix::diagonal({1.0, -0.5})), Error);
  // Tiny negative eigenvalues inside the PSD band are clamped, not rejected.
  EXPECT_NO_THROW(msqrt(HermitianMatrix::diagonal({1.0, -1e-12})));
}

TEST(MatrixFunction, LogOnSupportOfSingularOperator) {
  const auto l = mlog(HermitianMatrix::diagonal({std::exp(1.0), 0.0}));
  EXPECT_NEAR(l(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(l(1, 1).real(), 0.0, 1e-15);
}

TEST(MatrixFunction, OperatorMonotonicitySpotCheck) {
  Rng rng(2024);
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    const int dim = 1 + static_cast<int>(rng.index_below(4));
    const HermitianMatrix a = random_psd(rng, dim, 2.0);
    const HermitianMatrix b = a + random_psd(rng, dim, 1.0);  // A <= B
    ASSERT_TRUE(psd_leq(msqrt(a), msqrt(b), 1e-9)) << "instance " << i;
    const auto one = HermitianMatrix::identity(dim);
    ASSERT_TRUE(psd_leq(mlog(a + one), mlog(b + one), 1e-9)) << "instance " << i;
  }
}

TEST(MatrixFunction, GoldenThompson) {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const int dim = 2 + static_cast<int>(rng.index_below(3));
    const HermitianMatrix a = random_hermitian(rng, dim);
    const HermitianMatrix b = random_hermitian(rng, dim);
    const double lhs = mexp(a + b).trace();
    const double rhs = mexp(a).trace_product(mexp(b));
    ASSERT_LE(lhs, rhs + 1e-9 * std::max(1.0, rhs)) << "instance " << i;
  }
}

TEST(TraceDistance, WorkedExamples) {
  const auto rho = DensityOperator(HermitianMatrix::diagonal({0.75, 0.25}));
  const auto sigma = DensityOperator::maximally_mixed(2);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(rho, sigma), 0.5, 1e-14);
  const auto zero = DensityOperator::pure(ket({1, 0}));
  const auto one = DensityOperator::pure(ket({0, 1}));
  EXPECT_NEAR(trace_distance(zero, one), 2.0, 1e-14);
}

TEST(TraceDistance, IsAMetricOnSampledTriples) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const int dim = 1 + static_cast<int>(rng.index_below(4));
    const auto a = random_density(rng, dim);
    const auto b = random_density(rng, dim);
    const auto c = random_density(rng, dim);
    EXPECT_EQ(trace_distance(a, b), trace_distance(b, a));
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-10);
  }
}

TEST(DensityOperator, RejectsInvalidStates) {
  EXPECT_THROW(DensityOperator(HermitianMatrix::diagonal({0.5, 0.6})), Error);
  EXPECT_THROW(DensityOperator(HermitianMatrix::diagonal({1.5, -0.5})), Error);
}

TEST(Entropy, WorkedExamples) {
  EXPECT_NEAR(von_neumann_entropy(DensityOperator::pure(ket({1, Complex(0, 1)}))), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(2)), 1.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityOperator(HermitianMatrix::diagonal({0.75, 0.25}))), h2(0.25), 1e-12);
  EXPECT_NEAR(h2(0.25), 0.811278, 1e-6);
}

TEST(BinaryDivergence, WorkedExamples) {
  for (double m : {0.1, 0.5, 0.93}) EXPECT_NEAR(binary_divergence(m, m), 0.0, 1e-15);
  // Direct formula evaluation: 0.75 log2(1.5) + 0.25 log2(0.5).
  const double oracle = 0.75 * std::log2(0.75 / 0.5) + 0.25 * std::log2(0.25 / 0.5);
  EXPECT_NEAR(binary_divergence(0.75, 0.5), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.188722, 1e-6);
  EXPECT_NEAR(binary_divergence(1.0, 0.5), 1.0, 1e-15);
  EXPECT_TRUE(std::isinf(binary_divergence(0.5, 0.0)));
  EXPECT_EQ(binary_divergence(0.0, 0.0), 0.0);
}

TEST(BinaryDivergence, QuadraticLowerBoundOnLowerSide) {
  for (double mu : {0.01, 0.05, 0.3, 0.6, 0.9})
    for (double x = -0.5; x <= 0.0; x += 0.025)
      EXPECT_GE(binary_divergence((1 + x) * mu, mu), binary_divergence_quadratic_bound(x, mu) - 1e-15);
}

TEST(BinaryDivergence, QuadraticBoundFailsAboveTheMeanForSmallMu) {
  // D(0.075‖0.05) = 0.075 log2 1.5 + 0.925 log2(0.925/0.95) < 0.25·0.05/(2 ln 2).
  const double direct = 0.075 * std::log2(1.5) + 0.925 * std::log2(0.925 / 0.95);
  EXPECT_NEAR(binary_divergence(0.075, 0.05), direct, 1e-15);
  EXPECT_LT(direct, binary_divergence_quadratic_bound(0.5, 0.05));
}

TEST(OperatorDivergence, SelfDivergenceVanishes) {
  Rng rng(3);
  const auto m = random_effect(rng, 3, 0.1, 0.9);
  EXPECT_LE(operator_divergence(m, m).matrix().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OperatorDivergence, CommutingCaseIsEntrywise) {
  const auto d = operator_divergence(HermitianMatrix::diagonal({0.75, 0.5}), HermitianMatrix::diagonal({0.5, 0.5}));
  EXPECT_NEAR(d(0, 0).real(), binary_divergence(0.75, 0.5), 1e-12);
  EXPECT_NEAR(d(1, 1).real(), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d(0, 1)), 0.0, 1e-12);
}

TEST(OperatorDivergence, NonCommutingOutputIsHermitian) {
  Rng rng(8);
  const auto a = random_effect(rng, 2);
  const auto m = random_effect(rng, 2, 0.1, 0.9);
  const auto d = operator_divergence(a, m);
  EXPECT_LE((d.matrix() - d.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OperatorDivergence, BoundaryReferenceThrows) {
  EXPECT_THROW(operator_divergence(HermitianMatrix::diagonal({0.5, 0.5}), HermitianMatrix::diagonal({1.0, 0.5})),
               Error);
}

TEST(GentleProjection, WorkedExamples) {
  const auto rho = DensityOperator(HermitianMatrix::diagonal({0.9, 0.1}));
  const auto id = gentle_projection(rho, HermitianMatrix::identity(2));
  EXPECT_NEAR(id.bound, 0.0, 1e-15);
  EXPECT_TRUE(approx_equal(id.clipped, rho, 1e-15));

  // Pure qubit rotated off the projector: ‖ρ − ΠρΠ‖₁ has off-diagonal weight.
  const auto plus = DensityOperator::pure(ket({1, 1}));
  const auto g = gentle_projection(plus, HermitianMatrix::diagonal({1.0, 0.0}));
  EXPECT_LE(g.distance, g.bound);

  const auto clipped = gentle_projection(rho, HermitianMatrix::diagonal({1.0, 0.0}));
  EXPECT_NEAR(clipped.distance, 0.1, 1e-12);
  EXPECT_NEAR(clipped.bound, std::sqrt(0.8), 1e-12);
}

TEST(GentleProjection, RejectsNonProjector) {
  EXPECT_THROW(gentle_projection(DensityOperator::maximally_mixed(2), HermitianMatrix::diagonal({0.5, 1.0})),
               Error);
}

TEST(GentleProjection, SeededSuiteNeverViolates) {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const int dim = 1 + static_cast<int>(rng.index_below(4));
    const auto rho = random_density(rng, dim);
    const auto pi = random_projector(rng, dim, static_cast<int>(rng.index_below(dim + 1)));
    const auto g = gentle_projection(rho, pi);
    ASSERT_LE(g.distance, g.bound + 1e-12);
  }
}
