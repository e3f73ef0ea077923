#ifndef OPCOVER_OPERATOR_CORE_HPP
#define OPCOVER_OPERATOR_CORE_HPP

// Dense Hermitian matrices, the PSD order, spectral calculus, norms,
// entropies and divergences.
//
// Conventions:
//  * entropies and divergences are computed in nats and reported in bits;
//  * an operator is PSD when its minimal eigenvalue is at least
//    -kPsdTol * max(1, spectral norm); eigenvalues inside that band are
//    clamped to zero before log / sqrt / fractional powers;
//  * log of a singular operator is taken on its support.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "opcover/error.hpp"

namespace opcover {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kLn2 = std::numbers::ln2;

/// Eigen-decomposition A = U diag(values) U*, values ascending.
struct Spectrum {
  RVector values;
  Matrix vectors;
};

class HermitianMatrix {
 public:
  HermitianMatrix() : m_(Matrix::Zero(1, 1)) {}

  /// Validates |m(i,j) - conj(m(j,i))| <= tol and stores the exact
  /// Hermitian part, so downstream spectral code never sees asymmetry.
  explicit HermitianMatrix(const Matrix& m, double tol = kHermitianTol) {
    require(m.rows() == m.cols() && m.rows() >= 1, ErrorKind::dimension_mismatch,
            "Hermitian matrix must be square with dim >= 1");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
    require(skew <= tol * scale, ErrorKind::not_hermitian,
            "matrix is not Hermitian (max |A - A*| = " + std::to_string(skew) + ")");
    m_ = 0.5 * (m + m.adjoint());
  }

  static HermitianMatrix zero(int dim) { return from_trusted(Matrix::Zero(dim, dim)); }
  static HermitianMatrix identity(int dim) { return from_trusted(Matrix::Identity(dim, dim)); }

  static HermitianMatrix diagonal(std::span<const double> diag) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(diag.size()),
                            static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return HermitianMatrix(m);
  }
  static HermitianMatrix diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
  }

  /// |psi><psi| for a (not necessarily normalized) vector.
  static HermitianMatrix outer(const CVector& psi) {
    return from_trusted(psi * psi.adjoint());
  }

  /// Skips validation; for results that are Hermitian by construction.
  static HermitianMatrix from_trusted(Matrix m) {
    HermitianMatrix h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }

  Spectrum spectrum() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    require(solver.info() == Eigen::Success, ErrorKind::domain,
            "eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
  }
  RVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }
  double min_eigenvalue() const { return eigenvalues().minCoeff(); }
  double max_eigenvalue() const { return eigenvalues().maxCoeff(); }
  double spectral_norm() const { return eigenvalues().cwiseAbs().maxCoeff(); }
  double frobenius_norm() const { return m_.norm(); }

  /// T A T*
  HermitianMatrix congruence(const Matrix& t) const {
    return from_trusted(t * m_ * t.adjoint());
  }

  /// Tr(A B), real for Hermitian A and B.
  double trace_product(const HermitianMatrix& other) const {
    check_same_dim(other);
    return (m_.cwiseProduct(other.m_.transpose())).sum().real();
  }

  HermitianMatrix& operator+=(const HermitianMatrix& o) {
    check_same_dim(o);
    m_ += o.m_;
    return *this;
  }
  HermitianMatrix& operator-=(const HermitianMatrix& o) {
    check_same_dim(o);
    m_ -= o.m_;
    return *this;
  }
  HermitianMatrix& operator*=(double s) {
    m_ *= s;
    return *this;
  }
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  HermitianMatrix operator-() const { return from_trusted(-m_); }

  void check_same_dim(const HermitianMatrix& o) const {
    require(dim() == o.dim(), ErrorKind::dimension_mismatch,
            "dimension mismatch: " + std::to_string(dim()) + " vs " + std::to_string(o.dim()));
  }

 private:
  Matrix m_;
};

inline bool approx_equal(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  return a.dim() == b.dim() && (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= tol;
}

inline HermitianMatrix reassemble(const Spectrum& s) {
  return HermitianMatrix::from_trusted(s.vectors * s.values.asDiagonal() * s.vectors.adjoint());
}

/// Applies a real function to the eigenvalues: U f(Λ) U*.
inline HermitianMatrix apply_spectral(const HermitianMatrix& a,
                                      const std::function<double(double)>& f) {
  const Spectrum s = a.spectrum();
  RVector mapped = s.values.unaryExpr(f);
  return reassemble({std::move(mapped), s.vectors});
}

// ---------------------------------------------------------------------------
// PSD order

/// Tolerance band used for "min eigenvalue >= 0".
inline double psd_band(const HermitianMatrix& a, double tol = kPsdTol) {
  return tol * std::max(1.0, a.spectral_norm());
}

inline bool is_psd(const HermitianMatrix& a, double tol = kPsdTol) {
  const RVector ev = a.eigenvalues();
  const double norm = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() >= -tol * std::max(1.0, norm);
}

/// A <= B in the PSD order.
inline bool psd_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol = kPsdTol) {
  a.check_same_dim(b);
  return is_psd(b - a, tol);
}

/// Smallest eigenvalue of B - A; non-negative iff A <= B.
inline double psd_slack(const HermitianMatrix& a, const HermitianMatrix& b) {
  a.check_same_dim(b);
  return (b - a).min_eigenvalue();
}

/// The closed operator interval [lower, upper].
class OperatorInterval {
 public:
  OperatorInterval(HermitianMatrix lower, HermitianMatrix upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    require(psd_leq(lower_, upper_), ErrorKind::domain, "interval requires lower <= upper");
  }
  const HermitianMatrix& lower() const { return lower_; }
  const HermitianMatrix& upper() const { return upper_; }
  bool contains(const HermitianMatrix& x, double tol = kPsdTol) const {
    return psd_leq(lower_, x, tol) && psd_leq(x, upper_, tol);
  }

 private:
  HermitianMatrix lower_;
  HermitianMatrix upper_;
};

// ---------------------------------------------------------------------------
// Spectral calculus

enum class MatrixFunctionKind { exp, log, log2, sqrt, power, abs };

struct MatrixFunction {
  MatrixFunctionKind kind;
  double exponent = 1.0;

  static MatrixFunction exp() { return {MatrixFunctionKind::exp}; }
  static MatrixFunction log() { return {MatrixFunctionKind::log}; }
  static MatrixFunction log2() { return {MatrixFunctionKind::log2}; }
  static MatrixFunction sqrt() { return {MatrixFunctionKind::sqrt}; }
  static MatrixFunction power(double s) { return {MatrixFunctionKind::power, s}; }
  static MatrixFunction abs() { return {MatrixFunctionKind::abs}; }
};

/// U f(Λ) U*.  log/log2/sqrt/fractional powers require A PSD; log is
/// evaluated on the support (eigenvalues at or below the PSD band map to 0).
inline HermitianMatrix matrix_function(const HermitianMatrix& a, MatrixFunction f) {
  const Spectrum s = a.spectrum();
  const double norm = s.values.cwiseAbs().maxCoeff();
  const double band = kPsdTol * std::max(1.0, norm);
  const bool needs_psd = f.kind == MatrixFunctionKind::log ||
                         f.kind == MatrixFunctionKind::log2 ||
                         f.kind == MatrixFunctionKind::sqrt ||
                         (f.kind == MatrixFunctionKind::power && f.exponent != std::floor(f.exponent));
  if (needs_psd) {
    require(s.values.minCoeff() >= -band, ErrorKind::not_psd,
            "matrix function requires a PSD argument (min eigenvalue " +
                std::to_string(s.values.minCoeff()) + ")");
  }
  RVector mapped(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    double x = s.values[i];
    if (needs_psd && x < 0.0) x = 0.0;
    switch (f.kind) {
      case MatrixFunctionKind::exp: mapped[i] = std::exp(x); break;
      case MatrixFunctionKind::log: mapped[i] = x > band ? std::log(x) : 0.0; break;
      case MatrixFunctionKind::log2: mapped[i] = x > band ? std::log2(x) : 0.0; break;
      case MatrixFunctionKind::sqrt: mapped[i] = std::sqrt(x); break;
      case MatrixFunctionKind::power:
        if (f.exponent < 0.0) {
          // Inverse powers on the support.
          mapped[i] = x > band ? std::pow(x, f.exponent) : 0.0;
        } else {
          mapped[i] = std::pow(x, f.exponent);
        }
        break;
      case MatrixFunctionKind::abs: mapped[i] = std::abs(x); break;
    }
  }
  return reassemble({std::move(mapped), s.vectors});
}

inline HermitianMatrix mexp(const HermitianMatrix& a) { return matrix_function(a, MatrixFunction::exp()); }
inline HermitianMatrix mlog(const HermitianMatrix& a) { return matrix_function(a, MatrixFunction::log()); }
inline HermitianMatrix msqrt(const HermitianMatrix& a) { return matrix_function(a, MatrixFunction::sqrt()); }
inline HermitianMatrix mabs(const HermitianMatrix& a) { return matrix_function(a, MatrixFunction::abs()); }

/// Inverse on the support (Moore–Penrose pseudo-inverse for Hermitian A).
inline HermitianMatrix pseudo_inverse(const HermitianMatrix& a) {
  const Spectrum s = a.spectrum();
  const double band = kPsdTol * std::max(1.0, s.values.cwiseAbs().maxCoeff());
  RVector inv = s.values.unaryExpr([band](double x) { return std::abs(x) > band ? 1.0 / x : 0.0; });
  return reassemble({std::move(inv), s.vectors});
}

/// Orthogonal projector onto the span of eigenvectors with |eigenvalue| > band.
inline HermitianMatrix support_projector(const HermitianMatrix& a, double tol = kPsdTol) {
  const Spectrum s = a.spectrum();
  const double band = tol * std::max(1.0, s.values.cwiseAbs().maxCoeff());
  RVector ind = s.values.unaryExpr([band](double x) { return std::abs(x) > band ? 1.0 : 0.0; });
  return reassemble({std::move(ind), s.vectors});
}

/// True if supp(inner) is contained in supp(outer), both PSD.
inline bool support_contains(const HermitianMatrix& outer, const HermitianMatrix& inner,
                             double tol = kPsdTol) {
  const HermitianMatrix kernel = HermitianMatrix::identity(outer.dim()) - support_projector(outer, tol);
  const double leak = kernel.trace_product(inner);
  return leak <= tol * std::max(1.0, inner.trace());
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::from_trusted(kron(a.matrix(), b.matrix()));
}

/// Tensor product of a list of factors, left to right.
inline HermitianMatrix kron_all(std::span<const HermitianMatrix> factors) {
  require(!factors.empty(), ErrorKind::invalid_argument, "kron_all of an empty list");
  Matrix acc = factors.front().matrix();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i].matrix());
  return HermitianMatrix::from_trusted(std::move(acc));
}

inline double commutator_norm(const HermitianMatrix& a, const HermitianMatrix& b) {
  a.check_same_dim(b);
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm();
}

inline bool is_projector(const HermitianMatrix& p, double tol = kPsdTol) {
  return (p.matrix() * p.matrix() - p.matrix()).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// States, norms, entropies

class DensityOperator {
 public:
  explicit DensityOperator(HermitianMatrix m) : m_(std::move(m)) {
    const RVector ev = m_.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    require(ev.minCoeff() >= -kPsdTol * norm, ErrorKind::not_psd,
            "density operator has a negative eigenvalue " + std::to_string(ev.minCoeff()));
    require(std::abs(m_.trace() - 1.0) <= 1e-9, ErrorKind::domain,
            "density operator trace is " + std::to_string(m_.trace()));
  }

  static DensityOperator maximally_mixed(int dim) {
    return DensityOperator(HermitianMatrix::identity(dim) * (1.0 / dim));
  }
  static DensityOperator pure(const CVector& psi) {
    return DensityOperator(HermitianMatrix::outer(psi / psi.norm()));
  }

  int dim() const { return m_.dim(); }
  const HermitianMatrix& matrix() const { return m_; }
  operator const HermitianMatrix&() const { return m_; }  // NOLINT(google-explicit-constructor)

 private:
  HermitianMatrix m_;
};

/// ‖A‖₁: sum of absolute eigenvalues.
inline double trace_norm(const HermitianMatrix& a) { return a.eigenvalues().cwiseAbs().sum(); }

/// ‖ρ − σ‖₁ (not halved).  Averaging both orientations makes the result
/// bitwise symmetric in its arguments.
inline double trace_distance(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  rho.check_same_dim(sigma);
  return 0.5 * (trace_norm(rho - sigma) + trace_norm(sigma - rho));
}

/// −Σ p log₂ p with 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h / kLn2;
}

inline double binary_entropy(double p) {
  const double v[2] = {p, 1.0 - p};
  return shannon_entropy(v);
}

inline double von_neumann_entropy(const HermitianMatrix& rho) {
  const RVector ev = rho.eigenvalues();
  double h = 0.0;
  for (double x : ev)
    if (x > kPsdTol) h -= x * std::log(x);
  return h / kLn2;
}

/// Umegaki relative entropy D(ρ‖σ) in bits; +inf when supp ρ ⊄ supp σ.
inline double relative_entropy(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  rho.check_same_dim(sigma);
  if (!support_contains(sigma, rho)) return std::numeric_limits<double>::infinity();
  const double tr_rho_log_rho = rho.trace_product(mlog(rho));
  const double tr_rho_log_sigma = rho.trace_product(mlog(sigma));
  return std::max(0.0, (tr_rho_log_rho - tr_rho_log_sigma) / kLn2);
}

/// Binary information divergence D(a‖m) in bits; +inf when m ∈ {0,1}, a ≠ m.
inline double binary_divergence(double a, double m) {
  require(a >= 0.0 && a <= 1.0 && m >= 0.0 && m <= 1.0, ErrorKind::domain,
          "binary divergence arguments must lie in [0,1]");
  auto term = [](double u, double v) {
    if (u == 0.0) return 0.0;
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    return u * (std::log(u) - std::log(v));
  };
  return (term(a, m) + term(1.0 - a, 1.0 - m)) / kLn2;
}

/// x²μ/(2 ln 2).  A lower bound on D((1+x)μ‖μ) for −1/2 <= x <= 0; for
/// x > 0 it can exceed the divergence when μ is small.
inline double binary_divergence_quadratic_bound(double x, double mu) {
  return x * x * mu / (2.0 * kLn2);
}

/// Operator binary divergence, in bits:
///   √A(log A − log M)√A + √(1−A)(log(1−A) − log(1−M))√(1−A).
/// Requires 0 <= A <= 1 and 0 < M < 1 strictly.
inline HermitianMatrix operator_divergence(const HermitianMatrix& a, const HermitianMatrix& m) {
  a.check_same_dim(m);
  const int d = a.dim();
  const HermitianMatrix one = HermitianMatrix::identity(d);
  const RVector m_ev = m.eigenvalues();
  require(m_ev.minCoeff() > kPsdTol && m_ev.maxCoeff() < 1.0 - kPsdTol, ErrorKind::domain,
          "operator divergence requires 0 < M < 1 strictly");
  require(is_psd(a) && is_psd(one - a), ErrorKind::domain, "operator divergence requires 0 <= A <= 1");
  const HermitianMatrix ac = one - a;
  const HermitianMatrix mc = one - m;
  const Matrix sa = msqrt(a).matrix();
  const Matrix sac = msqrt(ac).matrix();
  const Matrix first = sa * (mlog(a) - mlog(m)).matrix() * sa;
  const Matrix second = sac * (mlog(ac) - mlog(mc)).matrix() * sac;
  return HermitianMatrix::from_trusted((first + second) / kLn2);
}

struct GentleProjection {
  HermitianMatrix clipped;  // Π ρ Π
  double bound;             // √(8λ) with λ = 1 − Tr ρΠ
  double distance;          // ‖ρ − ΠρΠ‖₁
};

/// Clips a state to a projector; ‖ρ − ΠρΠ‖₁ <= √(8(1 − Tr ρΠ)) is checked.
inline GentleProjection gentle_projection(const HermitianMatrix& rho, const HermitianMatrix& pi) {
  rho.check_same_dim(pi);
  require(is_projector(pi), ErrorKind::domain, "gentle projection requires an idempotent Π");
  const double lambda = std::clamp(1.0 - rho.trace_product(pi), 0.0, 1.0);
  HermitianMatrix clipped = rho.congruence(pi.matrix());
  const double bound = std::sqrt(8.0 * lambda);
  const double distance = trace_distance(rho, clipped);
  require(distance <= bound + 1e-9, ErrorKind::bound_violated,
          "gentle projection bound violated: " + std::to_string(distance) + " > " +
              std::to_string(bound));
  return {std::move(clipped), bound, distance};
}

}  // namespace opcover

#endif  // OPCOVER_OPERATOR_CORE_HPP
