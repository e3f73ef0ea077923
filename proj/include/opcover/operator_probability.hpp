#ifndef OPCOVER_OPERATOR_PROBABILITY_HPP
#define OPCOVER_OPERATOR_PROBABILITY_HPP

// Finitely supported operator-valued random variables and tail bounds for
// their i.i.d. sums: Markov, Chebyshev, the weak law, the Bernstein trick and
// the operator Chernoff bounds.  A sum of n i.i.d. draws depends only on how
// often each atom occurs, so tail probabilities are computed exactly by
// enumerating count vectors whenever there are at most kEnumerationLimit of
// them, otherwise by seeded Monte Carlo.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "opcover/operator_core.hpp"
#include "opcover/parallel.hpp"
#include "opcover/rng.hpp"

namespace opcover {

inline constexpr double kEnumerationLimit = 2e6;

struct Atom {
  double probability;
  HermitianMatrix value;
};

class OperatorRV {
 public:
  explicit OperatorRV(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    require(!atoms_.empty(), ErrorKind::invalid_argument, "random variable needs a non-empty support");
    double total = 0.0;
    for (const auto& a : atoms_) {
      require(a.probability >= 0.0 && a.probability <= 1.0, ErrorKind::domain,
              "atom probability outside [0,1]");
      require(a.value.dim() == atoms_.front().value.dim(), ErrorKind::dimension_mismatch,
              "all atoms must share one dimension");
      total += a.probability;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::domain,
            "probabilities sum to " + std::to_string(total));
  }

  static OperatorRV deterministic(HermitianMatrix value) {
    return OperatorRV({{1.0, std::move(value)}});
  }
  static OperatorRV uniform(const std::vector<HermitianMatrix>& values) {
    std::vector<Atom> atoms;
    for (const auto& v : values) atoms.push_back({1.0 / static_cast<double>(values.size()), v});
    return OperatorRV(std::move(atoms));
  }

  int dim() const { return atoms_.front().value.dim(); }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  std::vector<double> probabilities() const {
    std::vector<double> p;
    for (const auto& a : atoms_) p.push_back(a.probability);
    return p;
  }

  bool values_psd() const {
    for (const auto& a : atoms_)
      if (!is_psd(a.value)) return false;
    return true;
  }

  /// All values in [0, 1].
  bool values_in_unit_interval() const {
    const HermitianMatrix one = HermitianMatrix::identity(dim());
    for (const auto& a : atoms_)
      if (!is_psd(a.value) || !psd_leq(a.value, one)) return false;
    return true;
  }

 private:
  std::vector<Atom> atoms_;
};

inline HermitianMatrix mean(const OperatorRV& x) {
  HermitianMatrix m = HermitianMatrix::zero(x.dim());
  for (const auto& a : x.atoms()) m += a.probability * a.value;
  return m;
}

/// E((X − M)²)
inline HermitianMatrix variance(const OperatorRV& x) {
  const HermitianMatrix m = mean(x);
  Matrix s = Matrix::Zero(x.dim(), x.dim());
  for (const auto& a : x.atoms()) {
    const Matrix c = (a.value - m).matrix();
    s += a.probability * (c * c);
  }
  return HermitianMatrix::from_trusted(std::move(s));
}

/// Distribution of X + Y for independent X, Y.
inline OperatorRV convolve(const OperatorRV& x, const OperatorRV& y) {
  x.atoms().front().value.check_same_dim(y.atoms().front().value);
  std::vector<Atom> atoms;
  double total = 0.0;
  for (const auto& a : x.atoms())
    for (const auto& b : y.atoms()) {
      atoms.push_back({a.probability * b.probability, a.value + b.value});
      total += a.probability * b.probability;
    }
  // Renormalize product rounding so the invariant holds to 1e-12.
  for (auto& a : atoms) a.probability /= total;
  return OperatorRV(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Tail evaluation

enum class TailMethod { exact, monte_carlo };

inline const char* to_string(TailMethod m) {
  return m == TailMethod::exact ? "exact" : "monte_carlo";
}

struct TailOptions {
  std::uint64_t trials = 0;  // used only when enumeration is infeasible
  std::uint64_t seed = 0;
  bool force_monte_carlo = false;
  unsigned workers = 0;
};

struct TailReport {
  double exact_or_empirical = 0.0;
  double bound = 0.0;
  int n = 1;
  std::uint64_t trials = 0;  // 0 means exhaustive enumeration
  std::uint64_t seed = 0;
  TailMethod method = TailMethod::exact;
  double std_error = 0.0;  // Monte Carlo only
  // Bound used to flag implementation bugs on exact results; differs from
  // `bound` only where the stated bound relies on an invalid inequality.
  double rigorous_bound = 0.0;
  bool trivial_bound = false;
  bool holds = true;  // probability <= bound, or bound >= 1
};

/// True iff A − X is not PSD within the global tolerance (X ≰ A).
inline bool not_leq(const HermitianMatrix& x, const HermitianMatrix& a) { return !psd_leq(x, a); }

/// Number of count vectors of length k summing to n: C(n+k−1, k−1).
inline double composition_count(std::size_t k, int n) {
  double c = 1.0;
  for (std::size_t i = 1; i < k; ++i) c = c * static_cast<double>(n + i) / static_cast<double>(i);
  return c;
}

inline bool enumeration_feasible(std::size_t support, int n) {
  return composition_count(support, n) <= kEnumerationLimit;
}

namespace detail {

inline double log_multinomial(int n, const std::vector<int>& counts) {
  double r = std::lgamma(n + 1.0);
  for (int c : counts) r -= std::lgamma(c + 1.0);
  return r;
}

/// Visits every count vector (c_1..c_k) with Σc = n.
inline void for_each_composition(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> c(k, 0);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == k - 1) {
      c[idx] = left;
      visit(c);
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, n);
}

}  // namespace detail

using SumEvent = std::function<bool(const HermitianMatrix& sum)>;

struct SumTail {
  double probability;
  TailMethod method;
  std::uint64_t trials;
  double std_error;
};

/// Pr{event(X_1 + … + X_n)} for i.i.d. copies of X.  Exact enumeration runs
/// over count vectors (the sum depends only on how often each atom occurs).
inline SumTail sum_tail(const OperatorRV& x, int n, const SumEvent& event, const TailOptions& opts) {
  require(n >= 1, ErrorKind::invalid_argument, "n must be positive");
  const auto& atoms = x.atoms();
  const int k = static_cast<int>(atoms.size());
  if (!opts.force_monte_carlo && enumeration_feasible(atoms.size(), n)) {
    std::vector<double> logp(k);
    for (int j = 0; j < k; ++j)
      logp[j] = atoms[j].probability > 0.0 ? std::log(atoms[j].probability)
                                           : -std::numeric_limits<double>::infinity();
    double prob = 0.0;
    detail::for_each_composition(n, k, [&](const std::vector<int>& c) {
      double lp = detail::log_multinomial(n, c);
      for (int j = 0; j < k; ++j)
        if (c[j] > 0) lp += c[j] * logp[j];
      if (!std::isfinite(lp)) return;
      HermitianMatrix s = HermitianMatrix::zero(x.dim());
      for (int j = 0; j < k; ++j)
        if (c[j] > 0) s += static_cast<double>(c[j]) * atoms[j].value;
      if (event(s)) prob += std::exp(lp);
    });
    return {std::min(1.0, prob), TailMethod::exact, 0, 0.0};
  }
  require(opts.trials > 0, ErrorKind::size_overflow,
          "enumeration limit exceeded; Monte Carlo trials required");
  const Rng master(opts.seed);
  const std::vector<double> probs = x.probabilities();
  std::vector<unsigned char> hit(opts.trials, 0);
  parallel_for(
      opts.trials,
      [&](std::size_t t) {
        Rng rng = master.split(t);
        const auto counts = rng.multinomial(static_cast<std::uint64_t>(n), probs);
        HermitianMatrix s = HermitianMatrix::zero(x.dim());
        for (int j = 0; j < k; ++j)
          if (counts[j] > 0) s += static_cast<double>(counts[j]) * atoms[j].value;
        hit[t] = event(s) ? 1 : 0;
      },
      opts.workers);
  std::uint64_t hits = 0;
  for (auto h : hit) hits += h;
  const double p = static_cast<double>(hits) / static_cast<double>(opts.trials);
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(opts.trials));
  return {p, TailMethod::monte_carlo, opts.trials, se};
}

namespace detail {

inline TailReport make_report(const SumTail& t, double bound, int n, const TailOptions& opts,
                              double rigorous_bound = -1.0) {
  if (rigorous_bound < 0.0) rigorous_bound = bound;
  TailReport r;
  r.exact_or_empirical = t.probability;
  r.bound = bound;
  r.n = n;
  r.trials = t.trials;
  r.seed = opts.seed;
  r.method = t.method;
  r.std_error = t.std_error;
  r.rigorous_bound = rigorous_bound;
  r.holds = bound >= 1.0 || t.probability <= bound + 1e-12;
  // An exact probability above a proven bound means an implementation bug.
  if (t.method == TailMethod::exact && rigorous_bound < 1.0 && t.probability > rigorous_bound + 1e-12)
    throw Error(ErrorKind::bound_violated, "exact tail " + std::to_string(t.probability) +
                                               " exceeds bound " + std::to_string(rigorous_bound));
  return r;
}

}  // namespace detail

/// Pr{X ≰ A} <= Tr(M A⁻¹) for PSD-valued X.  When supp A does not contain
/// supp M the bound is reported as +inf (trivial) rather than failing.
inline TailReport markov_tail(const OperatorRV& x, const HermitianMatrix& a) {
  require(x.values_psd(), ErrorKind::domain, "Markov inequality needs PSD values");
  require(is_psd(a), ErrorKind::domain, "Markov threshold A must be PSD");
  x.atoms().front().value.check_same_dim(a);
  const HermitianMatrix m = mean(x);
  double bound = std::numeric_limits<double>::infinity();
  bool trivial = true;
  if (support_contains(a, m)) {
    bound = m.trace_product(pseudo_inverse(a));
    trivial = false;
  }
  const auto t = sum_tail(x, 1, [&](const HermitianMatrix& s) { return not_leq(s, a); }, {});
  TailReport r = detail::make_report(t, bound, 1, {});
  r.trivial_bound = trivial;
  return r;
}

/// Pr{|X − M| ≰ Δ} <= Tr(S² Δ⁻²), |·| the spectral absolute value.
inline TailReport chebyshev_tail(const OperatorRV& x, const HermitianMatrix& delta) {
  x.atoms().front().value.check_same_dim(delta);
  require(delta.min_eigenvalue() > kPsdTol, ErrorKind::domain, "Chebyshev Δ must be positive definite");
  const HermitianMatrix m = mean(x);
  const HermitianMatrix s2 = variance(x);
  const double bound = s2.trace_product(matrix_function(delta, MatrixFunction::power(-2.0)));
  const auto t = sum_tail(
      x, 1, [&](const HermitianMatrix& s) { return not_leq(mabs(s - m), delta); }, {});
  return detail::make_report(t, bound, 1, {});
}

/// Pr{(1/n)ΣXᵢ ∉ [M − Δ, M + Δ]} <= (1/n) Tr(S² Δ⁻²).
inline TailReport weak_law_tail(const OperatorRV& x, int n, const HermitianMatrix& delta,
                                const TailOptions& opts = {}) {
  x.atoms().front().value.check_same_dim(delta);
  require(delta.min_eigenvalue() > kPsdTol, ErrorKind::domain, "weak law Δ must be positive definite");
  const HermitianMatrix m = mean(x);
  const HermitianMatrix s2 = variance(x);
  const double bound = s2.trace_product(matrix_function(delta, MatrixFunction::power(-2.0))) / n;
  const HermitianMatrix lo = static_cast<double>(n) * (m - delta);
  const HermitianMatrix hi = static_cast<double>(n) * (m + delta);
  const auto t = sum_tail(
      x, n, [&](const HermitianMatrix& s) { return not_leq(lo, s) || not_leq(s, hi); }, opts);
  return detail::make_report(t, bound, n, opts);
}

/// d · ‖E exp(TXT − TAT)‖ⁿ, an upper bound on Pr{ΣXᵢ ≰ nA}.  T is Hermitian
/// and invertible (a general T reduces to |T| by polar decomposition).
inline double bernstein_bound(const OperatorRV& x, const HermitianMatrix& a, const HermitianMatrix& t, int n) {
  x.atoms().front().value.check_same_dim(a);
  a.check_same_dim(t);
  require(t.eigenvalues().cwiseAbs().minCoeff() > kPsdTol, ErrorKind::domain,
          "Bernstein trick needs an invertible T");
  const HermitianMatrix shift = a.congruence(t.matrix());
  HermitianMatrix expectation = HermitianMatrix::zero(x.dim());
  for (const auto& atom : x.atoms())
    expectation += atom.probability * mexp(atom.value.congruence(t.matrix()) - shift);
  return x.dim() * std::pow(expectation.spectral_norm(), n);
}

/// The scalar optimizer t = ln(a(1 − m) / (m(1 − a))) of the Chernoff proof.
inline double chernoff_optimal_t(double a, double m) {
  require(a > 0.0 && a < 1.0 && m > 0.0 && m < 1.0, ErrorKind::domain,
          "optimal t needs a, m in (0,1)");
  return std::log(a / m * (1.0 - m) / (1.0 - a));
}

enum class TailSide { upper, lower };

/// Operator Chernoff bound for X ∈ [0, 1]:
///   upper: E X <= m1, a >= m, Pr{ΣXᵢ ≰ n a 1} <= d 2^(−n D(a‖m));
///   lower: E X >= m1, a <= m, Pr{ΣXᵢ ≱ n a 1} <= d 2^(−n D(a‖m)).
inline TailReport chernoff_tail(const OperatorRV& x, int n, double a, double m, TailSide side,
                                const TailOptions& opts = {}) {
  require(x.values_in_unit_interval(), ErrorKind::domain, "Chernoff bound needs values in [0,1]");
  const HermitianMatrix mu = mean(x);
  const int d = x.dim();
  if (side == TailSide::upper) {
    require(0.0 <= m && m <= a && a <= 1.0, ErrorKind::domain, "upper tail needs 0 <= m <= a <= 1");
    require(mu.max_eigenvalue() <= m + kPsdTol, ErrorKind::domain, "upper tail needs E X <= m 1");
  } else {
    require(0.0 <= a && a <= m && m <= 1.0, ErrorKind::domain, "lower tail needs 0 <= a <= m <= 1");
    require(mu.min_eigenvalue() >= m - kPsdTol, ErrorKind::domain, "lower tail needs E X >= m 1");
  }
  const double div = binary_divergence(a, m);
  const double bound = d * std::exp2(-n * div);
  const HermitianMatrix threshold = HermitianMatrix::identity(d) * (n * a);
  SumEvent event;
  if (side == TailSide::upper)
    event = [&](const HermitianMatrix& s) { return not_leq(s, threshold); };
  else
    event = [&](const HermitianMatrix& s) { return not_leq(threshold, s); };
  return detail::make_report(sum_tail(x, n, event, opts), bound, n, opts);
}

/// 2d · 2^(−n ε² μ / (2 ln 2)) with μ the minimal eigenvalue of E X.
inline double two_sided_chernoff_bound(int d, int n, double eps, double mu) {
  return 2.0 * d * std::exp2(-n * binary_divergence_quadratic_bound(eps, mu));
}

/// d [2^(−n D((1−ε)μ‖μ)) + 2^(−n D((1+ε)μ‖μ))], the sum of the two one-sided
/// Chernoff bounds before the quadratic relaxation.  The relaxation
/// D((1+x)μ‖μ) >= x²μ/(2 ln 2) fails for x > 0 and small μ, so only this form
/// is a guaranteed bound.
inline double two_sided_chernoff_divergence_bound(int d, int n, double eps, double mu) {
  const double lower = d * std::exp2(-n * binary_divergence((1.0 - eps) * mu, mu));
  const double upper = (1.0 + eps) * mu <= 1.0 ? d * std::exp2(-n * binary_divergence((1.0 + eps) * mu, mu)) : 0.0;
  return lower + upper;
}

/// Pr{(1/n)ΣXᵢ ∉ [(1 − ε)M, (1 + ε)M]} for X ∈ [0, 1] with M >= μ1, μ > 0.
inline TailReport two_sided_chernoff(const OperatorRV& x, int n, double eps, const TailOptions& opts = {}) {
  require(eps >= 0.0 && eps <= 0.5, ErrorKind::domain, "ε must lie in [0, 1/2]");
  require(x.values_in_unit_interval(), ErrorKind::domain, "Chernoff bound needs values in [0,1]");
  const HermitianMatrix m = mean(x);
  const double mu = m.min_eigenvalue();
  require(mu > 0.0, ErrorKind::domain, "two-sided Chernoff needs μ = λmin(E X) > 0");
  const double bound = two_sided_chernoff_bound(x.dim(), n, eps, mu);
  const double rigorous = two_sided_chernoff_divergence_bound(x.dim(), n, eps, mu);
  const HermitianMatrix lo = (n * (1.0 - eps)) * m;
  const HermitianMatrix hi = (n * (1.0 + eps)) * m;
  const auto t = sum_tail(
      x, n, [&](const HermitianMatrix& s) { return not_leq(lo, s) || not_leq(s, hi); }, opts);
  return detail::make_report(t, bound, n, opts, rigorous);
}

}  // namespace opcover

#endif  // OPCOVER_OPERATOR_PROBABILITY_HPP
