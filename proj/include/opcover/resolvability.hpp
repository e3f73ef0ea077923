#ifndef OPCOVER_RESOLVABILITY_HPP
#define OPCOVER_RESOLVABILITY_HPP

// QID codes and the regularization step of the strong converse: an arbitrary
// input distribution P on 𝒳ⁿ is replaced by a K·L-distribution P̄ whose output
// state stays close in trace norm.  Per type T:
//
//   P^T = P(·|𝒯ⁿ_T),  Q_{xⁿ} = Π_T Π_W(xⁿ) Wⁿ_{xⁿ} Π_W(xⁿ) Π_T,
//
// with Π_T the typical projector of TW at α√a and Π_W(xⁿ) the conditional
// typical projector at α.  The quantum covering sampler (on the range of Π_T)
// turns P^T into an L-distribution P̄^T; type weights are rounded to a
// K-distribution R and P̄ = Σ_T R(T) P̄^T.
//
// Derived constants: α = √(600ad)/λ, ε = τ = λ²/1200, K = ⌈3(n+1)^a/λ⌉.
// Doubly exponential sizes are only ever reported as log₂log₂ values.

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opcover/cq_channel.hpp"
#include "opcover/hypergraph_covering.hpp"
#include "opcover/operator_core.hpp"
#include "opcover/parallel.hpp"
#include "opcover/typicality.hpp"

namespace opcover {

/// Sparse distribution on 𝒳ⁿ; keys encode sequences in base a, first
/// symbol most significant.
using SparseDistribution = std::map<std::uint64_t, double>;

inline std::uint64_t sequence_count(int n, int a) {
  require(n >= 1 && a >= 1, ErrorKind::invalid_argument, "n and a must be positive");
  require(std::pow(static_cast<double>(a), n) <= 1e15, ErrorKind::size_overflow, "a^n too large");
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c *= static_cast<std::uint64_t>(a);
  return c;
}

inline std::vector<int> decode_sequence(std::uint64_t index, int n, int a) {
  std::vector<int> xs(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    xs[i] = static_cast<int>(index % static_cast<std::uint64_t>(a));
    index /= static_cast<std::uint64_t>(a);
  }
  return xs;
}

inline std::uint64_t encode_sequence(std::span<const int> xs, int a) {
  std::uint64_t index = 0;
  for (int x : xs) {
    require(x >= 0 && x < a, ErrorKind::invalid_argument, "symbol out of range");
    index = index * static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(x);
  }
  return index;
}

inline void check_sparse_distribution(const SparseDistribution& p, int n, int a) {
  require(!p.empty(), ErrorKind::invalid_argument, "empty distribution");
  const std::uint64_t limit = sequence_count(n, a);
  double total = 0.0;
  for (const auto& [k, v] : p) {
    require(k < limit, ErrorKind::invalid_argument, "sequence index out of range");
    require(std::isfinite(v) && v >= 0.0, ErrorKind::domain, "probabilities must be nonnegative");
    total += v;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::domain, "distribution must sum to 1");
}

/// Σ_{xⁿ} P(xⁿ) Wⁿ_{xⁿ}
inline HermitianMatrix mixture_output(const SparseDistribution& p, const CQChannel& w, int n) {
  const double dn = std::pow(static_cast<double>(w.dim()), n);
  require(dn <= 4096.0, ErrorKind::size_overflow, "d^n exceeds 4096");
  HermitianMatrix s = HermitianMatrix::zero(static_cast<int>(dn));
  for (const auto& [k, v] : p) {
    if (v <= 0.0) continue;
    const auto xs = decode_sequence(k, n, w.alphabet_size());
    s += v * tensor_output(xs, w).matrix();
  }
  return s;
}

struct QIDEntry {
  SparseDistribution P;
  HermitianMatrix D;
};

struct QIDCode {
  int n = 1;
  std::vector<QIDEntry> entries;
};

struct QIDEvaluation {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  // errors[i][i] = Tr(P_iWⁿ(𝟙 − D_i)), errors[i][j] = Tr(P_jWⁿ D_i) for i != j
  std::vector<std::vector<double>> errors;
};

inline void validate_qid_code(const QIDCode& code, const CQChannel& w) {
  require(!code.entries.empty(), ErrorKind::invalid_argument, "code has no entries");
  const double dn = std::pow(static_cast<double>(w.dim()), code.n);
  require(dn <= 4096.0, ErrorKind::size_overflow, "d^n exceeds 4096");
  for (const auto& e : code.entries) {
    check_sparse_distribution(e.P, code.n, w.alphabet_size());
    require(e.D.dim() == static_cast<int>(dn), ErrorKind::dimension_mismatch, "decoding operator has wrong dimension");
    require(is_psd(e.D) && is_psd(HermitianMatrix::identity(e.D.dim()) - e.D), ErrorKind::not_psd,
            "decoding operator must satisfy 0 <= D <= 1");
  }
}

inline QIDEvaluation evaluate_with_outputs(const QIDCode& code, const std::vector<HermitianMatrix>& outputs) {
  const std::size_t N = code.entries.size();
  QIDEvaluation out;
  out.errors.assign(N, std::vector<double>(N, 0.0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const double hit = outputs[j].trace_product(code.entries[i].D);
      out.errors[i][j] = i == j ? outputs[i].trace() - hit : hit;
      if (i == j)
        out.lambda1 = std::max(out.lambda1, out.errors[i][j]);
      else
        out.lambda2 = std::max(out.lambda2, out.errors[i][j]);
    }
  return out;
}

inline QIDEvaluation evaluate_qid_code(const QIDCode& code, const CQChannel& w) {
  validate_qid_code(code, w);
  std::vector<HermitianMatrix> outputs;
  for (const auto& e : code.entries) outputs.push_back(mixture_output(e.P, w, code.n));
  return evaluate_with_outputs(code, outputs);
}

inline EmpiricalDistribution type_of_index(std::uint64_t index, int n, int a) {
  const auto xs = decode_sequence(index, n, a);
  return type_of(xs, a);
}

/// P^T(xⁿ) = P(xⁿ)/P(𝒯ⁿ_T) on the type class, 0 elsewhere.
inline SparseDistribution per_type_conditional(const SparseDistribution& p, const EmpiricalDistribution& t) {
  const int a = t.alphabet_size();
  SparseDistribution out;
  double mass = 0.0;
  for (const auto& [k, v] : p)
    if (v > 0.0 && type_of_index(k, t.n, a) == t) mass += v;
  require(mass > 0.0, ErrorKind::domain, "distribution has no mass on the type class");
  for (const auto& [k, v] : p)
    if (v > 0.0 && type_of_index(k, t.n, a) == t) out[k] = v / mass;
  return out;
}

enum class ConstantsMode { derived, override_constants };

inline const char* to_string(ConstantsMode m) { return m == ConstantsMode::derived ? "derived" : "override"; }

struct RegularizationOptions {
  ConstantsMode mode = ConstantsMode::derived;
  double alpha = 0.0;  // override mode only
  double eps = 0.0;
  double tau = 0.0;
  std::uint64_t L = 0;  // 0: the covering lemma's value
  std::uint64_t K = 0;  // 0: ⌈3(n+1)^a/λ⌉
  unsigned workers = 0;
};

struct TypeDetail {
  std::vector<int> counts;
  double mass = 0.0;          // P(𝒯ⁿ_T)
  std::int64_t weight = 0;    // R(T)·K
  double L_bound = 0.0;       // covering lemma bound for this type
  std::uint64_t dim = 0;      // rank of Π_T
  double eta = 0.0;
  std::uint64_t support = 0;  // distinct sequences in P̄^T
  bool covering_certified = false;
  double tail_mass = 0.0;
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  double edge_distance = 0.0;  // max_x ‖Q_x − Wⁿ_x‖₁
  double type_distance = 0.0;  // ½‖P^T Wⁿ − P̄^T Wⁿ‖₁
  std::vector<std::uint64_t> counts_drawn;  // multiplicities, aligned with `sequences`
  std::vector<std::uint64_t> sequences;
  std::string failure;
};

struct RegularizationResult {
  ConstantsMode mode = ConstantsMode::derived;
  double lambda = 0.0;
  double alpha = 0.0;
  double eps = 0.0;
  double tau = 0.0;
  std::uint64_t K = 0;
  std::uint64_t L = 0;
  std::uint64_t seed = 0;
  // P̄(xⁿ) = numerators[xⁿ] / denominator exactly, denominator = K·L.
  std::map<std::uint64_t, std::int64_t> numerators;
  std::int64_t denominator = 1;
  SparseDistribution sparse_distribution;
  std::uint64_t support = 0;
  double quantization_error = 0.0;  // Σ_T |P(𝒯ⁿ_T) − R(T)|
  double measured_distance = 0.0;   // ½‖PWⁿ − P̄Wⁿ‖₁
  std::vector<TypeDetail> per_type;
  bool certified = false;
};

namespace detail {

/// Largest-remainder rounding of K·mass to integers summing to K; ties go to
/// the earlier index.
inline std::vector<std::int64_t> round_to_k(const std::vector<double>& mass, std::int64_t k) {
  std::vector<std::int64_t> r(mass.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::int64_t used = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double x = mass[i] * static_cast<double>(k);
    r[i] = static_cast<std::int64_t>(std::floor(x));
    used += r[i];
    rem.push_back({x - std::floor(x), i});
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& l, const auto& rr) { return l.first > rr.first; });
  for (std::size_t j = 0; used < k && j < rem.size(); ++j, ++used) ++r[rem[j].second];
  return r;
}

/// Isometry onto the eigenvalue-1 eigenspace of a projector.
inline Matrix range_isometry(const HermitianMatrix& projector) {
  const Spectrum sp = projector.spectrum();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < sp.values.size(); ++j)
    if (sp.values[j] > 0.5) cols.push_back(j);
  Matrix v(projector.dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = sp.vectors.col(cols[k]);
  return v;
}

struct TypeWork {
  EmpiricalDistribution type;
  SparseDistribution conditional;
  std::vector<std::uint64_t> sequences;
  std::vector<double> probs;
  std::vector<HermitianMatrix> edges;  // compressed Q_x
  std::optional<QuantumHypergraph> hypergraph;
  TypeDetail detail;
};

}  // namespace detail

inline RegularizationResult resolvability_regularize(const SparseDistribution& p, const CQChannel& w, int n,
                                                     double lambda, std::uint64_t seed,
                                                     const RegularizationOptions& opt = {}) {
  const int a = w.alphabet_size();
  const int d = w.dim();
  require(lambda > 0.0 && lambda < 1.0, ErrorKind::invalid_argument, "lambda must lie in (0, 1)");
  check_sparse_distribution(p, n, a);
  require(std::pow(static_cast<double>(d), n) <= 4096.0, ErrorKind::size_overflow, "d^n exceeds 4096");

  RegularizationResult out;
  out.mode = opt.mode;
  out.lambda = lambda;
  out.seed = seed;
  if (opt.mode == ConstantsMode::derived) {
    out.alpha = std::sqrt(600.0 * a * d) / lambda;
    out.eps = out.tau = lambda * lambda / 1200.0;
  } else {
    require(opt.alpha > 0.0 && opt.eps > 0.0 && opt.tau > 0.0, ErrorKind::invalid_argument,
            "override mode needs positive alpha, eps and tau");
    out.alpha = opt.alpha;
    out.eps = opt.eps;
    out.tau = opt.tau;
  }
  const double k_formula = std::ceil(3.0 * std::pow(n + 1.0, a) / lambda);
  require(k_formula < 9e15, ErrorKind::size_overflow, "K overflows");
  out.K = opt.K > 0 ? opt.K : static_cast<std::uint64_t>(k_formula);

  // Group the support by type, in type_enumerate order.
  std::vector<detail::TypeWork> work;
  for (const auto& t : type_enumerate(n, a)) {
    double mass = 0.0;
    for (const auto& [k, v] : p)
      if (v > 0.0 && type_of_index(k, n, a) == t) mass += v;
    if (mass <= 0.0) continue;
    detail::TypeWork tw;
    tw.type = t;
    tw.conditional = per_type_conditional(p, t);
    tw.detail.counts = t.counts;
    tw.detail.mass = mass;
    work.push_back(std::move(tw));
  }

  // Edges and lemma bounds, independent per type.
  parallel_for(
      work.size(),
      [&](std::size_t i) {
        auto& tw = work[i];
        const DensityOperator tw_state = output_state(tw.type.probabilities(), w);
        const auto pi_t = typical_projector(tw_state, n, out.alpha * std::sqrt(static_cast<double>(a)));
        const Matrix v = detail::range_isometry(pi_t.projector);
        tw.detail.dim = static_cast<std::uint64_t>(v.cols());
        for (const auto& [k, prob] : tw.conditional) {
          const auto xs = decode_sequence(k, n, a);
          const auto pi_w = conditional_typical_projector(w, xs, out.alpha);
          const HermitianMatrix wx = tensor_output(xs, w);
          const HermitianMatrix q = wx.congruence(pi_w.projector.matrix()).congruence(pi_t.projector.matrix());
          tw.detail.edge_distance = std::max(tw.detail.edge_distance, trace_norm(q - wx));
          tw.sequences.push_back(k);
          tw.probs.push_back(prob);
          if (v.cols() > 0) tw.edges.push_back(HermitianMatrix::from_trusted(v.adjoint() * q.matrix() * v));
        }
        double top = 0.0;
        for (const auto& e : tw.edges) top = std::max(top, e.max_eigenvalue());
        if (v.cols() > 0 && top > 0.0) {
          tw.hypergraph.emplace(tw.edges, std::min(1.0, top));
          tw.detail.eta = tw.hypergraph->eta();
          tw.detail.L_bound =
              1.0 + detail::sampling_bound(tw.detail.eta, static_cast<double>(v.cols()), out.eps, out.tau);
        } else {
          tw.detail.failure = "typical subspace annihilates the type's outputs";
        }
      },
      opt.workers);

  // One L for every type, as in the lemma's uniform choice.
  double l_max = 1.0;
  for (const auto& tw : work) l_max = std::max(l_max, tw.detail.L_bound);
  out.L = opt.L > 0 ? opt.L : detail::lemma_L(l_max - 1.0);
  require(static_cast<double>(out.K) * static_cast<double>(out.L) < 9e18, ErrorKind::size_overflow,
          "K*L overflows 64-bit rational weights");
  out.denominator = static_cast<std::int64_t>(out.K * out.L);

  parallel_for(
      work.size(),
      [&](std::size_t i) {
        auto& tw = work[i];
        auto& det = tw.detail;
        std::vector<std::uint64_t> counts(tw.sequences.size(), 0);
        if (tw.hypergraph) {
          // Each type samples exactly L edges; retries stay at that L.
          const auto r = quantum_covering_sample(*tw.hypergraph, tw.probs, out.eps, out.tau,
                                                 derive_seed(seed, i), out.L);
          counts = r.edge_counts;
          // The common L may exceed this type's own lemma value; that only
          // strengthens the lemma, so certification needs L >= L_T and a clean
          // sandwich.
          det.covering_certified = r.failure.empty() && r.lower_slack >= -kPsdTol &&
                                   r.upper_slack >= -kPsdTol && out.L >= detail::lemma_L(det.L_bound - 1.0);
          det.tail_mass = r.tail_mass;
          det.lower_slack = r.lower_slack;
          det.upper_slack = r.upper_slack;
          if (!det.covering_certified && det.failure.empty())
            det.failure = r.failure.empty() ? "L below the covering lemma value for this type" : r.failure;
        } else {
          // Fallback: all weight on the most likely sequence of the type.
          const auto it = std::max_element(tw.probs.begin(), tw.probs.end());
          counts[static_cast<std::size_t>(it - tw.probs.begin())] = out.L;
        }
        det.sequences = tw.sequences;
        det.counts_drawn = counts;
        SparseDistribution bar;
        for (std::size_t j = 0; j < counts.size(); ++j)
          if (counts[j] > 0) bar[tw.sequences[j]] = static_cast<double>(counts[j]) / static_cast<double>(out.L);
        det.support = bar.size();
        det.type_distance = 0.5 * trace_norm(mixture_output(tw.conditional, w, n) - mixture_output(bar, w, n));
      },
      opt.workers);

  std::vector<double> masses;
  for (const auto& tw : work) masses.push_back(tw.detail.mass);
  const auto r = detail::round_to_k(masses, static_cast<std::int64_t>(out.K));
  for (std::size_t i = 0; i < work.size(); ++i) {
    work[i].detail.weight = r[i];
    out.quantization_error +=
        std::abs(work[i].detail.mass - static_cast<double>(r[i]) / static_cast<double>(out.K));
    const auto& det = work[i].detail;
    for (std::size_t j = 0; j < det.sequences.size(); ++j) {
      const std::int64_t num = r[i] * static_cast<std::int64_t>(det.counts_drawn[j]);
      if (num > 0) out.numerators[det.sequences[j]] += num;
    }
  }
  // Types can carry less mass than 1/(2K) and round to zero weight; the
  // remaining ones still sum to K.
  std::int64_t total = 0;
  for (const auto& [k, num] : out.numerators) {
    total += num;
    out.sparse_distribution[k] = static_cast<double>(num) / static_cast<double>(out.denominator);
  }
  require(total == out.denominator, ErrorKind::bound_violated, "regularized weights do not sum to one");
  out.support = out.numerators.size();
  require(out.support <= out.K * out.L, ErrorKind::bound_violated, "support exceeds K*L");
  if (opt.K == 0)
    require(out.quantization_error <= lambda / 3.0 + 1e-12, ErrorKind::bound_violated,
            "type quantization error exceeds lambda/3");

  out.measured_distance = 0.5 * trace_norm(mixture_output(p, w, n) - mixture_output(out.sparse_distribution, w, n));
  out.certified = out.measured_distance <= lambda / 3.0;
  for (auto& tw : work) {
    out.certified = out.certified && tw.detail.covering_certified;
    out.per_type.push_back(std::move(tw.detail));
  }
  return out;
}

/// Exact comparison of two K·L-distributions by cross-multiplied numerators.
inline bool same_regularized_distribution(const RegularizationResult& x, const RegularizationResult& y) {
  auto ix = x.numerators.begin();
  auto iy = y.numerators.begin();
  for (; ix != x.numerators.end() && iy != y.numerators.end(); ++ix, ++iy) {
    if (ix->first != iy->first) return false;
    if (static_cast<__int128>(ix->second) * y.denominator != static_cast<__int128>(iy->second) * x.denominator)
      return false;
  }
  return ix == x.numerators.end() && iy == y.numerators.end();
}

struct PreservedCode {
  QIDEvaluation original;
  QIDEvaluation regularized;
  double max_distance = 0.0;
  bool holds = false;
};

/// Re-evaluates the code with P̄_i; λ' <= λ + max_i ½‖P_iWⁿ − P̄_iWⁿ‖₁ must
/// hold (throws bound_violated otherwise, which would be an implementation bug).
inline PreservedCode approximation_preserves_id(const QIDCode& code, const CQChannel& w,
                                                const std::vector<RegularizationResult>& regs) {
  require(regs.size() == code.entries.size(), ErrorKind::dimension_mismatch,
          "need one regularization per code entry");
  PreservedCode out;
  out.original = evaluate_qid_code(code, w);
  QIDCode bar = code;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    bar.entries[i].P = regs[i].sparse_distribution;
    out.max_distance = std::max(out.max_distance, regs[i].measured_distance);
  }
  out.regularized = evaluate_qid_code(bar, w);
  const double slack = 1e-12;
  out.holds = out.regularized.lambda1 <= out.original.lambda1 + out.max_distance + slack &&
              out.regularized.lambda2 <= out.original.lambda2 + out.max_distance + slack;
  require(out.holds, ErrorKind::bound_violated, "regularized code errors exceed the trace-distance bound");
  return out;
}

namespace detail {

/// Exact decimal value of the shortest round-trip representation of a double.
struct Decimal {
  __int128 mantissa = 0;
  int exponent = 0;  // value = mantissa · 10^exponent
};

inline std::optional<Decimal> to_decimal(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  const std::string s(buf, res.ptr);
  Decimal d;
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '-') neg = true, ++i;
  int frac_digits = 0;
  bool in_frac = false;
  for (; i < s.size() && s[i] != 'e'; ++i) {
    if (s[i] == '.') {
      in_frac = true;
      continue;
    }
    d.mantissa = d.mantissa * 10 + (s[i] - '0');
    if (in_frac) ++frac_digits;
  }
  const int exp10 = i < s.size() ? std::stoi(s.substr(i + 1)) : 0;
  d.exponent = exp10 - frac_digits;
  if (neg) d.mantissa = -d.mantissa;
  return d;
}

inline std::optional<Decimal> add(Decimal a, Decimal b) {
  if (a.exponent < b.exponent) std::swap(a, b);
  // Bring a down to b's exponent.
  for (int k = a.exponent; k > b.exponent; --k) {
    if (a.mantissa > static_cast<__int128>(1e36) || a.mantissa < -static_cast<__int128>(1e36)) return std::nullopt;
    a.mantissa *= 10;
  }
  return Decimal{a.mantissa + b.mantissa, b.exponent};
}

inline long double to_long_double(const Decimal& d) {
  long double m = static_cast<long double>(d.mantissa);
  if (d.exponent >= 0) return m * std::pow(10.0L, d.exponent);
  return m / std::pow(10.0L, -d.exponent);
}

}  // namespace detail

/// log₂ N_max = n·log₂(a)·K·L for K·L-distributions on 𝒳ⁿ.
inline long double code_count_bound(std::uint64_t K, std::uint64_t L, std::uint64_t a, std::uint64_t n) {
  require(K >= 1 && L >= 1 && a >= 1 && n >= 1, ErrorKind::invalid_argument, "arguments must be positive");
  const unsigned __int128 prod = static_cast<unsigned __int128>(n) * K * L;
  if ((a & (a - 1)) == 0) {
    // Power of two: log₂a is an integer and the product is exact.
    const int lg = std::countr_zero(a);
    return static_cast<long double>(prod) * lg;
  }
  return static_cast<long double>(prod) * std::log2(static_cast<long double>(a));
}

/// log₂log₂ of exp(exp(n(C+δ))) in the base-2 convention: n(C + δ).  Decimal
/// inputs are combined exactly, so 100·(0.6 + 0.01) is 61.
inline long double strong_converse_bound(std::uint64_t n, double capacity_bits, double delta) {
  require(n >= 1, ErrorKind::invalid_argument, "n must be positive");
  require(delta > 0.0 && std::isfinite(capacity_bits) && capacity_bits >= 0.0, ErrorKind::invalid_argument,
          "need C >= 0 and delta > 0");
  const auto c = detail::to_decimal(capacity_bits);
  const auto dl = detail::to_decimal(delta);
  if (c && dl)
    if (const auto sum = detail::add(*c, *dl); sum && sum->mantissa < static_cast<__int128>(1e30)) {
      detail::Decimal scaled{sum->mantissa * static_cast<__int128>(n), sum->exponent};
      return detail::to_long_double(scaled);
    }
  return static_cast<long double>(n) *
         (static_cast<long double>(capacity_bits) + static_cast<long double>(delta));
}

struct ProbeCandidate {
  std::string method;  // "mode-atom", "derived", "override" or "identity"
  double lambda = 0.0;
  std::uint64_t L = 0;
  std::uint64_t support = 0;
  double distance = 0.0;  // ‖PWⁿ − QWⁿ‖₁ (not halved)
};

struct ProbeReport {
  std::vector<ProbeCandidate> candidates;
  std::uint64_t min_support = 0;  // 0 when no candidate reaches eps
  std::size_t best = 0;
};

/// Candidate approximations of P, computed independently of eps: the mode
/// atom, the derived-constant pipeline at λ ∈ {0.9, 0.6, 0.3}, the override
/// pipeline (α = 2, ε = τ = 0.1) at L ∈ {1, 2, 4, …, 64}, and P itself.
inline std::vector<ProbeCandidate> resolution_candidates(const SparseDistribution& p, const CQChannel& w, int n,
                                                         std::uint64_t seed, unsigned workers = 0) {
  check_sparse_distribution(p, n, w.alphabet_size());
  const HermitianMatrix target = mixture_output(p, w, n);
  std::vector<ProbeCandidate> out;
  auto best_atom = std::max_element(p.begin(), p.end(), [](const auto& l, const auto& r) { return l.second < r.second; });
  out.push_back({"mode-atom", 0.0, 1, 1, trace_norm(target - mixture_output({{best_atom->first, 1.0}}, w, n))});
  std::uint64_t sub = 0;
  for (double lam : {0.9, 0.6, 0.3}) {
    const auto r = resolvability_regularize(p, w, n, lam, derive_seed(seed, sub++), {.workers = workers});
    out.push_back({"derived", lam, r.L, r.support, 2.0 * r.measured_distance});
  }
  for (std::uint64_t L = 1; L <= 64; L *= 2) {
    RegularizationOptions o{.mode = ConstantsMode::override_constants, .alpha = 2.0, .eps = 0.1, .tau = 0.1, .L = L,
                            .workers = workers};
    const auto r = resolvability_regularize(p, w, n, 0.6, derive_seed(seed, sub++), o);
    out.push_back({"override", 0.6, L, r.support, 2.0 * r.measured_distance});
  }
  std::uint64_t supp = 0;
  for (const auto& [k, v] : p) supp += v > 0.0 ? 1 : 0;
  out.push_back({"identity", 0.0, 0, supp, 0.0});
  return out;
}

inline ProbeReport select_min_support(std::vector<ProbeCandidate> candidates, double eps) {
  ProbeReport r;
  r.candidates = std::move(candidates);
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    const auto& c = r.candidates[i];
    if (c.distance > eps) continue;
    if (r.min_support == 0 || c.support < r.min_support) {
      r.min_support = c.support;
      r.best = i;
    }
  }
  return r;
}

/// Smallest support among the candidates with ‖PWⁿ − QWⁿ‖₁ <= eps.
inline ProbeReport resolution_probe(const SparseDistribution& p, const CQChannel& w, int n, double eps,
                                    std::uint64_t seed, unsigned workers = 0) {
  require(eps >= 0.0, ErrorKind::invalid_argument, "eps must be nonnegative");
  return select_min_support(resolution_candidates(p, w, n, seed, workers), eps);
}

inline std::vector<ProbeReport> resolution_probe(const std::vector<SparseDistribution>& candidates,
                                                 const CQChannel& w, int n, double eps, std::uint64_t seed,
                                                 unsigned workers = 0) {
  std::vector<ProbeReport> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out.push_back(resolution_probe(candidates[i], w, n, eps, derive_seed(seed, i), workers));
  return out;
}

}  // namespace opcover

#endif  // OPCOVER_RESOLVABILITY_HPP
