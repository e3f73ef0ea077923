#ifndef OPCOVER_HYPERGRAPH_COVERING_HPP
#define OPCOVER_HYPERGRAPH_COVERING_HPP

// Classical and quantum (noncommutative) hypergraphs: covering checks, the
// randomized covering constructions, product covering numbers c(n), the
// fractional covering number c̃(n) and the covering capacity
//
//   C = −log₂ max_P λmin(Σ_E P(E) E).
//
// Note that c̃(1) = 1 / max_P λmin(Σ P(E)E): rescale any feasible weight
// vector v to a distribution.  Both c̃(n) and C are therefore computed by the
// same cutting-plane LP, whose separation oracle is a min-eigenvector.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opcover/lp.hpp"
#include "opcover/operator_core.hpp"
#include "opcover/rng.hpp"

namespace opcover {

struct ClassicalEdge {
  std::vector<int> vertices;
  std::vector<double> measure;  // Q_E(vertices[i])
};

class ClassicalHypergraph {
 public:
  /// eta < 0 means "use the largest edge-measure value".
  ClassicalHypergraph(int vertex_count, std::vector<ClassicalEdge> edges, double eta = -1.0)
      : vertex_count_(vertex_count), edges_(std::move(edges)) {
    require(vertex_count_ >= 1, ErrorKind::invalid_argument, "hypergraph needs at least one vertex");
    require(!edges_.empty(), ErrorKind::invalid_argument, "hypergraph needs at least one edge");
    double top = 0.0;
    for (const auto& e : edges_) {
      require(e.vertices.size() == e.measure.size(), ErrorKind::dimension_mismatch,
              "edge measure must have one value per edge vertex");
      std::vector<bool> seen(static_cast<std::size_t>(vertex_count_), false);
      for (std::size_t i = 0; i < e.vertices.size(); ++i) {
        const int v = e.vertices[i];
        require(v >= 0 && v < vertex_count_, ErrorKind::invalid_argument, "edge vertex out of range");
        require(!seen[v], ErrorKind::invalid_argument, "duplicate vertex in edge");
        seen[v] = true;
        require(std::isfinite(e.measure[i]) && e.measure[i] >= 0.0, ErrorKind::domain,
                "edge measure must be nonnegative");
        top = std::max(top, e.measure[i]);
      }
    }
    eta_ = eta < 0.0 ? top : eta;
    require(top <= eta_ + 1e-12, ErrorKind::domain, "edge measure exceeds eta");
  }

  /// Edges carry the uniform measure 1/|E| (an e-uniform hypergraph when all
  /// sets share a size).
  static ClassicalHypergraph uniform_edges(int vertex_count, const std::vector<std::vector<int>>& sets) {
    std::vector<ClassicalEdge> edges;
    for (const auto& s : sets) {
      require(!s.empty(), ErrorKind::invalid_argument, "empty edge");
      edges.push_back({s, std::vector<double>(s.size(), 1.0 / static_cast<double>(s.size()))});
    }
    return ClassicalHypergraph(vertex_count, std::move(edges));
  }

  int vertex_count() const { return vertex_count_; }
  std::size_t size() const { return edges_.size(); }
  const std::vector<ClassicalEdge>& edges() const { return edges_; }
  double eta() const { return eta_; }

  std::vector<double> dense_measure(std::size_t edge) const {
    std::vector<double> q(static_cast<std::size_t>(vertex_count_), 0.0);
    const auto& e = edges_.at(edge);
    for (std::size_t i = 0; i < e.vertices.size(); ++i) q[e.vertices[i]] = e.measure[i];
    return q;
  }

 private:
  int vertex_count_;
  std::vector<ClassicalEdge> edges_;
  double eta_ = 0.0;
};

class QuantumHypergraph {
 public:
  /// eta < 0 means "use the largest edge eigenvalue".
  explicit QuantumHypergraph(std::vector<HermitianMatrix> edges, double eta = -1.0) : edges_(std::move(edges)) {
    require(!edges_.empty(), ErrorKind::invalid_argument, "hypergraph needs at least one edge");
    double top = 0.0;
    for (const auto& e : edges_) {
      e.check_same_dim(edges_.front());
      require(is_psd(e), ErrorKind::not_psd, "edge operator is not PSD");
      const double hi = e.max_eigenvalue();
      require(hi <= 1.0 + psd_band(e), ErrorKind::domain, "edge operator exceeds the identity");
      top = std::max(top, hi);
    }
    eta_ = eta < 0.0 ? std::min(1.0, top) : eta;
    require(top <= eta_ + kPsdTol * std::max(1.0, top), ErrorKind::domain, "edge operator exceeds eta·1");
  }

  /// Diagonal edges built from the edge measures.
  static QuantumHypergraph diagonal_embedding(const ClassicalHypergraph& g) {
    std::vector<HermitianMatrix> edges;
    for (std::size_t i = 0; i < g.size(); ++i) edges.push_back(HermitianMatrix::diagonal(g.dense_measure(i)));
    return QuantumHypergraph(std::move(edges), g.eta());
  }

  int dim() const { return edges_.front().dim(); }
  std::size_t size() const { return edges_.size(); }
  const std::vector<HermitianMatrix>& edges() const { return edges_; }
  const HermitianMatrix& edge(std::size_t i) const { return edges_.at(i); }
  double eta() const { return eta_; }

 private:
  std::vector<HermitianMatrix> edges_;
  double eta_ = 1.0;
};

/// Output of the randomized constructions.  Samplers record multiplicities
/// (edge_counts) rather than the drawn list, since the lemma's L can be huge;
/// `picked` keeps the draw order for covering_randomized.
struct CoveringResult {
  std::uint64_t L = 0;
  std::vector<std::uint64_t> edge_counts;
  std::vector<std::size_t> picked;
  std::uint64_t seed = 0;
  std::uint64_t attempts = 0;
  bool beyond_lemma_bound = false;
  bool certified = false;

  // covering_randomized
  double mu = 0.0;
  double bound_uniform = 0.0;  // 1 + 8|ℰ| ln2 log₂d / δ with δ = λmin(Σ E)
  double bound_mixed = 0.0;    // 1 + 8 ln2 log₂d / μ

  // sampling lemmas: quantum fields, or classical fields with v0/measures
  HermitianMatrix pi0, pi1, average, sampled_average;
  std::vector<bool> v0;
  std::vector<double> expected_measure, sampled_measure;
  double L_bound = 0.0;
  double tail_mass = 0.0;    // Tr ρΠ₀ or Q(𝒱₀)
  double lower_slack = 0.0;  // min eig of Π₁ρ̄Π₁ − (1−ε)Π₁ρΠ₁ on the range of Π₁
  double upper_slack = 0.0;  // min eig of (1+ε)Π₁ρΠ₁ − Π₁ρ̄Π₁ on the range of Π₁
  double distance = 0.0;     // ‖ρ − ρ̄‖₁ or ‖Q − Q̄‖₁
  double distance_bound = 0.0;
  bool distance_bound_applies = false;
  std::string failure;  // failing postcondition of the last attempt, if any
};

inline HermitianMatrix degree(const QuantumHypergraph& g, std::span<const std::size_t> subset) {
  HermitianMatrix s = HermitianMatrix::zero(g.dim());
  for (std::size_t i : subset) {
    require(i < g.size(), ErrorKind::invalid_argument, "edge index out of range");
    s += g.edge(i);
  }
  return s;
}

/// Degree of a multiset given by multiplicities.
inline HermitianMatrix degree_counts(const QuantumHypergraph& g, std::span<const std::uint64_t> counts) {
  require(counts.size() == g.size(), ErrorKind::dimension_mismatch, "one multiplicity per edge");
  HermitianMatrix s = HermitianMatrix::zero(g.dim());
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) s += static_cast<double>(counts[i]) * g.edge(i);
  return s;
}

inline bool is_covering(const QuantumHypergraph& g, std::span<const std::size_t> subset) {
  return psd_leq(HermitianMatrix::identity(g.dim()), degree(g, subset));
}

namespace detail {

inline std::vector<double> checked_distribution(std::span<const double> p, std::size_t size) {
  require(p.size() == size, ErrorKind::dimension_mismatch, "need one probability per edge");
  double total = 0.0;
  for (double x : p) {
    require(std::isfinite(x) && x >= 0.0, ErrorKind::domain, "probabilities must be nonnegative");
    total += x;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::domain, "probabilities must sum to 1");
  return {p.begin(), p.end()};
}

inline HermitianMatrix edge_average(const QuantumHypergraph& g, std::span<const double> p) {
  HermitianMatrix s = HermitianMatrix::zero(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (p[i] > 0.0) s += p[i] * g.edge(i);
  return s;
}

inline std::size_t support_size(std::span<const double> p) {
  return static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; }));
}

inline bool covers(const HermitianMatrix& s) {
  return s.min_eigenvalue() >= 1.0 - kPsdTol * std::max(1.0, s.max_eigenvalue());
}

/// L = ⌊1 + bound⌋ as an integer, guarding against overflow.
inline std::uint64_t lemma_L(double bound) {
  require(std::isfinite(bound) && bound < 1e18, ErrorKind::size_overflow, "lemma sample size overflows");
  return static_cast<std::uint64_t>(std::floor(1.0 + bound));
}

inline constexpr int kAttemptsPerLevel = 64;
inline constexpr int kEscalationLevels = 4;  // L, 2L, 4L, 8L

}  // namespace detail

/// Draws edges i.i.d. from P until the degree dominates 𝟙.  Each attempt may
/// draw up to ⌊1 + 8 ln2 log₂d / μ⌋ edges; after 64 failed attempts the cap is
/// doubled (up to 8×) and the result is flagged beyond_lemma_bound.
inline CoveringResult covering_randomized(const QuantumHypergraph& g, std::span<const double> p_in,
                                          std::uint64_t seed) {
  const auto p = detail::checked_distribution(p_in, g.size());
  const double mu = detail::edge_average(g, p).min_eigenvalue();
  require(mu > kPsdTol, ErrorKind::infeasible, "min eigenvalue of the edge average is not positive");
  const double d = g.dim();
  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const double delta = degree(g, all).min_eigenvalue();

  CoveringResult r;
  r.seed = seed;
  r.mu = mu;
  r.bound_mixed = 1.0 + 8.0 * kLn2 * std::log2(d) / mu;
  r.bound_uniform = 1.0 + 8.0 * static_cast<double>(g.size()) * kLn2 * std::log2(d) / delta;
  const std::uint64_t k0 = detail::lemma_L(r.bound_mixed - 1.0);

  const Rng master(seed);
  for (int level = 0; level < detail::kEscalationLevels; ++level) {
    const std::uint64_t cap = k0 << level;
    for (int a = 0; a < detail::kAttemptsPerLevel; ++a) {
      ++r.attempts;
      Rng rng = master.split(static_cast<std::uint64_t>(level * detail::kAttemptsPerLevel + a));
      HermitianMatrix s = HermitianMatrix::zero(g.dim());
      std::vector<std::size_t> picked;
      for (std::uint64_t k = 0; k < cap; ++k) {
        const std::size_t e = rng.categorical(p);
        picked.push_back(e);
        s += g.edge(e);
        if (!detail::covers(s)) continue;
        r.picked = std::move(picked);
        r.L = r.picked.size();
        r.edge_counts.assign(g.size(), 0);
        for (std::size_t i : r.picked) ++r.edge_counts[i];
        r.beyond_lemma_bound = static_cast<double>(r.L) > r.bound_mixed;
        r.certified = is_covering(g, r.picked) && !r.beyond_lemma_bound;
        return r;
      }
    }
  }
  throw Error(ErrorKind::budget_exhausted, "no covering found within 8x the lemma's edge count");
}

namespace detail {

/// Retry protocol shared by the samplers.  With fixed_L > 0 every attempt
/// uses that L, there is no escalation, and an exhausted budget returns the
/// last (uncertified) attempt instead of throwing.
template <class Evaluate>
CoveringResult run_sampler(std::span<const double> p, double bound, std::uint64_t seed, std::uint64_t fixed_L,
                           Evaluate&& evaluate) {
  // A point mass reproduces the average exactly with a single draw.
  const std::uint64_t base = fixed_L > 0 ? fixed_L : (support_size(p) == 1 ? 1 : lemma_L(bound));
  const int levels = fixed_L > 0 ? 1 : kEscalationLevels;
  const Rng master(seed);
  CoveringResult last;
  std::uint64_t attempts = 0;
  for (int level = 0; level < levels; ++level) {
    require(base <= (std::numeric_limits<std::uint64_t>::max() >> level), ErrorKind::size_overflow,
            "sample size overflows");
    const std::uint64_t L = base << level;
    for (int a = 0; a < kAttemptsPerLevel; ++a) {
      ++attempts;
      Rng rng = master.split(static_cast<std::uint64_t>(level * kAttemptsPerLevel + a));
      CoveringResult r;
      r.L = L;
      r.edge_counts = rng.multinomial(L, p);
      r.seed = seed;
      r.attempts = attempts;
      r.L_bound = 1.0 + bound;
      r.beyond_lemma_bound = static_cast<double>(L) > 1.0 + bound;
      const bool ok = evaluate(r);
      if (ok) {
        r.certified = !r.beyond_lemma_bound && r.failure.empty();
        return r;
      }
      last = std::move(r);
    }
  }
  if (fixed_L > 0) {
    last.certified = false;
    return last;
  }
  throw Error(ErrorKind::budget_exhausted, "sampling budget exhausted: " + last.failure);
}

/// Lemma bound η·dim·2 ln2 log₂(2 dim)/(ε²τ), without the leading 1.
inline double sampling_bound(double eta, double dim, double eps, double tau) {
  return eta * dim * 2.0 * kLn2 * std::log2(2.0 * dim) / (eps * eps * tau);
}

/// All edge totals equal to a common q <= 1.
inline bool common_total_at_most_one(const std::vector<double>& totals) {
  for (double t : totals)
    if (std::abs(t - totals.front()) > 1e-12 || t > 1.0 + 1e-12) return false;
  return true;
}

}  // namespace detail

inline CoveringResult classical_covering_sample(const ClassicalHypergraph& g, std::span<const double> p_in,
                                                double eps, double tau, std::uint64_t seed,
                                                std::uint64_t fixed_L = 0) {
  require(eps > 0.0 && tau > 0.0, ErrorKind::invalid_argument, "eps and tau must be positive");
  const auto p = detail::checked_distribution(p_in, g.size());
  const int nv = g.vertex_count();
  std::vector<std::vector<double>> measures;
  std::vector<double> totals;
  std::vector<double> q(static_cast<std::size_t>(nv), 0.0);
  for (std::size_t e = 0; e < g.size(); ++e) {
    measures.push_back(g.dense_measure(e));
    double t = 0.0;
    for (int v = 0; v < nv; ++v) {
      q[v] += p[e] * measures[e][v];
      t += measures[e][v];
    }
    totals.push_back(t);
  }
  const double bound = detail::sampling_bound(g.eta(), nv, eps, tau);
  const bool applies = detail::common_total_at_most_one(totals);

  return detail::run_sampler(p, bound, seed, fixed_L, [&](CoveringResult& r) {
    r.expected_measure = q;
    r.sampled_measure.assign(static_cast<std::size_t>(nv), 0.0);
    for (std::size_t e = 0; e < g.size(); ++e) {
      if (r.edge_counts[e] == 0) continue;
      const double w = static_cast<double>(r.edge_counts[e]) / static_cast<double>(r.L);
      for (int v = 0; v < nv; ++v) r.sampled_measure[v] += w * measures[e][v];
    }
    r.v0.assign(static_cast<std::size_t>(nv), false);
    bool any_outside = false;
    r.lower_slack = r.upper_slack = std::numeric_limits<double>::infinity();
    for (int v = 0; v < nv; ++v) {
      if (q[v] < tau / nv) {
        r.v0[v] = true;
        r.tail_mass += q[v];
        continue;
      }
      any_outside = true;
      r.lower_slack = std::min(r.lower_slack, r.sampled_measure[v] - (1.0 - eps) * q[v]);
      r.upper_slack = std::min(r.upper_slack, (1.0 + eps) * q[v] - r.sampled_measure[v]);
    }
    if (!any_outside) r.lower_slack = r.upper_slack = 0.0;
    for (int v = 0; v < nv; ++v) r.distance += std::abs(q[v] - r.sampled_measure[v]);
    r.distance_bound = 2.0 * eps + 2.0 * tau;
    r.distance_bound_applies = applies;

    if (r.lower_slack < -1e-12) {
      r.failure = "lower sandwich";
      return false;
    }
    if (r.upper_slack < -1e-12) {
      r.failure = "upper sandwich";
      return false;
    }
    if (r.tail_mass > tau + 1e-12) r.failure = "tail mass exceeds tau";
    if (applies && r.distance > r.distance_bound + 1e-12) r.failure = "distance bound";
    return true;
  });
}

inline CoveringResult quantum_covering_sample(const QuantumHypergraph& g, std::span<const double> p_in, double eps,
                                              double tau, std::uint64_t seed, std::uint64_t fixed_L = 0) {
  require(eps > 0.0 && tau > 0.0, ErrorKind::invalid_argument, "eps and tau must be positive");
  const auto p = detail::checked_distribution(p_in, g.size());
  const int d = g.dim();
  const HermitianMatrix rho = detail::edge_average(g, p);
  require(rho.max_eigenvalue() > 0.0, ErrorKind::domain, "edge average is zero");

  // Π₀ collects eigenvectors with r_j < τ/d (strict); V1 spans the range of Π₁.
  const Spectrum sp = rho.spectrum();
  std::vector<Eigen::Index> keep;
  Matrix p0 = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (sp.values[j] < tau / d)
      p0 += sp.vectors.col(j) * sp.vectors.col(j).adjoint();
    else
      keep.push_back(j);
  }
  Matrix v1(d, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) v1.col(static_cast<Eigen::Index>(k)) = sp.vectors.col(keep[k]);
  const HermitianMatrix pi0 = HermitianMatrix::from_trusted(p0);
  const HermitianMatrix pi1 = HermitianMatrix::identity(d) - pi0;
  const double tail = rho.trace_product(pi0);
  const Matrix rho1 = v1.adjoint() * rho.matrix() * v1;

  std::vector<double> totals;
  for (const auto& e : g.edges()) totals.push_back(e.trace());
  const double bound = detail::sampling_bound(g.eta(), d, eps, tau);
  const bool applies = detail::common_total_at_most_one(totals);

  return detail::run_sampler(p, bound, seed, fixed_L, [&](CoveringResult& r) {
    r.pi0 = pi0;
    r.pi1 = pi1;
    r.average = rho;
    r.tail_mass = tail;
    HermitianMatrix bar = HermitianMatrix::zero(d);
    for (std::size_t e = 0; e < g.size(); ++e)
      if (r.edge_counts[e] > 0)
        bar += (static_cast<double>(r.edge_counts[e]) / static_cast<double>(r.L)) * g.edge(e);
    r.sampled_average = bar;
    if (keep.empty()) {
      r.lower_slack = r.upper_slack = 0.0;
    } else {
      const Matrix bar1 = v1.adjoint() * bar.matrix() * v1;
      r.lower_slack = HermitianMatrix::from_trusted(bar1 - (1.0 - eps) * rho1).min_eigenvalue();
      r.upper_slack = HermitianMatrix::from_trusted((1.0 + eps) * rho1 - bar1).min_eigenvalue();
    }
    r.distance = trace_norm(rho - bar);
    r.distance_bound = (eps + tau) + std::sqrt(8.0 * (eps + tau));
    r.distance_bound_applies = applies;

    if (r.lower_slack < -kPsdTol) {
      r.failure = "lower sandwich";
      return false;
    }
    if (r.upper_slack < -kPsdTol) {
      r.failure = "upper sandwich";
      return false;
    }
    if (r.tail_mass > tau + 1e-12) r.failure = "tail mass exceeds tau";
    if (applies && r.distance > r.distance_bound + 1e-9) r.failure = "distance bound";
    return true;
  });
}

/// Γⁿ: all |ℰ|ⁿ tensor products, first factor most significant in the index.
inline QuantumHypergraph product_hypergraph(const QuantumHypergraph& g, int n) {
  require(n >= 1, ErrorKind::invalid_argument, "product power must be positive");
  double dn = std::pow(static_cast<double>(g.dim()), n);
  double en = std::pow(static_cast<double>(g.size()), n);
  require(dn <= 4096.0, ErrorKind::size_overflow, "product dimension exceeds 4096");
  require(en * dn * dn <= double(1 << 24), ErrorKind::size_overflow, "product hypergraph too large to store");
  std::vector<HermitianMatrix> edges = g.edges();
  for (int k = 1; k < n; ++k) {
    std::vector<HermitianMatrix> next;
    next.reserve(edges.size() * g.size());
    for (const auto& a : edges)
      for (const auto& b : g.edges()) next.push_back(kron(a, b));
    edges = std::move(next);
  }
  return QuantumHypergraph(std::move(edges), std::pow(g.eta(), n));
}

/// Minimum size of a sub-multiset of edges with degree >= 𝟙, or nullopt when
/// no covering exists.  Exhaustive depth-first search over multisets.
inline std::optional<std::uint64_t> covering_number_bruteforce(const QuantumHypergraph& g) {
  require(g.size() <= 20, ErrorKind::size_overflow, "brute-force covering needs at most 20 edges");
  const int d = g.dim();
  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const double delta = degree(g, all).min_eigenvalue();
  if (delta <= kPsdTol) return std::nullopt;

  // Repeating every edge ⌈1/δ⌉ times always covers.
  const std::uint64_t upper = g.size() * static_cast<std::uint64_t>(std::ceil(1.0 / delta - 1e-12));
  double top_eig = 0.0, top_trace = 0.0;
  for (const auto& e : g.edges()) {
    top_eig = std::max(top_eig, e.max_eigenvalue());
    top_trace = std::max(top_trace, e.trace());
  }
  std::uint64_t nodes = 0;
  const std::uint64_t node_budget = 20'000'000;

  // dfs(k, from, s): can k more edges with index >= from complete s?
  auto dfs = [&](auto&& self, std::uint64_t k, std::size_t from, const HermitianMatrix& s) -> bool {
    require(++nodes <= node_budget, ErrorKind::size_overflow, "brute-force covering search too large");
    if (detail::covers(s)) return true;
    if (k == 0) return false;
    if (s.trace() + static_cast<double>(k) * top_trace < d - 1e-9) return false;
    if (s.min_eigenvalue() + static_cast<double>(k) * top_eig < 1.0 - 1e-9) return false;
    for (std::size_t i = from; i < g.size(); ++i)
      if (self(self, k - 1, i, s + g.edge(i))) return true;
    return false;
  };
  const std::uint64_t start = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(d / top_trace - 1e-9)));
  for (std::uint64_t k = start; k <= upper; ++k)
    if (dfs(dfs, k, 0, HermitianMatrix::zero(d))) return k;
  return upper;  // unreachable: the repeated family covers
}

inline std::optional<std::uint64_t> covering_number_bruteforce(const QuantumHypergraph& g, int n) {
  require(n >= 1, ErrorKind::invalid_argument, "product power must be positive");
  require(std::pow(static_cast<double>(g.size()), n) <= 20.0, ErrorKind::size_overflow,
          "brute-force covering needs |E|^n <= 20");
  return covering_number_bruteforce(product_hypergraph(g, n));
}

struct FractionalCover {
  double value = 0.0;  // Σ weights, weights feasible (Σ v E >= 𝟙 exactly)
  double lower = 0.0;  // certified lower bound from the LP dual
  std::vector<double> weights;
  int rounds = 0;
  std::size_t cuts = 0;
  bool converged = false;
};

namespace detail {

inline double cut_coefficient(const CVector& psi, const HermitianMatrix& e) {
  return (psi.adjoint() * e.matrix() * psi)(0, 0).real();
}

/// min Σv s.t. Σ v_j E_j >= 𝟙, v >= 0, by cutting planes.  Each round solves
/// the finite LP through its dual  max Σy s.t. Σ_c y_c⟨ψ_c|E_j|ψ_c⟩ <= 1.
inline FractionalCover fractional_cover(const std::vector<HermitianMatrix>& edges, double tol,
                                        std::vector<CVector> cuts, int max_rounds = 2000) {
  const int d = edges.front().dim();
  const auto m = static_cast<Eigen::Index>(edges.size());
  for (int i = 0; i < d; ++i) cuts.push_back(CVector::Unit(d, i));
  Eigen::MatrixXd a(m, 0);
  auto append = [&](const CVector& psi) {
    a.conservativeResize(Eigen::NoChange, a.cols() + 1);
    for (Eigen::Index j = 0; j < m; ++j) a(j, a.cols() - 1) = cut_coefficient(psi, edges[j]);
  };
  for (const auto& c : cuts) append(c);

  FractionalCover out;
  out.value = std::numeric_limits<double>::infinity();
  for (out.rounds = 1; out.rounds <= max_rounds; ++out.rounds) {
    const Eigen::VectorXd ones_rows = Eigen::VectorXd::Ones(m);
    const Eigen::VectorXd ones_cols = Eigen::VectorXd::Ones(a.cols());
    const LpResult lp = simplex_max(a, ones_rows, ones_cols);
    require(lp.status == LpStatus::optimal, ErrorKind::infeasible,
            "covering LP did not reach an optimum (edges share a kernel vector?)");
    // Rescale the dual point into exact feasibility for a certified bound.
    const double worst = (a * lp.x).maxCoeff();
    out.lower = std::max(out.lower, lp.x.sum() / std::max(1.0, worst));

    HermitianMatrix s = HermitianMatrix::zero(d);
    for (Eigen::Index j = 0; j < m; ++j)
      if (lp.dual[j] > 0.0) s += lp.dual[j] * edges[j];
    const Spectrum sp = s.spectrum();
    const double lmin = sp.values.minCoeff();
    if (lmin > 0.0) {
      const double total = lp.dual.sum() / lmin;
      if (total < out.value) {
        out.value = total;
        out.weights.assign(static_cast<std::size_t>(m), 0.0);
        for (Eigen::Index j = 0; j < m; ++j) out.weights[j] = lp.dual[j] / lmin;
      }
    }
    if (out.value - out.lower <= tol * out.lower) {
      out.converged = true;
      break;
    }
    bool added = false;
    for (Eigen::Index k = 0; k < d; ++k) {
      if (sp.values[k] >= 1.0) continue;
      append(sp.vectors.col(k));
      added = true;
    }
    if (!added) {
      // Σ v E >= 𝟙 already: the LP value is optimal up to round-off.
      out.converged = true;
      break;
    }
  }
  out.cuts = static_cast<std::size_t>(a.cols());
  out.rounds = std::min(out.rounds, max_rounds);
  return out;
}

inline std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cum += s[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
  return v;
}

}  // namespace detail

inline FractionalCover generalized_covering_number(const QuantumHypergraph& g, int n, double tol = 1e-10) {
  require(n >= 1, ErrorKind::invalid_argument, "product power must be positive");
  require(std::pow(static_cast<double>(g.size()), n) <= 256.0, ErrorKind::size_overflow,
          "fractional covering needs |E|^n <= 256");
  require(std::pow(static_cast<double>(g.dim()), n) <= 64.0, ErrorKind::size_overflow,
          "fractional covering needs dim^n <= 64");
  const QuantumHypergraph gn = n == 1 ? g : product_hypergraph(g, n);
  std::vector<std::size_t> all(gn.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  require(degree(gn, all).min_eigenvalue() > kPsdTol, ErrorKind::infeasible,
          "edges share a kernel vector; no fractional covering exists");
  return detail::fractional_cover(gn.edges(), tol, {});
}

struct CoveringCapacity {
  double capacity = 0.0;  // bits; +inf when every edge mixture is singular
  double lower = 0.0;     // certified lower end of the bracket, bits
  double max_min_eigenvalue = 0.0;
  std::vector<double> optimizer;
  bool infinite = false;
};

/// C = −log₂ max_P λmin(Σ P(E)E).  Projected subgradient ascent supplies the
/// warm-start cuts; the cutting-plane LP polishes and brackets the optimum.
/// For |ℰ| <= 3 a grid over the simplex is compared as well.
inline CoveringCapacity covering_capacity(const QuantumHypergraph& g, double tol = 1e-10) {
  const std::size_t m = g.size();
  CoveringCapacity out;
  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;
  if (degree(g, all).min_eigenvalue() <= kPsdTol) {
    out.capacity = std::numeric_limits<double>::infinity();
    out.lower = out.capacity;
    out.optimizer.assign(m, 1.0 / static_cast<double>(m));
    out.infinite = true;
    return out;
  }
  auto value_at = [&](const std::vector<double>& p) { return detail::edge_average(g, p).min_eigenvalue(); };

  std::vector<CVector> cuts;
  std::vector<double> best_p(m, 1.0 / static_cast<double>(m));
  double best = value_at(best_p);
  std::vector<std::vector<double>> starts{best_p};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> e(m, 0.0);
    e[i] = 1.0;
    starts.push_back(e);
  }
  for (const auto& start : starts) {
    std::vector<double> p = start;
    for (int t = 1; t <= 200; ++t) {
      const Spectrum sp = detail::edge_average(g, p).spectrum();
      const CVector psi = sp.vectors.col(0);
      if (sp.values[0] > best) {
        best = sp.values[0];
        best_p = p;
      }
      if (t % 20 == 0) cuts.push_back(psi);
      std::vector<double> step(m);
      for (std::size_t j = 0; j < m; ++j) step[j] = p[j] + detail::cut_coefficient(psi, g.edge(j)) / std::sqrt(t);
      p = detail::project_to_simplex(step);
    }
  }

  const FractionalCover fc = detail::fractional_cover(g.edges(), tol, cuts);
  std::vector<double> lp_p(m);
  const double total = std::accumulate(fc.weights.begin(), fc.weights.end(), 0.0);
  for (std::size_t j = 0; j < m; ++j) lp_p[j] = fc.weights[j] / total;
  const double lp_value = value_at(lp_p);
  if (lp_value >= best) {
    best = lp_value;
    best_p = lp_p;
  }
  if (m <= 3) {
    const int steps = 200;
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= (m == 3 ? steps - i : 0); ++j) {
        std::vector<double> p(m, 0.0);
        if (m == 1) {
          p[0] = 1.0;
        } else if (m == 2) {
          p = {i / double(steps), 1.0 - i / double(steps)};
        } else {
          p = {i / double(steps), j / double(steps), (steps - i - j) / double(steps)};
        }
        const double v = value_at(p);
        if (v > best) {  // strict: ties keep the earlier candidate
          best = v;
          best_p = p;
        }
      }
  }
  out.max_min_eigenvalue = best;
  out.optimizer = best_p;
  out.capacity = -std::log2(best);
  // max_P λmin = 1/c̃(1) <= 1/lower, so C >= log₂ lower.
  out.lower = std::min(out.capacity, std::log2(fc.lower));
  return out;
}

}  // namespace opcover

#endif  // OPCOVER_HYPERGRAPH_COVERING_HPP
