#ifndef OPCOVER_TYPICALITY_HPP
#define OPCOVER_TYPICALITY_HPP

// Types (empirical distributions), typical sequences
//
//   𝒯ⁿ_{P,α} = { xⁿ : |N(x|xⁿ) − nP(x)| <= α√n √(P(x)(1−P(x))) for all x },
//
// and the typical / conditional typical projectors built from eigenbases.
// A projector keeps the eigenbasis product vectors whose eigen-index sequence
// is typical for the spectrum; equal eigenvalues are merged into one index
// first, so the projector does not depend on the choice of eigenbasis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "opcover/cq_channel.hpp"
#include "opcover/operator_core.hpp"

namespace opcover {

struct EmpiricalDistribution {
  int n = 0;
  std::vector<int> counts;

  int alphabet_size() const { return static_cast<int>(counts.size()); }
  double probability(int x) const { return static_cast<double>(counts.at(x)) / n; }
  std::vector<double> probabilities() const {
    std::vector<double> p(counts.size());
    for (std::size_t x = 0; x < counts.size(); ++x) p[x] = static_cast<double>(counts[x]) / n;
    return p;
  }
  bool operator==(const EmpiricalDistribution&) const = default;
};

inline EmpiricalDistribution type_of(std::span<const int> xs, int a) {
  require(!xs.empty() && a >= 1, ErrorKind::invalid_argument, "type of an empty sequence");
  EmpiricalDistribution t{static_cast<int>(xs.size()), std::vector<int>(a, 0)};
  for (int x : xs) {
    require(x >= 0 && x < a, ErrorKind::invalid_argument, "symbol out of range");
    ++t.counts[x];
  }
  return t;
}

/// Number of types, C(n+a−1, a−1), or +inf when it does not fit a double.
inline double type_count(int n, int a) {
  double c = 1.0;
  for (int k = 1; k < a; ++k) c = c * (n + k) / k;
  return c;
}

/// All types of length n over a symbols, first count descending.
inline std::vector<EmpiricalDistribution> type_enumerate(int n, int a) {
  require(n >= 1 && a >= 1, ErrorKind::invalid_argument, "n and a must be positive");
  require(type_count(n, a) <= 1e7, ErrorKind::size_overflow, "too many types to enumerate");
  std::vector<EmpiricalDistribution> out;
  std::vector<int> c(a, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == a - 1) {
      c[pos] = left;
      out.push_back({n, c});
      return;
    }
    for (int k = left; k >= 0; --k) {
      c[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, n);
  require(static_cast<double>(out.size()) <= std::pow(n + 1.0, a), ErrorKind::bound_violated,
          "type count exceeds (n+1)^a");
  return out;
}

/// Multinomial coefficient n! / Π N(x)!, exact.
inline std::uint64_t type_class_size(const EmpiricalDistribution& t) {
  std::uint64_t result = 1;
  int placed = 0;
  for (int c : t.counts) {
    // result *= C(placed + c, c), built factor by factor; each prefix is an integer.
    for (int k = 1; k <= c; ++k) {
      const unsigned __int128 next = static_cast<unsigned __int128>(result) * static_cast<unsigned>(placed + k);
      require(next / static_cast<unsigned>(k) <= std::numeric_limits<std::uint64_t>::max(), ErrorKind::size_overflow,
              "type class size overflows 64 bits");
      result = static_cast<std::uint64_t>(next / static_cast<unsigned>(k));
    }
    placed += c;
  }
  return result;
}

/// Membership of a count vector in 𝒯ⁿ_{P,α}.  P(x) = 0 forces N(x) = 0.
inline bool is_typical_counts(std::span<const int> counts, std::span<const double> p, int n, double alpha) {
  require(counts.size() == p.size(), ErrorKind::dimension_mismatch, "counts and distribution differ in size");
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double dev = std::abs(counts[x] - n * p[x]);
    const double allowed = alpha * std::sqrt(static_cast<double>(n)) * std::sqrt(std::max(0.0, p[x] * (1.0 - p[x])));
    if (dev > allowed + 1e-12 * n) return false;
  }
  return true;
}

struct TypicalSet {
  std::vector<std::vector<int>> sequences;  // lexicographic order
  double probability = 0.0;                 // Pⁿ(𝒯ⁿ_{P,α}), exact summation over types
  double chebyshev_bound = 0.0;             // 1 − a/α²
};

inline TypicalSet typical_set(std::span<const double> p, int n, double alpha) {
  const int a = static_cast<int>(p.size());
  require(a >= 1 && n >= 1 && alpha >= 0.0, ErrorKind::invalid_argument, "invalid typical set parameters");
  require(std::pow(static_cast<double>(a), n) <= 1e6, ErrorKind::size_overflow, "a^n exceeds 10^6");
  TypicalSet out;
  std::vector<int> seq(n, 0), counts(a, 0);
  counts[0] = n;
  for (;;) {
    if (is_typical_counts(counts, p, n, alpha)) out.sequences.push_back(seq);
    int i = n - 1;
    while (i >= 0 && seq[i] == a - 1) {
      --counts[seq[i]];
      seq[i] = 0;
      ++counts[0];
      --i;
    }
    if (i < 0) break;
    --counts[seq[i]];
    ++seq[i];
    ++counts[seq[i]];
  }
  long double mass = 0.0L;
  for (const auto& t : type_enumerate(n, a)) {
    if (!is_typical_counts(t.counts, p, n, alpha)) continue;
    long double term = static_cast<long double>(type_class_size(t));
    for (int x = 0; x < a; ++x) term *= std::pow(static_cast<long double>(p[x]), t.counts[x]);
    mass += term;
  }
  out.probability = static_cast<double>(mass);
  out.chebyshev_bound = alpha > 0.0 ? 1.0 - a / (alpha * alpha) : -std::numeric_limits<double>::infinity();
  require(out.probability >= out.chebyshev_bound - 1e-12, ErrorKind::bound_violated,
          "typical set probability below the Chebyshev bound");
  return out;
}

enum class ProjectorKind { unconditional, conditional };

struct TypicalProjector {
  HermitianMatrix projector;
  ProjectorKind kind = ProjectorKind::unconditional;
  int n = 0;
  double alpha = 0.0;
  std::uint64_t rank = 0;
  double trace_mass = 0.0;   // Tr(reference · Π), summed over kept product eigenvalues
  double trace_bound = 0.0;  // 1 − d/α² resp. 1 − ad/α²
  double commutator = 0.0;   // Frobenius norm of [Π, reference]
  double entropy = 0.0;      // H(ρ) resp. H(W|P), bits
  // Measured constants K' in Tr Π <= 2^{nH + K'·c·α√n} and the eigenvalue
  // sandwich, with c = d (unconditional) or a·d (conditional).  Diagnostics only.
  double rank_constant = 0.0;
  double eigen_constant = 0.0;
};

namespace detail {

struct GroupedSpectrum {
  Matrix vectors;
  std::vector<double> values;  // eigenvalue per eigenvector, clamped at 0
  std::vector<int> group;      // merged index per eigenvector
  std::vector<double> mass;    // total eigenvalue mass per group
};

inline GroupedSpectrum grouped_spectrum(const HermitianMatrix& rho) {
  const Spectrum sp = rho.spectrum();  // ascending
  GroupedSpectrum g;
  g.vectors = sp.vectors;
  for (Eigen::Index j = 0; j < sp.values.size(); ++j) {
    const double v = std::max(0.0, sp.values[j]);
    if (j == 0 || v - g.values.back() > 1e-12) g.mass.push_back(0.0);
    g.values.push_back(v);
    g.group.push_back(static_cast<int>(g.mass.size()) - 1);
    g.mass.back() += v;
  }
  return g;
}

/// Builds Σ |b⟩⟨b| over kept product vectors b = ⊗ᵢ U_{f(i)} e_{yᵢ}.
/// `factor[i]` selects the grouped spectrum used at position i; `blocks[i]`
/// says which typicality block position i belongs to.
struct ProductProjector {
  Matrix projector;
  std::uint64_t rank = 0;
  double mass = 0.0;
  double min_weight = std::numeric_limits<double>::infinity();
  double max_weight = 0.0;
};

inline ProductProjector product_projector(const std::vector<const GroupedSpectrum*>& factor,
                                          const std::vector<int>& blocks, int block_count, double alpha) {
  const int n = static_cast<int>(factor.size());
  const int d = static_cast<int>(factor.front()->values.size());
  std::vector<int> block_len(block_count, 0);
  for (int b : blocks) ++block_len[b];
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(d);

  ProductProjector out;
  std::vector<CVector> kept;
  std::vector<int> y(n, 0);
  std::vector<std::vector<int>> counts(block_count);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      y[i] = static_cast<int>(rest % d);
      rest /= d;
    }
    for (int b = 0; b < block_count; ++b) counts[b].clear();
    // Per-block group counts; every position in a block shares its spectrum.
    std::vector<const GroupedSpectrum*> block_spec(block_count, nullptr);
    for (int i = 0; i < n; ++i) {
      const int b = blocks[i];
      if (!block_spec[b]) {
        block_spec[b] = factor[i];
        counts[b].assign(factor[i]->mass.size(), 0);
      }
      ++counts[b][factor[i]->group[y[i]]];
    }
    bool keep = true;
    for (int b = 0; b < block_count && keep; ++b)
      if (block_spec[b]) keep = is_typical_counts(counts[b], block_spec[b]->mass, block_len[b], alpha);
    if (!keep) continue;

    CVector v = factor[0]->vectors.col(y[0]);
    double w = factor[0]->values[y[0]];
    for (int i = 1; i < n; ++i) {
      const CVector& u = factor[i]->vectors.col(y[i]);
      CVector next(v.size() * u.size());
      for (Eigen::Index p = 0; p < v.size(); ++p) next.segment(p * u.size(), u.size()) = v[p] * u;
      v = std::move(next);
      w *= factor[i]->values[y[i]];
    }
    kept.push_back(std::move(v));
    ++out.rank;
    out.mass += w;
    out.min_weight = std::min(out.min_weight, w);
    out.max_weight = std::max(out.max_weight, w);
  }
  Matrix basis(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = kept[k];
  out.projector = basis * basis.adjoint();
  return out;
}

inline double measured_constant(double value, double scale) { return scale > 0.0 ? value / scale : 0.0; }

}  // namespace detail

/// Πⁿ_{ρ,α}; throws bound_violated if Tr(ρ^{⊗n}Π) < 1 − d/α².
inline TypicalProjector typical_projector(const HermitianMatrix& rho, int n, double alpha) {
  require(n >= 1 && alpha >= 0.0, ErrorKind::invalid_argument, "invalid typical projector parameters");
  const int d = rho.dim();
  require(std::pow(static_cast<double>(d), n) <= 4096.0, ErrorKind::size_overflow, "d^n exceeds 4096");
  (void)DensityOperator(rho);  // validates
  const auto gs = detail::grouped_spectrum(rho);
  const std::vector<const detail::GroupedSpectrum*> factor(static_cast<std::size_t>(n), &gs);
  const auto pp = detail::product_projector(factor, std::vector<int>(n, 0), 1, alpha);

  TypicalProjector out;
  out.kind = ProjectorKind::unconditional;
  out.projector = HermitianMatrix::from_trusted(pp.projector);
  out.n = n;
  out.alpha = alpha;
  out.rank = pp.rank;
  out.trace_mass = pp.mass;
  out.trace_bound = alpha > 0.0 ? 1.0 - d / (alpha * alpha) : -std::numeric_limits<double>::infinity();
  out.entropy = von_neumann_entropy(rho);
  const std::vector<HermitianMatrix> copies(static_cast<std::size_t>(n), rho);
  out.commutator = commutator_norm(out.projector, kron_all(copies));
  const double scale = d * alpha * std::sqrt(static_cast<double>(n));
  if (pp.rank > 0) {
    out.rank_constant = detail::measured_constant(std::log2(static_cast<double>(pp.rank)) - n * out.entropy, scale);
    if (pp.min_weight > 0.0)
      out.eigen_constant = detail::measured_constant(-std::log2(pp.min_weight) - n * out.entropy, scale);
  }
  require(out.trace_mass >= out.trace_bound - 1e-12, ErrorKind::bound_violated,
          "typical projector trace below 1 - d/alpha^2");
  return out;
}

/// Πⁿ_{W,α}(xⁿ): per input symbol x, the positions with xᵢ = x form a block
/// that must be typical for the spectrum of W_x.  Throws bound_violated if
/// Tr(Wⁿ_{xⁿ}Π) < 1 − ad/α².
inline TypicalProjector conditional_typical_projector(const CQChannel& w, std::span<const int> xs, double alpha) {
  const int n = static_cast<int>(xs.size());
  const int a = w.alphabet_size();
  const int d = w.dim();
  require(n >= 1 && alpha >= 0.0, ErrorKind::invalid_argument, "invalid conditional projector parameters");
  require(std::pow(static_cast<double>(d), n) <= 4096.0, ErrorKind::size_overflow, "d^n exceeds 4096");
  std::vector<detail::GroupedSpectrum> spectra;
  for (int x = 0; x < a; ++x) spectra.push_back(detail::grouped_spectrum(w.state(x)));
  std::vector<const detail::GroupedSpectrum*> factor;
  std::vector<int> blocks;
  for (int x : xs) {
    require(x >= 0 && x < a, ErrorKind::invalid_argument, "input symbol out of range");
    factor.push_back(&spectra[x]);
    blocks.push_back(x);
  }
  const auto pp = detail::product_projector(factor, blocks, a, alpha);

  TypicalProjector out;
  out.kind = ProjectorKind::conditional;
  out.projector = HermitianMatrix::from_trusted(pp.projector);
  out.n = n;
  out.alpha = alpha;
  out.rank = pp.rank;
  out.trace_mass = pp.mass;
  out.trace_bound = alpha > 0.0 ? 1.0 - static_cast<double>(a) * d / (alpha * alpha)
                                : -std::numeric_limits<double>::infinity();
  for (int x : xs) out.entropy += von_neumann_entropy(w.state(x)) / n;
  out.commutator = commutator_norm(out.projector, tensor_output(xs, w));
  const double scale = static_cast<double>(a) * d * alpha * std::sqrt(static_cast<double>(n));
  if (pp.rank > 0) {
    out.rank_constant = detail::measured_constant(std::log2(static_cast<double>(pp.rank)) - n * out.entropy, scale);
    out.eigen_constant = detail::measured_constant(std::log2(pp.max_weight) + n * out.entropy, scale);
  }
  require(out.trace_mass >= out.trace_bound - 1e-12, ErrorKind::bound_violated,
          "conditional typical projector trace below 1 - ad/alpha^2");
  return out;
}

struct CrossTypicality {
  TypicalProjector output_projector;  // Πⁿ_{PW,α√a} for P the type of xⁿ
  double trace_mass = 0.0;            // Tr(Wⁿ_{xⁿ} Πⁿ_{PW,α√a})
  double trace_bound = 0.0;           // 1 − ad/α²
};

/// Mass of Wⁿ_{xⁿ} on the typical subspace of PW at α√a, P = type of xⁿ.
inline CrossTypicality cross_typicality(const CQChannel& w, std::span<const int> xs, double alpha) {
  const int a = w.alphabet_size();
  const auto t = type_of(xs, a);
  const DensityOperator pw = output_state(t.probabilities(), w);
  CrossTypicality out{typical_projector(pw, static_cast<int>(xs.size()), alpha * std::sqrt(static_cast<double>(a))),
                      0.0, 0.0};
  out.trace_mass = tensor_output(xs, w).matrix().trace_product(out.output_projector.projector);
  out.trace_bound = alpha > 0.0 ? 1.0 - static_cast<double>(a) * w.dim() / (alpha * alpha)
                                : -std::numeric_limits<double>::infinity();
  require(out.trace_mass >= out.trace_bound - 1e-9, ErrorKind::bound_violated,
          "cross typicality trace below 1 - ad/alpha^2");
  return out;
}

}  // namespace opcover

#endif  // OPCOVER_TYPICALITY_HPP
