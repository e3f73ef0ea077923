#ifndef OPCOVER_CONJECTURES_HPP
#define OPCOVER_CONJECTURES_HPP

// Numeric probes of three open operator inequalities.  A probe samples random
// instances, evaluates both sides and records the slack (RHS − LHS, or the
// minimal eigenvalue of RHS − LHS for operator inequalities).  Nothing here is
// asserted: a negative slack is reported as a violation, not an error.
//
//   1: Tr E exp(Z_1 + … + Z_n) <= Tr((E exp Z)^n)            (i.i.d. Z_i)
//   2: log Σ_ij exp(A_i + B_j) <= log Σ_i exp A_i + log Σ_j exp B_j
//   3: Pr{ΣXᵢ ≰ nA} <= Tr exp(−n 𝒟(A‖M)),  E X <= M <= A <= 1

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "opcover/operator_core.hpp"
#include "opcover/operator_probability.hpp"
#include "opcover/random_ops.hpp"

namespace opcover {

struct ConjectureProbeOptions {
  int which = 2;
  int dim = 2;
  std::uint64_t count = 100;
  std::uint64_t seed = 0;
  int n = 2;            // sum length for conjectures 1 and 3
  int family_size = 2;  // |{A_i}|, |{B_j}| and |supp Z|, |supp X|
  bool commuting = false;
  bool keep_slacks = false;
};

struct ConjectureInstance {
  double lhs;
  double rhs;
  double slack;
  double chernoff_bound;  // conjecture 3 only: d 2^(−n D(a‖m)) for comparison
};

struct ConjectureReport {
  int which = 0;
  std::uint64_t instances = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::uint64_t violations = 0;
  std::vector<ConjectureInstance> slacks;
};

namespace detail {

/// Random family that is simultaneously diagonal in one random basis when
/// `commuting` is set.
inline std::vector<HermitianMatrix> random_family(Rng& rng, int dim, int count, bool commuting,
                                                  const Matrix& basis) {
  std::vector<HermitianMatrix> out;
  for (int i = 0; i < count; ++i) {
    if (commuting) {
      RVector ev(dim);
      for (int k = 0; k < dim; ++k) ev[k] = rng.normal();
      out.push_back(reassemble({ev, basis}));
    } else {
      out.push_back(random_hermitian(rng, dim, 0.7));
    }
  }
  return out;
}

inline ConjectureInstance probe_log_exp(Rng& rng, const ConjectureProbeOptions& o) {
  const Matrix basis = random_unitary(rng, o.dim);
  const auto as = random_family(rng, o.dim, o.family_size, o.commuting, basis);
  const auto bs = random_family(rng, o.dim, o.family_size, o.commuting, basis);
  HermitianMatrix joint = HermitianMatrix::zero(o.dim), sa = joint, sb = joint;
  for (const auto& a : as) sa += mexp(a);
  for (const auto& b : bs) sb += mexp(b);
  for (const auto& a : as)
    for (const auto& b : bs) joint += mexp(a + b);
  const HermitianMatrix lhs = mlog(joint);
  const HermitianMatrix rhs = mlog(sa) + mlog(sb);
  return {lhs.trace(), rhs.trace(), (rhs - lhs).min_eigenvalue(), 0.0};
}

inline ConjectureInstance probe_trace_exp(Rng& rng, const ConjectureProbeOptions& o) {
  const Matrix basis = random_unitary(rng, o.dim);
  const auto zs = random_family(rng, o.dim, o.family_size, o.commuting, basis);
  const std::vector<double> p = random_distribution(rng, zs.size());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < zs.size(); ++i) atoms.push_back({p[i], zs[i]});
  // Renormalize so the OperatorRV invariant holds to 1e-12.
  double total = 0.0;
  for (const auto& a : atoms) total += a.probability;
  for (auto& a : atoms) a.probability /= total;
  const OperatorRV z(std::move(atoms));

  // E Tr exp(ΣZᵢ) by enumeration of count vectors.
  const int k = static_cast<int>(z.size());
  double lhs = 0.0;
  detail::for_each_composition(o.n, k, [&](const std::vector<int>& c) {
    double lp = log_multinomial(o.n, c);
    HermitianMatrix s = HermitianMatrix::zero(o.dim);
    for (int j = 0; j < k; ++j) {
      if (c[j] == 0) continue;
      lp += c[j] * std::log(z.atoms()[j].probability);
      s += static_cast<double>(c[j]) * z.atoms()[j].value;
    }
    lhs += std::exp(lp) * mexp(s).trace();
  });
  HermitianMatrix e_exp = HermitianMatrix::zero(o.dim);
  for (const auto& a : z.atoms()) e_exp += a.probability * mexp(a.value);
  const double rhs = matrix_function(e_exp, MatrixFunction::power(o.n)).trace();
  return {lhs, rhs, rhs - lhs, 0.0};
}

inline ConjectureInstance probe_operator_chernoff(Rng& rng, const ConjectureProbeOptions& o) {
  const Matrix basis = random_unitary(rng, o.dim);
  std::vector<HermitianMatrix> values;
  for (int i = 0; i < o.family_size; ++i) {
    if (o.commuting) {
      RVector ev(o.dim);
      for (int k = 0; k < o.dim; ++k) ev[k] = 0.05 + 0.9 * rng.uniform();
      values.push_back(reassemble({ev, basis}));
    } else {
      values.push_back(random_effect(rng, o.dim, 0.05, 0.95));
    }
  }
  const OperatorRV x = OperatorRV::uniform(values);
  const HermitianMatrix one = HermitianMatrix::identity(o.dim);
  const HermitianMatrix ex = mean(x);
  const HermitianMatrix m = ex + (0.5 * rng.uniform()) * (one - ex);
  const HermitianMatrix a = m + rng.uniform() * (one - m);

  const auto tail = sum_tail(
      x, o.n, [&](const HermitianMatrix& s) { return not_leq(s, static_cast<double>(o.n) * a); }, {});
  const HermitianMatrix div = operator_divergence(a, m);
  const double rhs = mexp((-o.n * kLn2) * div).trace();

  // Scalar Chernoff comparison with a = λmin(A), m = λmax(M).
  const double a_s = a.min_eigenvalue();
  const double m_s = m.max_eigenvalue();
  const double chernoff = a_s >= m_s ? o.dim * std::exp2(-o.n * binary_divergence(a_s, m_s))
                                     : static_cast<double>(o.dim);
  return {tail.probability, rhs, rhs - tail.probability, chernoff};
}

}  // namespace detail

inline ConjectureReport conjecture_probe(const ConjectureProbeOptions& o) {
  require(o.which >= 1 && o.which <= 3, ErrorKind::invalid_argument, "conjecture index must be 1, 2 or 3");
  require(o.dim >= 1 && o.dim <= 6, ErrorKind::invalid_argument, "probe dimension must be in 1..6");
  require(o.count >= 1, ErrorKind::invalid_argument, "probe count must be positive");
  require(o.n >= 1 && o.family_size >= 1, ErrorKind::invalid_argument, "n and family size must be positive");
  ConjectureReport report;
  report.which = o.which;
  const Rng master(o.seed);
  for (std::uint64_t i = 0; i < o.count; ++i) {
    Rng rng = master.split(i);
    ConjectureInstance inst;
    switch (o.which) {
      case 1: inst = detail::probe_trace_exp(rng, o); break;
      case 2: inst = detail::probe_log_exp(rng, o); break;
      default: inst = detail::probe_operator_chernoff(rng, o); break;
    }
    ++report.instances;
    report.min_slack = std::min(report.min_slack, inst.slack);
    // Relative tolerance: slacks are differences of O(|lhs|) quantities.
    if (inst.slack < -1e-9 * std::max(1.0, std::abs(inst.rhs))) ++report.violations;
    if (o.keep_slacks) report.slacks.push_back(inst);
  }
  return report;
}

}  // namespace opcover

#endif  // OPCOVER_CONJECTURES_HPP
