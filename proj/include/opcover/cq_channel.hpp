#ifndef OPCOVER_CQ_CHANNEL_HPP
#define OPCOVER_CQ_CHANNEL_HPP

// Classical–quantum channels x ↦ W_x, the classical embedding, Holevo
// information I(P;W) = H(PW) − Σ P(x)H(W_x) and the capacity max_P I(P;W).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "opcover/operator_core.hpp"

namespace opcover {

class CQChannel {
 public:
  explicit CQChannel(std::vector<DensityOperator> states) : states_(std::move(states)) {
    require(!states_.empty(), ErrorKind::invalid_argument, "channel needs at least one input symbol");
    for (const auto& s : states_)
      require(s.dim() == states_.front().dim(), ErrorKind::dimension_mismatch, "channel outputs must share a dimension");
  }

  int alphabet_size() const { return static_cast<int>(states_.size()); }
  int dim() const { return states_.front().dim(); }
  const DensityOperator& state(int x) const { return states_.at(static_cast<std::size_t>(x)); }
  const std::vector<DensityOperator>& states() const { return states_; }

 private:
  std::vector<DensityOperator> states_;
};

/// W̃_x = Σ_y W(y|x)|e_y⟩⟨e_y| for a row-stochastic matrix W.
inline CQChannel embed_classical(const std::vector<std::vector<double>>& w) {
  require(!w.empty(), ErrorKind::invalid_argument, "stochastic matrix has no rows");
  std::vector<DensityOperator> states;
  for (const auto& row : w) {
    require(row.size() == w.front().size() && !row.empty(), ErrorKind::dimension_mismatch,
            "stochastic matrix rows must share a length");
    double total = 0.0;
    for (double v : row) {
      require(std::isfinite(v) && v >= 0.0, ErrorKind::domain, "transition probabilities must be nonnegative");
      total += v;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::domain, "stochastic matrix rows must sum to 1");
    states.emplace_back(HermitianMatrix::diagonal(row));
  }
  return CQChannel(std::move(states));
}

namespace detail {

inline void check_input_distribution(std::span<const double> p, int a) {
  require(static_cast<int>(p.size()) == a, ErrorKind::dimension_mismatch, "need one probability per input symbol");
  double total = 0.0;
  for (double x : p) {
    require(std::isfinite(x) && x >= 0.0, ErrorKind::domain, "probabilities must be nonnegative");
    total += x;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::domain, "probabilities must sum to 1");
}

}  // namespace detail

/// PW = Σ P(x) W_x
inline DensityOperator output_state(std::span<const double> p, const CQChannel& w) {
  detail::check_input_distribution(p, w.alphabet_size());
  HermitianMatrix s = HermitianMatrix::zero(w.dim());
  for (int x = 0; x < w.alphabet_size(); ++x)
    if (p[x] > 0.0) s += p[x] * w.state(x).matrix();
  return DensityOperator(s);
}

/// Wⁿ_{xⁿ} = W_{x₁} ⊗ … ⊗ W_{xₙ}
inline DensityOperator tensor_output(std::span<const int> xs, const CQChannel& w) {
  require(!xs.empty(), ErrorKind::invalid_argument, "empty input sequence");
  require(std::pow(static_cast<double>(w.dim()), static_cast<double>(xs.size())) <= 4096.0, ErrorKind::size_overflow,
          "tensor output dimension exceeds 4096");
  std::vector<HermitianMatrix> factors;
  for (int x : xs) {
    require(x >= 0 && x < w.alphabet_size(), ErrorKind::invalid_argument, "input symbol out of range");
    factors.push_back(w.state(x).matrix());
  }
  return DensityOperator(kron_all(factors));
}

/// Holevo information in bits.
inline double holevo_information(std::span<const double> p, const CQChannel& w) {
  const DensityOperator mix = output_state(p, w);
  double cond = 0.0;
  for (int x = 0; x < w.alphabet_size(); ++x)
    if (p[x] > 0.0) cond += p[x] * von_neumann_entropy(w.state(x));
  return std::max(0.0, von_neumann_entropy(mix) - cond);
}

struct CapacityResult {
  double capacity = 0.0;  // bits, I(P*;W)
  double gap = 0.0;       // max_x D(W_x‖P*W) − I(P*;W) >= C − I(P*;W)
  std::vector<double> optimizer;
  int iterations = 0;
  bool converged = false;
};

/// Multiplicative updates P(x) ∝ P(x)·2^{D(W_x‖PW)} from the uniform input,
/// stopped when the certified gap max_x D(W_x‖PW) − I(P;W) is at most tol.
inline CapacityResult capacity(const CQChannel& w, double tol = 1e-9, int max_iterations = 1'000'000) {
  require(tol > 0.0, ErrorKind::invalid_argument, "tolerance must be positive");
  const int a = w.alphabet_size();
  std::vector<double> h(a);
  for (int x = 0; x < a; ++x) h[x] = von_neumann_entropy(w.state(x));

  CapacityResult out;
  std::vector<double> p(a, 1.0 / a), div(a);
  for (out.iterations = 0;; ++out.iterations) {
    HermitianMatrix mix = HermitianMatrix::zero(w.dim());
    for (int x = 0; x < a; ++x)
      if (p[x] > 0.0) mix += p[x] * w.state(x).matrix();
    const HermitianMatrix log_mix = matrix_function(mix, MatrixFunction::log2());
    double info = 0.0, top = 0.0;
    for (int x = 0; x < a; ++x) {
      // D(W_x‖PW) = −H(W_x) − Tr W_x log₂ PW, finite since supp W_x ⊆ supp PW.
      div[x] = std::max(0.0, -h[x] - w.state(x).matrix().trace_product(log_mix));
      info += p[x] * div[x];
      top = std::max(top, div[x]);
    }
    out.capacity = info;
    out.gap = std::max(0.0, top - info);
    out.optimizer = p;
    if (out.gap <= tol) {
      out.converged = true;
      break;
    }
    if (out.iterations >= max_iterations) break;
    double total = 0.0;
    for (int x = 0; x < a; ++x) {
      p[x] *= std::exp2(div[x] - top);
      total += p[x];
    }
    for (auto& v : p) v /= total;
  }
  return out;
}

}  // namespace opcover

#endif  // OPCOVER_CQ_CHANNEL_HPP
