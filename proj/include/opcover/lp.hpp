#ifndef OPCOVER_LP_HPP
#define OPCOVER_LP_HPP

// Dense tableau simplex for  max cᵀx  s.t.  A x <= b, x >= 0  with b >= 0,
// so the slack basis is an initial feasible vertex.  Intended for the small
// cutting-plane programs of the covering module (a few hundred rows/columns).

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "opcover/error.hpp"

namespace opcover {

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double value = 0.0;
  Eigen::VectorXd x;     // primal solution
  Eigen::VectorXd dual;  // one multiplier per row of A, >= 0
  int iterations = 0;
};

inline LpResult simplex_max(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                            int max_iterations = 100000) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  require(b.size() == m && c.size() == n, ErrorKind::dimension_mismatch, "simplex: shape mismatch");
  require(m == 0 || b.minCoeff() >= 0.0, ErrorKind::invalid_argument, "simplex: b must be nonnegative");

  // Tableau rows 0..m-1 are constraints, row m is the reduced-cost row
  // (stored as -c so a negative entry means the column can enter).
  const double kPivotTol = 1e-12;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, m).setIdentity();
  t.col(n + m).head(m) = b;
  t.row(m).head(n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  LpResult out;
  double last_value = -std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (;;) {
    if (out.iterations >= max_iterations) {
      out.status = LpStatus::iteration_limit;
      break;
    }
    // Dantzig's rule; Bland's rule after a run of degenerate pivots.
    const bool bland = stalled > 50;
    Eigen::Index enter = -1;
    double best = -kPivotTol;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < best) {
        enter = j;
        if (bland) break;
        best = t(m, j);
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= kPivotTol) continue;
      const double r = t(i, n + m) / t(i, enter);
      if (r < ratio - 1e-15 || (r <= ratio + 1e-15 && leave >= 0 && basis[i] < basis[leave])) {
        ratio = r;
        leave = i;
      }
    }
    if (leave < 0) {
      out.status = LpStatus::unbounded;
      break;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave || t(i, enter) == 0.0) continue;
      t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[leave] = enter;
    ++out.iterations;
    const double value = t(m, n + m);
    stalled = value > last_value + 1e-14 ? 0 : stalled + 1;
    last_value = std::max(last_value, value);
  }

  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = std::max(0.0, t(i, n + m));
  out.dual = t.row(m).segment(n, m).transpose().cwiseMax(0.0);
  out.value = c.dot(out.x);
  return out;
}

}  // namespace opcover

#endif  // OPCOVER_LP_HPP
