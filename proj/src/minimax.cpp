#include "projmeas/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "projmeas/algebra.hpp"

namespace projmeas {

namespace {

double max_abs_residual(const Eigen::VectorXd& e, int* argmax) {
  double best = -1.0;
  int idx = 0;
  for (int i = 0; i < e.size(); ++i) {
    double a = std::abs(e[i]);
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (argmax) *argmax = idx;
  return best;
}

// Revised simplex on the dual of min_theta max_i |b_i - A_i theta|:
//
//   max sum_i b_i (y+_i - y-_i)
//   s.t. sum_i A_i^T (y+_i - y-_i) = 0,  sum_i (y+_i + y-_i) = 1,  y >= 0.
//
// Columns are [s*A_i; 1] with cost s*b_i (s = +1 for even ids 2i, -1 for odd
// ids 2i+1) plus one artificial column e_{k+1} used by phase 1. The simplex
// multipliers at the optimum are exactly (theta*, h*) of the primal, so the
// returned fit is the certified grid optimum.
class ChebyshevSimplex {
 public:
  ChebyshevSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : a_(a), b_(b), n_(static_cast<int>(a.rows())), k_(static_cast<int>(a.cols())),
        m_(k_ + 1) {
    scale_ = std::max(1.0, b.cwiseAbs().maxCoeff());
  }

  // Attempts to solve to optimality; returns false on numerical failure.
  bool solve(const std::vector<int>& warm_basis, Eigen::VectorXd* theta,
             double* value) {
    if (!init_basis(warm_basis)) return false;
    if (has_artificial() && !phase1()) return false;
    if (!phase2()) return false;
    *theta = lambda_.head(k_);
    *value = lambda_[k_];
    return true;
  }

 private:
  static constexpr int kArtificial = -1;
  static constexpr int kMaxIters = 20000;

  Eigen::VectorXd column(int id) const {
    Eigen::VectorXd col(m_);
    if (id == kArtificial) {
      col.setZero();
      col[k_] = 1.0;
      return col;
    }
    double s = (id % 2 == 0) ? 1.0 : -1.0;
    col.head(k_) = s * a_.row(id / 2).transpose();
    col[k_] = 1.0;
    return col;
  }

  double cost(int id) const {
    if (id == kArtificial) return 0.0;
    double s = (id % 2 == 0) ? 1.0 : -1.0;
    return s * b_[id / 2];
  }

  bool refactor() {
    Eigen::MatrixXd basis_mat(m_, m_);
    for (int r = 0; r < m_; ++r) basis_mat.col(r) = column(basis_[static_cast<size_t>(r)]);
    lu_.compute(basis_mat);
    if (lu_.rank() < m_) return false;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(m_);
    f[k_] = 1.0;
    y_ = lu_.solve(f);
    return y_.minCoeff() >= -1e-9;
  }

  bool has_artificial() const {
    for (int id : basis_) {
      if (id == kArtificial) return true;
    }
    return false;
  }

  bool init_basis(const std::vector<int>& warm) {
    if (static_cast<int>(warm.size()) == m_) {
      basis_ = warm;
      if (refactor()) return true;
    }
    // Phase-1 start: artificial column plus k points with independent rows.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_.transpose());
    if (qr.rank() < k_) return false;
    basis_.assign(static_cast<size_t>(m_), kArtificial);
    for (int r = 0; r < k_; ++r) {
      basis_[static_cast<size_t>(r)] = 2 * qr.colsPermutation().indices()[r];
    }
    return refactor();
  }

  // Multipliers for the current basis under the given cost function.
  template <typename CostFn>
  void compute_lambda(CostFn&& cost_of) {
    Eigen::VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = cost_of(basis_[static_cast<size_t>(r)]);
    lambda_ = lu_.transpose().solve(cb);
  }

  // One pricing + pivot step. entering < 0 means optimal. Returns false on
  // numerical failure.
  template <typename CostFn>
  bool step(CostFn&& cost_of, bool bland, bool* optimal) {
    compute_lambda(cost_of);
    const double tol = 1e-11 * scale_;

    int entering = -2;
    if (bland) {
      for (int j = 0; j < 2 * n_ && entering == -2; ++j) {
        if (in_basis(j)) continue;
        if (cost_of(j) - lambda_.dot(column(j)) > tol) entering = j;
      }
    } else {
      // Dantzig pricing, vectorized: for real columns the reduced costs are
      // +-(b - A lambda_head) - lambda_k (phase-2 costs).
      Eigen::VectorXd v = b_ - a_ * lambda_.head(k_);
      double best = tol;
      for (int i = 0; i < n_; ++i) {
        double rp = cost_plus_reduced(cost_of, i, v[i]);
        if (rp > best && !in_basis(2 * i)) {
          best = rp;
          entering = 2 * i;
        }
        double rm = cost_minus_reduced(cost_of, i, v[i]);
        if (rm > best && !in_basis(2 * i + 1)) {
          best = rm;
          entering = 2 * i + 1;
        }
      }
    }
    if (entering == -2) {
      *optimal = true;
      return true;
    }
    *optimal = false;

    Eigen::VectorXd d = lu_.solve(column(entering));
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m_; ++r) {
      if (d[r] > 1e-11) {
        double ratio = y_[r] / d[r];
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // dual region is compact; cannot be unbounded
    basis_[static_cast<size_t>(leave)] = entering;

    Eigen::MatrixXd basis_mat(m_, m_);
    for (int r = 0; r < m_; ++r) basis_mat.col(r) = column(basis_[static_cast<size_t>(r)]);
    lu_.compute(basis_mat);
    if (lu_.rank() < m_) return false;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(m_);
    f[k_] = 1.0;
    y_ = lu_.solve(f);
    if (y_.minCoeff() < -1e-8) return false;
    y_ = y_.cwiseMax(0.0);
    return true;
  }

  template <typename CostFn>
  double cost_plus_reduced(CostFn&& cost_of, int i, double v_i) const {
    // Exact for phase-2 costs; phase 1 prices via the generic path below.
    (void)cost_of;
    return v_i - lambda_[k_];
  }

  template <typename CostFn>
  double cost_minus_reduced(CostFn&& cost_of, int i, double v_i) const {
    (void)cost_of;
    return -v_i - lambda_[k_];
  }

  bool in_basis(int id) const {
    for (int b : basis_) {
      if (b == id) return true;
    }
    return false;
  }

  bool phase1() {
    auto c1 = [&](int id) { return id == kArtificial ? -1.0 : 0.0; };
    int stalled = 0;
    for (int it = 0; it < kMaxIters; ++it) {
      if (!has_artificial()) return true;
      compute_lambda(c1);
      const double tol = 1e-11;
      // Generic pricing for phase 1 (costs are 0 / -1).
      Eigen::VectorXd v = -(a_ * lambda_.head(k_));
      int entering = -2;
      double best = tol;
      for (int i = 0; i < n_; ++i) {
        double rp = v[i] - lambda_[k_];
        if (rp > best && !in_basis(2 * i)) {
          best = rp;
          entering = 2 * i;
          if (stalled > 30) break;  // Bland: first improving column
        }
        double rm = -v[i] - lambda_[k_];
        if (rm > best && !in_basis(2 * i + 1)) {
          best = rm;
          entering = 2 * i + 1;
          if (stalled > 30) break;
        }
      }
      if (entering == -2) {
        // Optimal for phase 1; succeed only if the artificial weight is zero
        // and it can be swapped out.
        return swap_out_artificial();
      }
      Eigen::VectorXd d = lu_.solve(column(entering));
      int leave = -1;
      double best_ratio = 0.0;
      // Prefer dropping the artificial column when the ratio ties.
      for (int r = 0; r < m_; ++r) {
        if (d[r] > 1e-11) {
          double ratio = y_[r] / d[r];
          bool better = leave < 0 || ratio < best_ratio - 1e-15;
          bool tie = leave >= 0 && std::abs(ratio - best_ratio) <= 1e-15;
          if (better || (tie && basis_[static_cast<size_t>(r)] == kArtificial)) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;
      if (best_ratio <= 1e-15) ++stalled; else stalled = 0;
      basis_[static_cast<size_t>(leave)] = entering;
      Eigen::MatrixXd basis_mat(m_, m_);
      for (int r = 0; r < m_; ++r) basis_mat.col(r) = column(basis_[static_cast<size_t>(r)]);
      lu_.compute(basis_mat);
      if (lu_.rank() < m_) return false;
      Eigen::VectorXd f = Eigen::VectorXd::Zero(m_);
      f[k_] = 1.0;
      y_ = lu_.solve(f);
      if (y_.minCoeff() < -1e-8) return false;
      y_ = y_.cwiseMax(0.0);
    }
    return false;
  }

  bool swap_out_artificial() {
    int row = -1;
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<size_t>(r)] == kArtificial) row = r;
    }
    if (row < 0) return true;
    if (y_[row] > 1e-9) return false;  // should not happen: the dual is feasible
    for (int j = 0; j < 2 * n_; ++j) {
      if (in_basis(j)) continue;
      Eigen::VectorXd d = lu_.solve(column(j));
      if (std::abs(d[row]) > 1e-8) {
        basis_[static_cast<size_t>(row)] = j;
        return refactor();
      }
    }
    return false;
  }

  bool phase2() {
    auto c2 = [&](int id) { return cost(id); };
    double last_obj = -std::numeric_limits<double>::infinity();
    int stalled = 0;
    bool bland = false;
    for (int it = 0; it < kMaxIters; ++it) {
      bool optimal = false;
      if (!step(c2, bland, &optimal)) return false;
      if (optimal) return true;
      double obj = 0.0;
      for (int r = 0; r < m_; ++r) obj += cost(basis_[static_cast<size_t>(r)]) * y_[r];
      if (obj <= last_obj + 1e-15) {
        if (++stalled > 30) bland = true;  // anti-cycling
      } else {
        stalled = 0;
      }
      last_obj = obj;
    }
    return false;
  }

  const Eigen::MatrixXd& a_;
  const Eigen::VectorXd& b_;
  int n_, k_, m_;
  double scale_;
  std::vector<int> basis_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd y_;
  Eigen::VectorXd lambda_;
};

}  // namespace

MinimaxResult chebyshev_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            const MinimaxOptions& opts) {
  const int n = static_cast<int>(a.rows());
  const int k = static_cast<int>(a.cols());
  if (n < k + 1) {
    throw Error(ErrorCode::Domain, "chebyshev_fit: need at least k+1 points");
  }

  // Lawson warm-up: fast certified bounds, a fallback iterate, and a warm
  // basis (the k+1 heaviest weights concentrate on the active set).
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd e = b;
  double lower = 0.0;
  Eigen::VectorXd best_theta = theta;
  double best_upper = std::numeric_limits<double>::infinity();

  for (int it = 0; it < opts.lawson_iters; ++it) {
    Eigen::VectorXd sw = w.cwiseSqrt();
    Eigen::MatrixXd aw = a.array().colwise() * sw.array();
    Eigen::VectorXd bw = b.cwiseProduct(sw);
    theta = (aw.transpose() * aw).ldlt().solve(aw.transpose() * bw);
    e = b - a * theta;
    double upper = max_abs_residual(e, nullptr);
    if (upper < best_upper) {
      best_upper = upper;
      best_theta = theta;
    }
    // The weighted L2 value of the optimal weighted fit is a lower bound on
    // the minimax optimum for any probability weights.
    lower = std::max(lower, std::sqrt((w.array() * e.array().square()).sum()));
    if (best_upper - lower <= opts.gap_tol * std::max(1.0, best_upper)) break;
    if (best_upper <= 1e-13) break;  // exact fit
    double s = (w.array() * e.array().abs()).sum();
    if (s <= 0.0) break;
    w = (w.array() * e.array().abs() / s).matrix();
  }

  if (best_upper - lower > opts.gap_tol * std::max(1.0, best_upper) &&
      best_upper > 1e-13) {
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    std::partial_sort(idx.begin(), idx.begin() + (k + 1), idx.end(),
                      [&](int x, int y) { return w[x] > w[y]; });
    std::vector<int> warm;
    for (int r = 0; r <= k; ++r) {
      int i = idx[static_cast<size_t>(r)];
      warm.push_back(e[i] >= 0.0 ? 2 * i : 2 * i + 1);
    }
    ChebyshevSimplex simplex(a, b);
    Eigen::VectorXd theta2;
    double value2 = 0.0;
    if (simplex.solve(warm, &theta2, &value2)) {
      Eigen::VectorXd e2 = b - a * theta2;
      double achieved = max_abs_residual(e2, nullptr);
      if (achieved <= best_upper) {
        best_theta = theta2;
        best_upper = achieved;
      }
      lower = std::max(lower, std::min(value2, achieved));
    }
  }

  MinimaxResult res;
  res.theta = best_theta;
  Eigen::VectorXd eb = b - a * best_theta;
  res.residual = max_abs_residual(eb, &res.worst_index);
  res.lower_bound = std::min(lower, res.residual);
  return res;
}

}  // namespace projmeas
