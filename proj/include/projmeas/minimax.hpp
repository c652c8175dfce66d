// Discrete linear Chebyshev approximation: given a design matrix A (N x k)
// and values b, find theta minimizing max_i |b_i - A_i theta|. Lawson's
// iteratively reweighted least squares provides a certified lower bound
// (the weighted L2 value never exceeds the minimax optimum); a dual exchange
// step polishes the iterate to the grid optimum when it converges.

#pragma once

#include <Eigen/Dense>

namespace projmeas {

struct MinimaxOptions {
  int lawson_iters = 3000;
  int exchange_iters = 200;
  double gap_tol = 1e-12;
};

struct MinimaxResult {
  Eigen::VectorXd theta;
  double residual = 0.0;     // achieved max |b - A theta| (upper bound)
  double lower_bound = 0.0;  // certified lower bound on the grid optimum
  int worst_index = 0;       // grid point attaining the residual
};

MinimaxResult chebyshev_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            const MinimaxOptions& opts = {});

}  // namespace projmeas
