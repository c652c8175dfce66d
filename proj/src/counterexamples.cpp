#include "projmeas/counterexamples.hpp"

#include <cmath>
#include <numbers>

#include "projmeas/minimax.hpp"

namespace projmeas {

BlochVector BlochVector::checked(double x, double y, double z) {
  double norm = std::sqrt(x * x + y * y + z * z);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw Error(ErrorCode::Domain, "bloch vector must have unit norm");
  }
  return BlochVector{x, y, z};
}

Projection bloch_projection(const BlochVector& n) {
  BlochVector u = BlochVector::checked(n.x, n.y, n.z);
  Matrix p(2, 2);
  p(0, 0) = 0.5 * (1.0 + u.z);
  p(1, 1) = 0.5 * (1.0 - u.z);
  p(0, 1) = 0.5 * Complex(u.x, -u.y);
  p(1, 0) = 0.5 * Complex(u.x, u.y);
  return Projection::unchecked(Element(AlgebraShape({2}), {p}), 1e-9);
}

ScalarMeasure qubit_frame_measure(double c, std::vector<double> odd_coeffs) {
  return ScalarMeasure::frame2(c, std::move(odd_coeffs));
}

std::vector<BlochVector> fibonacci_sphere(int n) {
  if (n < 1) throw Error(ErrorCode::Domain, "fibonacci_sphere: n must be >= 1");
  std::vector<BlochVector> pts;
  pts.reserve(static_cast<size_t>(n));
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden_angle * i;
    pts.push_back(BlochVector{r * std::cos(phi), r * std::sin(phi), z});
  }
  return pts;
}

NonlinearityCertificate nonlinearity_residual(const ScalarMeasure& mu, int grid_size) {
  if (!mu.as_frame2()) {
    throw Error(ErrorCode::Domain, "nonlinearity_residual: requires a frame2 measure");
  }
  if (grid_size < 100) {
    throw Error(ErrorCode::Domain, "nonlinearity_residual: grid_size must be >= 100");
  }

  std::vector<BlochVector> grid = fibonacci_sphere(grid_size);
  // A Hermitian rho = a*I + u.sigma has trace(rho p(n)) = a + u.n, so the
  // minimax fit is linear in the 4 real parameters (a, u).
  Eigen::MatrixXd design(grid_size, 4);
  Eigen::VectorXd values(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const BlochVector& n = grid[static_cast<size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = n.x;
    design(i, 2) = n.y;
    design(i, 3) = n.z;
    values[i] = mu.evaluate(bloch_projection(n)).real();
  }
  MinimaxResult fit = chebyshev_fit(design, values);

  Matrix rho(2, 2);
  double a = fit.theta[0], ux = fit.theta[1], uy = fit.theta[2], uz = fit.theta[3];
  rho(0, 0) = a + uz;
  rho(1, 1) = a - uz;
  rho(0, 1) = Complex(ux, -uy);
  rho(1, 0) = Complex(ux, uy);

  NonlinearityCertificate cert;
  cert.best_fit = Element(AlgebraShape({2}), {rho});
  cert.residual = fit.residual;
  cert.lower_bound = fit.lower_bound;
  cert.witness = grid[static_cast<size_t>(fit.worst_index)];
  cert.grid_size = grid_size;
  return cert;
}

}  // namespace projmeas
