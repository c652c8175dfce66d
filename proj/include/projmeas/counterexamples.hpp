// The Type I2 pathology: Bloch-sphere frame-function measures on P(M_2) that
// are finitely additive and bounded yet admit no linear extension, with
// quantitative nonlinearity certificates.

#pragma once

#include "projmeas/measures.hpp"

namespace projmeas {

struct BlochVector {
  double x = 0.0, y = 0.0, z = 1.0;

  static BlochVector checked(double x, double y, double z);  // unit, tol 1e-12
  BlochVector antipode() const { return BlochVector{-x, -y, -z}; }
};

// p(n) = (I + n1*s1 + n2*s2 + n3*s3)/2; rank 1, p(n) p(-n) = 0.
Projection bloch_projection(const BlochVector& n);

// Frame2 measure mu(p(n)) = c/2 + g(n), g(n) = sum_k a_k n_z^(2k+1).
ScalarMeasure qubit_frame_measure(double c, std::vector<double> odd_coeffs);

// Deterministic Fibonacci lattice on the unit sphere.
std::vector<BlochVector> fibonacci_sphere(int n);

struct NonlinearityCertificate {
  Element best_fit;          // minimax-optimal Hermitian 2x2 approximant
  double residual = 0.0;     // sup over the grid of |mu(p(n)) - trace(best_fit p(n))|
  double lower_bound = 0.0;  // certified lower bound on the grid optimum
  BlochVector witness;       // grid point attaining the residual
  int grid_size = 0;
};

// Minimax fit of a linear functional to the measure over a Fibonacci grid;
// a residual bounded away from zero certifies that no linear functional
// agrees with the measure on rank-1 projections.
NonlinearityCertificate nonlinearity_residual(const ScalarMeasure& mu, int grid_size);

}  // namespace projmeas
