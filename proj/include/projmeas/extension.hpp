// Constructive linear extension of finitely additive measures: per-block
// spanning-family solve with verification sampling, the quasi-linear spectral
// extension omega, linearity audits, functional norm bounds, and the
// component-wise vector-measure lift.

#pragma once

#include "projmeas/measures.hpp"

namespace projmeas {

// n^2 projections in M_n whose linear span is all of M_n: the diagonal units
// e_ii and, for each i < l, the rank-1 projections onto (e_i + e_l)/sqrt(2)
// and (e_i + i*e_l)/sqrt(2).
struct SpanningFamily {
  int block_index = 0;
  int n = 0;
  std::vector<Projection> projections;  // shape [n] each
};

SpanningFamily spanning_projections(int n);

// Hilbert-Schmidt Gram matrix G_ab = trace(P_a P_b) and its numerical rank;
// full rank n^2 certifies that the family spans M_n.
Eigen::MatrixXd gram_matrix(const SpanningFamily& family);
int gram_rank(const SpanningFamily& family, double tol = 1e-9);

enum class ExtensionStatus { Extended, I2Obstruction, NotAMeasure };

const char* to_string(ExtensionStatus s);

struct ExtensionResult {
  Element rho;          // representing matrix: mu(p) ~= trace(rho p)
  double residual = 0;  // max verification deviation
  int verified_on = 0;  // number of verification projections
  ExtensionStatus status = ExtensionStatus::Extended;
};

struct ReconstructOptions {
  double tol = 1e-8;
  int verify_samples = 64;
  std::uint64_t seed = 0;
  // 0 keeps the canonical spanning-family order; any other value shuffles the
  // linear system's equations with that seed (the solution must not change).
  std::uint64_t family_order_seed = 0;
};

// Solves trace(rho_j p) = mu(p) over the spanning family of each block, then
// verifies the interpolant on sampled projections. The residual decides the
// status: Extended within tol, otherwise I2Obstruction when the shape has a
// 2-block and NotAMeasure when it does not.
ExtensionResult reconstruct(const ScalarMeasure& mu, const ReconstructOptions& opts);
ExtensionResult reconstruct(const ScalarMeasure& mu, double tol, int verify_samples,
                            std::uint64_t seed);

// Quasi-linear spectral extension: omega(x) = sum lambda_i mu(q_i) over the
// spectral decomposition of the Hermitian part, plus i times the same for the
// anti-Hermitian part.
Complex omega(const ScalarMeasure& mu, const Element& x, double tol = 1e-9);

struct LinearityReport {
  int trials = 0;
  double max_commuting_defect = 0.0;
  double max_general_defect = 0.0;
  std::pair<Element, Element> worst_pair;  // general pair attaining the max
};

// Samples positive pairs x, y with x + y <= 1 (commuting pairs share one
// spectral frame; general pairs are independent) and measures
// |omega(x+y) - omega(x) - omega(y)|.
LinearityReport linearity_audit(const ScalarMeasure& mu, int trials, std::uint64_t seed);

struct NormBoundReport {
  double trace_norm = 0.0;  // functional norm of x -> trace(rho x)
  double four_sup = 0.0;    // 4 * max sampled |trace(rho p)|
};

// Empirical form of the bound ||beta|| <= 4 sup{|beta(p)|}: the sampled
// projections include the spectral projections of both Hermitian parts of
// rho (which realize the sup), so trace_norm <= four_sup always holds.
NormBoundReport functional_norm_bound(const Element& rho, int samples, std::uint64_t seed);

struct OperatorRep {
  AlgebraShape shape;
  std::vector<Element> rhos;  // T(x)_i = trace(rho_i x)
  double norm_bound = 0.0;    // max sampled ||T(x)||_inf over unit-norm x
  double k_bound = 0.0;       // K = max sampled coordinate-max ||m(p)||
};

// Raised when a component of a vector measure fails to extend.
class VectorExtensionError : public Error {
 public:
  VectorExtensionError(int component, ExtensionStatus status, double residual);
  int component() const { return component_; }
  ExtensionStatus status() const { return status_; }
  double residual() const { return residual_; }

 private:
  int component_;
  ExtensionStatus status_;
  double residual_;
};

struct VectorExtendOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int verify_samples = 64;
  int norm_samples = 500;
};

// Component-wise reconstruction (coordinate functionals of the lift), with
// the empirical check norm_bound <= 4K.
OperatorRep extend_vector_measure(const VectorMeasure& m, const VectorExtendOptions& opts);
OperatorRep extend_vector_measure(const VectorMeasure& m, double tol, std::uint64_t seed);

}  // namespace projmeas
