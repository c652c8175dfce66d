// Block-diagonal matrix algebra: elements, projections and spectral structure
// for finite-dimensional von Neumann algebras A = M_{n1} + ... + M_{nk}
// (direct sum of full complex matrix blocks).

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace projmeas {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class ErrorCode {
  Parse,
  ShapeMismatch,
  MalformedElement,
  Domain,
  Unevaluable,
  Representation,
  Degenerate,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Ordered list of matrix-block dimensions. A block of size 2 is the Type I2
// obstruction class: such shapes are representable but flagged.
struct AlgebraShape {
  std::vector<int> blocks;

  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> b);

  int block_count() const { return static_cast<int>(blocks.size()); }
  int total_dim() const;    // sum of n_j^2 (linear dimension of A)
  int ambient_dim() const;  // sum of n_j
  bool has_i2_summand() const;

  bool operator==(const AlgebraShape& o) const { return blocks == o.blocks; }
  bool operator!=(const AlgebraShape& o) const { return !(*this == o); }
  std::string str() const;
};

// A block-diagonal complex matrix conforming to a shape.
class Element {
 public:
  Element() = default;
  Element(AlgebraShape shape, std::vector<Matrix> blocks);

  static Element zero(const AlgebraShape& shape);
  static Element identity(const AlgebraShape& shape);
  // Single nonzero block at position j, zero elsewhere.
  static Element embedded(const AlgebraShape& shape, int j, const Matrix& b);

  const AlgebraShape& shape() const { return shape_; }
  int block_count() const { return shape_.block_count(); }
  const Matrix& block(int j) const { return blocks_.at(static_cast<size_t>(j)); }
  Matrix& block(int j) { return blocks_.at(static_cast<size_t>(j)); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  Element adjoint() const;
  Complex trace() const;
  bool is_selfadjoint(double tol) const;
  Element hermitian_part() const;      // (x + x*)/2
  Element antihermitian_part() const;  // (x - x*)/(2i), selfadjoint

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(Complex s);

 private:
  AlgebraShape shape_;
  std::vector<Matrix> blocks_;
};

Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator*(const Element& a, const Element& b);  // blockwise product
Element operator*(Complex s, Element a);
Element operator*(Element a, Complex s);

// Hermitian idempotent within an absolute tolerance; member of P(A).
struct Projection {
  Element value;
  double tol = 1e-9;

  // Validates the projection invariants; throws Error(MalformedElement).
  static Projection checked(Element value, double tol);
  // For constructions that are projections by construction.
  static Projection unchecked(Element value, double tol);

  const AlgebraShape& shape() const { return value.shape(); }
  double rank_estimate() const;  // Re trace, ~= rank
};

bool is_projection(const Element& x, double tol);

struct Relation {
  bool orthogonal = false;  // ||ep|| <= tol
  bool below = false;       // ||ep - e|| <= tol, i.e. e <= p
};

Relation relation(const Projection& e, const Projection& p, double tol);

// Distinct (clustered) eigenvalues in descending order with their spectral
// projections; sum of projections is the identity.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Projection> projections;
};

inline constexpr double kDefaultClusterGap = 1e-8;

SpectralDecomposition spectral_decompose(const Element& x, double tol,
                                         double cluster_gap = kDefaultClusterGap);

// Binary-digit spectral projections e_1..e_m of 0 <= x <= 1 such that
// ||x - sum 2^-n e_n|| <= 2^-m. Digit n of an eigenvalue t is
// floor(2^n t) mod 2, with t = 1 mapped to all-ones digits.
std::vector<Projection> dyadic_projections(const Element& x, int depth);

struct MatrixFunctionals {
  Complex trace;
  double trace_norm;     // sum of singular values over all blocks
  double operator_norm;  // largest singular value over all blocks
};

MatrixFunctionals matrix_functionals(const Element& x);

double operator_norm(const Element& x);
double trace_norm(const Element& x);

// Block indicator projections; they span the centre of A, are pairwise
// orthogonal and sum to the identity.
std::vector<Projection> central_projections(const AlgebraShape& shape);

// Deterministic RNG: mt19937_64 engine (fully specified by the standard) with
// explicit uniform/Gaussian transforms, so identical seeds give bit-identical
// streams independent of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  double uniform();  // [0, 1)
  double gaussian();
  Complex complex_gaussian();
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Matrix random_gaussian_matrix(int n, Rng& rng);
Matrix random_unitary(int n, Rng& rng);
Element random_element(const AlgebraShape& shape, Rng& rng);
Element random_selfadjoint(const AlgebraShape& shape, Rng& rng);
// Random x with 0 <= x <= 1: seeded frame, eigenvalues uniform in [0, 1].
Element random_unit_interval(const AlgebraShape& shape, Rng& rng);

// Haar-like projection of prescribed per-block ranks.
Projection random_projection(const AlgebraShape& shape,
                             const std::vector<int>& ranks, std::uint64_t seed);
Projection random_projection(const AlgebraShape& shape,
                             const std::vector<int>& ranks, Rng& rng);

}  // namespace projmeas
