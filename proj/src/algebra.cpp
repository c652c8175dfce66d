#include "projmeas/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace projmeas {

namespace {

void require_same_shape(const Element& a, const Element& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(op) + ": elements have different shapes " +
                    a.shape().str() + " vs " + b.shape().str());
  }
}

}  // namespace

AlgebraShape::AlgebraShape(std::vector<int> b) : blocks(std::move(b)) {
  if (blocks.empty()) {
    throw Error(ErrorCode::Domain, "shape must have at least one block");
  }
  for (int n : blocks) {
    if (n < 1) {
      throw Error(ErrorCode::Domain, "block dimensions must be >= 1");
    }
  }
}

int AlgebraShape::total_dim() const {
  int d = 0;
  for (int n : blocks) d += n * n;
  return d;
}

int AlgebraShape::ambient_dim() const {
  int d = 0;
  for (int n : blocks) d += n;
  return d;
}

bool AlgebraShape::has_i2_summand() const {
  return std::find(blocks.begin(), blocks.end(), 2) != blocks.end();
}

std::string AlgebraShape::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t j = 0; j < blocks.size(); ++j) {
    if (j) os << ",";
    os << blocks[j];
  }
  os << "]";
  return os.str();
}

Element::Element(AlgebraShape shape, std::vector<Matrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != static_cast<size_t>(shape_.block_count())) {
    throw Error(ErrorCode::MalformedElement, "block count does not match shape");
  }
  for (int j = 0; j < shape_.block_count(); ++j) {
    int n = shape_.blocks[static_cast<size_t>(j)];
    const Matrix& b = blocks_[static_cast<size_t>(j)];
    if (b.rows() != n || b.cols() != n) {
      throw Error(ErrorCode::MalformedElement,
                  "block " + std::to_string(j) + " is not " + std::to_string(n) +
                      "x" + std::to_string(n));
    }
  }
}

Element Element::zero(const AlgebraShape& shape) {
  std::vector<Matrix> bs;
  bs.reserve(static_cast<size_t>(shape.block_count()));
  for (int n : shape.blocks) bs.push_back(Matrix::Zero(n, n));
  return Element(shape, std::move(bs));
}

Element Element::identity(const AlgebraShape& shape) {
  std::vector<Matrix> bs;
  bs.reserve(static_cast<size_t>(shape.block_count()));
  for (int n : shape.blocks) bs.push_back(Matrix::Identity(n, n));
  return Element(shape, std::move(bs));
}

Element Element::embedded(const AlgebraShape& shape, int j, const Matrix& b) {
  Element x = Element::zero(shape);
  if (j < 0 || j >= shape.block_count()) {
    throw Error(ErrorCode::Domain, "embedded: block index out of range");
  }
  int n = shape.blocks[static_cast<size_t>(j)];
  if (b.rows() != n || b.cols() != n) {
    throw Error(ErrorCode::MalformedElement, "embedded: block size mismatch");
  }
  x.block(j) = b;
  return x;
}

Element Element::adjoint() const {
  std::vector<Matrix> bs;
  bs.reserve(blocks_.size());
  for (const Matrix& b : blocks_) bs.push_back(b.adjoint());
  return Element(shape_, std::move(bs));
}

Complex Element::trace() const {
  Complex t = 0.0;
  for (const Matrix& b : blocks_) t += b.trace();
  return t;
}

bool Element::is_selfadjoint(double tol) const {
  for (const Matrix& b : blocks_) {
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

Element Element::hermitian_part() const {
  std::vector<Matrix> bs;
  bs.reserve(blocks_.size());
  for (const Matrix& b : blocks_) bs.push_back(0.5 * (b + b.adjoint()));
  return Element(shape_, std::move(bs));
}

Element Element::antihermitian_part() const {
  std::vector<Matrix> bs;
  bs.reserve(blocks_.size());
  const Complex half_over_i(0.0, -0.5);  // 1/(2i)
  for (const Matrix& b : blocks_) bs.push_back(half_over_i * (b - b.adjoint()));
  return Element(shape_, std::move(bs));
}

Element& Element::operator+=(const Element& o) {
  require_same_shape(*this, o, "operator+");
  for (size_t j = 0; j < blocks_.size(); ++j) blocks_[j] += o.blocks_[j];
  return *this;
}

Element& Element::operator-=(const Element& o) {
  require_same_shape(*this, o, "operator-");
  for (size_t j = 0; j < blocks_.size(); ++j) blocks_[j] -= o.blocks_[j];
  return *this;
}

Element& Element::operator*=(Complex s) {
  for (Matrix& b : blocks_) b *= s;
  return *this;
}

Element operator+(Element a, const Element& b) { return a += b; }
Element operator-(Element a, const Element& b) { return a -= b; }

Element operator*(const Element& a, const Element& b) {
  require_same_shape(a, b, "operator*");
  std::vector<Matrix> bs;
  bs.reserve(a.blocks().size());
  for (int j = 0; j < a.block_count(); ++j) bs.push_back(a.block(j) * b.block(j));
  return Element(a.shape(), std::move(bs));
}

Element operator*(Complex s, Element a) { return a *= s; }
Element operator*(Element a, Complex s) { return a *= s; }

Projection Projection::checked(Element value, double tol) {
  if (tol <= 0.0) throw Error(ErrorCode::Domain, "projection tolerance must be > 0");
  if (!is_projection(value, tol)) {
    throw Error(ErrorCode::MalformedElement,
                "element is not a projection at tolerance " + std::to_string(tol));
  }
  return Projection{std::move(value), tol};
}

Projection Projection::unchecked(Element value, double tol) {
  return Projection{std::move(value), tol};
}

double Projection::rank_estimate() const { return value.trace().real(); }

bool is_projection(const Element& x, double tol) {
  if (tol <= 0.0) throw Error(ErrorCode::Domain, "tolerance must be > 0");
  if (operator_norm(x - x.adjoint()) > tol) return false;
  if (operator_norm(x * x - x) > tol) return false;
  // Eigenvalues of the Hermitian part must sit near {0, 1}.
  for (const Matrix& b : x.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.adjoint()),
                                             Eigen::EigenvaluesOnly);
    for (double lam : es.eigenvalues()) {
      if (std::min(std::abs(lam), std::abs(lam - 1.0)) > 10.0 * tol) return false;
    }
  }
  return true;
}

Relation relation(const Projection& e, const Projection& p, double tol) {
  require_same_shape(e.value, p.value, "relation");
  Element ep = e.value * p.value;
  Relation r;
  r.orthogonal = operator_norm(ep) <= tol;
  r.below = operator_norm(ep - e.value) <= tol;
  return r;
}

namespace {

struct EigPair {
  double lambda;
  int block;
  Eigen::VectorXcd vec;
};

std::vector<EigPair> all_eigenpairs(const Element& h) {
  std::vector<EigPair> pairs;
  for (int j = 0; j < h.block_count(); ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.block(j));
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::Internal, "eigendecomposition failed");
    }
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      pairs.push_back({es.eigenvalues()[i], j, es.eigenvectors().col(i)});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const EigPair& a, const EigPair& b) { return a.lambda > b.lambda; });
  return pairs;
}

}  // namespace

SpectralDecomposition spectral_decompose(const Element& x, double tol,
                                         double cluster_gap) {
  if (!x.is_selfadjoint(tol)) {
    throw Error(ErrorCode::Domain, "spectral_decompose: input is not selfadjoint");
  }
  Element h = x.hermitian_part();
  std::vector<EigPair> pairs = all_eigenpairs(h);

  SpectralDecomposition out;
  size_t i = 0;
  while (i < pairs.size()) {
    size_t k = i + 1;
    while (k < pairs.size() && pairs[k - 1].lambda - pairs[k].lambda <= cluster_gap) {
      ++k;
    }
    Element q = Element::zero(x.shape());
    double mean = 0.0;
    for (size_t a = i; a < k; ++a) {
      q.block(pairs[a].block) += pairs[a].vec * pairs[a].vec.adjoint();
      mean += pairs[a].lambda;
    }
    mean /= static_cast<double>(k - i);
    out.eigenvalues.push_back(mean);
    out.projections.push_back(Projection::unchecked(std::move(q), std::max(tol, 1e-9)));
    i = k;
  }
  return out;
}

std::vector<Projection> dyadic_projections(const Element& x, int depth) {
  if (depth < 1) throw Error(ErrorCode::Domain, "dyadic_projections: depth must be >= 1");
  if (!x.is_selfadjoint(1e-9)) {
    throw Error(ErrorCode::Domain, "dyadic_projections: input is not selfadjoint");
  }
  Element h = x.hermitian_part();
  std::vector<EigPair> pairs = all_eigenpairs(h);
  constexpr double slack = 1e-9;
  for (EigPair& p : pairs) {
    if (p.lambda < -slack || p.lambda > 1.0 + slack) {
      throw Error(ErrorCode::Domain, "dyadic_projections: spectrum outside [0,1]");
    }
    p.lambda = std::clamp(p.lambda, 0.0, 1.0);
  }
  std::vector<Projection> out;
  out.reserve(static_cast<size_t>(depth));
  for (int n = 1; n <= depth; ++n) {
    Element e = Element::zero(x.shape());
    for (const EigPair& p : pairs) {
      bool digit;
      if (p.lambda >= 1.0) {
        digit = true;  // 1 = 0.111... truncated at depth
      } else {
        digit = (static_cast<std::uint64_t>(std::floor(std::ldexp(p.lambda, n))) & 1u) != 0;
      }
      if (digit) e.block(p.block) += p.vec * p.vec.adjoint();
    }
    out.push_back(Projection::unchecked(std::move(e), 1e-9));
  }
  return out;
}

MatrixFunctionals matrix_functionals(const Element& x) {
  MatrixFunctionals f{Complex(0.0), 0.0, 0.0};
  for (const Matrix& b : x.blocks()) {
    f.trace += b.trace();
    Eigen::JacobiSVD<Matrix> svd(b);
    const auto& sv = svd.singularValues();
    for (int i = 0; i < sv.size(); ++i) f.trace_norm += sv[i];
    if (sv.size() > 0) f.operator_norm = std::max(f.operator_norm, sv[0]);
  }
  return f;
}

double operator_norm(const Element& x) { return matrix_functionals(x).operator_norm; }
double trace_norm(const Element& x) { return matrix_functionals(x).trace_norm; }

std::vector<Projection> central_projections(const AlgebraShape& shape) {
  std::vector<Projection> out;
  out.reserve(static_cast<size_t>(shape.block_count()));
  for (int j = 0; j < shape.block_count(); ++j) {
    int n = shape.blocks[static_cast<size_t>(j)];
    out.push_back(Projection::unchecked(
        Element::embedded(shape, j, Matrix::Identity(n, n)), 1e-12));
  }
  return out;
}

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Complex Rng::complex_gaussian() {
  double re = gaussian();
  double im = gaussian();
  return {re, im};
}

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw Error(ErrorCode::Domain, "uniform_int: empty range");
  std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / range * range;
  std::uint64_t v = gen_();
  while (v >= limit) v = gen_();
  return lo + static_cast<int>(v % range);
}

Matrix random_gaussian_matrix(int n, Rng& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) m(i, k) = rng.complex_gaussian();
  }
  return m;
}

Matrix random_unitary(int n, Rng& rng) {
  Matrix g = random_gaussian_matrix(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

Element random_element(const AlgebraShape& shape, Rng& rng) {
  std::vector<Matrix> bs;
  bs.reserve(static_cast<size_t>(shape.block_count()));
  for (int n : shape.blocks) bs.push_back(random_gaussian_matrix(n, rng));
  return Element(shape, std::move(bs));
}

Element random_selfadjoint(const AlgebraShape& shape, Rng& rng) {
  return random_element(shape, rng).hermitian_part();
}

Element random_unit_interval(const AlgebraShape& shape, Rng& rng) {
  std::vector<Matrix> bs;
  bs.reserve(static_cast<size_t>(shape.block_count()));
  for (int n : shape.blocks) {
    Matrix u = random_unitary(n, rng);
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam[i] = rng.uniform();
    bs.push_back(u * lam.asDiagonal() * u.adjoint());
  }
  return Element(shape, std::move(bs));
}

Projection random_projection(const AlgebraShape& shape,
                             const std::vector<int>& ranks, Rng& rng) {
  if (ranks.size() != static_cast<size_t>(shape.block_count())) {
    throw Error(ErrorCode::Domain, "random_projection: rank list length mismatch");
  }
  std::vector<Matrix> bs;
  bs.reserve(ranks.size());
  for (int j = 0; j < shape.block_count(); ++j) {
    int n = shape.blocks[static_cast<size_t>(j)];
    int r = ranks[static_cast<size_t>(j)];
    if (r < 0 || r > n) {
      throw Error(ErrorCode::Domain, "random_projection: rank out of range");
    }
    if (r == 0) {
      bs.push_back(Matrix::Zero(n, n));
    } else {
      Matrix u = random_unitary(n, rng);
      Matrix cols = u.leftCols(r);
      bs.push_back(cols * cols.adjoint());
    }
  }
  return Projection::unchecked(Element(shape, std::move(bs)), 1e-9);
}

Projection random_projection(const AlgebraShape& shape,
                             const std::vector<int>& ranks, std::uint64_t seed) {
  Rng rng(seed);
  return random_projection(shape, ranks, rng);
}

}  // namespace projmeas
