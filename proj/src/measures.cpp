#include "projmeas/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace projmeas {

double OddNzPoly::operator()(double nz) const {
  double acc = 0.0;
  double pw = nz;  // n_z^(2k+1)
  double nz2 = nz * nz;
  for (double a : odd_coeffs) {
    acc += a * pw;
    pw *= nz2;
  }
  return acc;
}

bool OddNzPoly::is_linear() const {
  for (size_t k = 1; k < odd_coeffs.size(); ++k) {
    if (odd_coeffs[k] != 0.0) return false;
  }
  return true;
}

Complex TracePolyOracle::operator()(const Element& p) const {
  double t = p.trace().real();
  double acc = 0.0;
  double pw = 1.0;
  for (double c : coeffs) {
    acc += c * pw;
    pw *= t;
  }
  return {acc, 0.0};
}

std::string canonical_projection_key(const Element& p) {
  std::string key;
  key.reserve(static_cast<size_t>(p.shape().total_dim()) * 32);
  char buf[64];
  for (const Matrix& b : p.blocks()) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index k = 0; k < b.cols(); ++k) {
        double re = std::round(b(i, k).real() * 1e12) / 1e12 + 0.0;
        double im = std::round(b(i, k).imag() * 1e12) / 1e12 + 0.0;
        std::snprintf(buf, sizeof(buf), "%.12f,%.12f|", re, im);
        key += buf;
      }
    }
    key += ";";
  }
  return key;
}

ScalarMeasure ScalarMeasure::trace_form(Element rho) {
  AlgebraShape shape = rho.shape();
  return ScalarMeasure(std::move(shape), TraceForm{std::move(rho)});
}

ScalarMeasure ScalarMeasure::frame2(double c, std::vector<double> odd_coeffs) {
  return ScalarMeasure(AlgebraShape({2}), Frame2{c, OddNzPoly{std::move(odd_coeffs)}});
}

ScalarMeasure ScalarMeasure::table(
    AlgebraShape shape, std::vector<std::pair<Element, Complex>> entries,
    std::function<std::optional<Complex>(const Element&)> oracle,
    std::optional<TracePolyOracle> oracle_spec) {
  TableMeasure t;
  t.entries = std::move(entries);
  t.oracle = std::move(oracle);
  t.oracle_spec = std::move(oracle_spec);
  for (const auto& [p, v] : t.entries) {
    if (p.shape() != shape) {
      throw Error(ErrorCode::ShapeMismatch, "table entry shape mismatch");
    }
    t.lookup[canonical_projection_key(p)] = v;
  }
  if (!t.oracle && t.oracle_spec) {
    TracePolyOracle spec = *t.oracle_spec;
    t.oracle = [spec](const Element& p) -> std::optional<Complex> { return spec(p); };
  }
  return ScalarMeasure(std::move(shape), std::move(t));
}

MeasureKind ScalarMeasure::kind() const {
  if (std::holds_alternative<TraceForm>(rep_)) return MeasureKind::TraceForm;
  if (std::holds_alternative<Frame2>(rep_)) return MeasureKind::Frame2;
  return MeasureKind::Table;
}

namespace {

Complex evaluate_frame2(const Frame2& f, const Projection& p) {
  const Matrix& b = p.value.block(0);
  double tr = p.value.trace().real();
  long rank = std::lround(tr);
  if (std::abs(tr - static_cast<double>(rank)) > 1e-6 || rank < 0 || rank > 2) {
    throw Error(ErrorCode::Representation,
                "frame2 measure: projection rank is not 0, 1 or 2");
  }
  if (rank == 0) return 0.0;
  if (rank == 2) return f.c;
  // Bloch vector of the rank-1 projection p = (I + n.sigma)/2.
  double nx = 2.0 * b(1, 0).real();
  double ny = 2.0 * b(1, 0).imag();
  double nz = (b(0, 0) - b(1, 1)).real();
  double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (std::abs(norm - 1.0) > 1e-6) {
    throw Error(ErrorCode::Representation,
                "frame2 measure: rank-1 projection has non-unit Bloch vector");
  }
  nz /= norm;
  return f.c / 2.0 + f.odd(nz);
}

}  // namespace

Complex ScalarMeasure::evaluate(const Projection& p) const {
  if (p.shape() != shape_) {
    throw Error(ErrorCode::ShapeMismatch, "measure and projection shapes differ");
  }
  if (const TraceForm* tf = std::get_if<TraceForm>(&rep_)) {
    Complex v = 0.0;
    for (int j = 0; j < shape_.block_count(); ++j) {
      v += (tf->rho.block(j) * p.value.block(j)).trace();
    }
    return v;
  }
  if (const Frame2* f = std::get_if<Frame2>(&rep_)) {
    return evaluate_frame2(*f, p);
  }
  const TableMeasure& t = std::get<TableMeasure>(rep_);
  auto it = t.lookup.find(canonical_projection_key(p.value));
  if (it != t.lookup.end()) return it->second;
  if (t.oracle) {
    std::optional<Complex> v = t.oracle(p.value);
    if (v) return *v;
  }
  throw Error(ErrorCode::Unevaluable,
              "table measure has no entry and no oracle value for projection");
}

VectorMeasure::VectorMeasure(AlgebraShape s, std::vector<ScalarMeasure> comps)
    : shape(std::move(s)), components(std::move(comps)) {
  if (components.empty()) {
    throw Error(ErrorCode::Domain, "vector measure needs at least one component");
  }
  for (const ScalarMeasure& m : components) {
    if (m.shape() != shape) {
      throw Error(ErrorCode::ShapeMismatch, "vector measure components disagree on shape");
    }
  }
}

AdditivityReport additivity_check(const ScalarMeasure& mu, int trials,
                                  std::uint64_t seed, double tol) {
  if (trials < 1) throw Error(ErrorCode::Domain, "additivity_check: trials must be >= 1");
  const AlgebraShape& shape = mu.shape();
  Rng rng(seed);
  AdditivityReport rep;
  rep.trials = trials;
  rep.worst_pair = {Element::zero(shape), Element::zero(shape)};

  for (int t = 0; t < trials; ++t) {
    // One orthonormal frame per block, split into two column ranges: p and q
    // are orthogonal by construction, and p+q is again a projection.
    Element p = Element::zero(shape);
    Element q = Element::zero(shape);
    for (int j = 0; j < shape.block_count(); ++j) {
      int n = shape.blocks[static_cast<size_t>(j)];
      Matrix u = random_unitary(n, rng);
      int a = rng.uniform_int(0, n);
      int b = rng.uniform_int(0, n - a);
      if (a > 0) p.block(j) = u.leftCols(a) * u.leftCols(a).adjoint();
      if (b > 0) q.block(j) = u.middleCols(a, b) * u.middleCols(a, b).adjoint();
    }
    try {
      Complex vp = mu.evaluate(Projection::unchecked(p, tol));
      Complex vq = mu.evaluate(Projection::unchecked(q, tol));
      Complex vpq = mu.evaluate(Projection::unchecked(p + q, tol));
      double violation = std::abs(vpq - vp - vq);
      if (violation > rep.max_violation) {
        rep.max_violation = violation;
        rep.worst_pair = {p, q};
      }
      rep.bound_estimate = std::max({rep.bound_estimate, std::abs(vp), std::abs(vq),
                                     std::abs(vpq)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Unevaluable) {
        ++rep.skipped;
        continue;
      }
      throw;
    }
  }
  return rep;
}

namespace {

const Element& trace_form_hermitian_rho(const ScalarMeasure& mu, const char* op) {
  const TraceForm* tf = mu.as_trace_form();
  if (!tf) {
    throw Error(ErrorCode::Domain,
                std::string(op) + ": requires a trace-form measure");
  }
  if (!tf->rho.is_selfadjoint(1e-9)) {
    throw Error(ErrorCode::Domain,
                std::string(op) +
                    ": rho must be Hermitian (split complex measures into real "
                    "and imaginary parts first)");
  }
  return tf->rho;
}

// Eigenvalues of rho compressed to range(p), across all blocks.
std::vector<double> compressed_spectrum(const Element& rho, const Projection& p) {
  std::vector<double> lams;
  for (int j = 0; j < rho.block_count(); ++j) {
    const Matrix& pb = p.value.block(j);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pb + pb.adjoint()));
    int n = static_cast<int>(pb.rows());
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (es.eigenvalues()[i] > 0.5) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Matrix basis(n, static_cast<int>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) basis.col(static_cast<int>(i)) = es.eigenvectors().col(idx[i]);
    Matrix comp = basis.adjoint() * rho.block(j) * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> ces(0.5 * (comp + comp.adjoint()),
                                              Eigen::EigenvaluesOnly);
    for (int i = 0; i < ces.eigenvalues().size(); ++i) lams.push_back(ces.eigenvalues()[i]);
  }
  return lams;
}

}  // namespace

VariationAlpha variation_and_alpha(const ScalarMeasure& mu, const Projection& p) {
  const Element& rho = trace_form_hermitian_rho(mu, "variation_and_alpha");
  if (p.shape() != mu.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "variation_and_alpha: shape mismatch");
  }
  // Subprojections e <= p live in pAp; mu(e) is extremized by spectral
  // subspaces of the compression, so the sums of positive and of negative
  // eigenvalues give alpha(p) and the negative-part sup exactly.
  double pos = 0.0, neg = 0.0;
  for (double lam : compressed_spectrum(rho, p)) {
    if (lam > 0.0) pos += lam;
    else neg -= lam;
  }
  return VariationAlpha{std::max(pos, neg), pos};
}

ScalarMeasure positivity_shift(const ScalarMeasure& mu) {
  const Element& rho = trace_form_hermitian_rho(mu, "positivity_shift");
  if (mu.shape().block_count() != 1) {
    throw Error(ErrorCode::Domain, "positivity_shift: single-block shapes only");
  }
  Projection one = Projection::unchecked(Element::identity(mu.shape()), 1e-12);
  double alpha1 = variation_and_alpha(mu, one).alpha;
  Element shifted = alpha1 * Element::identity(mu.shape()) - rho;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (shifted.block(0) + shifted.block(0).adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw Error(ErrorCode::Internal,
                "positivity_shift: shifted measure is not positive semidefinite");
  }
  return ScalarMeasure::trace_form(std::move(shifted));
}

CentreNormalization centre_normalize(const ScalarMeasure& mu) {
  const Element& rho = trace_form_hermitian_rho(mu, "centre_normalize");
  const AlgebraShape& shape = mu.shape();
  Element centred = rho;
  std::vector<double> sigma;
  sigma.reserve(static_cast<size_t>(shape.block_count()));
  for (int j = 0; j < shape.block_count(); ++j) {
    int n = shape.blocks[static_cast<size_t>(j)];
    double s = rho.block(j).trace().real() / static_cast<double>(n);
    sigma.push_back(s);
    centred.block(j) -= s * Matrix::Identity(n, n);
  }
  double scale = trace_norm(centred);
  if (scale < 1e-12) {
    throw Error(ErrorCode::Degenerate, "centre_normalize: measure is central");
  }
  centred *= Complex(1.0 / scale, 0.0);
  ScalarMeasure normalized = ScalarMeasure::trace_form(std::move(centred));
  Projection one = Projection::unchecked(Element::identity(shape), 1e-12);
  double alpha1 = variation_and_alpha(normalized, one).alpha;
  if (std::abs(alpha1 - 0.5) > 1e-9) {
    throw Error(ErrorCode::Internal, "centre_normalize: alpha(1) != 1/2 after scaling");
  }
  return CentreNormalization{std::move(sigma), std::move(normalized), scale};
}

}  // namespace projmeas
