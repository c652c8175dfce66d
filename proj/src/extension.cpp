#include "projmeas/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace projmeas {

SpanningFamily spanning_projections(int n) {
  if (n < 1) throw Error(ErrorCode::Domain, "spanning_projections: n must be >= 1");
  AlgebraShape shape({n});
  SpanningFamily fam;
  fam.n = n;
  fam.projections.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    fam.projections.push_back(Projection::unchecked(Element(shape, {e}), 1e-12));
  }
  for (int i = 0; i < n; ++i) {
    for (int l = i + 1; l < n; ++l) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
      v[i] = 1.0 / std::numbers::sqrt2;
      v[l] = 1.0 / std::numbers::sqrt2;
      fam.projections.push_back(
          Projection::unchecked(Element(shape, {v * v.adjoint()}), 1e-12));
      v[l] = Complex(0.0, 1.0 / std::numbers::sqrt2);
      fam.projections.push_back(
          Projection::unchecked(Element(shape, {v * v.adjoint()}), 1e-12));
    }
  }
  return fam;
}

Eigen::MatrixXd gram_matrix(const SpanningFamily& family) {
  int m = static_cast<int>(family.projections.size());
  Eigen::MatrixXd g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      g(a, b) = (family.projections[static_cast<size_t>(a)].value *
                 family.projections[static_cast<size_t>(b)].value)
                    .trace()
                    .real();
    }
  }
  return g;
}

int gram_rank(const SpanningFamily& family, double tol) {
  Eigen::MatrixXd g = gram_matrix(family);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > tol) ++rank;
  }
  return rank;
}

const char* to_string(ExtensionStatus s) {
  switch (s) {
    case ExtensionStatus::Extended: return "extended";
    case ExtensionStatus::I2Obstruction: return "i2_obstruction";
    case ExtensionStatus::NotAMeasure: return "not_a_measure";
  }
  return "unknown";
}

namespace {

// Verification rank schedule: cycles through the nontrivial ranks of a block.
int cycled_rank(int n, int s) {
  if (n == 1) return s % 2;
  return 1 + s % (n - 1);
}

Matrix solve_block(const ScalarMeasure& mu, const AlgebraShape& shape, int j,
                   std::uint64_t family_order_seed) {
  int n = shape.blocks[static_cast<size_t>(j)];
  SpanningFamily fam = spanning_projections(n);
  fam.block_index = j;
  int m = n * n;

  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  if (family_order_seed != 0) {
    Rng rng(family_order_seed);
    for (int i = m - 1; i > 0; --i) {
      std::swap(order[static_cast<size_t>(i)],
                order[static_cast<size_t>(rng.uniform_int(0, i))]);
    }
  }

  // Row a: trace(rho P_a) = sum_{i,k} rho(i,k) P_a(k,i), unknowns vec(rho)
  // in row-major pairing (i,k) -> i*n + k.
  Matrix sys(m, m);
  Eigen::VectorXcd rhs(m);
  for (int a = 0; a < m; ++a) {
    const Matrix& pa = fam.projections[static_cast<size_t>(order[static_cast<size_t>(a)])].value.block(0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) sys(a, i * n + k) = pa(k, i);
    }
    Projection embedded = Projection::unchecked(
        Element::embedded(shape, j, pa), 1e-12);
    rhs[a] = mu.evaluate(embedded);
  }
  Eigen::FullPivLU<Matrix> lu(sys);
  if (lu.rank() < m) {
    throw Error(ErrorCode::Internal, "spanning-family system is singular");
  }
  Eigen::VectorXcd sol = lu.solve(rhs);
  Matrix rho(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) rho(i, k) = sol[i * n + k];
  }
  return rho;
}

}  // namespace

ExtensionResult reconstruct(const ScalarMeasure& mu, const ReconstructOptions& opts) {
  if (opts.tol <= 0.0) throw Error(ErrorCode::Domain, "reconstruct: tol must be > 0");
  if (opts.verify_samples < 1) {
    throw Error(ErrorCode::Domain, "reconstruct: verify_samples must be >= 1");
  }
  const AlgebraShape& shape = mu.shape();

  Element rho = Element::zero(shape);
  for (int j = 0; j < shape.block_count(); ++j) {
    rho.block(j) = solve_block(mu, shape, j, opts.family_order_seed);
  }
  ScalarMeasure fitted = ScalarMeasure::trace_form(rho);

  // Verification set: the spanning projections re-checked, the trivial
  // projections, per-block samples with cycling ranks, and mixed projections
  // with random ranks across all blocks.
  std::vector<Projection> samples;
  for (int j = 0; j < shape.block_count(); ++j) {
    int n = shape.blocks[static_cast<size_t>(j)];
    for (const Projection& p : spanning_projections(n).projections) {
      samples.push_back(Projection::unchecked(
          Element::embedded(shape, j, p.value.block(0)), 1e-12));
    }
  }
  samples.push_back(Projection::unchecked(Element::zero(shape), 1e-12));
  samples.push_back(Projection::unchecked(Element::identity(shape), 1e-12));

  Rng rng(opts.seed);
  for (int j = 0; j < shape.block_count(); ++j) {
    int n = shape.blocks[static_cast<size_t>(j)];
    for (int s = 0; s < opts.verify_samples; ++s) {
      std::vector<int> ranks(static_cast<size_t>(shape.block_count()), 0);
      ranks[static_cast<size_t>(j)] = cycled_rank(n, s);
      samples.push_back(random_projection(shape, ranks, rng));
    }
  }
  for (int s = 0; s < opts.verify_samples; ++s) {
    std::vector<int> ranks;
    ranks.reserve(static_cast<size_t>(shape.block_count()));
    for (int n : shape.blocks) ranks.push_back(rng.uniform_int(0, n));
    samples.push_back(random_projection(shape, ranks, rng));
  }

  ExtensionResult res;
  res.residual = 0.0;
  for (const Projection& p : samples) {
    double dev = std::abs(mu.evaluate(p) - fitted.evaluate(p));
    res.residual = std::max(res.residual, dev);
  }
  res.rho = std::move(rho);
  res.verified_on = static_cast<int>(samples.size());
  if (res.residual <= opts.tol) {
    res.status = ExtensionStatus::Extended;
  } else if (shape.has_i2_summand()) {
    res.status = ExtensionStatus::I2Obstruction;
  } else {
    res.status = ExtensionStatus::NotAMeasure;
  }
  return res;
}

ExtensionResult reconstruct(const ScalarMeasure& mu, double tol, int verify_samples,
                            std::uint64_t seed) {
  ReconstructOptions opts;
  opts.tol = tol;
  opts.verify_samples = verify_samples;
  opts.seed = seed;
  return reconstruct(mu, opts);
}

namespace {

Complex omega_selfadjoint(const ScalarMeasure& mu, const Element& a, double tol) {
  SpectralDecomposition sd = spectral_decompose(a, tol);
  Complex acc = 0.0;
  for (size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    acc += sd.eigenvalues[i] * mu.evaluate(sd.projections[i]);
  }
  return acc;
}

}  // namespace

Complex omega(const ScalarMeasure& mu, const Element& x, double tol) {
  if (x.shape() != mu.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "omega: shape mismatch");
  }
  Complex wa = omega_selfadjoint(mu, x.hermitian_part(), tol);
  Complex wb = omega_selfadjoint(mu, x.antihermitian_part(), tol);
  return wa + Complex(0.0, 1.0) * wb;
}

namespace {

// One spectral frame, eigenvalue vectors u in [0,1] and v in [0, 1-u]:
// x and y commute exactly and x + y <= 1.
std::pair<Element, Element> commuting_pair(const AlgebraShape& shape, Rng& rng) {
  Element x = Element::zero(shape);
  Element y = Element::zero(shape);
  for (int j = 0; j < shape.block_count(); ++j) {
    int n = shape.blocks[static_cast<size_t>(j)];
    Matrix frame = random_unitary(n, rng);
    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = rng.uniform();
      v[i] = rng.uniform() * (1.0 - u[i]);
    }
    x.block(j) = frame * u.asDiagonal() * frame.adjoint();
    y.block(j) = frame * v.asDiagonal() * frame.adjoint();
  }
  return {x, y};
}

Element psd_sqrt(const Element& z) {
  Element s = Element::zero(z.shape());
  for (int j = 0; j < z.block_count(); ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (z.block(j) + z.block(j).adjoint()));
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    s.block(j) = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  }
  return s;
}

// General positive pairs with x + y <= 1. Alternates two samplers: splitting
// a random 0 <= z <= 1 as sqrt(z) w sqrt(z) + sqrt(z)(1-w)sqrt(z), and scaling
// two independent elements by t and 1-t.
std::pair<Element, Element> general_pair(const AlgebraShape& shape, Rng& rng, int trial) {
  if (trial % 2 == 0) {
    Element z = random_unit_interval(shape, rng);
    Element w = random_unit_interval(shape, rng);
    Element s = psd_sqrt(z);
    Element x = s * w * s;
    Element y = s * (Element::identity(shape) - w) * s;
    return {x, y};
  }
  double t = rng.uniform();
  Element x = Complex(t, 0.0) * random_unit_interval(shape, rng);
  Element y = Complex(1.0 - t, 0.0) * random_unit_interval(shape, rng);
  return {x, y};
}

}  // namespace

LinearityReport linearity_audit(const ScalarMeasure& mu, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::Domain, "linearity_audit: trials must be >= 1");
  const AlgebraShape& shape = mu.shape();
  Rng rng(seed);
  LinearityReport rep;
  rep.trials = trials;
  rep.worst_pair = {Element::zero(shape), Element::zero(shape)};
  for (int t = 0; t < trials; ++t) {
    auto [x, y] = commuting_pair(shape, rng);
    double d = std::abs(omega(mu, x + y) - omega(mu, x) - omega(mu, y));
    rep.max_commuting_defect = std::max(rep.max_commuting_defect, d);
  }
  for (int t = 0; t < trials; ++t) {
    auto [x, y] = general_pair(shape, rng, t);
    double d = std::abs(omega(mu, x + y) - omega(mu, x) - omega(mu, y));
    if (d > rep.max_general_defect) {
      rep.max_general_defect = d;
      rep.worst_pair = {x, y};
    }
  }
  return rep;
}

NormBoundReport functional_norm_bound(const Element& rho, int samples,
                                      std::uint64_t seed) {
  if (samples < 1) {
    throw Error(ErrorCode::Domain, "functional_norm_bound: samples must be >= 1");
  }
  const AlgebraShape& shape = rho.shape();
  ScalarMeasure beta = ScalarMeasure::trace_form(rho);

  std::vector<Projection> pool;
  // Spectral projections of both Hermitian parts, plus their positive and
  // negative aggregates: these attain sup|Re beta(p)| and sup|Im beta(p)|.
  for (const Element& part : {rho.hermitian_part(), rho.antihermitian_part()}) {
    SpectralDecomposition sd = spectral_decompose(part, 1e-9);
    Element pos = Element::zero(shape);
    Element neg = Element::zero(shape);
    for (size_t i = 0; i < sd.eigenvalues.size(); ++i) {
      pool.push_back(sd.projections[i]);
      if (sd.eigenvalues[i] > 0.0) pos += sd.projections[i].value;
      if (sd.eigenvalues[i] < 0.0) neg += sd.projections[i].value;
    }
    pool.push_back(Projection::unchecked(pos, 1e-9));
    pool.push_back(Projection::unchecked(neg, 1e-9));
  }
  pool.push_back(Projection::unchecked(Element::identity(shape), 1e-12));

  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    std::vector<int> ranks;
    ranks.reserve(static_cast<size_t>(shape.block_count()));
    for (int n : shape.blocks) ranks.push_back(rng.uniform_int(0, n));
    pool.push_back(random_projection(shape, ranks, rng));
  }

  double sup = 0.0;
  for (const Projection& p : pool) sup = std::max(sup, std::abs(beta.evaluate(p)));

  NormBoundReport rep;
  rep.trace_norm = trace_norm(rho);
  rep.four_sup = 4.0 * sup;
  return rep;
}

VectorExtensionError::VectorExtensionError(int component, ExtensionStatus status,
                                           double residual)
    : Error(ErrorCode::Domain,
            "vector measure component " + std::to_string(component) +
                " failed to extend: " + to_string(status) +
                " (residual " + std::to_string(residual) + ")"),
      component_(component),
      status_(status),
      residual_(residual) {}

OperatorRep extend_vector_measure(const VectorMeasure& m, const VectorExtendOptions& opts) {
  OperatorRep rep;
  rep.shape = m.shape;
  rep.rhos.reserve(m.components.size());
  for (int i = 0; i < m.dimension(); ++i) {
    ReconstructOptions ropts;
    ropts.tol = opts.tol;
    ropts.verify_samples = opts.verify_samples;
    ropts.seed = opts.seed + static_cast<std::uint64_t>(i);
    ExtensionResult r = reconstruct(m.components[static_cast<size_t>(i)], ropts);
    if (r.status != ExtensionStatus::Extended) {
      throw VectorExtensionError(i, r.status, r.residual);
    }
    rep.rhos.push_back(std::move(r.rho));
  }

  // K = sup over sampled projections of the coordinate-max norm of m(p).
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Projection> proj_samples;
  proj_samples.push_back(Projection::unchecked(Element::identity(m.shape), 1e-12));
  for (int s = 0; s < opts.norm_samples; ++s) {
    std::vector<int> ranks;
    ranks.reserve(static_cast<size_t>(m.shape.block_count()));
    for (int n : m.shape.blocks) ranks.push_back(rng.uniform_int(0, n));
    proj_samples.push_back(random_projection(m.shape, ranks, rng));
  }
  double k = 0.0;
  for (const Projection& p : proj_samples) {
    for (const ScalarMeasure& comp : m.components) {
      k = std::max(k, std::abs(comp.evaluate(p)));
    }
  }
  rep.k_bound = k;

  // Empirical operator norm over unit-norm elements.
  double bound = 0.0;
  for (int s = 0; s < opts.norm_samples; ++s) {
    Element x = random_element(m.shape, rng);
    double nrm = operator_norm(x);
    if (nrm <= 0.0) continue;
    x *= Complex(1.0 / nrm, 0.0);
    double coord_max = 0.0;
    for (const Element& rho : rep.rhos) {
      Complex v = 0.0;
      for (int j = 0; j < m.shape.block_count(); ++j) {
        v += (rho.block(j) * x.block(j)).trace();
      }
      coord_max = std::max(coord_max, std::abs(v));
    }
    bound = std::max(bound, coord_max);
  }
  rep.norm_bound = bound;
  if (rep.norm_bound > 4.0 * k + 1e-9) {
    throw Error(ErrorCode::Internal, "vector extension violated the 4K bound");
  }
  return rep;
}

OperatorRep extend_vector_measure(const VectorMeasure& m, double tol, std::uint64_t seed) {
  VectorExtendOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  return extend_vector_measure(m, opts);
}

}  // namespace projmeas
