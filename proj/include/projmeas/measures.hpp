// Finitely additive measures on the projection lattice P(A): trace-form,
// qubit frame-function and tabulated representations, plus the variation V(p),
// alpha(p), positivity shift and centre normalization.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>

#include "projmeas/algebra.hpp"

namespace projmeas {

// mu(p) = trace(rho * p).
struct TraceForm {
  Element rho;
};

// Odd polynomial on the Bloch sphere: g(n) = sum_k a_k * n_z^(2k+1).
struct OddNzPoly {
  std::vector<double> odd_coeffs;

  double operator()(double nz) const;
  bool is_linear() const;  // degree <= 1 in n_z
};

// Frame function on P(M_2): mu(0) = 0, mu(1) = c, mu(p(n)) = c/2 + g(n).
// Finitely additive by oddness of g: the only nontrivial orthogonal pairs in
// P(M_2) are antipodal, and g(n) + g(-n) = 0.
struct Frame2 {
  double c = 1.0;
  OddNzPoly odd;
};

// Polynomial in trace(p), used as a JSON-encodable table fallback oracle.
struct TracePolyOracle {
  std::vector<double> coeffs;  // mu(p) = sum_k coeffs[k] * trace(p)^k

  Complex operator()(const Element& p) const;
};

// Black-box measure: finite table keyed by canonical projection encodings,
// with an optional fallback oracle for misses.
struct TableMeasure {
  std::vector<std::pair<Element, Complex>> entries;
  std::map<std::string, Complex> lookup;  // canonical key -> value
  std::function<std::optional<Complex>(const Element&)> oracle;  // may be empty
  std::optional<TracePolyOracle> oracle_spec;  // serializable form, if any
};

// Canonical key: entries rounded to 12 decimal digits, blocks joined in order.
std::string canonical_projection_key(const Element& p);

enum class MeasureKind { TraceForm, Frame2, Table };

class ScalarMeasure {
 public:
  static ScalarMeasure trace_form(Element rho);
  static ScalarMeasure frame2(double c, std::vector<double> odd_coeffs);
  static ScalarMeasure table(AlgebraShape shape,
                             std::vector<std::pair<Element, Complex>> entries,
                             std::function<std::optional<Complex>(const Element&)> oracle = {},
                             std::optional<TracePolyOracle> oracle_spec = std::nullopt);

  const AlgebraShape& shape() const { return shape_; }
  MeasureKind kind() const;

  const TraceForm* as_trace_form() const { return std::get_if<TraceForm>(&rep_); }
  const Frame2* as_frame2() const { return std::get_if<Frame2>(&rep_); }
  const TableMeasure* as_table() const { return std::get_if<TableMeasure>(&rep_); }

  // Value of the measure at p under the representation's defining formula.
  Complex evaluate(const Projection& p) const;

 private:
  ScalarMeasure(AlgebraShape shape, std::variant<TraceForm, Frame2, TableMeasure> rep)
      : shape_(std::move(shape)), rep_(std::move(rep)) {}

  AlgebraShape shape_;
  std::variant<TraceForm, Frame2, TableMeasure> rep_;
};

// Coordinates of an X-valued measure, X = C^d with the max-coordinate norm.
struct VectorMeasure {
  AlgebraShape shape;
  std::vector<ScalarMeasure> components;

  VectorMeasure(AlgebraShape s, std::vector<ScalarMeasure> comps);
  int dimension() const { return static_cast<int>(components.size()); }
};

struct AdditivityReport {
  int trials = 0;
  double max_violation = 0.0;                // max |mu(p+q) - mu(p) - mu(q)|
  std::pair<Element, Element> worst_pair;    // orthogonal (p, q) attaining it
  double bound_estimate = 0.0;               // max sampled |mu(p)|
  int skipped = 0;                           // unevaluable trials
};

// Samples exactly-orthogonal pairs by splitting a seeded random frame per
// block into two column ranges.
AdditivityReport additivity_check(const ScalarMeasure& mu, int trials,
                                  std::uint64_t seed, double tol);

struct VariationAlpha {
  double variation = 0.0;  // V(p) = sup{|mu(e)|: e <= p}
  double alpha = 0.0;      // alpha(p) = sup{mu(e): e <= p}
};

// Exact values via the spectrum of the compression p*rho*p on range(p);
// requires a trace-form measure with Hermitian rho.
VariationAlpha variation_and_alpha(const ScalarMeasure& mu, const Projection& p);

// alpha(1)*I - rho, verified positive semidefinite. Single-block shapes only.
ScalarMeasure positivity_shift(const ScalarMeasure& mu);

struct CentreNormalization {
  std::vector<double> sigma;  // per-block central coefficients trace(rho_j)/n_j
  ScalarMeasure normalized;
  double scale = 0.0;  // trace norm of the centred rho
};

// Subtracts the central part blockwise, then rescales so that the normalized
// measure has alpha(1) = 1/2.
CentreNormalization centre_normalize(const ScalarMeasure& mu);

}  // namespace projmeas
