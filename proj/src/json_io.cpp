#include "projmeas/json_io.hpp"

#include <algorithm>
#include <cstdio>

namespace projmeas {

using nlohmann::json;

nlohmann::json to_json(const AlgebraShape& shape) {
  return json{{"blocks", shape.blocks}};
}

nlohmann::json to_json(const Element& x) {
  json blocks = json::array();
  for (const Matrix& b : x.blocks()) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < b.cols(); ++k) {
        row.push_back(json::array({b(i, k).real(), b(i, k).imag()}));
      }
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return json{{"blocks", std::move(blocks)}};
}

namespace {

json complex_to_json(Complex v) { return json::array({v.real(), v.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::Parse, "expected [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json to_json(const ScalarMeasure& mu) {
  switch (mu.kind()) {
    case MeasureKind::TraceForm:
      return json{{"type", "trace_form"},
                  {"shape", to_json(mu.shape())},
                  {"rho", to_json(mu.as_trace_form()->rho)}};
    case MeasureKind::Frame2: {
      const Frame2& f = *mu.as_frame2();
      // Full power indexing: coeffs[k] multiplies n_z^k, even entries zero.
      std::vector<double> coeffs(2 * f.odd.odd_coeffs.size(), 0.0);
      for (size_t k = 0; k < f.odd.odd_coeffs.size(); ++k) {
        coeffs[2 * k + 1] = f.odd.odd_coeffs[k];
      }
      return json{{"type", "frame2"},
                  {"c", f.c},
                  {"odd", json{{"kind", "poly_nz"}, {"coeffs", coeffs}}}};
    }
    case MeasureKind::Table: {
      const TableMeasure& t = *mu.as_table();
      json entries = json::array();
      for (const auto& [p, v] : t.entries) {
        entries.push_back(json{{"p", to_json(p)}, {"value", complex_to_json(v)}});
      }
      json out{{"type", "table"},
               {"shape", to_json(mu.shape())},
               {"entries", std::move(entries)}};
      if (t.oracle_spec) {
        out["oracle"] = json{{"kind", "trace_poly"}, {"coeffs", t.oracle_spec->coeffs}};
      }
      return out;
    }
  }
  throw Error(ErrorCode::Internal, "unknown measure kind");
}

nlohmann::json to_json(const ExtensionResult& r) {
  return json{{"status", to_string(r.status)},
              {"rho", to_json(r.rho)},
              {"residual", r.residual},
              {"verified_on", r.verified_on}};
}

nlohmann::json to_json(const AdditivityReport& r) {
  return json{{"trials", r.trials},
              {"max_violation", r.max_violation},
              {"bound_estimate", r.bound_estimate},
              {"skipped", r.skipped},
              {"worst_pair", json{{"p", to_json(r.worst_pair.first)},
                                  {"q", to_json(r.worst_pair.second)}}}};
}

nlohmann::json to_json(const LinearityReport& r) {
  return json{{"trials", r.trials},
              {"max_commuting_defect", r.max_commuting_defect},
              {"max_general_defect", r.max_general_defect},
              {"worst_pair", json{{"x", to_json(r.worst_pair.first)},
                                  {"y", to_json(r.worst_pair.second)}}}};
}

nlohmann::json to_json(const NormBoundReport& r) {
  return json{{"trace_norm", r.trace_norm}, {"four_sup", r.four_sup}};
}

nlohmann::json to_json(const NonlinearityCertificate& c) {
  return json{{"grid_size", c.grid_size},
              {"residual", c.residual},
              {"lower_bound", c.lower_bound},
              {"witness", json::array({c.witness.x, c.witness.y, c.witness.z})},
              {"best_fit", to_json(c.best_fit)}};
}

AlgebraShape shape_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array()) {
    throw Error(ErrorCode::Parse, "shape: expected {\"blocks\": [n_1, ...]}");
  }
  std::vector<int> blocks;
  for (const json& n : j["blocks"]) {
    if (!n.is_number_integer()) {
      throw Error(ErrorCode::Parse, "shape: block sizes must be integers");
    }
    blocks.push_back(n.get<int>());
  }
  return AlgebraShape(std::move(blocks));
}

Element element_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array()) {
    throw Error(ErrorCode::Parse, "element: expected {\"blocks\": [B_1, ...]}");
  }
  std::vector<int> sizes;
  std::vector<Matrix> mats;
  for (const json& b : j["blocks"]) {
    if (!b.is_array() || b.empty()) {
      throw Error(ErrorCode::Parse, "element: block must be a nonempty array of rows");
    }
    int n = static_cast<int>(b.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const json& row = b[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw Error(ErrorCode::Parse, "element: block rows must form a square matrix");
      }
      for (int k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<size_t>(k)]);
    }
    sizes.push_back(n);
    mats.push_back(std::move(m));
  }
  return Element(AlgebraShape(std::move(sizes)), std::move(mats));
}

namespace {

std::vector<double> odd_coeffs_from_poly(const json& odd) {
  if (!odd.is_object() || odd.value("kind", "") != "poly_nz" || !odd.contains("coeffs")) {
    throw Error(ErrorCode::Parse, "frame2: odd must be {\"kind\":\"poly_nz\",\"coeffs\":[...]}");
  }
  std::vector<double> coeffs = odd["coeffs"].get<std::vector<double>>();
  std::vector<double> odd_coeffs;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (k % 2 == 0) {
      if (coeffs[k] != 0.0) {
        throw Error(ErrorCode::Parse, "frame2: even powers of n_z must have zero coefficients");
      }
    } else {
      odd_coeffs.push_back(coeffs[k]);
    }
  }
  return odd_coeffs;
}

}  // namespace

ScalarMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw Error(ErrorCode::Parse, "measure: missing \"type\"");
  }
  std::string type = j["type"].get<std::string>();
  if (type == "trace_form") {
    Element rho = element_from_json(j.at("rho"));
    if (j.contains("shape") && shape_from_json(j["shape"]) != rho.shape()) {
      throw Error(ErrorCode::Parse, "trace_form: shape does not match rho");
    }
    return ScalarMeasure::trace_form(std::move(rho));
  }
  if (type == "frame2") {
    double c = j.value("c", 1.0);
    return ScalarMeasure::frame2(c, odd_coeffs_from_poly(j.at("odd")));
  }
  if (type == "table") {
    AlgebraShape shape = shape_from_json(j.at("shape"));
    std::vector<std::pair<Element, Complex>> entries;
    if (j.contains("entries")) {
      for (const json& e : j["entries"]) {
        entries.emplace_back(element_from_json(e.at("p")), complex_from_json(e.at("value")));
      }
    }
    std::optional<TracePolyOracle> oracle_spec;
    if (j.contains("oracle")) {
      const json& o = j["oracle"];
      if (o.value("kind", "") != "trace_poly" || !o.contains("coeffs")) {
        throw Error(ErrorCode::Parse, "table: oracle must be {\"kind\":\"trace_poly\",\"coeffs\":[...]}");
      }
      oracle_spec = TracePolyOracle{o["coeffs"].get<std::vector<double>>()};
    }
    return ScalarMeasure::table(std::move(shape), std::move(entries), {}, std::move(oracle_spec));
  }
  throw Error(ErrorCode::Parse, "measure: unknown type \"" + type + "\"");
}

nlohmann::json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::Parse, "invalid JSON");
  }
  return j;
}

namespace {

template <typename F>
auto with_parse_errors(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("JSON error: ") + e.what());
  }
}

}  // namespace

ScalarMeasure measure_from_string(const std::string& text) {
  return with_parse_errors([&] { return measure_from_json(parse_json(text)); });
}

Element element_from_string(const std::string& text) {
  return with_parse_errors([&] { return element_from_json(parse_json(text)); });
}

std::string certificate_csv(const ScalarMeasure& mu, const NonlinearityCertificate& cert) {
  std::vector<BlochVector> grid = fibonacci_sphere(cert.grid_size);
  std::sort(grid.begin(), grid.end(),
            [](const BlochVector& a, const BlochVector& b) { return a.z < b.z; });
  ScalarMeasure fit = ScalarMeasure::trace_form(cert.best_fit);
  std::string out = "n_z,mu,fit\n";
  char buf[128];
  for (const BlochVector& n : grid) {
    Projection p = bloch_projection(n);
    double v = mu.evaluate(p).real();
    double f = fit.evaluate(p).real();
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", n.z, v, f);
    out += buf;
  }
  return out;
}

}  // namespace projmeas
