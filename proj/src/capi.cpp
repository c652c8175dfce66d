#include "projmeas.h"

#include <cstring>
#include <string>

#include "projmeas/json_io.hpp"

using namespace projmeas;

struct pm_measure {
  ScalarMeasure value;
};

struct pm_element {
  Element value;
};

namespace {

thread_local std::string g_last_error;

pm_status status_from_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return PM_ERR_PARSE;
    case ErrorCode::ShapeMismatch: return PM_ERR_SHAPE;
    case ErrorCode::MalformedElement: return PM_ERR_MALFORMED;
    case ErrorCode::Domain: return PM_ERR_DOMAIN;
    case ErrorCode::Unevaluable: return PM_ERR_UNEVALUABLE;
    case ErrorCode::Representation: return PM_ERR_REPRESENTATION;
    case ErrorCode::Degenerate: return PM_ERR_DEGENERATE;
    case ErrorCode::Internal: return PM_ERR_INTERNAL;
  }
  return PM_ERR_INTERNAL;
}

template <typename F>
pm_status guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return PM_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pm_status require_nonnull(const void* p, const char* name) {
  if (!p) {
    g_last_error = std::string(name) + " must not be null";
    return PM_ERR_NULL_ARG;
  }
  return PM_OK;
}

ScalarMeasure fixture_from_config(const nlohmann::json& cfg) {
  std::string kind = cfg.value("kind", "");
  if (kind == "trace_form") {
    AlgebraShape shape = shape_from_json(cfg.at("shape"));
    Rng rng(cfg.value("seed", 0ULL));
    Element rho = cfg.value("complex", false)
                      ? random_element(shape, rng)
                      : random_selfadjoint(shape, rng);
    return ScalarMeasure::trace_form(std::move(rho));
  }
  if (kind == "frame2") {
    double c = cfg.value("c", 1.0);
    std::vector<double> coeffs =
        cfg.contains("coeffs") ? cfg["coeffs"].get<std::vector<double>>()
                               : std::vector<double>{0.0, 0.0, 0.0, 0.5};
    std::vector<double> odd_coeffs;
    for (size_t k = 0; k < coeffs.size(); ++k) {
      if (k % 2 == 0) {
        if (coeffs[k] != 0.0) {
          throw Error(ErrorCode::Parse, "frame2 fixture: even powers must be zero");
        }
      } else {
        odd_coeffs.push_back(coeffs[k]);
      }
    }
    return ScalarMeasure::frame2(c, std::move(odd_coeffs));
  }
  if (kind == "table_trace_sq") {
    AlgebraShape shape = shape_from_json(cfg.at("shape"));
    return ScalarMeasure::table(std::move(shape), {}, {},
                                TracePolyOracle{{0.0, 0.0, 1.0}});
  }
  throw Error(ErrorCode::Parse, "unknown fixture kind \"" + kind + "\"");
}

}  // namespace

extern "C" {

const char* pm_version(void) { return "0.1.0"; }

const char* pm_last_error(void) { return g_last_error.c_str(); }

void pm_string_free(char* s) { delete[] s; }

pm_status pm_measure_from_json(const char* json, pm_measure** out) {
  if (pm_status s = require_nonnull(json, "json"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(out, "out"); s != PM_OK) return s;
  return guarded([&] {
    *out = new pm_measure{measure_from_string(json)};
    return PM_OK;
  });
}

void pm_measure_free(pm_measure* m) { delete m; }

pm_status pm_measure_to_json(const pm_measure* m, char** json_out) {
  if (pm_status s = require_nonnull(m, "measure"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(json_out, "json_out"); s != PM_OK) return s;
  return guarded([&] {
    *json_out = dup_string(to_json(m->value).dump());
    return PM_OK;
  });
}

pm_status pm_element_from_json(const char* json, pm_element** out) {
  if (pm_status s = require_nonnull(json, "json"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(out, "out"); s != PM_OK) return s;
  return guarded([&] {
    *out = new pm_element{element_from_string(json)};
    return PM_OK;
  });
}

void pm_element_free(pm_element* e) { delete e; }

pm_status pm_element_to_json(const pm_element* e, char** json_out) {
  if (pm_status s = require_nonnull(e, "element"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(json_out, "json_out"); s != PM_OK) return s;
  return guarded([&] {
    *json_out = dup_string(to_json(e->value).dump());
    return PM_OK;
  });
}

pm_status pm_evaluate(const pm_measure* m, const pm_element* projection, double tol,
                      double out_re_im[2]) {
  if (pm_status s = require_nonnull(m, "measure"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(projection, "projection"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(out_re_im, "out_re_im"); s != PM_OK) return s;
  return guarded([&] {
    Complex v = m->value.evaluate(Projection::checked(projection->value, tol));
    out_re_im[0] = v.real();
    out_re_im[1] = v.imag();
    return PM_OK;
  });
}

pm_status pm_omega(const pm_measure* m, const pm_element* x, double tol,
                   double out_re_im[2]) {
  if (pm_status s = require_nonnull(m, "measure"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(x, "x"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(out_re_im, "out_re_im"); s != PM_OK) return s;
  return guarded([&] {
    Complex v = omega(m->value, x->value, tol);
    out_re_im[0] = v.real();
    out_re_im[1] = v.imag();
    return PM_OK;
  });
}

pm_status pm_reconstruct(const pm_measure* m, double tol, int verify_samples,
                         uint64_t seed, int* ext_status_out, char** result_json_out) {
  if (pm_status s = require_nonnull(m, "measure"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(result_json_out, "result_json_out"); s != PM_OK) return s;
  return guarded([&] {
    ExtensionResult r = reconstruct(m->value, tol, verify_samples, seed);
    if (ext_status_out) {
      switch (r.status) {
        case ExtensionStatus::Extended: *ext_status_out = PM_EXTENDED; break;
        case ExtensionStatus::I2Obstruction: *ext_status_out = PM_I2_OBSTRUCTION; break;
        case ExtensionStatus::NotAMeasure: *ext_status_out = PM_NOT_A_MEASURE; break;
      }
    }
    *result_json_out = dup_string(to_json(r).dump());
    return PM_OK;
  });
}

pm_status pm_audit(const pm_measure* m, int trials, uint64_t seed, double tol,
                   char** report_json_out) {
  if (pm_status s = require_nonnull(m, "measure"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(report_json_out, "report_json_out"); s != PM_OK) return s;
  return guarded([&] {
    nlohmann::json report;
    report["additivity"] = to_json(additivity_check(m->value, trials, seed, tol));
    report["linearity"] = to_json(linearity_audit(m->value, trials, seed));
    if (const TraceForm* tf = m->value.as_trace_form();
        tf && tf->rho.is_selfadjoint(1e-9)) {
      Projection one = Projection::unchecked(Element::identity(m->value.shape()), 1e-12);
      VariationAlpha va = variation_and_alpha(m->value, one);
      double mu1 = m->value.evaluate(one).real();
      double lhs = 2.0 * va.alpha - mu1;
      double rhs = trace_norm(tf->rho);
      report["identity"] = nlohmann::json{{"two_alpha_minus_mu1", lhs},
                                          {"trace_norm", rhs},
                                          {"abs_error", std::abs(lhs - rhs)}};
    }
    *report_json_out = dup_string(report.dump());
    return PM_OK;
  });
}

pm_status pm_norm_bound(const pm_element* rho, int samples, uint64_t seed,
                        char** report_json_out) {
  if (pm_status s = require_nonnull(rho, "rho"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(report_json_out, "report_json_out"); s != PM_OK) return s;
  return guarded([&] {
    NormBoundReport r = functional_norm_bound(rho->value, samples, seed);
    *report_json_out = dup_string(to_json(r).dump());
    return PM_OK;
  });
}

pm_status pm_nonlinearity_certificate(const pm_measure* m, int grid_size,
                                      char** cert_json_out, char** csv_out) {
  if (pm_status s = require_nonnull(m, "measure"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(cert_json_out, "cert_json_out"); s != PM_OK) return s;
  return guarded([&] {
    NonlinearityCertificate cert = nonlinearity_residual(m->value, grid_size);
    *cert_json_out = dup_string(to_json(cert).dump());
    if (csv_out) *csv_out = dup_string(certificate_csv(m->value, cert));
    return PM_OK;
  });
}

pm_status pm_gen_fixture(const char* config_json, char** measure_json_out) {
  if (pm_status s = require_nonnull(config_json, "config_json"); s != PM_OK) return s;
  if (pm_status s = require_nonnull(measure_json_out, "measure_json_out"); s != PM_OK) return s;
  return guarded([&] {
    nlohmann::json cfg = parse_json(config_json);
    ScalarMeasure mu = fixture_from_config(cfg);
    *measure_json_out = dup_string(to_json(mu).dump());
    return PM_OK;
  });
}

}  // extern "C"
