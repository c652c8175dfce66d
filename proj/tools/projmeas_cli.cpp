// projmeas command-line tool. Subcommands: gen | reconstruct | audit | demo |
// norms. Talks to the library exclusively through the C API (projmeas.h);
// the primary JSON report goes to stdout (or --out), diagnostics to stderr.
//
// Exit codes: 0 success (reconstruct: Extended), 2 I2Obstruction,
// 3 NotAMeasure, 64 unparseable input or bad invocation, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "projmeas.h"

namespace {

constexpr int kExitParse = 64;
constexpr int kExitError = 1;

struct PmString {
  char* s = nullptr;
  ~PmString() { pm_string_free(s); }
  std::string str() const { return s ? std::string(s) : std::string(); }
};

struct MeasureHandle {
  pm_measure* m = nullptr;
  ~MeasureHandle() { pm_measure_free(m); }
};

struct ElementHandle {
  pm_element* e = nullptr;
  ~ElementHandle() { pm_element_free(e); }
};

int fail(pm_status s, const std::string& context) {
  std::cerr << "projmeas: " << context << ": " << pm_last_error() << "\n";
  return s == PM_ERR_PARSE ? kExitParse : kExitError;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return out.good();
}

// Emits the primary report to --out when given, else to stdout.
int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return 0;
  }
  if (!write_file(out_path, text + "\n")) {
    std::cerr << "projmeas: cannot write " << out_path << "\n";
    return kExitError;
  }
  return 0;
}

nlohmann::json shape_json(const std::string& spec) {
  nlohmann::json blocks = nlohmann::json::array();
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    int n = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad block size: " + tok);
    blocks.push_back(n);
  }
  if (blocks.empty()) throw std::invalid_argument("empty shape");
  return nlohmann::json{{"blocks", blocks}};
}

std::vector<double> parse_coeffs(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int load_measure(const std::string& in_path, MeasureHandle& mh) {
  if (in_path.empty()) {
    std::cerr << "projmeas: --in is required\n";
    return kExitParse;
  }
  std::optional<std::string> text = read_file(in_path);
  if (!text) {
    std::cerr << "projmeas: cannot read " << in_path << "\n";
    return kExitParse;
  }
  if (pm_status s = pm_measure_from_json(text->c_str(), &mh.m); s != PM_OK) {
    return fail(s, in_path);
  }
  return 0;
}

int run_gen(const std::string& kind, const std::string& shape, std::uint64_t seed,
            double c, const std::string& coeffs, bool complex_rho,
            const std::string& out_path) {
  nlohmann::json cfg;
  try {
    if (kind == "trace-form") {
      cfg = {{"kind", "trace_form"}, {"shape", shape_json(shape)}, {"seed", seed},
             {"complex", complex_rho}};
    } else if (kind == "frame2") {
      cfg = {{"kind", "frame2"}, {"c", c}};
      if (!coeffs.empty()) cfg["coeffs"] = parse_coeffs(coeffs);
    } else if (kind == "table-trace-sq") {
      cfg = {{"kind", "table_trace_sq"}, {"shape", shape_json(shape)}};
    } else {
      std::cerr << "projmeas: unknown --kind " << kind
                << " (expected trace-form | frame2 | table-trace-sq)\n";
      return kExitParse;
    }
  } catch (const std::exception& e) {
    std::cerr << "projmeas: " << e.what() << "\n";
    return kExitParse;
  }
  PmString measure;
  if (pm_status s = pm_gen_fixture(cfg.dump().c_str(), &measure.s); s != PM_OK) {
    return fail(s, "gen");
  }
  return emit(measure.str(), out_path);
}

int run_reconstruct(const std::string& in_path, double tol, int samples,
                    std::uint64_t seed, const std::string& out_path) {
  MeasureHandle mh;
  if (int rc = load_measure(in_path, mh); rc != 0) return rc;
  int ext_status = 0;
  PmString result;
  if (pm_status s = pm_reconstruct(mh.m, tol, samples, seed, &ext_status, &result.s);
      s != PM_OK) {
    return fail(s, "reconstruct");
  }
  if (int rc = emit(result.str(), out_path); rc != 0) return rc;
  return ext_status;
}

int run_audit(const std::string& in_path, int trials, std::uint64_t seed, double tol,
              const std::string& out_path) {
  MeasureHandle mh;
  if (int rc = load_measure(in_path, mh); rc != 0) return rc;
  PmString report;
  if (pm_status s = pm_audit(mh.m, trials, seed, tol, &report.s); s != PM_OK) {
    return fail(s, "audit");
  }
  return emit(report.str(), out_path);
}

int run_demo(int grid, const std::string& out_path) {
  // The flagship counterexample: c = 1, g = (1/2) n_z^3. Bounded and finitely
  // additive, but its best linear fit stays 1/8 away as the grid refines.
  nlohmann::json cfg = {{"kind", "frame2"}, {"c", 1.0}, {"coeffs", {0.0, 0.0, 0.0, 0.5}}};
  PmString measure_json;
  if (pm_status s = pm_gen_fixture(cfg.dump().c_str(), &measure_json.s); s != PM_OK) {
    return fail(s, "demo");
  }
  MeasureHandle mh;
  if (pm_status s = pm_measure_from_json(measure_json.s, &mh.m); s != PM_OK) {
    return fail(s, "demo");
  }
  PmString cert, csv;
  if (pm_status s = pm_nonlinearity_certificate(mh.m, grid, &cert.s, &csv.s);
      s != PM_OK) {
    return fail(s, "demo");
  }
  double residual = nlohmann::json::parse(cert.str()).value("residual", 0.0);
  std::cerr << "cubic frame measure on M_2: minimax residual " << residual
            << " at grid " << grid << " (limit 0.125 as the grid refines)\n";
  if (!out_path.empty()) {
    std::string csv_path = out_path;
    size_t dot = csv_path.find_last_of('.');
    if (dot != std::string::npos) csv_path.resize(dot);
    csv_path += ".csv";
    if (!write_file(csv_path, csv.str())) {
      std::cerr << "projmeas: cannot write " << csv_path << "\n";
      return kExitError;
    }
    std::cerr << "trace written to " << csv_path << "\n";
  }
  return emit(cert.str(), out_path);
}

int run_norms(const std::string& in_path, int samples, std::uint64_t seed,
              const std::string& out_path) {
  if (in_path.empty()) {
    std::cerr << "projmeas: --in is required\n";
    return kExitParse;
  }
  std::optional<std::string> text = read_file(in_path);
  if (!text) {
    std::cerr << "projmeas: cannot read " << in_path << "\n";
    return kExitParse;
  }
  // Accepts either a trace-form measure or a bare element as rho.
  std::string rho_json = *text;
  nlohmann::json parsed = nlohmann::json::parse(*text, nullptr, false);
  if (parsed.is_object() && parsed.contains("type")) {
    if (parsed["type"] != "trace_form" || !parsed.contains("rho")) {
      std::cerr << "projmeas: norms expects a trace_form measure or an element\n";
      return kExitParse;
    }
    rho_json = parsed["rho"].dump();
  }
  ElementHandle eh;
  if (pm_status s = pm_element_from_json(rho_json.c_str(), &eh.e); s != PM_OK) {
    return fail(s, in_path);
  }
  PmString report;
  if (pm_status s = pm_norm_bound(eh.e, samples, seed, &report.s); s != PM_OK) {
    return fail(s, "norms");
  }
  return emit(report.str(), out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finitely additive measures on projection lattices: evaluation, "
               "linear extension, audits and the 2x2 counterexample"};
  app.require_subcommand(1);

  std::string shape = "3";
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int samples = 64;
  int grid = 2048;
  std::string in_path, out_path;
  std::string kind = "trace-form";
  std::string coeffs;
  double c = 1.0;
  bool complex_rho = false;

  CLI::App* gen = app.add_subcommand("gen", "generate a fixture measure");
  gen->add_option("--kind", kind, "trace-form | frame2 | table-trace-sq");
  gen->add_option("--shape", shape, "block sizes, e.g. 3,4");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--c", c, "frame2 total mass");
  gen->add_option("--coeffs", coeffs, "frame2 n_z polynomial, e.g. 0,0,0,0.5");
  gen->add_flag("--complex", complex_rho, "complex (non-Hermitian) trace-form rho");
  gen->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* rec = app.add_subcommand("reconstruct", "linear extension of a measure");
  rec->add_option("--in", in_path, "measure JSON file")->required();
  rec->add_option("--tol", tol, "residual tolerance");
  rec->add_option("--samples", samples, "verification samples per block");
  rec->add_option("--seed", seed, "verification seed");
  rec->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* audit = app.add_subcommand("audit", "additivity and linearity audit");
  audit->add_option("--in", in_path, "measure JSON file")->required();
  audit->add_option("--samples", samples, "trials");
  audit->add_option("--seed", seed, "sampling seed");
  audit->add_option("--tol", tol, "projection tolerance");
  audit->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* demo = app.add_subcommand("demo", "cubic frame-measure counterexample");
  demo->add_option("--grid", grid, "sphere grid size");
  demo->add_option("--seed", seed, "unused; the grid is deterministic");
  demo->add_option("--out", out_path, "certificate path (CSV goes next to it)");

  CLI::App* norms = app.add_subcommand("norms", "functional norm bound for rho");
  norms->add_option("--in", in_path, "trace_form measure or element JSON file")->required();
  norms->add_option("--samples", samples, "sampled projections");
  norms->add_option("--seed", seed, "sampling seed");
  norms->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  if (gen->parsed()) return run_gen(kind, shape, seed, c, coeffs, complex_rho, out_path);
  if (rec->parsed()) return run_reconstruct(in_path, tol, samples, seed, out_path);
  if (audit->parsed()) return run_audit(in_path, samples, seed, tol, out_path);
  if (demo->parsed()) return run_demo(grid, out_path);
  if (norms->parsed()) return run_norms(in_path, samples, seed, out_path);
  return kExitError;
}
