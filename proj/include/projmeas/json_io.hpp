// Wire formats. An Element is {"blocks": [B_1, ..., B_k]} where B_j is a
// row-major n_j x n_j array of [re, im] pairs; an AlgebraShape is
// {"blocks": [n_1, ..., n_k]}. Measures, extension results and reports are
// JSON objects keyed by snake_case field names.

#pragma once

#include <string>

#include <json.hpp>

#include "projmeas/counterexamples.hpp"
#include "projmeas/extension.hpp"

namespace projmeas {

nlohmann::json to_json(const AlgebraShape& shape);
nlohmann::json to_json(const Element& x);
nlohmann::json to_json(const ScalarMeasure& mu);
nlohmann::json to_json(const ExtensionResult& r);
nlohmann::json to_json(const AdditivityReport& r);
nlohmann::json to_json(const LinearityReport& r);
nlohmann::json to_json(const NormBoundReport& r);
nlohmann::json to_json(const NonlinearityCertificate& c);

AlgebraShape shape_from_json(const nlohmann::json& j);
Element element_from_json(const nlohmann::json& j);
ScalarMeasure measure_from_json(const nlohmann::json& j);

// Parse wrappers that map all JSON failures to Error(ErrorCode::Parse).
nlohmann::json parse_json(const std::string& text);
ScalarMeasure measure_from_string(const std::string& text);
Element element_from_string(const std::string& text);

// CSV trace of a frame2 measure against a fitted linear functional:
// header "n_z,mu,fit", one row per grid point sorted by n_z.
std::string certificate_csv(const ScalarMeasure& mu, const NonlinearityCertificate& cert);

}  // namespace projmeas
