#pragma once

#include <string>

#include <json.hpp>

#include "mimoid/lti.hpp"

// JSON persistence for models and datasets. Matrices are nested row-major
// arrays; doubles are written with round-trip precision.
namespace mimoid::io {

nlohmann::json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const nlohmann::json& j, const char* name);

// Fields A, B, C, Q, R, diagonal. Q defaults to 0, R to I_m. Unknown keys
// are rejected.
nlohmann::json model_to_json(const lti::StateSpaceModel& model);
lti::StateSpaceModel model_from_json(const nlohmann::json& j);

nlohmann::json dataset_to_json(const lti::Dataset& data);
lti::Dataset dataset_from_json(const nlohmann::json& j);

// Parse a JSON file; syntax errors are reported with line and column.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

} // namespace mimoid::io
