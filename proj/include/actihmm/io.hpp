#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "actihmm/em.hpp"
#include "actihmm/model.hpp"

namespace actihmm {

// {"pi": [...], "tau": [[row]...], "epsilon": [[row]...]}, matrices as
// arrays of rows.
nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);

// Final parameters, the log-likelihood trace, and the per-iteration
// estimates when history was recorded.
nlohmann::json fit_result_to_json(const FitResult& result);

void write_params(const std::filesystem::path& path, const ModelParams& params);
ModelParams read_params(const std::filesystem::path& path);

// Newline-delimited integers; 0 encodes "no emission".
void write_sequence(const std::filesystem::path& path, std::span<const int> values);
std::vector<int> read_sequence(const std::filesystem::path& path);

// Two-column numeric text file (t, value), blank lines and '#' comments
// ignored.  Rows are ordered by t; exactly `horizon` rows are required and
// values must lie in [0, 1].
std::vector<double> read_activity_series(const std::filesystem::path& path,
                                         std::size_t horizon);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Fixed-precision float formatting so repeated runs emit identical bytes.
std::string format_double(double v);

}  // namespace actihmm
