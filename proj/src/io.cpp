#include "actihmm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace actihmm {

namespace {

Matrix matrix_from_json(const nlohmann::json& rows, const std::string& name) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw std::invalid_argument(name + " must be an array of rows");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw std::invalid_argument(name + " rows have unequal lengths");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c].get<double>();
    }
    return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

nlohmann::json params_to_json(const ModelParams& params) {
    return nlohmann::json{{"pi", params.pi},
                          {"tau", matrix_to_json(params.tau)},
                          {"epsilon", matrix_to_json(params.epsilon)}};
}

ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams params;
    params.pi = j.at("pi").get<std::vector<double>>();
    params.tau = matrix_from_json(j.at("tau"), "tau");
    params.epsilon = matrix_from_json(j.at("epsilon"), "epsilon");
    return params;
}

void write_params(const std::filesystem::path& path, const ModelParams& params) {
    write_text_file(path, params_to_json(params).dump(2) + "\n");
}

ModelParams read_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return params_from_json(j);
}

void write_sequence(const std::filesystem::path& path, std::span<const int> values) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (int v : values) out << v << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<int> read_sequence(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<int> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(std::stoi(line));
    }
    return values;
}

std::vector<double> read_activity_series(const std::filesystem::path& path,
                                         std::size_t horizon) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double t, v;
        if (!(ls >> t >> v)) continue;
        rows.emplace_back(t, v);
    }
    if (rows.size() != horizon)
        throw std::runtime_error(path.string() + ": expected " + std::to_string(horizon) +
                                 " activity rows, found " + std::to_string(rows.size()));
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> values;
    values.reserve(horizon);
    for (const auto& [t, v] : rows) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::runtime_error(path.string() + ": activity value " + std::to_string(v) +
                                     " outside [0, 1]");
        values.push_back(v);
    }
    return values;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace actihmm
