#include "srm/results.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "srm/errors.hpp"
#include "srm/format.hpp"

namespace srm {
namespace {

const Value* find(const Fields& fields, std::string_view key) {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string json_value(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(x) ? fmt_real(x) : "null";
            else return nlohmann::json(x).dump();
        },
        v);
}

std::string json_fields(const Fields& fields) {
    std::string out = "{";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        out += nlohmann::json(fields[i].first).dump() + ":" + json_value(fields[i].second);
    }
    return out + "}";
}

std::vector<std::string> union_keys(const std::vector<ResultRow>& rows, Fields ResultRow::*member) {
    std::vector<std::string> keys;
    for (const auto& row : rows)
        for (const auto& [k, v] : row.*member)
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    return keys;
}

Value value_from_text(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (!s.empty() && s.find_first_not_of("-0123456789") == std::string::npos && s != "-") {
        try {
            return static_cast<std::int64_t>(std::stoll(s));
        } catch (const std::out_of_range&) {
        }
    }
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
    return s;
}

Value value_from_json(const nlohmann::json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number()) return j.get<double>();
    if (j.is_null()) return NAN;
    return j.get<std::string>();
}

double number_from_json(const nlohmann::json& j) { return j.is_null() ? NAN : j.get<double>(); }

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(std::move(cur));
    return cells;
}

}  // namespace

const Value* ResultRow::param(std::string_view key) const { return find(params, key); }
const Value* ResultRow::metric(std::string_view key) const { return find(metrics, key); }

std::string value_text(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, double>) return fmt_real(x);
            else return x;
        },
        v);
}

OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "jsonl") return OutputFormat::Jsonl;
    throw ConfigError("format must be csv or jsonl, got '" + std::string(s) + "'");
}

void write_rows(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out) {
    if (rows.empty()) throw DomainError("emit: no rows");
    if (format == OutputFormat::Jsonl) {
        for (const auto& r : rows) {
            out << "{\"experiment\":" << nlohmann::json(r.experiment).dump() << ",\"params\":" << json_fields(r.params)
                << ",\"estimate\":" << json_value(r.estimate) << ",\"std_error\":" << json_value(r.std_error)
                << ",\"spread\":" << json_value(r.spread) << ",\"replications\":" << r.replications
                << ",\"seed\":" << r.seed << ",\"metrics\":" << json_fields(r.metrics) << "}\n";
        }
        return;
    }
    const auto param_keys = union_keys(rows, &ResultRow::params);
    const auto metric_keys = union_keys(rows, &ResultRow::metrics);
    out << "experiment";
    for (const auto& k : param_keys) out << "," << csv_cell("param." + k);
    out << ",estimate,std_error,spread,replications,seed";
    for (const auto& k : metric_keys) out << "," << csv_cell("metric." + k);
    out << "\n";
    for (const auto& r : rows) {
        out << csv_cell(r.experiment);
        for (const auto& k : param_keys) {
            const Value* v = r.param(k);
            out << "," << (v ? csv_cell(value_text(*v)) : "");
        }
        out << "," << fmt_real(r.estimate) << "," << fmt_real(r.std_error) << "," << fmt_real(r.spread) << ","
            << r.replications << "," << r.seed;
        for (const auto& k : metric_keys) {
            const Value* v = r.metric(k);
            out << "," << (v ? csv_cell(value_text(*v)) : "");
        }
        out << "\n";
    }
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::filesystem::path& path) {
    if (rows.empty()) throw DomainError("emit: no rows");
    if (path == "-") {
        write_rows(rows, format, std::cout);
        std::cout.flush();
        return;
    }
    std::ostringstream buffer;
    write_rows(rows, format, buffer);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("emit: cannot open " + path.string() + " for writing");
    file << buffer.str();
    if (!file.flush()) throw IoError("emit: write to " + path.string() + " failed");
}

std::vector<ResultRow> parse_rows(std::string_view text, OutputFormat format) {
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (format == OutputFormat::Jsonl) {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::ordered_json::parse(line);
            ResultRow r;
            r.experiment = j.at("experiment").get<std::string>();
            for (const auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, value_from_json(v));
            r.estimate = number_from_json(j.at("estimate"));
            r.std_error = number_from_json(j.at("std_error"));
            r.spread = number_from_json(j.at("spread"));
            r.replications = j.at("replications").get<std::size_t>();
            r.seed = j.at("seed").get<std::uint64_t>();
            for (const auto& [k, v] : j.at("metrics").items()) r.metrics.emplace_back(k, value_from_json(v));
            rows.push_back(std::move(r));
        }
        return rows;
    }
    if (!std::getline(in, line)) throw ConfigError("parse_rows: empty CSV");
    const auto header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) throw ConfigError("parse_rows: ragged CSV row");
        ResultRow r;
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string& h = header[i];
            const std::string& c = cells[i];
            if (h == "experiment") r.experiment = c;
            else if (h == "estimate") r.estimate = std::stod(c);
            else if (h == "std_error") r.std_error = std::stod(c);
            else if (h == "spread") r.spread = std::stod(c);
            else if (h == "replications") r.replications = std::stoull(c);
            else if (h == "seed") r.seed = std::stoull(c);
            else if (c.empty()) continue;
            else if (h.starts_with("param.")) r.params.emplace_back(h.substr(6), value_from_text(c));
            else if (h.starts_with("metric.")) r.metrics.emplace_back(h.substr(7), value_from_text(c));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace srm
