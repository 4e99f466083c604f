#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace srm {

using Value = std::variant<bool, std::int64_t, double, std::string>;
using Fields = std::vector<std::pair<std::string, Value>>;

// One aggregated Monte Carlo result. `params` are the inputs needed to
// reproduce the row through the `estimate` subcommand; `metrics` are extra
// outputs (oracle value, bound, pass flag, ...).
//   std_error = spread / sqrt(replications), spread = sample std of the
//   per-replication values.
struct ResultRow {
    std::string experiment;
    Fields params;
    double estimate = 0;
    double std_error = 0;
    double spread = 0;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    Fields metrics;

    const Value* param(std::string_view key) const;
    const Value* metric(std::string_view key) const;
};

enum class OutputFormat { Csv, Jsonl };

OutputFormat parse_format(std::string_view s);

// CSV: header "experiment,param.<k>...,estimate,std_error,spread,replications,seed,metric.<k>..."
// over the union of keys in first-appearance order; absent cells are empty.
// JSONL: {"experiment":..,"params":{..},"estimate":..,...,"metrics":{..}} per row.
// Reals use 12 significant digits; non-finite reals are "nan"/"inf" in CSV and null in JSON.
void write_rows(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out);

// Writes to `path` ("-" for stdout). DomainError on empty rows, IoError if unwritable.
void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::filesystem::path& path);

std::vector<ResultRow> parse_rows(std::string_view text, OutputFormat format);

std::string value_text(const Value& v);

}  // namespace srm
