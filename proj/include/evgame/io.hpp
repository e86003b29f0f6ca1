#pragma once

// File formats and batch drivers behind the command-line tool.
//
// Scenario files are JSON objects with the keys
//   schema_version, n_stations, horizon, price_intercepts, price_slope,
//   sensitivities, demands, nominal_profiles | alpha, coalitions
// Station numbers in files are 1-based. `alpha` is shorthand for
// nominal_profiles[i][t] = demands[i] * alpha[t].

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "evgame/analysis.hpp"
#include "evgame/scenarios.hpp"

namespace evgame::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct ScenarioFile {
    int schema_version = kSchemaVersion;
    std::size_t n_stations = 0;
    std::size_t horizon = 0;
    std::vector<double> price_intercepts;
    double price_slope = 0.0;
    std::vector<double> sensitivities;
    std::vector<double> demands;
    std::optional<std::vector<std::vector<double>>> nominal_profiles;
    std::optional<std::vector<double>> alpha;
    std::vector<std::vector<std::size_t>> coalitions;  // 1-based

    // Expands alpha if needed and validates (PreconditionError on failure).
    Scenario to_scenario() const;
    CoalitionStructure structure() const;

    static ScenarioFile from_scenario(const Scenario& scenario, const CoalitionStructure& structure);

    bool operator==(const ScenarioFile&) const = default;
};

// Throws SchemaError with a field path for malformed input.
ScenarioFile parse_scenario(const json& doc);
ScenarioFile parse_scenario_text(std::string_view text);
ScenarioFile load_scenario(const std::string& path);

json to_json(const ScenarioFile& file);

// FNV-1a 64-bit hash of the compact canonical JSON, as "fnv1a64:<16 hex>".
std::string digest(const ScenarioFile& file);

// Parses "1,2,3" into 1-based station numbers.
std::vector<std::size_t> parse_index_list(std::string_view text);

struct ResultRecord {
    ScenarioFile scenario;
    std::string scenario_digest;
    EquilibriumResult nash;
    EquilibriumResult cnash;
    std::optional<analysis::MetricsReport> metrics;
    std::optional<analysis::CaseAReport> case_a[3];  // groups [N], C, [N]\C
    std::optional<analysis::CaseBReport> case_b[3];
    double oracle_residual_nash = 0.0;
    double oracle_residual_cnash = 0.0;
    double wall_time_s = 0.0;
};

ResultRecord solve(const ScenarioFile& file);
json to_json(const ResultRecord& record);
// station,slot,x_nash,x_cnash (1-based indices).
std::string to_csv(const ResultRecord& record);

json to_json(const analysis::MetricsReport& report);
json to_json(const analysis::CaseAReport& report);
json to_json(const analysis::CaseBReport& report);

// 12 significant digits; "nan" for missing values.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

struct SweepSpec {
    enum class Kind { five_station, mixed_random };
    Kind kind = Kind::five_station;
    std::vector<std::size_t> sizes;
    std::uint64_t seed = 0;
    double eta1 = 0.1, eta2 = 0.1, delta = 0.0;            // five_station
    std::size_t n_stations = 5, horizon = 10;               // mixed_random
    double p_h = 0.2;
};

SweepSpec parse_sweep(const json& doc);
SweepSpec load_sweep(const std::string& path);
// step_alpha | noisy_price | mixed
SweepSpec sweep_preset(std::string_view name);
json to_json(const SweepSpec& spec);

struct SweepRow {
    std::size_t coalition_size = 0;
    analysis::MetricsReport metrics;
};

// Sizes may be evaluated concurrently; rows come back in spec order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
std::string sweep_csv(const std::vector<SweepRow>& rows);
json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

struct TableRow {
    scenarios::TypeLabel first, second, outsider;
    analysis::MetricsReport metrics;
};

// "Coalition better" if M > 1, "Nash better" if M < 1, else "indeterminate".
std::string metric_verdict(const std::optional<double>& metric);

// All eight (coalition pair | outsider) assignments of the three-station preset.
std::vector<TableRow> three_station_table();
std::string format_table(const std::vector<TableRow>& rows);
json table_json(const std::vector<TableRow>& rows);

// Group spec: "all", "coalition", "outside" or a 1-based list "1,3".
StationSet parse_group(std::string_view spec, const ScenarioFile& file);

// Condition report for case 'a' or 'b'; PreconditionError if the hypotheses fail.
json check(const ScenarioFile& file, char which_case, std::string_view group_spec);

}  // namespace evgame::io
