// evgame: batch front end for the charging-game solver.
//
//   evgame solve --config scenario.json [--coalition 1,2 ...] [--format json|csv] [--out FILE]
//   evgame sweep (--config sweep.json | --preset step_alpha|noisy_price|mixed) [--sizes 1,2] [--seed N]
//                [--format csv|json] [--out FILE]
//   evgame table [--preset three_station] [--format text|json] [--out FILE]
//   evgame check --config scenario.json --case a|b [--group all|coalition|outside|1,2] [--coalition ...]
//
// Exit codes: 0 ok, 1 io, 2 schema, 3 precondition, 4 numerical, 5 bad argument.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evgame/evgame.h"

namespace {

struct CString {
    char* p = nullptr;
    ~CString() { evg_string_free(p); }
};

struct ScenarioHandle {
    evg_scenario* p = nullptr;
    ~ScenarioHandle() { evg_scenario_free(p); }
};

struct RecordHandle {
    evg_record* p = nullptr;
    ~RecordHandle() { evg_record_free(p); }
};

int report(evg_status status)
{
    if (status != EVG_OK) std::cerr << "evgame: " << evg_status_name(status) << " error: " << evg_last_error() << '\n';
    return static_cast<int>(status);
}

int emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "evgame: io error: cannot write " << out_path << '\n';
        return EVG_ERR_IO;
    }
    out << text;
    return 0;
}

std::vector<size_t> parse_list(const std::string& text)
{
    std::vector<size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto token = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        const unsigned long value = std::stoul(token, &used);
        if (used != token.size()) throw std::invalid_argument("bad number '" + token + "'");
        out.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int load_with_coalitions(const std::string& config, const std::vector<std::string>& coalitions, ScenarioHandle& h)
{
    if (auto st = evg_scenario_load_file(config.c_str(), &h.p); st != EVG_OK) return report(st);
    if (coalitions.empty()) return 0;
    if (auto st = evg_scenario_clear_coalitions(h.p); st != EVG_OK) return report(st);
    for (const auto& c : coalitions) {
        std::vector<size_t> stations;
        try {
            stations = parse_list(c);
        } catch (const std::exception&) {
            std::cerr << "evgame: argument error: bad --coalition '" << c << "'\n";
            return EVG_ERR_ARGUMENT;
        }
        if (auto st = evg_scenario_add_coalition(h.p, stations.data(), stations.size()); st != EVG_OK)
            return report(st);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nash / coalition-Nash equilibria of the EV-charging aggregative game"};
    app.require_subcommand(1);

    std::string config, out_path, format, preset, sizes_text, group = "all", which_case;
    std::vector<std::string> coalitions;
    std::optional<std::uint64_t> seed;

    auto* solve = app.add_subcommand("solve", "Compute Nash and C-Nash equilibria, costs and metrics");
    solve->add_option("--config", config, "Scenario file")->required();
    solve->add_option("--coalition", coalitions, "Coalition as 1-based list, repeatable (replaces the file's)");
    solve->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    solve->add_option("--out", out_path, "Output file (default stdout)");
    solve->add_option("--seed", seed, "Accepted for interface uniformity; unused");

    auto* sweep = app.add_subcommand("sweep", "Metrics across coalition sizes");
    sweep->add_option("--config", config, "Sweep spec file");
    sweep->add_option("--preset", preset, "step_alpha, noisy_price or mixed");
    sweep->add_option("--sizes", sizes_text, "Coalition sizes, e.g. 1,2,3");
    sweep->add_option("--seed", seed, "Seed override");
    sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
    sweep->add_option("--out", out_path, "Output file (default stdout)");
    sweep->add_option("--coalition", coalitions, "Not used by sweeps");

    auto* table = app.add_subcommand("table", "Three-station composition table");
    table->add_option("--preset", preset, "three_station");
    table->add_option("--config", config, "Not used by table");
    table->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json", "csv"}));
    table->add_option("--out", out_path, "Output file (default stdout)");
    table->add_option("--seed", seed, "Not used by table");
    table->add_option("--coalition", coalitions, "Not used by table");

    auto* check = app.add_subcommand("check", "Evaluate the Case A / Case B welfare condition");
    check->add_option("--config", config, "Scenario file")->required();
    check->add_option("--case", which_case, "a or b")->required()->check(CLI::IsMember({"a", "b"}));
    check->add_option("--group", group, "all, coalition, outside or 1-based list");
    check->add_option("--coalition", coalitions, "Coalition override, repeatable");
    check->add_option("--format", format, "json")->check(CLI::IsMember({"json"}));
    check->add_option("--out", out_path, "Output file (default stdout)");
    check->add_option("--seed", seed, "Not used by check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EVG_ERR_ARGUMENT;
    }

    if (solve->parsed()) {
        ScenarioHandle scenario;
        if (int rc = load_with_coalitions(config, coalitions, scenario)) return rc;
        RecordHandle record;
        if (auto st = evg_solve(scenario.p, &record.p); st != EVG_OK) return report(st);
        CString text;
        const auto fmt = format == "csv" ? EVG_FORMAT_CSV : EVG_FORMAT_JSON;
        if (auto st = evg_record_render(record.p, fmt, &text.p); st != EVG_OK) return report(st);
        return emit(text.p, out_path);
    }

    if (sweep->parsed()) {
        std::vector<size_t> sizes;
        if (!sizes_text.empty()) {
            try {
                sizes = parse_list(sizes_text);
            } catch (const std::exception&) {
                std::cerr << "evgame: argument error: bad --sizes '" << sizes_text << "'\n";
                return EVG_ERR_ARGUMENT;
            }
        }
        const char* spec = config.empty() ? nullptr : config.c_str();
        const char* pre = preset.empty() ? nullptr : preset.c_str();
        const std::uint64_t* seed_ptr = seed ? &*seed : nullptr;
        const auto fmt = format == "json" ? EVG_FORMAT_JSON : EVG_FORMAT_CSV;
        CString text;
        if (auto st = evg_sweep(spec, pre, sizes.data(), sizes.size(), seed_ptr, fmt, &text.p); st != EVG_OK)
            return report(st);
        if (int rc = emit(text.p, out_path)) return rc;
        if (fmt == EVG_FORMAT_CSV && !out_path.empty()) {
            CString meta;
            if (auto st = evg_sweep_spec(spec, pre, sizes.data(), sizes.size(), seed_ptr, &meta.p); st != EVG_OK)
                return report(st);
            return emit(meta.p, out_path + ".meta.json");
        }
        return 0;
    }

    if (table->parsed()) {
        CString text;
        const auto fmt = format == "json" ? EVG_FORMAT_JSON : EVG_FORMAT_TEXT;
        const std::string name = preset.empty() ? "three_station" : preset;
        if (auto st = evg_table(name.c_str(), fmt, &text.p); st != EVG_OK) return report(st);
        return emit(text.p, out_path);
    }

    if (check->parsed()) {
        ScenarioHandle scenario;
        if (int rc = load_with_coalitions(config, coalitions, scenario)) return rc;
        CString text;
        if (auto st = evg_check(scenario.p, which_case[0], group.c_str(), &text.p); st != EVG_OK) return report(st);
        return emit(text.p, out_path);
    }
    return 0;
}
