#include "evgame/io.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "evgame/errors.hpp"
#include "evgame/oracle.hpp"

namespace evgame::io {

namespace {

using Index = Eigen::Index;

const std::set<std::string> kScenarioKeys = {
    "schema_version", "n_stations",      "horizon",          "price_intercepts", "price_slope",
    "sensitivities",  "demands",         "nominal_profiles", "alpha",            "coalitions"};

const json& require(const json& doc, const std::string& key)
{
    if (!doc.contains(key)) throw SchemaError(key, "missing required field");
    return doc.at(key);
}

std::size_t positive_integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) throw SchemaError(path, "must be a positive integer");
    return v.get<std::size_t>();
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) throw SchemaError(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(path, "must be finite");
    return x;
}

std::vector<double> number_array(const json& v, const std::string& path, std::size_t expected)
{
    if (!v.is_array()) throw SchemaError(path, "must be an array of numbers");
    if (v.size() != expected)
        throw SchemaError(path, "has " + std::to_string(v.size()) + " entries, expected " + std::to_string(expected));
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

Vector to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> from_vector(const Vector& v)
{
    return {v.data(), v.data() + v.size()};
}

json matrix_json(const Matrix& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) rows.push_back(from_vector(m.row(i).transpose()));
    return rows;
}

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::vector<std::size_t> one_based(const StationSet& s)
{
    std::vector<std::size_t> out;
    for (auto i : s) out.push_back(i + 1);
    return out;
}

json group_costs_json(const analysis::GroupCosts& c)
{
    return {{"all", c.all}, {"coalition", c.coalition}, {"outside", c.outside}};
}

json direct_json(const analysis::DirectComparison& d)
{
    return {{"cost_nash", d.cost_nash}, {"cost_cnash", d.cost_cnash}, {"nash_not_worse", d.nash_not_worse}};
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_text(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------- scenario file

Scenario ScenarioFile::to_scenario() const
{
    Scenario s;
    s.price_intercepts = to_vector(price_intercepts);
    s.price_slope = price_slope;
    s.sensitivities = to_vector(sensitivities);
    s.demands = to_vector(demands);
    const auto n = static_cast<Index>(n_stations);
    const auto t = static_cast<Index>(horizon);
    if (alpha) {
        s.nominal_profiles = s.demands * to_vector(*alpha).transpose();
    } else if (nominal_profiles) {
        s.nominal_profiles.resize(n, t);
        for (Index i = 0; i < n; ++i)
            for (Index k = 0; k < t; ++k)
                s.nominal_profiles(i, k) = (*nominal_profiles)[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    s.validate();
    return s;
}

CoalitionStructure ScenarioFile::structure() const
{
    std::vector<StationSet> sets;
    for (const auto& c : coalitions) {
        StationSet s;
        for (auto i : c) s.push_back(i - 1);
        sets.push_back(std::move(s));
    }
    return CoalitionStructure(std::move(sets));
}

ScenarioFile ScenarioFile::from_scenario(const Scenario& scenario, const CoalitionStructure& structure)
{
    ScenarioFile f;
    f.n_stations = scenario.n_stations();
    f.horizon = scenario.horizon();
    f.price_intercepts = from_vector(scenario.price_intercepts);
    f.price_slope = scenario.price_slope;
    f.sensitivities = from_vector(scenario.sensitivities);
    f.demands = from_vector(scenario.demands);
    std::vector<std::vector<double>> rows;
    for (Index i = 0; i < scenario.nominal_profiles.rows(); ++i)
        rows.push_back(from_vector(scenario.nominal_profiles.row(i).transpose()));
    f.nominal_profiles = std::move(rows);
    for (const auto& c : structure.coalitions()) f.coalitions.push_back(one_based(c));
    return f;
}

ScenarioFile parse_scenario(const json& doc)
{
    if (!doc.is_object()) throw SchemaError("$", "scenario must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!kScenarioKeys.count(key)) throw SchemaError(key, "unknown field");

    ScenarioFile f;
    const auto& version = require(doc, "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
        throw SchemaError("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
    f.schema_version = version.get<int>();
    f.n_stations = positive_integer(require(doc, "n_stations"), "n_stations");
    f.horizon = positive_integer(require(doc, "horizon"), "horizon");
    f.price_intercepts = number_array(require(doc, "price_intercepts"), "price_intercepts", f.horizon);

    const auto& slope = require(doc, "price_slope");
    if (slope.is_array()) throw SchemaError("price_slope", "must be a scalar; per-slot slopes are not supported");
    f.price_slope = number(slope, "price_slope");

    f.sensitivities = number_array(require(doc, "sensitivities"), "sensitivities", f.n_stations);
    f.demands = number_array(require(doc, "demands"), "demands", f.n_stations);

    const bool has_nominal = doc.contains("nominal_profiles");
    const bool has_alpha = doc.contains("alpha");
    if (has_nominal == has_alpha)
        throw SchemaError(has_alpha ? "alpha" : "nominal_profiles",
                          "exactly one of nominal_profiles / alpha must be present");
    if (has_alpha) {
        auto alpha = number_array(doc.at("alpha"), "alpha", f.horizon);
        double sum = 0.0;
        for (std::size_t k = 0; k < alpha.size(); ++k) {
            if (alpha[k] < 0.0) throw SchemaError("alpha[" + std::to_string(k) + "]", "must be nonnegative");
            sum += alpha[k];
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "entries must sum to 1 (got " << sum << ")";
            throw SchemaError("alpha", msg.str());
        }
        f.alpha = std::move(alpha);
    } else {
        const auto& rows = doc.at("nominal_profiles");
        if (!rows.is_array() || rows.size() != f.n_stations)
            throw SchemaError("nominal_profiles", "must be an array of " + std::to_string(f.n_stations) + " rows");
        std::vector<std::vector<double>> m;
        for (std::size_t i = 0; i < f.n_stations; ++i) {
            const std::string path = "nominal_profiles[" + std::to_string(i) + "]";
            auto row = number_array(rows[i], path, f.horizon);
            double sum = 0.0;
            for (double x : row) sum += x;
            if (std::abs(sum - f.demands[i]) > kFeasibilityTolerance * std::max(1.0, std::abs(f.demands[i])))
                throw SchemaError(path, "row sums to " + std::to_string(sum) + " but demands[" + std::to_string(i) +
                                            "] is " + std::to_string(f.demands[i]));
            m.push_back(std::move(row));
        }
        f.nominal_profiles = std::move(m);
    }

    if (doc.contains("coalitions")) {
        const auto& cs = doc.at("coalitions");
        if (!cs.is_array()) throw SchemaError("coalitions", "must be an array of index arrays");
        std::vector<bool> seen(f.n_stations + 1, false);
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const std::string path = "coalitions[" + std::to_string(k) + "]";
            if (!cs[k].is_array() || cs[k].empty()) throw SchemaError(path, "must be a nonempty array of station numbers");
            std::vector<std::size_t> c;
            for (const auto& v : cs[k]) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 1 ||
                    v.get<std::size_t>() > f.n_stations)
                    throw SchemaError(path, "station numbers must be integers in 1.." + std::to_string(f.n_stations));
                const auto i = v.get<std::size_t>();
                if (seen[i]) throw SchemaError(path, "station " + std::to_string(i) + " is in more than one coalition");
                seen[i] = true;
                c.push_back(i);
            }
            f.coalitions.push_back(std::move(c));
        }
    }
    return f;
}

ScenarioFile parse_scenario_text(std::string_view text)
{
    return parse_scenario(parse_json_text(text));
}

ScenarioFile load_scenario(const std::string& path)
{
    return parse_scenario_text(read_file(path));
}

json to_json(const ScenarioFile& f)
{
    json doc = {{"schema_version", f.schema_version},
                {"n_stations", f.n_stations},
                {"horizon", f.horizon},
                {"price_intercepts", f.price_intercepts},
                {"price_slope", f.price_slope},
                {"sensitivities", f.sensitivities},
                {"demands", f.demands},
                {"coalitions", f.coalitions}};
    if (f.alpha) doc["alpha"] = *f.alpha;
    if (f.nominal_profiles) doc["nominal_profiles"] = *f.nominal_profiles;
    return doc;
}

std::string digest(const ScenarioFile& file)
{
    const std::string canonical = to_json(file).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
    return buf;
}

std::vector<std::size_t> parse_index_list(std::string_view text)
{
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (token.empty()) throw std::invalid_argument("empty station number in list '" + std::string(text) + "'");
        std::size_t value = 0;
        for (char c : token) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad station number '" + std::string(token) + "'");
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        if (value == 0) throw std::invalid_argument("station numbers are 1-based");
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------- solve

ResultRecord solve(const ScenarioFile& file)
{
    const auto start = std::chrono::steady_clock::now();
    ResultRecord rec;
    rec.scenario = file;
    rec.scenario_digest = digest(file);

    const Scenario scenario = file.to_scenario();
    const CoalitionStructure structure = file.structure();
    structure.validate(scenario.n_stations());

    rec.nash = nash_closed_form(scenario);
    rec.cnash = c_nash_closed_form(scenario, structure);
    rec.oracle_residual_nash = oracle::kkt_residual(scenario, CoalitionStructure{}, rec.nash.profile);
    rec.oracle_residual_cnash = oracle::kkt_residual(scenario, structure, rec.cnash.profile);

    if (!structure.empty()) {
        rec.metrics = analysis::metrics_from_profiles(scenario, structure.members(), rec.nash.profile, rec.cnash.profile);
        const auto n = scenario.n_stations();
        const StationSet groups[3] = {all_stations(n), structure.members(), complement(structure.members(), n)};
        const bool case_a = analysis::has_constant_intercepts(scenario);
        const bool case_b = analysis::has_uniform_nominal(scenario);
        for (int g = 0; g < 3; ++g) {
            if (case_a) {
                try {
                    rec.case_a[g] = analysis::case_a_condition(scenario, structure, groups[g]);
                } catch (const PreconditionError&) {
                    // not of rank-1 form; Case A does not apply
                }
            }
            if (case_b) rec.case_b[g] = analysis::case_b_condition(scenario, structure, groups[g]);
        }
    }
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

json to_json(const analysis::MetricsReport& m)
{
    return {{"m_all", optional_number(m.m_all)},
            {"m_coalition", optional_number(m.m_coalition)},
            {"m_outside", optional_number(m.m_outside)},
            {"cost_nash", group_costs_json(m.cost_nash)},
            {"cost_cnash", group_costs_json(m.cost_cnash)},
            {"station_cost_nash", from_vector(m.station_cost_nash)},
            {"station_cost_cnash", from_vector(m.station_cost_cnash)},
            {"negative_cost_flag", m.negative_cost_flag}};
}

json to_json(const analysis::CaseAReport& r)
{
    return {{"case", "a"},
            {"group", one_based(r.group)},
            {"alpha", from_vector(r.alpha)},
            {"F", from_vector(r.f_terms)},
            {"F_energy", r.f_energy},
            {"delta_dagger", from_vector(r.delta_dagger)},
            {"delta_star", from_vector(r.delta_star)},
            {"delta_dagger_total", r.delta_dagger_total},
            {"delta_star_total", r.delta_star_total},
            {"f_dagger", from_vector(r.f_dagger)},
            {"f_star", from_vector(r.f_star)},
            {"condition_gap", r.condition_gap},
            {"verdict", analysis::to_string(r.verdict)},
            {"direct", direct_json(r.direct)}};
}

json to_json(const analysis::CaseBReport& r)
{
    return {{"case", "b"},
            {"group", one_based(r.group)},
            {"G", from_vector(r.g_terms)},
            {"A", r.a_total},
            {"G_energy", r.g_energy},
            {"h", optional_number(r.h_value)},
            {"gamma_weights_dagger", from_vector(r.gamma_weights_dagger)},
            {"gamma_weights_star", from_vector(r.gamma_weights_star)},
            {"gamma_dagger_total", r.gamma_dagger_total},
            {"gamma_star_total", r.gamma_star_total},
            {"gamma_dagger_group", r.gamma_dagger_group},
            {"gamma_star_group", r.gamma_star_group},
            {"g_dagger", r.g_dagger},
            {"g_star", r.g_star},
            {"condition_gap", r.condition_gap},
            {"verdict", analysis::to_string(r.verdict)},
            {"direct", direct_json(r.direct)}};
}

json to_json(const ResultRecord& rec)
{
    const Scenario scenario = rec.scenario.to_scenario();
    const auto regime = [&](const EquilibriumResult& r) {
        return json{{"method", to_string(r.method)},
                    {"profile", matrix_json(r.profile.charges)},
                    {"station_costs", from_vector(cost_breakdown(scenario, r.profile).per_station)},
                    {"multipliers", from_vector(r.multipliers)},
                    {"kkt_residual", r.kkt_residual}};
    };
    json doc = {{"scenario_digest", rec.scenario_digest},
                {"scenario", to_json(rec.scenario)},
                {"coalitions", rec.scenario.coalitions},
                {"nash", regime(rec.nash)},
                {"cnash", regime(rec.cnash)},
                {"residuals",
                 {{"nash", rec.nash.kkt_residual},
                  {"cnash", rec.cnash.kkt_residual},
                  {"oracle_nash", rec.oracle_residual_nash},
                  {"oracle_cnash", rec.oracle_residual_cnash}}},
                {"metrics", rec.metrics ? to_json(*rec.metrics) : json(nullptr)},
                {"wall_time_s", rec.wall_time_s}};
    json conditions = json::object();
    const char* names[3] = {"all", "coalition", "outside"};
    for (int g = 0; g < 3; ++g) {
        if (rec.case_a[g]) conditions["case_a"][names[g]] = to_json(*rec.case_a[g]);
        if (rec.case_b[g]) conditions["case_b"][names[g]] = to_json(*rec.case_b[g]);
    }
    doc["conditions"] = conditions.empty() ? json(nullptr) : conditions;
    return doc;
}

std::string to_csv(const ResultRecord& rec)
{
    std::string out = "station,slot,x_nash,x_cnash\n";
    const auto& xs = rec.nash.profile.charges;
    const auto& xd = rec.cnash.profile.charges;
    for (Index i = 0; i < xs.rows(); ++i)
        for (Index t = 0; t < xs.cols(); ++t)
            out += std::to_string(i + 1) + "," + std::to_string(t + 1) + "," + format_number(xs(i, t)) + "," +
                   format_number(xd(i, t)) + "\n";
    return out;
}

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string format_number(const std::optional<double>& value)
{
    return value ? format_number(*value) : "nan";
}

// ---------------------------------------------------------------- sweeps

SweepSpec parse_sweep(const json& doc)
{
    if (!doc.is_object()) throw SchemaError("$", "sweep spec must be a JSON object");
    const auto& version = require(doc, "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
        throw SchemaError("schema_version", "unsupported version");
    const auto& kind = require(doc, "sweep");
    if (!kind.is_string()) throw SchemaError("sweep", "must be \"five_station\" or \"mixed_random\"");

    SweepSpec s;
    const auto name = kind.get<std::string>();
    if (name == "five_station") {
        s.kind = SweepSpec::Kind::five_station;
        s.eta1 = number(require(doc, "eta1"), "eta1");
        s.eta2 = number(require(doc, "eta2"), "eta2");
        s.delta = number(require(doc, "delta"), "delta");
    } else if (name == "mixed_random") {
        s.kind = SweepSpec::Kind::mixed_random;
        s.n_stations = positive_integer(require(doc, "n_stations"), "n_stations");
        s.horizon = positive_integer(require(doc, "horizon"), "horizon");
        s.p_h = number(require(doc, "p_h"), "p_h");
        if (s.p_h < 0.0 || s.p_h > 1.0) throw SchemaError("p_h", "must lie in [0, 1]");
    } else {
        throw SchemaError("sweep", "must be \"five_station\" or \"mixed_random\"");
    }
    const auto& sizes = require(doc, "sizes");
    if (!sizes.is_array() || sizes.empty()) throw SchemaError("sizes", "must be a nonempty array of integers");
    for (std::size_t k = 0; k < sizes.size(); ++k)
        s.sizes.push_back(positive_integer(sizes[k], "sizes[" + std::to_string(k) + "]"));
    if (doc.contains("seed")) {
        const auto& seed = doc.at("seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
            throw SchemaError("seed", "must be a nonnegative integer");
        s.seed = seed.get<std::uint64_t>();
    }
    return s;
}

SweepSpec load_sweep(const std::string& path)
{
    return parse_sweep(parse_json_text(read_file(path)));
}

SweepSpec sweep_preset(std::string_view name)
{
    SweepSpec s;
    s.seed = 1;
    if (name == "step_alpha" || name == "noisy_price") {
        s.kind = SweepSpec::Kind::five_station;
        s.sizes = {1, 2, 3, 4, 5};
        if (name == "step_alpha") {
            s.eta1 = 0.4 / 10;
            s.eta2 = 1.6 / 10;
            s.delta = 0.0;
        } else {
            s.eta1 = 1.0 / 10;
            s.eta2 = 1.0 / 10;
            s.delta = 0.4;
        }
        return s;
    }
    if (name == "mixed") {
        s.kind = SweepSpec::Kind::mixed_random;
        s.n_stations = 5;
        s.horizon = 10;
        s.p_h = 0.2;
        s.sizes = {1, 2, 3, 4, 5};
        return s;
    }
    throw std::invalid_argument("unknown sweep preset '" + std::string(name) + "' (step_alpha|noisy_price|mixed)");
}

json to_json(const SweepSpec& s)
{
    json doc = {{"schema_version", kSchemaVersion}, {"sizes", s.sizes}, {"seed", s.seed}};
    if (s.kind == SweepSpec::Kind::five_station) {
        doc["sweep"] = "five_station";
        doc["eta1"] = s.eta1;
        doc["eta2"] = s.eta2;
        doc["delta"] = s.delta;
    } else {
        doc["sweep"] = "mixed_random";
        doc["n_stations"] = s.n_stations;
        doc["horizon"] = s.horizon;
        doc["p_h"] = s.p_h;
    }
    return doc;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
    const auto instance_for = [&spec](std::size_t k) {
        if (spec.kind == SweepSpec::Kind::five_station)
            return scenarios::build_five_station({k}, spec.eta1, spec.eta2, spec.delta, spec.seed).front();
        return scenarios::build_mixed_random(spec.n_stations, spec.horizon, k, spec.p_h, spec.seed);
    };
    // Build every instance up front so argument errors surface on this thread.
    std::vector<scenarios::Instance> instances;
    for (auto k : spec.sizes) instances.push_back(instance_for(k));

    std::vector<std::future<analysis::MetricsReport>> jobs;
    for (const auto& inst : instances)
        jobs.push_back(std::async(std::launch::async, [&inst] { return analysis::metrics(inst.first, inst.second); }));

    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < jobs.size(); ++k) rows.push_back({spec.sizes[k], jobs[k].get()});
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "coalition_size,m_all,m_coalition,m_outside,negative_cost_flag\n";
    for (const auto& r : rows)
        out += std::to_string(r.coalition_size) + "," + format_number(r.metrics.m_all) + "," +
               format_number(r.metrics.m_coalition) + "," + format_number(r.metrics.m_outside) + "," +
               (r.metrics.negative_cost_flag ? "1" : "0") + "\n";
    return out;
}

json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows)
{
    json out = {{"spec", to_json(spec)}, {"rows", json::array()}};
    for (const auto& r : rows) {
        json row = to_json(r.metrics);
        row["coalition_size"] = r.coalition_size;
        out["rows"].push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------- table

std::string metric_verdict(const std::optional<double>& metric)
{
    if (!metric || std::abs(*metric - 1.0) < analysis::kTieTolerance) return "indeterminate";
    return *metric > 1.0 ? "Coalition better" : "Nash better";
}

std::vector<TableRow> three_station_table()
{
    using scenarios::TypeLabel;
    std::vector<TableRow> rows;
    for (auto first : {TypeLabel::H, TypeLabel::L})
        for (auto second : {TypeLabel::H, TypeLabel::L})
            for (auto outsider : {TypeLabel::H, TypeLabel::L}) {
                const auto [scenario, structure] = scenarios::build_three_station(first, second, outsider);
                rows.push_back({first, second, outsider, analysis::metrics(scenario, structure)});
            }
    return rows;
}

std::string format_table(const std::vector<TableRow>& rows)
{
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-18s %-18s %-18s\n", "coalition", "M_[N]", "M_C", "M_[N]\\C");
    out << line;
    for (const auto& r : rows) {
        const std::string label = std::string(1, scenarios::to_char(r.first)) + scenarios::to_char(r.second) +
                                  " | " + scenarios::to_char(r.outsider);
        std::snprintf(line, sizeof line, "%-10s %-18s %-18s %-18s\n", label.c_str(),
                      metric_verdict(r.metrics.m_all).c_str(), metric_verdict(r.metrics.m_coalition).c_str(),
                      metric_verdict(r.metrics.m_outside).c_str());
        out << line;
    }
    return out.str();
}

json table_json(const std::vector<TableRow>& rows)
{
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"coalition", std::string(1, scenarios::to_char(r.first)) + scenarios::to_char(r.second)},
                       {"outsider", std::string(1, scenarios::to_char(r.outsider))},
                       {"verdict_all", metric_verdict(r.metrics.m_all)},
                       {"verdict_coalition", metric_verdict(r.metrics.m_coalition)},
                       {"verdict_outside", metric_verdict(r.metrics.m_outside)},
                       {"metrics", to_json(r.metrics)}});
    }
    return out;
}

// ---------------------------------------------------------------- check

StationSet parse_group(std::string_view spec, const ScenarioFile& file)
{
    const auto structure = file.structure();
    if (spec == "all") return all_stations(file.n_stations);
    if (spec == "coalition") return structure.members();
    if (spec == "outside") return complement(structure.members(), file.n_stations);
    StationSet out;
    for (auto i : parse_index_list(spec)) {
        if (i > file.n_stations) throw std::invalid_argument("group station " + std::to_string(i) + " out of range");
        out.push_back(i - 1);
    }
    return out;
}

json check(const ScenarioFile& file, char which_case, std::string_view group_spec)
{
    const Scenario scenario = file.to_scenario();
    const CoalitionStructure structure = file.structure();
    const StationSet group = parse_group(group_spec, file);
    json out;
    if (which_case == 'a' || which_case == 'A')
        out = to_json(analysis::case_a_condition(scenario, structure, group));
    else if (which_case == 'b' || which_case == 'B')
        out = to_json(analysis::case_b_condition(scenario, structure, group));
    else
        throw std::invalid_argument("case must be 'a' or 'b'");
    out["scenario_digest"] = digest(file);
    out["coalitions"] = file.coalitions;
    return out;
}

}  // namespace evgame::io
