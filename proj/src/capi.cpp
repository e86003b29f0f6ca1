#include "evgame/evgame.h"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "evgame/errors.hpp"
#include "evgame/io.hpp"

struct evg_scenario {
    evgame::io::ScenarioFile file;
};

struct evg_record {
    evgame::io::ResultRecord record;
    evgame::Vector cost_nash;
    evgame::Vector cost_cnash;
};

namespace {

thread_local std::string g_last_error;

evg_status fail(evg_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
evg_status guarded(F&& body)
{
    try {
        g_last_error.clear();
        body();
        return EVG_OK;
    } catch (const evgame::SchemaError& e) {
        return fail(EVG_ERR_SCHEMA, e.what());
    } catch (const evgame::PreconditionError& e) {
        return fail(EVG_ERR_PRECONDITION, e.what());
    } catch (const evgame::NumericalError& e) {
        return fail(EVG_ERR_NUMERICAL, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(EVG_ERR_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(EVG_ERR_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(EVG_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(EVG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(EVG_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(bool ok, const char* what)
{
    if (!ok) throw std::invalid_argument(what);
}

evgame::io::SweepSpec resolve_sweep(const char* spec_path, const char* preset, const size_t* sizes, size_t n_sizes,
                                    const uint64_t* seed)
{
    require((spec_path == nullptr) != (preset == nullptr), "exactly one of spec path / preset is required");
    auto spec = spec_path ? evgame::io::load_sweep(spec_path) : evgame::io::sweep_preset(preset);
    if (sizes != nullptr && n_sizes > 0) spec.sizes.assign(sizes, sizes + n_sizes);
    if (seed != nullptr) spec.seed = *seed;
    return spec;
}

}  // namespace

extern "C" {

const char* evg_version(void)
{
    return "1.0.0";
}

const char* evg_last_error(void)
{
    return g_last_error.c_str();
}

const char* evg_status_name(evg_status status)
{
    switch (status) {
        case EVG_OK: return "ok";
        case EVG_ERR_IO: return "io";
        case EVG_ERR_SCHEMA: return "schema";
        case EVG_ERR_PRECONDITION: return "precondition";
        case EVG_ERR_NUMERICAL: return "numerical";
        case EVG_ERR_ARGUMENT: return "argument";
        case EVG_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void evg_string_free(char* s)
{
    std::free(s);
}

evg_status evg_scenario_load_file(const char* path, evg_scenario** out)
{
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new evg_scenario{evgame::io::load_scenario(path)};
    });
}

evg_status evg_scenario_load_string(const char* json_text, evg_scenario** out)
{
    return guarded([&] {
        require(json_text != nullptr && out != nullptr, "null argument");
        *out = new evg_scenario{evgame::io::parse_scenario_text(json_text)};
    });
}

void evg_scenario_free(evg_scenario* scenario)
{
    delete scenario;
}

size_t evg_scenario_n_stations(const evg_scenario* scenario)
{
    return scenario ? scenario->file.n_stations : 0;
}

size_t evg_scenario_horizon(const evg_scenario* scenario)
{
    return scenario ? scenario->file.horizon : 0;
}

size_t evg_scenario_coalition_count(const evg_scenario* scenario)
{
    return scenario ? scenario->file.coalitions.size() : 0;
}

evg_status evg_scenario_clear_coalitions(evg_scenario* scenario)
{
    return guarded([&] {
        require(scenario != nullptr, "null scenario");
        scenario->file.coalitions.clear();
    });
}

evg_status evg_scenario_add_coalition(evg_scenario* scenario, const size_t* stations, size_t count)
{
    return guarded([&] {
        require(scenario != nullptr && stations != nullptr && count > 0, "coalition must be nonempty");
        std::vector<size_t> c(stations, stations + count);
        for (auto i : c)
            if (i < 1 || i > scenario->file.n_stations)
                throw std::invalid_argument("coalition station " + std::to_string(i) + " out of range 1.." +
                                            std::to_string(scenario->file.n_stations));
        auto next = scenario->file;
        next.coalitions.push_back(c);
        next.structure().validate(next.n_stations);
        scenario->file = std::move(next);
    });
}

evg_status evg_scenario_to_json(const evg_scenario* scenario, char** out)
{
    return guarded([&] {
        require(scenario != nullptr && out != nullptr, "null argument");
        *out = dup_string(evgame::io::to_json(scenario->file).dump(2));
    });
}

evg_status evg_scenario_digest(const evg_scenario* scenario, char** out)
{
    return guarded([&] {
        require(scenario != nullptr && out != nullptr, "null argument");
        *out = dup_string(evgame::io::digest(scenario->file));
    });
}

evg_status evg_solve(const evg_scenario* scenario, evg_record** out)
{
    return guarded([&] {
        require(scenario != nullptr && out != nullptr, "null argument");
        auto rec = evgame::io::solve(scenario->file);
        const auto s = rec.scenario.to_scenario();
        auto cost_nash = evgame::cost_breakdown(s, rec.nash.profile).per_station;
        auto cost_cnash = evgame::cost_breakdown(s, rec.cnash.profile).per_station;
        *out = new evg_record{std::move(rec), std::move(cost_nash), std::move(cost_cnash)};
    });
}

void evg_record_free(evg_record* record)
{
    delete record;
}

evg_status evg_record_profile(const evg_record* record, evg_regime regime, double* out, size_t len)
{
    return guarded([&] {
        require(record != nullptr && out != nullptr, "null argument");
        const auto& x = (regime == EVG_NASH ? record->record.nash : record->record.cnash).profile.charges;
        require(len >= static_cast<size_t>(x.size()), "output buffer too small");
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index t = 0; t < x.cols(); ++t) out[i * x.cols() + t] = x(i, t);
    });
}

evg_status evg_record_station_costs(const evg_record* record, evg_regime regime, double* out, size_t len)
{
    return guarded([&] {
        require(record != nullptr && out != nullptr, "null argument");
        const auto& c = regime == EVG_NASH ? record->cost_nash : record->cost_cnash;
        require(len >= static_cast<size_t>(c.size()), "output buffer too small");
        for (Eigen::Index i = 0; i < c.size(); ++i) out[i] = c[i];
    });
}

evg_status evg_record_residual(const evg_record* record, evg_regime regime, double* out)
{
    return guarded([&] {
        require(record != nullptr && out != nullptr, "null argument");
        *out = (regime == EVG_NASH ? record->record.nash : record->record.cnash).kkt_residual;
    });
}

evg_status evg_record_metrics(const evg_record* record, double metrics[3], int defined[3], int* negative_cost_flag)
{
    return guarded([&] {
        require(record != nullptr && metrics != nullptr && defined != nullptr, "null argument");
        if (!record->record.metrics) throw std::invalid_argument("record has no coalition, metrics are undefined");
        const auto& m = *record->record.metrics;
        const std::optional<double>* values[3] = {&m.m_all, &m.m_coalition, &m.m_outside};
        for (int k = 0; k < 3; ++k) {
            defined[k] = values[k]->has_value() ? 1 : 0;
            metrics[k] = values[k]->value_or(0.0);
        }
        if (negative_cost_flag != nullptr) *negative_cost_flag = m.negative_cost_flag ? 1 : 0;
    });
}

evg_status evg_record_render(const evg_record* record, evg_format format, char** out)
{
    return guarded([&] {
        require(record != nullptr && out != nullptr, "null argument");
        if (format == EVG_FORMAT_CSV)
            *out = dup_string(evgame::io::to_csv(record->record));
        else
            *out = dup_string(evgame::io::to_json(record->record).dump(2) + "\n");
    });
}

evg_status evg_check(const evg_scenario* scenario, char which_case, const char* group, char** out_json)
{
    return guarded([&] {
        require(scenario != nullptr && out_json != nullptr, "null argument");
        *out_json = dup_string(evgame::io::check(scenario->file, which_case, group ? group : "all").dump(2) + "\n");
    });
}

evg_status evg_sweep(const char* spec_path, const char* preset, const size_t* sizes, size_t n_sizes,
                     const uint64_t* seed, evg_format format, char** out)
{
    return guarded([&] {
        require(out != nullptr, "null argument");
        const auto spec = resolve_sweep(spec_path, preset, sizes, n_sizes, seed);
        const auto rows = evgame::io::run_sweep(spec);
        if (format == EVG_FORMAT_CSV)
            *out = dup_string(evgame::io::sweep_csv(rows));
        else
            *out = dup_string(evgame::io::sweep_json(spec, rows).dump(2) + "\n");
    });
}

evg_status evg_sweep_spec(const char* spec_path, const char* preset, const size_t* sizes, size_t n_sizes,
                          const uint64_t* seed, char** out_json)
{
    return guarded([&] {
        require(out_json != nullptr, "null argument");
        const auto spec = resolve_sweep(spec_path, preset, sizes, n_sizes, seed);
        *out_json = dup_string(evgame::io::to_json(spec).dump(2) + "\n");
    });
}

evg_status evg_table(const char* preset, evg_format format, char** out)
{
    return guarded([&] {
        require(out != nullptr, "null argument");
        require(preset != nullptr && std::string(preset) == "three_station", "table preset must be three_station");
        const auto rows = evgame::io::three_station_table();
        if (format == EVG_FORMAT_JSON)
            *out = dup_string(evgame::io::table_json(rows).dump(2) + "\n");
        else
            *out = dup_string(evgame::io::format_table(rows));
    });
}

}  // extern "C"
