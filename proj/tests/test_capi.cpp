#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "evgame/evgame.h"

namespace {

const char* kTwoStation = R"({
  "schema_version": 1, "n_stations": 2, "horizon": 2,
  "price_intercepts": [0.0, 1.0], "price_slope": 1.0,
  "sensitivities": [1.0, 2.0], "demands": [1.0, 1.0],
  "nominal_profiles": [[0.5, 0.5], [0.5, 0.5]],
  "coalitions": [[1, 2]]
})";

std::string take(char* s)
{
    std::string out = s ? s : "";
    evg_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("load, solve and read back")
{
    evg_scenario* sc = nullptr;
    REQUIRE(evg_scenario_load_string(kTwoStation, &sc) == EVG_OK);
    CHECK(evg_scenario_n_stations(sc) == 2);
    CHECK(evg_scenario_horizon(sc) == 2);
    CHECK(evg_scenario_coalition_count(sc) == 1);

    evg_record* rec = nullptr;
    REQUIRE(evg_solve(sc, &rec) == EVG_OK);
    double x[4];
    REQUIRE(evg_record_profile(rec, EVG_CNASH, x, 4) == EVG_OK);
    CHECK(x[0] == doctest::Approx(0.625));
    CHECK(x[1] == doctest::Approx(0.375));
    CHECK(x[2] == doctest::Approx(0.5625));
    CHECK(x[3] == doctest::Approx(0.4375));
    CHECK(evg_record_profile(rec, EVG_CNASH, x, 3) == EVG_ERR_ARGUMENT);

    double costs[2];
    REQUIRE(evg_record_station_costs(rec, EVG_NASH, costs, 2) == EVG_OK);
    double residual = -1.0;
    REQUIRE(evg_record_residual(rec, EVG_CNASH, &residual) == EVG_OK);
    CHECK(residual <= 1e-12);

    double m[3];
    int defined[3];
    int negative = -1;
    REQUIRE(evg_record_metrics(rec, m, defined, &negative) == EVG_OK);
    CHECK(defined[0] == 1);
    CHECK(defined[2] == 0);
    CHECK(negative == 0);
    CHECK(m[0] > 1.0);

    char* text = nullptr;
    REQUIRE(evg_record_render(rec, EVG_FORMAT_CSV, &text) == EVG_OK);
    CHECK(take(text).rfind("station,slot,x_nash,x_cnash\n1,1,", 0) == 0);

    char* digest = nullptr;
    REQUIRE(evg_scenario_digest(sc, &digest) == EVG_OK);
    CHECK(take(digest).size() == 24);

    evg_record_free(rec);
    evg_scenario_free(sc);
}

TEST_CASE("coalition editing")
{
    evg_scenario* sc = nullptr;
    REQUIRE(evg_scenario_load_string(kTwoStation, &sc) == EVG_OK);
    REQUIRE(evg_scenario_clear_coalitions(sc) == EVG_OK);
    CHECK(evg_scenario_coalition_count(sc) == 0);
    const size_t bad[] = {3};
    CHECK(evg_scenario_add_coalition(sc, bad, 1) == EVG_ERR_ARGUMENT);
    CHECK(std::string(evg_last_error()).find("out of range") != std::string::npos);
    const size_t one[] = {1};
    REQUIRE(evg_scenario_add_coalition(sc, one, 1) == EVG_OK);
    CHECK(evg_scenario_add_coalition(sc, one, 1) == EVG_ERR_ARGUMENT);
    CHECK(evg_scenario_coalition_count(sc) == 1);

    evg_record* rec = nullptr;
    REQUIRE(evg_solve(sc, &rec) == EVG_OK);
    double m[3];
    int defined[3];
    REQUIRE(evg_record_metrics(rec, m, defined, nullptr) == EVG_OK);
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 1.0);
    CHECK(m[2] == 1.0);
    evg_record_free(rec);
    evg_scenario_free(sc);
}

TEST_CASE("errors map to status codes")
{
    evg_scenario* sc = nullptr;
    CHECK(evg_scenario_load_file("/nonexistent/file.json", &sc) == EVG_ERR_IO);
    CHECK(evg_scenario_load_string("{", &sc) == EVG_ERR_SCHEMA);
    CHECK(std::string(evg_status_name(EVG_ERR_SCHEMA)) == "schema");

    std::string bad = kTwoStation;
    bad.replace(bad.find("\"price_slope\": 1.0"), 18, "\"price_slope\": 0.0");
    REQUIRE(evg_scenario_load_string(bad.c_str(), &sc) == EVG_OK);
    evg_record* rec = nullptr;
    CHECK(evg_solve(sc, &rec) == EVG_ERR_PRECONDITION);
    CHECK(rec == nullptr);
    evg_scenario_free(sc);

    CHECK(evg_solve(nullptr, &rec) == EVG_ERR_ARGUMENT);
    char* out = nullptr;
    CHECK(evg_table("other", EVG_FORMAT_TEXT, &out) == EVG_ERR_ARGUMENT);
    CHECK(evg_sweep(nullptr, nullptr, nullptr, 0, nullptr, EVG_FORMAT_CSV, &out) == EVG_ERR_ARGUMENT);
}

TEST_CASE("check, sweep and table through the C interface")
{
    evg_scenario* sc = nullptr;
    REQUIRE(evg_scenario_load_file(EVGAME_CONFIG_DIR "/case_b_two_station.json", &sc) == EVG_OK);
    char* out = nullptr;
    REQUIRE(evg_check(sc, 'b', "all", &out) == EVG_OK);
    CHECK(take(out).find("\"coalition_better\"") != std::string::npos);
    CHECK(evg_check(sc, 'a', "all", &out) == EVG_ERR_PRECONDITION);
    evg_scenario_free(sc);

    const size_t sizes[] = {1, 2};
    const uint64_t seed = 4;
    REQUIRE(evg_sweep(nullptr, "noisy_price", sizes, 2, &seed, EVG_FORMAT_CSV, &out) == EVG_OK);
    const auto first = take(out);
    REQUIRE(evg_sweep(nullptr, "noisy_price", sizes, 2, &seed, EVG_FORMAT_CSV, &out) == EVG_OK);
    CHECK(take(out) == first);
    REQUIRE(evg_sweep_spec(nullptr, "noisy_price", sizes, 2, &seed, &out) == EVG_OK);
    CHECK(take(out).find("\"seed\": 4") != std::string::npos);

    REQUIRE(evg_table("three_station", EVG_FORMAT_TEXT, &out) == EVG_OK);
    CHECK(take(out).find("HH | L") != std::string::npos);
    CHECK(std::string(evg_version()) == "1.0.0");
}
