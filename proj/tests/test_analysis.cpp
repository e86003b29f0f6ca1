#include <doctest.h>

#include "evgame/analysis.hpp"
#include "evgame/errors.hpp"
#include "evgame/scenarios.hpp"
#include "test_oracles.hpp"

using namespace evgame;
using namespace evgame::analysis;
using evgame::testing::make_scenario;
using evgame::testing::max_abs_diff;

namespace {

Scenario two_station()
{
    return make_scenario({0.0, 1.0}, 1.0, {1.0, 2.0}, {1.0, 1.0}, {{0.5, 0.5}, {0.5, 0.5}});
}

void check_iff(Verdict v, const DirectComparison& direct)
{
    if (v == Verdict::nash_better) CHECK(direct.nash_not_worse);
    if (v == Verdict::coalition_better) CHECK_FALSE(direct.nash_not_worse);
}

}  // namespace

TEST_CASE("singleton coalition gives unit metrics")
{
    const auto s = scenarios::random_instance(scenarios::RandomBounds{.n_min = 4}, 11).first;
    const auto m = metrics(s, CoalitionStructure::single({2}));
    CHECK(*m.m_all == 1.0);
    CHECK(*m.m_coalition == 1.0);
    CHECK(*m.m_outside == 1.0);
}

TEST_CASE("uniform game gives unit metrics")
{
    auto s = make_scenario({0.7, 0.7, 0.7}, 2.0, {1.0, 0.3, 4.0}, {3.0, 6.0, 1.5},
                           {{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, {0.5, 0.5, 0.5}});
    const auto m = metrics(s, CoalitionStructure::single({0, 1}));
    CHECK(*m.m_all == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*m.m_coalition == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*m.m_outside == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("metric ratios and group costs")
{
    const auto s = two_station();
    const auto m = metrics(s, CoalitionStructure::single({0}));
    CHECK_FALSE(m.negative_cost_flag);
    const auto full = metrics(s, CoalitionStructure::single({0, 1}));
    CHECK_FALSE(full.m_outside.has_value());
    CHECK(*full.m_all == doctest::Approx(full.cost_nash.all / full.cost_cnash.all).epsilon(1e-15));
    // Costs from the hand profiles: Nash solves 3u + v = 1/2, u + 4v = 1/2;
    // the joint optimum is (u, v) = (1/8, 1/16).
    auto cost = [&](double u, double v) {
        Profile p{Matrix{{0.5 + u, 0.5 - u}, {0.5 + v, 0.5 - v}}};
        return group_cost(s, p, {0, 1});
    };
    CHECK(full.cost_nash.all == doctest::Approx(cost(3.0 / 22.0, 1.0 / 11.0)).epsilon(1e-12));
    CHECK(full.cost_cnash.all == doctest::Approx(cost(0.125, 0.0625)).epsilon(1e-12));
    CHECK(*full.m_all > 1.0);
}

TEST_CASE("negative cost flag")
{
    // Negative intercept in one slot drives payments below zero.
    auto s = make_scenario({-5.0, 0.0}, 0.1, {1.0, 1.0}, {1.0, 1.0}, {{0.5, 0.5}, {0.5, 0.5}});
    const auto m = metrics(s, CoalitionStructure::single({0, 1}));
    CHECK(m.negative_cost_flag);
}

TEST_CASE("metrics need exactly one coalition")
{
    const auto s = scenarios::random_instance(scenarios::RandomBounds{.n_min = 5}, 2).first;
    CHECK_THROWS_AS(metrics(s, CoalitionStructure{}), std::invalid_argument);
    CHECK_THROWS_AS(metrics(s, CoalitionStructure({{0, 1}, {2, 3}})), std::invalid_argument);
    const auto u = metrics_for_union(s, CoalitionStructure({{0, 1}, {2, 3}}));
    CHECK(u.m_all.has_value());
}

TEST_CASE("case B quantities on the two-station example")
{
    const auto s = two_station();
    const auto structure = CoalitionStructure::single({0, 1});
    const auto r = case_b_condition(s, structure, {0, 1});

    // G^t = T a^t - A with A = 1.
    CHECK(r.a_total == 1.0);
    CHECK(r.g_terms[0] == -1.0);
    CHECK(r.g_terms[1] == 1.0);
    CHECK(r.g_energy == 2.0);
    // h = sum_t a^t G^t / sum_t (G^t)^2 = 1/2.
    REQUIRE(r.h_value.has_value());
    CHECK(*r.h_value == doctest::Approx(0.5));
    // inv([[3,2],[2,4]]) 1 = (1/4, 1/8);  inv([[3,1],[1,4]]) 1 = (3/11, 2/11).
    CHECK(r.gamma_weights_dagger[0] == doctest::Approx(0.25));
    CHECK(r.gamma_weights_dagger[1] == doctest::Approx(0.125));
    CHECK(r.gamma_weights_star[0] == doctest::Approx(3.0 / 11.0));
    CHECK(r.gamma_weights_star[1] == doctest::Approx(2.0 / 11.0));
    // g-dagger = (b/T) Gamma Gamma_S + sum_S mu_i Gamma_i^2 / (2T)
    //          = (1/2)(3/8)^2 + (1/4)(1/16) + (2/4)(1/64) = 3/32.
    CHECK(r.g_dagger == doctest::Approx(3.0 / 32.0));
    const double gs = 5.0 / 11.0;
    const double g_star = 0.5 * gs * gs + 0.25 * (9.0 / 121.0) + 0.5 * (4.0 / 121.0);
    CHECK(r.g_star == doctest::Approx(g_star));
    const double gap = 3.0 / 32.0 - g_star - (0.375 - gs) * 0.5;
    CHECK(r.condition_gap == doctest::Approx(gap));
    CHECK(r.verdict == Verdict::coalition_better);
    CHECK_FALSE(r.direct.nash_not_worse);
    CHECK(r.g_terms.sum() == 0.0);
}

TEST_CASE("case A singleton coalition is a tie")
{
    scenarios::RandomBounds bounds{.t_min = 2, .family = scenarios::Family::case_a};
    bounds.n_min = 3;
    const auto s = scenarios::random_instance(bounds, 5).first;
    for (const auto& group : {all_stations(s.n_stations()), StationSet{0}, StationSet{1, 2}}) {
        const auto r = case_a_condition(s, CoalitionStructure::single({0}), group);
        CHECK(std::abs(r.condition_gap) <= 1e-15);
        CHECK(std::abs(r.f_terms.sum()) <= 1e-12);
    }
}

TEST_CASE("case A symmetric grand coalition")
{
    std::vector<double> a(4, 0.5);
    const std::vector<double> alpha = {0.1, 0.2, 0.3, 0.4};
    std::vector<std::vector<double>> xbar;
    for (int i = 0; i < 3; ++i) {
        std::vector<double> row;
        for (double al : alpha) row.push_back(2.0 * al);
        xbar.push_back(row);
    }
    auto s = make_scenario(a, 0.8, {1.3, 1.3, 1.3}, {2.0, 2.0, 2.0}, xbar);
    const auto r = case_a_condition(s, CoalitionStructure::single({0, 1, 2}), {0, 1, 2});
    CHECK(r.verdict != Verdict::indeterminate);
    check_iff(r.verdict, r.direct);
    CHECK(r.delta_dagger_total == doctest::Approx(r.delta_dagger.sum()));
}

TEST_CASE("case A verdicts match direct comparison on random games")
{
    scenarios::RandomBounds bounds{.family = scenarios::Family::case_a};
    bounds.min_coalitions = bounds.max_coalitions = 1;
    int decided = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto [s, structure] = scenarios::random_instance(bounds, seed);
        const auto c = structure.members();
        for (const auto& group : {all_stations(s.n_stations()), c, complement(c, s.n_stations())}) {
            const auto r = case_a_condition(s, structure, group);
            if (r.verdict == Verdict::nash_better || r.verdict == Verdict::coalition_better) ++decided;
            check_iff(r.verdict, r.direct);
        }
    }
    CHECK(decided > 300);
}

TEST_CASE("case A gap ignores horizon, alpha and the constant intercept")
{
    auto s = make_scenario({0.5, 0.5, 0.5}, 0.9, {0.2, 3.0, 1.0}, {4.0, 1.0, 2.0},
                           {{0.8, 1.2, 2.0}, {0.2, 0.3, 0.5}, {0.4, 0.6, 1.0}});
    const auto structure = CoalitionStructure::single({0, 2});
    const auto base = case_a_condition(s, structure, {0, 2});

    auto t = make_scenario({3.0, 3.0, 3.0, 3.0, 3.0}, 0.9, {0.2, 3.0, 1.0}, {4.0, 1.0, 2.0},
                           {{0.4, 0.4, 0.8, 1.2, 1.2}, {0.1, 0.1, 0.2, 0.3, 0.3}, {0.2, 0.2, 0.4, 0.6, 0.6}});
    const auto moved = case_a_condition(t, structure, {0, 2});
    CHECK(moved.condition_gap == doctest::Approx(base.condition_gap).epsilon(1e-10));
    CHECK(moved.verdict == base.verdict);
}

TEST_CASE("case A precondition failures")
{
    auto s = two_station();
    CHECK_THROWS_AS(case_a_condition(s, CoalitionStructure::single({0, 1}), {0}), PreconditionError);
    s.price_intercepts.setConstant(1.0);
    s.nominal_profiles << 0.2, 0.8, 0.5, 0.5;
    try {
        case_a_condition(s, CoalitionStructure::single({0, 1}), {0});
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("rank-1") != std::string::npos);
    }
}

TEST_CASE("case B precondition failures and degenerate case")
{
    auto s = two_station();
    s.nominal_profiles << 0.2, 0.8, 0.5, 0.5;
    CHECK_THROWS_AS(case_b_condition(s, CoalitionStructure::single({0, 1}), {0}), PreconditionError);

    auto flat = two_station();
    flat.price_intercepts.setConstant(2.0);
    const auto r = case_b_condition(flat, CoalitionStructure::single({0, 1}), {0, 1});
    CHECK(r.verdict == Verdict::both_equal);
    CHECK_FALSE(r.h_value.has_value());
}

TEST_CASE("case B verdicts match direct comparison and ignore demand scale")
{
    scenarios::RandomBounds bounds{.t_min = 2, .family = scenarios::Family::case_b};
    bounds.min_coalitions = bounds.max_coalitions = 1;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto [s, structure] = scenarios::random_instance(bounds, seed);
        auto scaled = s;
        scaled.demands *= 3.7;
        scaled.nominal_profiles *= 3.7;
        const auto c = structure.members();
        for (const auto& group : {all_stations(s.n_stations()), c, complement(c, s.n_stations())}) {
            const auto r = case_b_condition(s, structure, group);
            check_iff(r.verdict, r.direct);
            CHECK(std::abs(r.g_terms.sum()) <= 1e-9 * std::max(1.0, r.a_total));
            const auto q = case_b_condition(scaled, structure, group);
            CHECK(q.condition_gap == doctest::Approx(r.condition_gap).epsilon(1e-10));
            check_iff(q.verdict, q.direct);
        }
    }
}

TEST_CASE("specialized equilibria match the general solver")
{
    scenarios::RandomBounds a_bounds{.family = scenarios::Family::case_a};
    scenarios::RandomBounds b_bounds{.family = scenarios::Family::case_b};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (const auto* bounds : {&a_bounds, &b_bounds}) {
            const auto [s, structure] = scenarios::random_instance(*bounds, seed);
            const auto [nash, cnash] =
                bounds == &a_bounds ? constant_price_equilibria(s, structure) : uniform_nominal_equilibria(s, structure);
            CHECK(max_abs_diff(nash.charges, nash_closed_form(s).profile.charges) <= 1e-10);
            CHECK(max_abs_diff(cnash.charges, c_nash_closed_form(s, structure).profile.charges) <= 1e-10);
        }
    }

    // alpha = (0, 1) at T = 2.
    auto s = make_scenario({1.0, 1.0}, 1.0, {1.0, 2.0}, {1.0, 3.0}, {{0.0, 1.0}, {0.0, 3.0}});
    const auto [nash, cnash] = constant_price_equilibria(s, CoalitionStructure::single({0, 1}));
    CHECK(max_abs_diff(cnash.charges, c_nash_closed_form(s, CoalitionStructure::single({0, 1})).profile.charges) <=
          1e-12);

    const auto fig3 = scenarios::build_five_station({3}, 0.1, 0.1, 0.4, 1)[0];
    const auto [n3, c3] = uniform_nominal_equilibria(fig3.first, fig3.second);
    CHECK(max_abs_diff(c3.charges, c_nash_closed_form(fig3.first, fig3.second).profile.charges) <= 1e-10);

    auto non_constant = two_station();
    CHECK_THROWS_AS(constant_price_equilibria(non_constant, CoalitionStructure{}), PreconditionError);
}

TEST_CASE("coalition metric agrees with the case B condition")
{
    scenarios::RandomBounds bounds{.family = scenarios::Family::case_b};
    bounds.n_min = 3;
    bounds.t_min = 2;
    bounds.min_coalitions = bounds.max_coalitions = 1;
    bounds.min_coalition_size = 2;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto [s, structure] = scenarios::random_instance(bounds, seed);
        const auto m = metrics(s, structure);
        if (m.negative_cost_flag) continue;
        const auto r = case_b_condition(s, structure, structure.members());
        if (r.verdict == Verdict::nash_better) CHECK(*m.m_coalition <= 1.0 + 1e-12);
        if (r.verdict == Verdict::coalition_better) CHECK(*m.m_coalition > 1.0 - 1e-12);
    }
}

TEST_CASE("step-alpha family: gap sign matches the coalition metric")
{
    for (std::size_t k = 2; k <= 5; ++k) {
        const auto [s, structure] = scenarios::build_five_station({k}, 0.04, 0.16, 0.0, 1)[0];
        const auto r = case_a_condition(s, structure, structure.members());
        const auto m = metrics(s, structure);
        if (r.verdict == Verdict::nash_better) CHECK(*m.m_coalition <= 1.0);
        if (r.verdict == Verdict::coalition_better) CHECK(*m.m_coalition > 1.0);
    }
}
