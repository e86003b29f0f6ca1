#pragma once

// Welfare comparison between the Nash equilibrium x* and the C-Nash
// equilibrium x-dagger.
//
// M_S = c_S(x*) / c_S(x-dagger) for S in {[N], C, [N]\C}; M_S < 1 means S
// pays less when every station acts alone.
//
// Case A (constant a, xbar = d alpha^T) and Case B (xbar^t = d/T) admit
// closed-form tests that decide c_S(x*) <= c_S(x-dagger) from the game
// parameters alone. Both reports also carry the direct cost comparison so
// the verdict can be audited.

#include <optional>
#include <string>
#include <utility>

#include "evgame/equilibrium.hpp"

namespace evgame::analysis {

// |condition gap| below this is a numerical tie.
inline constexpr double kTieTolerance = 1e-9;

enum class Verdict {
    nash_better,       // c_S(x*) <= c_S(x-dagger)
    coalition_better,  // c_S(x*) >  c_S(x-dagger)
    indeterminate,     // |gap| < kTieTolerance
    both_equal,        // degenerate case: the two equilibria coincide
};

const char* to_string(Verdict v);

struct GroupCosts {
    double all = 0.0;
    double coalition = 0.0;
    double outside = 0.0;
};

struct MetricsReport {
    std::optional<double> m_all;
    std::optional<double> m_coalition;
    std::optional<double> m_outside;
    GroupCosts cost_nash;
    GroupCosts cost_cnash;
    Vector station_cost_nash;
    Vector station_cost_cnash;
    bool negative_cost_flag = false;
};

// Metrics for a structure with exactly one coalition.
MetricsReport metrics(const Scenario& scenario, const CoalitionStructure& structure);

// Metrics where C is the union of all coalitions of `structure` (at least one).
MetricsReport metrics_for_union(const Scenario& scenario, const CoalitionStructure& structure);

// Metrics from already computed equilibria.
MetricsReport metrics_from_profiles(const Scenario& scenario, const StationSet& coalition,
                                    const Profile& nash, const Profile& cnash);

struct DirectComparison {
    double cost_nash = 0.0;
    double cost_cnash = 0.0;
    // c_S(x*) <= c_S(x-dagger) up to a relative 1e-12 slack.
    bool nash_not_worse = false;
};

struct CaseAReport {
    StationSet group;
    Vector alpha;
    Vector f_terms;        // F^t = T alpha^t - 1
    double f_energy = 0.0; // sum_t (F^t)^2
    Vector delta_dagger;   // ((b(11^T + C) + mu)^{-1} mu d)_i
    Vector delta_star;
    double delta_dagger_total = 0.0;
    double delta_star_total = 0.0;
    Vector f_dagger;       // Delta-dagger Delta-dagger_i + mu_i (Delta-dagger_i - d_i)^2 / (2b)
    Vector f_star;
    double condition_gap = 0.0;  // sum_{i in S} f-dagger_i - f*_i
    Verdict verdict = Verdict::indeterminate;
    DirectComparison direct;
};

struct CaseBReport {
    StationSet group;
    Vector g_terms;              // G^t = T a^t - A
    double a_total = 0.0;        // A = sum_t a^t
    double g_energy = 0.0;       // sum_t (G^t)^2
    std::optional<double> h_value;
    Vector gamma_weights_dagger; // ((b(11^T + C) + mu)^{-1} 1)_i
    Vector gamma_weights_star;
    double gamma_dagger_total = 0.0;  // over all stations
    double gamma_star_total = 0.0;
    double gamma_dagger_group = 0.0;  // over the group S
    double gamma_star_group = 0.0;
    double g_dagger = 0.0;
    double g_star = 0.0;
    double condition_gap = 0.0;  // g-dagger - g* - (Gamma-dagger_S - Gamma*_S) h(A)
    Verdict verdict = Verdict::indeterminate;
    DirectComparison direct;
};

// Throws PreconditionError naming the violated hypothesis: non-constant
// price intercepts, or nominal profiles that do not factor as d alpha^T.
CaseAReport case_a_condition(const Scenario& scenario, const CoalitionStructure& structure,
                             const StationSet& group);

// Throws PreconditionError if xbar^t != d/T. Constant a yields both_equal
// with h undefined.
CaseBReport case_b_condition(const Scenario& scenario, const CoalitionStructure& structure,
                             const StationSet& group);

// Case-A hypothesis test; returns alpha or throws PreconditionError.
Vector factor_alpha(const Scenario& scenario);
bool has_constant_intercepts(const Scenario& scenario);
bool has_uniform_nominal(const Scenario& scenario);

// Specialized equilibria (first: Nash, second: C-Nash).
std::pair<Profile, Profile> constant_price_equilibria(const Scenario& scenario, const CoalitionStructure& structure);
std::pair<Profile, Profile> uniform_nominal_equilibria(const Scenario& scenario, const CoalitionStructure& structure);

}  // namespace evgame::analysis
