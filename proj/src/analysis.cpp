#include "evgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "evgame/errors.hpp"

namespace evgame::analysis {

namespace {

using Index = Eigen::Index;

constexpr double kHypothesisTolerance = 1e-9;

std::optional<double> ratio(double num, double den)
{
    if (den == 0.0) return std::nullopt;
    return num / den;
}

double sum_over(const Vector& v, const StationSet& group)
{
    double s = 0.0;
    for (auto i : group) s += v[static_cast<Index>(i)];
    return s;
}

void check_group(const StationSet& group, std::size_t n)
{
    for (auto i : group)
        if (i >= n) throw std::out_of_range("group station index out of range");
}

DirectComparison compare(const Scenario& scenario, const CoalitionStructure& structure, const StationSet& group)
{
    const auto nash = nash_closed_form(scenario);
    const auto cnash = c_nash_closed_form(scenario, structure);
    DirectComparison out;
    out.cost_nash = group_cost(scenario, nash.profile, group);
    out.cost_cnash = group_cost(scenario, cnash.profile, group);
    const double slack = 1e-12 * std::max({1.0, std::abs(out.cost_nash), std::abs(out.cost_cnash)});
    out.nash_not_worse = out.cost_nash <= out.cost_cnash + slack;
    return out;
}

Verdict verdict_from_gap(double gap)
{
    if (std::abs(gap) < kTieTolerance) return Verdict::indeterminate;
    return gap >= 0.0 ? Verdict::nash_better : Verdict::coalition_better;
}

Vector solve_q(const Scenario& scenario, const CoalitionStructure& structure, const Vector& rhs)
{
    return game_matrix(scenario, structure).llt().solve(rhs);
}

}  // namespace

const char* to_string(Verdict v)
{
    switch (v) {
        case Verdict::nash_better: return "nash_better";
        case Verdict::coalition_better: return "coalition_better";
        case Verdict::indeterminate: return "indeterminate";
        case Verdict::both_equal: return "both_equal";
    }
    return "unknown";
}

MetricsReport metrics_from_profiles(const Scenario& scenario, const StationSet& coalition, const Profile& nash,
                                    const Profile& cnash)
{
    const auto n = scenario.n_stations();
    check_group(coalition, n);
    const auto outside = complement(coalition, n);

    MetricsReport r;
    r.station_cost_nash = cost_breakdown(scenario, nash).per_station;
    r.station_cost_cnash = cost_breakdown(scenario, cnash).per_station;
    r.cost_nash = {r.station_cost_nash.sum(), sum_over(r.station_cost_nash, coalition),
                   sum_over(r.station_cost_nash, outside)};
    r.cost_cnash = {r.station_cost_cnash.sum(), sum_over(r.station_cost_cnash, coalition),
                    sum_over(r.station_cost_cnash, outside)};
    r.m_all = ratio(r.cost_nash.all, r.cost_cnash.all);
    r.m_coalition = ratio(r.cost_nash.coalition, r.cost_cnash.coalition);
    r.m_outside = ratio(r.cost_nash.outside, r.cost_cnash.outside);
    r.negative_cost_flag = (r.station_cost_nash.array() < 0.0).any() || (r.station_cost_cnash.array() < 0.0).any();
    return r;
}

MetricsReport metrics_for_union(const Scenario& scenario, const CoalitionStructure& structure)
{
    if (structure.empty()) throw std::invalid_argument("metrics need at least one coalition");
    const auto nash = nash_closed_form(scenario);
    const auto cnash = c_nash_closed_form(scenario, structure);
    return metrics_from_profiles(scenario, structure.members(), nash.profile, cnash.profile);
}

MetricsReport metrics(const Scenario& scenario, const CoalitionStructure& structure)
{
    if (structure.coalitions().size() != 1)
        throw std::invalid_argument("metrics are defined relative to exactly one coalition");
    return metrics_for_union(scenario, structure);
}

bool has_constant_intercepts(const Scenario& scenario)
{
    const auto& a = scenario.price_intercepts;
    const double tol = kHypothesisTolerance * std::max(1.0, std::abs(a[0]));
    return (a.array() - a[0]).abs().maxCoeff() <= tol;
}

bool has_uniform_nominal(const Scenario& scenario)
{
    const double t = static_cast<double>(scenario.horizon());
    for (Index i = 0; i < scenario.nominal_profiles.rows(); ++i) {
        const double target = scenario.demands[i] / t;
        const double tol = kHypothesisTolerance * std::max(1.0, std::abs(scenario.demands[i]));
        if ((scenario.nominal_profiles.row(i).array() - target).abs().maxCoeff() > tol) return false;
    }
    return true;
}

Vector factor_alpha(const Scenario& scenario)
{
    const double total = scenario.demands.sum();
    if (std::abs(total) < 1e-300)
        throw PreconditionError("rank-1 nominal profile hypothesis violated: total demand is zero, alpha cannot be recovered");
    const Vector alpha = scenario.nominal_profiles.colwise().sum().transpose() / total;
    const Matrix rebuilt = scenario.demands * alpha.transpose();
    const double scale = std::max(1.0, scenario.nominal_profiles.cwiseAbs().maxCoeff());
    const double err = (rebuilt - scenario.nominal_profiles).cwiseAbs().maxCoeff();
    if (err > kHypothesisTolerance * scale) {
        std::ostringstream msg;
        msg << "rank-1 nominal profile hypothesis violated: nominal profiles are not of the form d_i * alpha^t "
               "(max reconstruction error "
            << err << ")";
        throw PreconditionError(msg.str());
    }
    if (alpha.minCoeff() < -kHypothesisTolerance)
        throw PreconditionError("rank-1 nominal profile hypothesis violated: alpha has negative entries");
    return alpha;
}

CaseAReport case_a_condition(const Scenario& scenario, const CoalitionStructure& structure, const StationSet& group)
{
    scenario.validate();
    structure.validate(scenario.n_stations());
    check_group(group, scenario.n_stations());
    if (!has_constant_intercepts(scenario))
        throw PreconditionError("Case A requires constant price intercepts a^t (a^t = a for all t)");

    CaseAReport r;
    r.group = group;
    r.alpha = factor_alpha(scenario);
    const double t = static_cast<double>(scenario.horizon());
    const double b = scenario.price_slope;
    const Vector& mu = scenario.sensitivities;
    const Vector& d = scenario.demands;

    r.f_terms = (t * r.alpha.array() - r.alpha.sum()).matrix();
    r.f_energy = r.f_terms.squaredNorm();

    const Vector mu_d = mu.cwiseProduct(d);
    r.delta_dagger = solve_q(scenario, structure, mu_d);
    r.delta_star = solve_q(scenario, CoalitionStructure{}, mu_d);
    r.delta_dagger_total = r.delta_dagger.sum();
    r.delta_star_total = r.delta_star.sum();

    const auto f_of = [&](const Vector& delta, double total) {
        return Vector((total * delta.array() + mu.array() * (delta - d).array().square() / (2.0 * b)).matrix());
    };
    r.f_dagger = f_of(r.delta_dagger, r.delta_dagger_total);
    r.f_star = f_of(r.delta_star, r.delta_star_total);
    r.condition_gap = sum_over(r.f_dagger, group) - sum_over(r.f_star, group);
    r.direct = compare(scenario, structure, group);

    // Uniform alpha: both equilibria are d/T.
    r.verdict = r.f_energy < 1e-24 ? Verdict::both_equal : verdict_from_gap(r.condition_gap);
    return r;
}

CaseBReport case_b_condition(const Scenario& scenario, const CoalitionStructure& structure, const StationSet& group)
{
    scenario.validate();
    structure.validate(scenario.n_stations());
    check_group(group, scenario.n_stations());
    if (!has_uniform_nominal(scenario))
        throw PreconditionError("Case B requires uniform nominal profiles (xbar^t = d/T for all t)");

    CaseBReport r;
    r.group = group;
    const double t = static_cast<double>(scenario.horizon());
    const double b = scenario.price_slope;
    const Vector& mu = scenario.sensitivities;
    const Vector& a = scenario.price_intercepts;
    const auto n = static_cast<Index>(scenario.n_stations());

    r.a_total = a.sum();
    r.g_terms = (t * a.array() - r.a_total).matrix();
    r.g_energy = r.g_terms.squaredNorm();

    const Vector ones = Vector::Ones(n);
    r.gamma_weights_dagger = solve_q(scenario, structure, ones);
    r.gamma_weights_star = solve_q(scenario, CoalitionStructure{}, ones);
    r.gamma_dagger_total = r.gamma_weights_dagger.sum();
    r.gamma_star_total = r.gamma_weights_star.sum();
    r.gamma_dagger_group = sum_over(r.gamma_weights_dagger, group);
    r.gamma_star_group = sum_over(r.gamma_weights_star, group);

    const auto g_of = [&](const Vector& w, double total) {
        double s = 0.0;
        for (auto i : group) {
            const auto k = static_cast<Index>(i);
            s += b / t * total * w[k] + mu[k] / (2.0 * t) * w[k] * w[k];
        }
        return s;
    };
    r.g_dagger = g_of(r.gamma_weights_dagger, r.gamma_dagger_total);
    r.g_star = g_of(r.gamma_weights_star, r.gamma_star_total);
    r.direct = compare(scenario, structure, group);

    if (has_constant_intercepts(scenario) || r.g_energy == 0.0) {
        r.h_value = std::nullopt;
        r.condition_gap = 0.0;
        r.verdict = Verdict::both_equal;
        return r;
    }
    // h(A) = sum_{t,t'} a^t a^t' (T delta - 1) / sum_t (G^t)^2 = sum_t a^t G^t / sum_t (G^t)^2
    r.h_value = a.dot(r.g_terms) / r.g_energy;
    r.condition_gap = r.g_dagger - r.g_star - (r.gamma_dagger_group - r.gamma_star_group) * *r.h_value;
    r.verdict = verdict_from_gap(r.condition_gap);
    return r;
}

std::pair<Profile, Profile> constant_price_equilibria(const Scenario& scenario, const CoalitionStructure& structure)
{
    scenario.validate();
    structure.validate(scenario.n_stations());
    if (!has_constant_intercepts(scenario))
        throw PreconditionError("constant-price form requires constant price intercepts a^t");

    const double t = static_cast<double>(scenario.horizon());
    Matrix weighted = scenario.sensitivities.asDiagonal() * scenario.nominal_profiles;
    weighted.colwise() -= weighted.rowwise().mean().eval();

    const auto build = [&](const CoalitionStructure& s) {
        Profile p{game_matrix(scenario, s).llt().solve(weighted)};
        p.charges.colwise() += scenario.demands / t;
        return p;
    };
    return {build(CoalitionStructure{}), build(structure)};
}

std::pair<Profile, Profile> uniform_nominal_equilibria(const Scenario& scenario, const CoalitionStructure& structure)
{
    scenario.validate();
    structure.validate(scenario.n_stations());
    if (!has_uniform_nominal(scenario))
        throw PreconditionError("uniform-nominal form requires uniform nominal profiles xbar^t = d/T");

    const double t = static_cast<double>(scenario.horizon());
    const auto n = static_cast<Index>(scenario.n_stations());
    const Vector centered = (scenario.price_intercepts.array() - scenario.price_intercepts.mean()).matrix();

    const auto build = [&](const CoalitionStructure& s) {
        const Vector w = game_matrix(scenario, s).llt().solve(Vector::Ones(n));
        Profile p{-w * centered.transpose()};
        p.charges.colwise() += scenario.demands / t;
        return p;
    };
    return {build(CoalitionStructure{}), build(structure)};
}

}  // namespace evgame::analysis
