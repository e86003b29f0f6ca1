#include "evgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evgame/errors.hpp"

namespace evgame {

void Scenario::validate() const
{
    const auto n = n_stations();
    const auto t = horizon();
    if (n == 0 || t == 0) throw PreconditionError("scenario needs at least one station and one slot");
    if (static_cast<std::size_t>(sensitivities.size()) != n)
        throw PreconditionError("sensitivities: expected " + std::to_string(n) + " entries");
    if (static_cast<std::size_t>(nominal_profiles.rows()) != n ||
        static_cast<std::size_t>(nominal_profiles.cols()) != t)
        throw PreconditionError("nominal_profiles: expected " + std::to_string(n) + "x" + std::to_string(t));
    if (!(price_slope > 0.0) || !std::isfinite(price_slope))
        throw PreconditionError("price_slope must be positive (b > 0)");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sensitivities[i] > 0.0) || !std::isfinite(sensitivities[i]))
            throw PreconditionError("sensitivity of station " + std::to_string(i + 1) + " must be positive");
        const double row = nominal_profiles.row(i).sum();
        if (std::abs(row - demands[i]) > kFeasibilityTolerance * std::max(1.0, std::abs(demands[i])))
            throw PreconditionError("nominal profile of station " + std::to_string(i + 1) +
                                    " sums to " + std::to_string(row) + ", demand is " +
                                    std::to_string(demands[i]));
    }
    if (!price_intercepts.allFinite() || !demands.allFinite() || !nominal_profiles.allFinite())
        throw PreconditionError("scenario contains non-finite values");
}

CoalitionStructure::CoalitionStructure(std::vector<StationSet> coalitions)
    : coalitions_(std::move(coalitions))
{
    for (auto& c : coalitions_) std::sort(c.begin(), c.end());
}

CoalitionStructure CoalitionStructure::single(StationSet coalition)
{
    return CoalitionStructure({std::move(coalition)});
}

void CoalitionStructure::validate(std::size_t n) const
{
    std::vector<bool> seen(n, false);
    for (const auto& c : coalitions_) {
        if (c.empty()) throw std::invalid_argument("coalition is empty");
        for (auto i : c) {
            if (i >= n)
                throw std::invalid_argument("station " + std::to_string(i + 1) + " out of range 1.." +
                                            std::to_string(n));
            if (seen[i])
                throw std::invalid_argument("station " + std::to_string(i + 1) +
                                            " appears in more than one coalition");
            seen[i] = true;
        }
    }
}

StationSet CoalitionStructure::members() const
{
    StationSet out;
    for (const auto& c : coalitions_) out.insert(out.end(), c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<StationSet> CoalitionStructure::blocks(std::size_t n) const
{
    std::vector<StationSet> out = coalitions_;
    std::stable_sort(out.begin(), out.end(),
                     [](const StationSet& l, const StationSet& r) { return l.size() > r.size(); });
    const auto inside = members();
    for (std::size_t i = 0; i < n; ++i)
        if (!std::binary_search(inside.begin(), inside.end(), i)) out.push_back({i});
    return out;
}

bool CoalitionStructure::all_singletons() const
{
    return std::all_of(coalitions_.begin(), coalitions_.end(),
                       [](const StationSet& c) { return c.size() == 1; });
}

void check_feasible(const Scenario& scenario, const Profile& profile, double tolerance)
{
    const auto n = scenario.n_stations();
    if (profile.n_stations() != n || profile.horizon() != scenario.horizon())
        throw std::invalid_argument("profile shape does not match scenario");
    for (std::size_t i = 0; i < n; ++i) {
        const double d = scenario.demands[i];
        const double row = profile.charges.row(i).sum();
        if (std::abs(row - d) > tolerance * std::max(1.0, std::abs(d)))
            throw std::invalid_argument("profile row " + std::to_string(i + 1) + " sums to " +
                                        std::to_string(row) + ", demand is " + std::to_string(d));
    }
}

double price_at(const Scenario& scenario, const Profile& profile, std::size_t t)
{
    if (t >= scenario.horizon()) throw std::out_of_range("slot index out of range");
    return scenario.price_intercepts[t] + scenario.price_slope * profile.charges.col(t).sum();
}

Vector prices(const Scenario& scenario, const Profile& profile)
{
    return scenario.price_intercepts +
           scenario.price_slope * profile.charges.colwise().sum().transpose();
}

CostBreakdown cost_breakdown(const Scenario& scenario, const Profile& profile)
{
    check_feasible(scenario, profile);
    const Vector p = prices(scenario, profile);
    CostBreakdown out;
    out.payment_part = profile.charges * p;
    out.deviation_part = 0.5 * scenario.sensitivities.cwiseProduct(
                                   (profile.charges - scenario.nominal_profiles).rowwise().squaredNorm());
    out.per_station = out.payment_part + out.deviation_part;
    return out;
}

double station_cost(const Scenario& scenario, const Profile& profile, std::size_t i)
{
    if (i >= scenario.n_stations()) throw std::out_of_range("station index out of range");
    return cost_breakdown(scenario, profile).per_station[static_cast<Eigen::Index>(i)];
}

double group_cost(const Scenario& scenario, const Profile& profile, const StationSet& group)
{
    for (auto i : group)
        if (i >= scenario.n_stations()) throw std::out_of_range("station index out of range");
    if (group.empty()) return 0.0;
    const auto costs = cost_breakdown(scenario, profile);
    double total = 0.0;
    for (auto i : group) total += costs.per_station[static_cast<Eigen::Index>(i)];
    return total;
}

Matrix coalition_block_matrix(const CoalitionStructure& structure, std::size_t n)
{
    structure.validate(n);
    Matrix c = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& coalition : structure.coalitions())
        for (auto i : coalition)
            for (auto j : coalition) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    return c;
}

Profile uniform_profile(const Scenario& scenario)
{
    const auto t = static_cast<Eigen::Index>(scenario.horizon());
    return Profile{(scenario.demands / static_cast<double>(t)).replicate(1, t)};
}

StationSet complement(const StationSet& group, std::size_t n)
{
    std::vector<bool> in(n, false);
    for (auto i : group)
        if (i < n) in[i] = true;
    StationSet out;
    for (std::size_t i = 0; i < n; ++i)
        if (!in[i]) out.push_back(i);
    return out;
}

StationSet all_stations(std::size_t n)
{
    StationSet out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

}  // namespace evgame
