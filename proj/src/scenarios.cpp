#include "evgame/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace evgame::scenarios {

namespace {

using Index = Eigen::Index;

constexpr std::size_t kFiveStations = 5;
constexpr std::size_t kFiveStationHorizon = 10;
constexpr double kFiveStationSlope = 0.5;
constexpr double kBaseIntercept = 0.5;

Vector normalized_uniforms(Rng& rng, std::size_t t)
{
    Vector u(static_cast<Index>(t));
    for (Index k = 0; k < u.size(); ++k) u[k] = rng.uniform(0.05, 1.0);
    return u / u.sum();
}

Scenario typed_scenario(const std::vector<StationType>& types, Vector intercepts, double slope, const Vector& alpha)
{
    const auto n = static_cast<Index>(types.size());
    Scenario s;
    s.price_intercepts = std::move(intercepts);
    s.price_slope = slope;
    s.sensitivities.resize(n);
    s.demands.resize(n);
    for (Index i = 0; i < n; ++i) {
        s.demands[i] = types[static_cast<std::size_t>(i)].demand;
        s.sensitivities[i] = types[static_cast<std::size_t>(i)].sensitivity;
    }
    s.nominal_profiles = s.demands * alpha.transpose();
    return s;
}

StationSet first_k(std::size_t k)
{
    return all_stations(k);
}

}  // namespace

double Rng::log_uniform(double lo, double hi)
{
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::size_t Rng::integer(std::size_t lo, std::size_t hi)
{
    if (hi <= lo) return lo;
    const std::size_t span = hi - lo + 1;
    return lo + std::min(span - 1, static_cast<std::size_t>(uniform() * static_cast<double>(span)));
}

char to_char(TypeLabel label)
{
    return label == TypeLabel::H ? 'H' : 'L';
}

TypeLabel parse_type(char c)
{
    if (c == 'H' || c == 'h') return TypeLabel::H;
    if (c == 'L' || c == 'l') return TypeLabel::L;
    throw std::invalid_argument(std::string("unknown station type '") + c + "'");
}

StationType base_type(TypeLabel label)
{
    return label == TypeLabel::H ? StationType{label, 5.0, 1.0} : StationType{label, 1.0, 0.1};
}

StationType three_station_type(TypeLabel label)
{
    return label == TypeLabel::H ? StationType{label, 5.0, 5.0} : StationType{label, 1.0, 1.0};
}

Vector step_alpha(std::size_t horizon, double eta1, double eta2)
{
    Vector alpha(static_cast<Index>(horizon));
    for (std::size_t t = 1; t <= horizon; ++t)
        alpha[static_cast<Index>(t - 1)] = 2 * t <= horizon ? eta1 : eta2;
    if (std::abs(alpha.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("alpha levels must sum to 1 over the horizon (got " +
                                    std::to_string(alpha.sum()) + ")");
    return alpha;
}

std::vector<Instance> build_five_station(const std::vector<std::size_t>& sizes, double eta1, double eta2, double delta,
                                      std::uint64_t seed)
{
    const Vector alpha = step_alpha(kFiveStationHorizon, eta1, eta2);
    std::vector<Instance> out;
    out.reserve(sizes.size());
    for (auto k : sizes) {
        if (k < 1 || k > kFiveStations)
            throw std::invalid_argument("coalition size " + std::to_string(k) + " outside 1..5");
        Rng rng(seed);
        Vector a(static_cast<Index>(kFiveStationHorizon));
        for (Index t = 0; t < a.size(); ++t) a[t] = kBaseIntercept + delta * rng.uniform();

        std::vector<StationType> types;
        for (std::size_t i = 0; i < kFiveStations; ++i)
            types.push_back(base_type(i < k ? TypeLabel::L : TypeLabel::H));
        out.emplace_back(typed_scenario(types, a, kFiveStationSlope, alpha), CoalitionStructure::single(first_k(k)));
    }
    return out;
}

Instance build_three_station(TypeLabel first, TypeLabel second, TypeLabel outsider)
{
    constexpr std::size_t horizon = 10;
    const Vector alpha = step_alpha(horizon, 0.4 / horizon, 1.6 / horizon);
    const std::vector<StationType> types{three_station_type(first), three_station_type(second), three_station_type(outsider)};
    return {typed_scenario(types, Vector::Constant(horizon, 10.0), 1.0, alpha), CoalitionStructure::single({0, 1})};
}

Instance build_mixed_random(std::size_t n, std::size_t t, std::size_t coalition_size, double p_h, std::uint64_t seed)
{
    if (n == 0 || t == 0) throw std::invalid_argument("mixed-random scenario needs n, t >= 1");
    if (!(p_h >= 0.0 && p_h <= 1.0)) throw std::invalid_argument("p_h must lie in [0, 1]");
    if (coalition_size < 1 || coalition_size > n) throw std::invalid_argument("coalition size outside 1..n");

    Rng rng(seed);
    Vector a(static_cast<Index>(t));
    for (Index k = 0; k < a.size(); ++k) a[k] = kBaseIntercept + 0.4 * rng.uniform();
    Vector u(static_cast<Index>(t));
    for (Index k = 0; k < u.size(); ++k) u[k] = rng.uniform();
    if (u.sum() <= 0.0) u.setOnes();
    const Vector alpha = u / u.sum();

    std::vector<StationType> types;
    for (std::size_t i = 0; i < n; ++i) {
        const bool high = i < coalition_size && rng.uniform() < p_h;
        types.push_back(base_type(high ? TypeLabel::H : TypeLabel::L));
    }
    return {typed_scenario(types, a, kFiveStationSlope, alpha), CoalitionStructure::single(first_k(coalition_size))};
}

Instance random_instance(const RandomBounds& bd, std::uint64_t seed)
{
    if (bd.n_min < 1 || bd.n_min > bd.n_max || bd.t_min < 1 || bd.t_min > bd.t_max)
        throw std::invalid_argument("random bounds: invalid station or slot range");
    if (!(bd.b_min > 0.0) || bd.b_min > bd.b_max || !(bd.mu_min > 0.0) || bd.mu_min > bd.mu_max)
        throw std::invalid_argument("random bounds: b and mu ranges must be positive and ordered");
    if (!(bd.d_min > 0.0) || bd.d_min > bd.d_max || bd.a_min > bd.a_max)
        throw std::invalid_argument("random bounds: invalid demand or intercept range");
    if (bd.min_coalitions > bd.max_coalitions || bd.min_coalition_size < 1 ||
        bd.min_coalitions * bd.min_coalition_size > bd.n_min)
        throw std::invalid_argument("random bounds: coalition requirements cannot be met");

    Rng rng(seed);
    const std::size_t n = rng.integer(bd.n_min, bd.n_max);
    const std::size_t t = rng.integer(bd.t_min, bd.t_max);
    const auto ni = static_cast<Index>(n);
    const auto ti = static_cast<Index>(t);

    Scenario s;
    s.price_slope = rng.log_uniform(bd.b_min, bd.b_max);
    s.sensitivities.resize(ni);
    s.demands.resize(ni);
    for (Index i = 0; i < ni; ++i) {
        s.sensitivities[i] = rng.log_uniform(bd.mu_min, bd.mu_max);
        s.demands[i] = rng.log_uniform(bd.d_min, bd.d_max);
    }

    s.price_intercepts.resize(ti);
    if (bd.family == Family::case_a) {
        s.price_intercepts.setConstant(rng.uniform(bd.a_min, bd.a_max));
    } else {
        for (Index k = 0; k < ti; ++k) s.price_intercepts[k] = rng.uniform(bd.a_min, bd.a_max);
    }

    switch (bd.family) {
        case Family::case_a:
            s.nominal_profiles = s.demands * normalized_uniforms(rng, t).transpose();
            break;
        case Family::case_b:
            s.nominal_profiles = (s.demands / static_cast<double>(t)).replicate(1, ti);
            break;
        case Family::unconstrained:
            s.nominal_profiles.resize(ni, ti);
            for (Index i = 0; i < ni; ++i)
                s.nominal_profiles.row(i) = s.demands[i] * normalized_uniforms(rng, t).transpose();
            break;
    }

    // Coalitions carved from a random permutation of the stations.
    StationSet pool = all_stations(n);
    for (std::size_t k = n; k > 1; --k) std::swap(pool[k - 1], pool[rng.integer(0, k - 1)]);
    const std::size_t max_count = std::min(bd.max_coalitions, n / bd.min_coalition_size);
    const std::size_t count = rng.integer(std::min(bd.min_coalitions, max_count), max_count);
    std::vector<StationSet> coalitions;
    std::size_t used = 0;
    for (std::size_t c = 0; c < count; ++c) {
        const std::size_t reserve = (count - c - 1) * bd.min_coalition_size;
        const std::size_t largest = n - used - reserve;
        const std::size_t size = rng.integer(bd.min_coalition_size, largest);
        coalitions.emplace_back(pool.begin() + static_cast<std::ptrdiff_t>(used),
                                pool.begin() + static_cast<std::ptrdiff_t>(used + size));
        used += size;
    }
    return {std::move(s), CoalitionStructure(std::move(coalitions))};
}

}  // namespace evgame::scenarios
