#pragma once

// Game data and cost evaluation for the EV-charging aggregative game.
//
// N stations schedule charge over T slots. Slot price is linear in the
// aggregate, p^t(x) = a^t + b * sum_i x_i^t, and station i pays
//
//   c_i(x) = sum_t p^t(x) x_i^t + (mu_i / 2) * ||x_i - xbar_i||^2
//
// subject to sum_t x_i^t = d_i. Indices are 0-based in this API; files and
// reports use 1-based station numbers.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace evgame {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Station indices, 0-based.
using StationSet = std::vector<std::size_t>;

inline constexpr double kFeasibilityTolerance = 1e-9;

struct Scenario {
    Vector price_intercepts;   // a^t, length T
    double price_slope = 1.0;  // b
    Vector sensitivities;      // mu_i, length N
    Vector demands;            // d_i, length N
    Matrix nominal_profiles;   // xbar, N x T

    std::size_t n_stations() const { return static_cast<std::size_t>(demands.size()); }
    std::size_t horizon() const { return static_cast<std::size_t>(price_intercepts.size()); }

    // Throws PreconditionError if b <= 0, some mu_i <= 0, shapes disagree, or
    // a nominal row does not sum to its demand.
    void validate() const;
};

// Disjoint coalitions over [N]. No coalitions means every station acts alone.
class CoalitionStructure {
public:
    CoalitionStructure() = default;
    explicit CoalitionStructure(std::vector<StationSet> coalitions);

    static CoalitionStructure single(StationSet coalition);

    const std::vector<StationSet>& coalitions() const { return coalitions_; }
    bool empty() const { return coalitions_.empty(); }

    // Throws std::invalid_argument on overlap, empty sets or indices >= n.
    void validate(std::size_t n) const;

    // Union of all coalition members, sorted.
    StationSet members() const;

    // Best-response blocks: coalitions by descending size (ties keep listing
    // order), then every unaffiliated station in ascending order.
    std::vector<StationSet> blocks(std::size_t n) const;

    // Every coalition has exactly one member.
    bool all_singletons() const;

private:
    std::vector<StationSet> coalitions_;
};

struct Profile {
    Matrix charges;  // x, N x T; entries may be negative

    std::size_t n_stations() const { return static_cast<std::size_t>(charges.rows()); }
    std::size_t horizon() const { return static_cast<std::size_t>(charges.cols()); }
};

struct CostBreakdown {
    Vector per_station;
    Vector payment_part;
    Vector deviation_part;
};

// Throws std::invalid_argument if the shape is wrong or some row misses its
// demand by more than tolerance * max(1, |d_i|).
void check_feasible(const Scenario& scenario, const Profile& profile,
                    double tolerance = kFeasibilityTolerance);

// Price in slot t (0-based). Throws std::out_of_range for t >= T.
double price_at(const Scenario& scenario, const Profile& profile, std::size_t t);

// All slot prices at once.
Vector prices(const Scenario& scenario, const Profile& profile);

CostBreakdown cost_breakdown(const Scenario& scenario, const Profile& profile);
double station_cost(const Scenario& scenario, const Profile& profile, std::size_t i);
double group_cost(const Scenario& scenario, const Profile& profile, const StationSet& group);

// N x N matrix with ones where two stations share a coalition and on the
// diagonal, zeros elsewhere. Stations keep their scenario positions.
Matrix coalition_block_matrix(const CoalitionStructure& structure, std::size_t n);

// Uniform schedule x_i^t = d_i / T.
Profile uniform_profile(const Scenario& scenario);

// Complement of `group` within [n], ascending.
StationSet complement(const StationSet& group, std::size_t n);

StationSet all_stations(std::size_t n);

}  // namespace evgame
