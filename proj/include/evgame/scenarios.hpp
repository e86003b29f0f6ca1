#pragma once

// Experiment scenarios and seeded random instance families.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by the
// C++ standard. A uniform draw on [0, 1) is (x >> 11) * 2^-53 for each raw
// 64-bit output x, so a seed reproduces the same instance on any platform and
// in any language that implements MT19937-64.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "evgame/model.hpp"

namespace evgame::scenarios {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi);
    // Integer in [lo, hi].
    std::size_t integer(std::size_t lo, std::size_t hi);

private:
    std::mt19937_64 engine_;
};

enum class TypeLabel { H, L };

char to_char(TypeLabel label);
TypeLabel parse_type(char c);

struct StationType {
    TypeLabel label;
    double demand;
    double sensitivity;
};

// H: d=5, mu=1.   L: d=1, mu=0.1.
StationType base_type(TypeLabel label);
// H: d=5, mu=5.   L: d=1, mu=1.
StationType three_station_type(TypeLabel label);

using Instance = std::pair<Scenario, CoalitionStructure>;

// alpha^t = eta1 for slots t <= T/2 (1-based), eta2 afterwards. Throws
// std::invalid_argument unless alpha sums to 1 within 1e-9.
Vector step_alpha(std::size_t horizon, double eta1, double eta2);

// Five stations, T = 10, b = 0.5. For each k the coalition {1..k} is Type L
// and the rest Type H; a^t = 0.5 + delta * nu_t with nu drawn from `seed`
// (every k sees the same draw).
std::vector<Instance> build_five_station(const std::vector<std::size_t>& sizes, double eta1, double eta2,
                                      double delta, std::uint64_t seed);

// Three stations, T = 10, b = 1, a^t = 10, coalition {1,2}, three-station
// preset types, xbar = d * alpha with the step alpha (0.4/T, 1.6/T).
Instance build_three_station(TypeLabel first, TypeLabel second, TypeLabel outsider);

// n stations, t slots, b = 0.5, base preset. Coalition {1..k}, each
// member Type H with probability p_h; outsiders Type L.
// Draw order: nu_1..nu_T (a^t = 0.5 + 0.4 nu_t), u_1..u_T (alpha = u / sum u),
// then one draw per coalition member in index order.
Instance build_mixed_random(std::size_t n, std::size_t t, std::size_t coalition_size, double p_h,
                            std::uint64_t seed);

enum class Family { unconstrained, case_a, case_b };

struct RandomBounds {
    std::size_t n_min = 1, n_max = 8;
    std::size_t t_min = 1, t_max = 24;
    double b_min = 0.1, b_max = 10.0;    // log-uniform
    double mu_min = 0.1, mu_max = 10.0;  // log-uniform
    double d_min = 0.5, d_max = 10.0;    // log-uniform
    double a_min = 0.0, a_max = 2.0;     // uniform
    std::size_t min_coalitions = 0, max_coalitions = 3;
    std::size_t min_coalition_size = 1;
    Family family = Family::unconstrained;
};

// Throws std::invalid_argument for empty or non-positive ranges.
Instance random_instance(const RandomBounds& bounds, std::uint64_t seed);

}  // namespace evgame::scenarios
