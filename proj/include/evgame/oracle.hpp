#pragma once

// Verification paths that share no solver code with equilibrium.hpp:
// block-coordinate best-response dynamics, a KKT residual computed straight
// from the cost gradients, and a small dense equality-constrained QP solver.

#include <cstddef>
#include <vector>

#include "evgame/model.hpp"

namespace evgame::oracle {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxSweeps = 10'000;

struct BestResponseTrace {
    std::vector<Profile> iterates;    // initial profile first, then one per sweep
    std::vector<double> step_deltas;  // max |x_new - x_old| per sweep
    std::vector<double> residuals;    // kkt_residual after each sweep
    bool converged = false;
    std::size_t monotonicity_violations = 0;

    const Profile& final_profile() const { return iterates.back(); }
    double final_delta() const { return step_deltas.empty() ? 0.0 : step_deltas.back(); }
};

// Exact minimizer of sum_{i in block} c_i over the block's rows, others fixed.
Profile best_response_step(const Scenario& scenario, const CoalitionStructure& structure,
                           const Profile& profile, const StationSet& block);

// Cyclic sweeps over structure.blocks(N) until the max-norm change of a sweep
// is <= tol. With keep_iterates == false only the first and last profiles are
// retained.
BestResponseTrace best_response_dynamics(const Scenario& scenario, const CoalitionStructure& structure,
                                         const Profile& init, double tol = kDefaultTolerance,
                                         std::size_t max_sweeps = kDefaultMaxSweeps,
                                         bool keep_iterates = true);

// Max-norm of the stationarity rows after choosing each station's multiplier
// as minus the slot mean of its gradient, combined with the demand rows.
double kkt_residual(const Scenario& scenario, const CoalitionStructure& structure, const Profile& profile);

// minimize 1/2 x^T H x + g^T x  subject to  A x = c.
struct EqualityQp {
    std::vector<std::vector<double>> hessian;
    std::vector<double> linear;
    std::vector<std::vector<double>> constraints;
    std::vector<double> rhs;
};

struct QpSolution {
    std::vector<double> x;
    std::vector<double> multipliers;
};

// Solves the bordered KKT system by Gaussian elimination with partial
// pivoting. Throws std::runtime_error if the system is singular.
QpSolution solve_equality_qp(const EqualityQp& qp);

// The block's joint cost minimization written out as an EqualityQp.
// Variables are ordered station-major: (block[0], slot 0), (block[0], slot 1), ...
EqualityQp block_problem(const Scenario& scenario, const Profile& profile, const StationSet& block);

// best_response_step through block_problem and solve_equality_qp.
Profile best_response_qp(const Scenario& scenario, const Profile& profile, const StationSet& block);

}  // namespace evgame::oracle
