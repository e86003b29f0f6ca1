#pragma once

// Nash and C-Nash equilibria of the charging game.
//
// With Q = b(11^T + C) + diag(mu), where C is the coalition block matrix, the
// unique equilibrium is
//
//   x^t = d/T + Q^{-1} (v^t - mean_t v),   v^t = mu xbar^t - a^t 1.
//
// The same point solves the stacked KKT system
//
//   Theta x = (I_T (x) mu) xbar - (I_T (x) 1_N) A - (1_T (x) I_N) lambda
//   (1_T^T (x) I_N) x = d,                     Theta = I_T (x) Q,
//
// which c_nash_via_kkt solves by eliminating lambda through
// Gamma = (1_T^T (x) I_N) Theta^{-1} (1_T (x) I_N). Stacked vectors are
// slot-major: entry t*N + i holds station i in slot t.

#include <optional>

#include "evgame/model.hpp"

namespace evgame {

enum class SolveMethod { closed_form, kkt_solve, best_response };

const char* to_string(SolveMethod method);

struct EquilibriumResult {
    Profile profile;
    SolveMethod method = SolveMethod::closed_form;
    double kkt_residual = 0.0;
    CoalitionStructure structure;
    Vector multipliers;  // lambda, one per station
};

struct KktSystem {
    Matrix q;             // b(11^T + C) + mu, N x N
    Matrix theta;         // I_T (x) Q, NT x NT
    Matrix gamma_matrix;  // N x N
    Vector rhs_lin;       // (I_T (x) mu) xbar - (I_T (x) 1_N) A, length NT
    double q_min_eigenvalue = 0.0;
    double q_max_eigenvalue = 0.0;
    bool ill_conditioned = false;
};

struct DefinitenessReport {
    bool q_pd = false;
    double gamma_identity_error = 0.0;  // max |Gamma (Q/T) - I|
    double q_min_eigenvalue = 0.0;
    double q_max_eigenvalue = 0.0;
    bool ill_conditioned = false;
};

// lambda_min(Q) below this fraction of lambda_max(Q) raises a conditioning warning.
inline constexpr double kConditioningRatio = 1e-12;

Matrix game_matrix(const Scenario& scenario, const CoalitionStructure& structure);

EquilibriumResult c_nash_closed_form(const Scenario& scenario, const CoalitionStructure& structure);
EquilibriumResult nash_closed_form(const Scenario& scenario);

KktSystem assemble_kkt(const Scenario& scenario, const CoalitionStructure& structure);
EquilibriumResult c_nash_via_kkt(const Scenario& scenario, const CoalitionStructure& structure);

// Psi_1 = (I - Theta^{-1} E Gamma^{-1} E^T) Theta^{-1},  Psi_2 = Theta^{-1} E Gamma^{-1},
// with E = 1_T (x) I_N.
Matrix psi1(const KktSystem& system, std::size_t n_stations, std::size_t horizon);
Matrix psi2(const KktSystem& system, std::size_t n_stations, std::size_t horizon);

DefinitenessReport check_definiteness(const Scenario& scenario, const CoalitionStructure& structure);

// Max-norm of the stationarity rows Theta x - rhs + E lambda and of the
// demand rows, for a given multiplier vector.
double kkt_system_residual(const Scenario& scenario, const CoalitionStructure& structure,
                           const Profile& profile, const Vector& multipliers);

// Stack an N x T profile slot-major, and back.
Vector stack(const Matrix& charges);
Matrix unstack(const Vector& stacked, std::size_t n_stations, std::size_t horizon);

}  // namespace evgame
