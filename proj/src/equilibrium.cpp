#include "evgame/equilibrium.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "evgame/errors.hpp"
#include "evgame/log.hpp"

namespace evgame {

namespace {

using Index = Eigen::Index;

struct Spectrum {
    double min = 0.0;
    double max = 0.0;
};

Spectrum spectrum(const Matrix& symmetric)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

bool ill_conditioned(const Spectrum& s)
{
    return !(s.min > kConditioningRatio * std::abs(s.max));
}

void prepare(const Scenario& scenario, const CoalitionStructure& structure)
{
    scenario.validate();
    structure.validate(scenario.n_stations());
}

Eigen::LLT<Matrix> factor_or_throw(const Matrix& m, const char* name)
{
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        const auto s = spectrum(m);
        std::ostringstream msg;
        msg << "Cholesky factorization of " << name << " failed; smallest eigenvalue estimate "
            << s.min;
        throw NumericalError(msg.str(), s.min);
    }
    return llt;
}

// v^t = mu xbar^t - a^t 1, as an N x T matrix.
Matrix linear_terms(const Scenario& scenario)
{
    Matrix v = scenario.sensitivities.asDiagonal() * scenario.nominal_profiles;
    v.rowwise() -= scenario.price_intercepts.transpose();
    return v;
}

}  // namespace

const char* to_string(SolveMethod method)
{
    switch (method) {
        case SolveMethod::closed_form: return "closed_form";
        case SolveMethod::kkt_solve: return "kkt_solve";
        case SolveMethod::best_response: return "best_response";
    }
    return "unknown";
}

Vector stack(const Matrix& charges)
{
    return charges.reshaped();
}

Matrix unstack(const Vector& stacked, std::size_t n_stations, std::size_t horizon)
{
    return stacked.reshaped(static_cast<Index>(n_stations), static_cast<Index>(horizon));
}

Matrix game_matrix(const Scenario& scenario, const CoalitionStructure& structure)
{
    const auto n = static_cast<Index>(scenario.n_stations());
    Matrix q = scenario.price_slope *
               (Matrix::Ones(n, n) + coalition_block_matrix(structure, scenario.n_stations()));
    q.diagonal() += scenario.sensitivities;
    return q;
}

double kkt_system_residual(const Scenario& scenario, const CoalitionStructure& structure,
                           const Profile& profile, const Vector& multipliers)
{
    const Matrix q = game_matrix(scenario, structure);
    Matrix stationarity = q * profile.charges - linear_terms(scenario);
    stationarity.colwise() += multipliers;
    const Vector demand_gap = profile.charges.rowwise().sum() - scenario.demands;
    return std::max(stationarity.cwiseAbs().maxCoeff(), demand_gap.cwiseAbs().maxCoeff());
}

EquilibriumResult c_nash_closed_form(const Scenario& scenario, const CoalitionStructure& structure)
{
    prepare(scenario, structure);
    const auto t = static_cast<double>(scenario.horizon());

    const Matrix q = game_matrix(scenario, structure);
    const auto llt = factor_or_throw(q, "Q");

    // The (T delta - 1)/T kernel splits into the slot term minus the slot mean.
    const Matrix v = linear_terms(scenario);
    const Vector v_mean = v.rowwise().mean();
    Matrix centered = v;
    centered.colwise() -= v_mean;

    EquilibriumResult out;
    out.profile.charges = llt.solve(centered);
    out.profile.charges.colwise() += scenario.demands / t;
    out.method = SolveMethod::closed_form;
    out.structure = structure;
    out.multipliers = v_mean - q * scenario.demands / t;
    out.kkt_residual = kkt_system_residual(scenario, structure, out.profile, out.multipliers);
    return out;
}

EquilibriumResult nash_closed_form(const Scenario& scenario)
{
    return c_nash_closed_form(scenario, CoalitionStructure{});
}

KktSystem assemble_kkt(const Scenario& scenario, const CoalitionStructure& structure)
{
    prepare(scenario, structure);
    const auto n = static_cast<Index>(scenario.n_stations());
    const auto t = static_cast<Index>(scenario.horizon());

    KktSystem sys;
    sys.q = game_matrix(scenario, structure);
    const auto s = spectrum(sys.q);
    sys.q_min_eigenvalue = s.min;
    sys.q_max_eigenvalue = s.max;
    sys.ill_conditioned = ill_conditioned(s);
    if (sys.ill_conditioned) {
        std::ostringstream msg;
        msg << "Q is badly conditioned: lambda_min = " << s.min << ", lambda_max = " << s.max;
        log::warn(msg.str());
    }

    sys.theta = Eigen::kroneckerProduct(Matrix::Identity(t, t), sys.q);
    const auto theta_llt = factor_or_throw(sys.theta, "Theta");

    const Matrix e = Eigen::kroneckerProduct(Matrix::Ones(t, 1), Matrix::Identity(n, n));
    sys.gamma_matrix = e.transpose() * theta_llt.solve(e);

    const Matrix a_stacked = Eigen::kroneckerProduct(scenario.price_intercepts, Matrix::Ones(n, 1));
    sys.rhs_lin = Eigen::kroneckerProduct(Matrix::Identity(t, t), Matrix(scenario.sensitivities.asDiagonal())) *
                      stack(scenario.nominal_profiles) -
                  a_stacked.col(0);
    return sys;
}

Matrix psi2(const KktSystem& system, std::size_t n_stations, std::size_t horizon)
{
    const auto n = static_cast<Index>(n_stations);
    const auto t = static_cast<Index>(horizon);
    const Matrix e = Eigen::kroneckerProduct(Matrix::Ones(t, 1), Matrix::Identity(n, n));
    const auto theta_llt = factor_or_throw(system.theta, "Theta");
    const auto gamma_llt = factor_or_throw(system.gamma_matrix, "Gamma");
    return theta_llt.solve(e) * gamma_llt.solve(Matrix::Identity(n, n));
}

Matrix psi1(const KktSystem& system, std::size_t n_stations, std::size_t horizon)
{
    const auto n = static_cast<Index>(n_stations);
    const auto t = static_cast<Index>(horizon);
    const Matrix e = Eigen::kroneckerProduct(Matrix::Ones(t, 1), Matrix::Identity(n, n));
    const auto theta_llt = factor_or_throw(system.theta, "Theta");
    const Matrix theta_inv = theta_llt.solve(Matrix::Identity(n * t, n * t));
    const Matrix projector = Matrix::Identity(n * t, n * t) -
                             psi2(system, n_stations, horizon) * e.transpose();
    return projector * theta_inv;
}

EquilibriumResult c_nash_via_kkt(const Scenario& scenario, const CoalitionStructure& structure)
{
    const KktSystem sys = assemble_kkt(scenario, structure);
    const auto n = static_cast<Index>(scenario.n_stations());
    const auto t = static_cast<Index>(scenario.horizon());
    const Matrix e = Eigen::kroneckerProduct(Matrix::Ones(t, 1), Matrix::Identity(n, n));

    const auto theta_llt = factor_or_throw(sys.theta, "Theta");
    const auto gamma_llt = factor_or_throw(sys.gamma_matrix, "Gamma");

    // x = Psi_1 r + Psi_2 d, applied as
    //   y = Theta^{-1} r,  lambda = Gamma^{-1}(E^T y - d),  x = y - Theta^{-1} E lambda.
    const Vector y = theta_llt.solve(sys.rhs_lin);
    const Vector lambda = gamma_llt.solve(e.transpose() * y - scenario.demands);
    const Vector x = y - theta_llt.solve(e * lambda);

    EquilibriumResult out;
    out.profile.charges = unstack(x, scenario.n_stations(), scenario.horizon());
    out.method = SolveMethod::kkt_solve;
    out.structure = structure;
    out.multipliers = lambda;
    out.kkt_residual = kkt_system_residual(scenario, structure, out.profile, out.multipliers);
    return out;
}

DefinitenessReport check_definiteness(const Scenario& scenario, const CoalitionStructure& structure)
{
    prepare(scenario, structure);
    DefinitenessReport report;
    const Matrix q = game_matrix(scenario, structure);
    const auto s = spectrum(q);
    report.q_min_eigenvalue = s.min;
    report.q_max_eigenvalue = s.max;
    report.ill_conditioned = ill_conditioned(s);

    Eigen::LLT<Matrix> llt(q);
    report.q_pd = llt.info() == Eigen::Success;
    if (!report.q_pd) {
        report.gamma_identity_error = std::numeric_limits<double>::infinity();
        return report;
    }
    const KktSystem sys = assemble_kkt(scenario, structure);
    const auto n = static_cast<Index>(scenario.n_stations());
    const double t = static_cast<double>(scenario.horizon());
    report.gamma_identity_error =
        (sys.gamma_matrix * (q / t) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    return report;
}

}  // namespace evgame
