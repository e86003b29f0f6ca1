#include "evgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "evgame/log.hpp"

namespace evgame::oracle {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void check_block(const StationSet& block, std::size_t n)
{
    if (block.empty()) throw std::invalid_argument("best-response block is empty");
    std::vector<bool> seen(n, false);
    for (auto i : block) {
        if (i >= n) throw std::invalid_argument("best-response block index out of range");
        if (seen[i]) throw std::invalid_argument("best-response block repeats a station");
        seen[i] = true;
    }
}

// owner[i] = position of station i's block in `blocks`.
std::vector<std::size_t> block_owner(const std::vector<StationSet>& blocks, std::size_t n)
{
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t k = 0; k < blocks.size(); ++k)
        for (auto i : blocks[k]) owner[i] = k;
    return owner;
}

}  // namespace

Profile best_response_step(const Scenario& scenario, const CoalitionStructure& structure,
                           const Profile& profile, const StationSet& block)
{
    (void)structure;  // the block's objective does not depend on how others are grouped
    const std::size_t n = scenario.n_stations();
    const std::size_t horizon = scenario.horizon();
    check_block(block, n);

    const double b = scenario.price_slope;
    const std::size_t m = block.size();

    // Block Hessian per slot is H = diag(mu_B) + 2b 11^T; invert by Sherman-Morrison.
    std::vector<double> inv_mu(m);
    double inv_mu_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        inv_mu[k] = 1.0 / scenario.sensitivities[idx(block[k])];
        inv_mu_sum += inv_mu[k];
    }
    const double sm_denominator = 1.0 + 2.0 * b * inv_mu_sum;
    auto apply_h_inverse = [&](std::vector<double>& w) {
        double dot = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            w[k] *= inv_mu[k];
            dot += w[k];
        }
        const double scale = 2.0 * b * dot / sm_denominator;
        for (std::size_t k = 0; k < m; ++k) w[k] -= scale * inv_mu[k];
    };

    // r_i^t = mu_i xbar_i^t - a^t - b * (load of stations outside the block).
    std::vector<bool> in_block(n, false);
    for (auto i : block) in_block[i] = true;
    std::vector<std::vector<double>> r(horizon, std::vector<double>(m));
    std::vector<double> r_mean(m, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
        double outside_load = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (!in_block[j]) outside_load += profile.charges(idx(j), idx(t));
        for (std::size_t k = 0; k < m; ++k) {
            const auto i = idx(block[k]);
            r[t][k] = scenario.sensitivities[i] * scenario.nominal_profiles(i, idx(t)) -
                      scenario.price_intercepts[idx(t)] - b * outside_load;
            r_mean[k] += r[t][k] / static_cast<double>(horizon);
        }
    }

    // x^t = d_B / T + H^{-1} (r^t - mean_t r).
    Profile out = profile;
    for (std::size_t t = 0; t < horizon; ++t) {
        std::vector<double> w(m);
        for (std::size_t k = 0; k < m; ++k) w[k] = r[t][k] - r_mean[k];
        apply_h_inverse(w);
        for (std::size_t k = 0; k < m; ++k) {
            const auto i = idx(block[k]);
            out.charges(i, idx(t)) = scenario.demands[i] / static_cast<double>(horizon) + w[k];
        }
    }
    return out;
}

double kkt_residual(const Scenario& scenario, const CoalitionStructure& structure, const Profile& profile)
{
    const std::size_t n = scenario.n_stations();
    const std::size_t horizon = scenario.horizon();
    const auto blocks = structure.blocks(n);
    const auto owner = block_owner(blocks, n);
    const double b = scenario.price_slope;

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> grad(horizon);
        double mean = 0.0;
        for (std::size_t t = 0; t < horizon; ++t) {
            double total = 0.0;
            double block_load = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double x = profile.charges(idx(j), idx(t));
                total += x;
                if (owner[j] == owner[i]) block_load += x;
            }
            grad[t] = scenario.price_intercepts[idx(t)] + b * total + b * block_load +
                      scenario.sensitivities[idx(i)] *
                          (profile.charges(idx(i), idx(t)) - scenario.nominal_profiles(idx(i), idx(t)));
            mean += grad[t] / static_cast<double>(horizon);
        }
        for (double g : grad) worst = std::max(worst, std::abs(g - mean));
        double row = 0.0;
        for (std::size_t t = 0; t < horizon; ++t) row += profile.charges(idx(i), idx(t));
        worst = std::max(worst, std::abs(row - scenario.demands[idx(i)]));
    }
    return worst;
}

BestResponseTrace best_response_dynamics(const Scenario& scenario, const CoalitionStructure& structure,
                                         const Profile& init, double tol, std::size_t max_sweeps,
                                         bool keep_iterates)
{
    if (!(tol > 0.0)) throw std::invalid_argument("best-response tolerance must be positive");
    scenario.validate();
    structure.validate(scenario.n_stations());
    check_feasible(scenario, init);

    const auto blocks = structure.blocks(scenario.n_stations());
    BestResponseTrace trace;
    trace.iterates.push_back(init);
    Profile current = init;
    double previous_residual = kkt_residual(scenario, structure, current);

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        Profile next = current;
        for (const auto& block : blocks) next = best_response_step(scenario, structure, next, block);

        const double delta = (next.charges - current.charges).cwiseAbs().maxCoeff();
        const double residual = kkt_residual(scenario, structure, next);
        trace.step_deltas.push_back(delta);
        trace.residuals.push_back(residual);
        if (residual > previous_residual * (1.0 + 1e-12) + 1e-15) {
            ++trace.monotonicity_violations;
            std::ostringstream msg;
            msg << "best-response residual increased at sweep " << sweep + 1 << ": " << previous_residual
                << " -> " << residual;
            log::debug(msg.str());
        }
        previous_residual = residual;
        current = std::move(next);
        if (keep_iterates) trace.iterates.push_back(current);

        if (delta <= tol) {
            trace.converged = true;
            break;
        }
    }
    if (!keep_iterates) trace.iterates.push_back(current);
    if (!trace.converged) {
        std::ostringstream msg;
        msg << "best-response dynamics did not converge in " << max_sweeps << " sweeps; final delta "
            << trace.final_delta();
        log::warn(msg.str());
    }
    return trace;
}

QpSolution solve_equality_qp(const EqualityQp& qp)
{
    const std::size_t nv = qp.linear.size();
    const std::size_t nc = qp.rhs.size();
    if (qp.hessian.size() != nv || qp.constraints.size() != nc)
        throw std::invalid_argument("equality QP dimensions disagree");
    const std::size_t dim = nv + nc;

    // [H A^T; A 0] [x; nu] = [-g; c]
    std::vector<std::vector<double>> k(dim, std::vector<double>(dim + 1, 0.0));
    for (std::size_t i = 0; i < nv; ++i) {
        if (qp.hessian[i].size() != nv) throw std::invalid_argument("Hessian row has wrong length");
        for (std::size_t j = 0; j < nv; ++j) k[i][j] = qp.hessian[i][j];
        k[i][dim] = -qp.linear[i];
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (qp.constraints[c].size() != nv) throw std::invalid_argument("constraint row has wrong length");
        for (std::size_t j = 0; j < nv; ++j) {
            k[nv + c][j] = qp.constraints[c][j];
            k[j][nv + c] = qp.constraints[c][j];
        }
        k[nv + c][dim] = qp.rhs[c];
    }

    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < dim; ++r)
            if (std::abs(k[r][col]) > std::abs(k[pivot][col])) pivot = r;
        if (std::abs(k[pivot][col]) < 1e-300) throw std::runtime_error("equality QP KKT matrix is singular");
        std::swap(k[col], k[pivot]);
        for (std::size_t r = col + 1; r < dim; ++r) {
            const double f = k[r][col] / k[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j <= dim; ++j) k[r][j] -= f * k[col][j];
        }
    }
    std::vector<double> sol(dim);
    for (std::size_t r = dim; r-- > 0;) {
        double s = k[r][dim];
        for (std::size_t j = r + 1; j < dim; ++j) s -= k[r][j] * sol[j];
        sol[r] = s / k[r][r];
    }
    QpSolution out;
    out.x.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nv));
    out.multipliers.assign(sol.begin() + static_cast<std::ptrdiff_t>(nv), sol.end());
    return out;
}

EqualityQp block_problem(const Scenario& scenario, const Profile& profile, const StationSet& block)
{
    const std::size_t n = scenario.n_stations();
    const std::size_t horizon = scenario.horizon();
    check_block(block, n);
    const std::size_t m = block.size();
    const double b = scenario.price_slope;

    std::vector<bool> in_block(n, false);
    for (auto i : block) in_block[i] = true;

    EqualityQp qp;
    const std::size_t nv = m * horizon;
    qp.hessian.assign(nv, std::vector<double>(nv, 0.0));
    qp.linear.assign(nv, 0.0);
    qp.constraints.assign(m, std::vector<double>(nv, 0.0));
    qp.rhs.assign(m, 0.0);

    for (std::size_t t = 0; t < horizon; ++t) {
        double outside_load = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (!in_block[j]) outside_load += profile.charges(idx(j), idx(t));
        for (std::size_t k = 0; k < m; ++k) {
            const auto i = idx(block[k]);
            const std::size_t row = k * horizon + t;
            for (std::size_t l = 0; l < m; ++l) qp.hessian[row][l * horizon + t] = 2.0 * b;
            qp.hessian[row][row] += scenario.sensitivities[i];
            qp.linear[row] = scenario.price_intercepts[idx(t)] + b * outside_load -
                             scenario.sensitivities[i] * scenario.nominal_profiles(i, idx(t));
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t t = 0; t < horizon; ++t) qp.constraints[k][k * horizon + t] = 1.0;
        qp.rhs[k] = scenario.demands[idx(block[k])];
    }
    return qp;
}

Profile best_response_qp(const Scenario& scenario, const Profile& profile, const StationSet& block)
{
    const auto sol = solve_equality_qp(block_problem(scenario, profile, block));
    Profile out = profile;
    const std::size_t horizon = scenario.horizon();
    for (std::size_t k = 0; k < block.size(); ++k)
        for (std::size_t t = 0; t < horizon; ++t)
            out.charges(idx(block[k]), idx(t)) = sol.x[k * horizon + t];
    return out;
}

}  // namespace evgame::oracle
