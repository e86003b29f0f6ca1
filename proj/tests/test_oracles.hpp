#pragma once

// Test-only reference computations. Nothing here calls into equilibrium.cpp.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "evgame/model.hpp"

namespace evgame::testing {

inline Scenario make_scenario(std::vector<double> a, double b, std::vector<double> mu, std::vector<double> d,
                              std::vector<std::vector<double>> xbar)
{
    Scenario s;
    s.price_intercepts = Eigen::Map<Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
    s.price_slope = b;
    s.sensitivities = Eigen::Map<Vector>(mu.data(), static_cast<Eigen::Index>(mu.size()));
    s.demands = Eigen::Map<Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
    s.nominal_profiles.resize(static_cast<Eigen::Index>(xbar.size()), static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < xbar.size(); ++i)
        for (std::size_t t = 0; t < a.size(); ++t)
            s.nominal_profiles(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = xbar[i][t];
    return s;
}

inline Scenario with_uniform_nominal(Scenario s)
{
    s.nominal_profiles = (s.demands / static_cast<double>(s.horizon())).replicate(1, s.price_intercepts.size());
    return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

// Dense I_T (x) Q by explicit index arithmetic.
inline Matrix kron_identity(std::size_t horizon, const Matrix& q)
{
    const auto n = q.rows();
    const auto t = static_cast<Eigen::Index>(horizon);
    Matrix out = Matrix::Zero(n * t, n * t);
    for (Eigen::Index k = 0; k < t; ++k) out.block(k * n, k * n, n, n) = q;
    return out;
}

// Q = b(11^T + C) + mu with C written out entry by entry from the coalition sets.
inline Matrix reference_q(const Scenario& s, const CoalitionStructure& structure)
{
    const auto n = static_cast<Eigen::Index>(s.n_stations());
    Matrix c = Matrix::Identity(n, n);
    for (const auto& coalition : structure.coalitions())
        for (auto i : coalition)
            for (auto j : coalition) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    Matrix q = s.price_slope * (Matrix::Ones(n, n) + c);
    for (Eigen::Index i = 0; i < n; ++i) q(i, i) += s.sensitivities[i];
    return q;
}

// The bordered KKT system [Theta E; E^T 0][x; lambda] = [rhs; d], solved with
// a full-pivot LU. Returns the N x T profile and sets `lambda`.
inline Matrix bordered_kkt_solve(const Scenario& s, const CoalitionStructure& structure, Vector* lambda = nullptr)
{
    const auto n = static_cast<Eigen::Index>(s.n_stations());
    const auto t = static_cast<Eigen::Index>(s.horizon());
    const Matrix theta = kron_identity(s.horizon(), reference_q(s, structure));
    Matrix k = Matrix::Zero(n * t + n, n * t + n);
    k.topLeftCorner(n * t, n * t) = theta;
    for (Eigen::Index slot = 0; slot < t; ++slot)
        for (Eigen::Index i = 0; i < n; ++i) {
            k(slot * n + i, n * t + i) = 1.0;
            k(n * t + i, slot * n + i) = 1.0;
        }
    Vector rhs(n * t + n);
    for (Eigen::Index slot = 0; slot < t; ++slot)
        for (Eigen::Index i = 0; i < n; ++i)
            rhs[slot * n + i] = s.sensitivities[i] * s.nominal_profiles(i, slot) - s.price_intercepts[slot];
    rhs.tail(n) = s.demands;
    const Vector sol = k.fullPivLu().solve(rhs);
    if (lambda) *lambda = sol.tail(n);
    Matrix x(n, t);
    for (Eigen::Index slot = 0; slot < t; ++slot)
        for (Eigen::Index i = 0; i < n; ++i) x(i, slot) = sol[slot * n + i];
    return x;
}

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
inline double power_iteration_max(const Matrix& m, int iterations = 5000)
{
    Vector v = Vector::Ones(m.rows()).normalized();
    double lambda = 0.0;
    for (int k = 0; k < iterations; ++k) {
        const Vector w = m * v;
        lambda = v.dot(w);
        v = w.normalized();
    }
    return lambda;
}

// Smallest eigenvalue via power iteration on (lambda_max I - M).
inline double power_iteration_min(const Matrix& m, int iterations = 20000)
{
    const double top = power_iteration_max(m);
    const Matrix shifted = top * Matrix::Identity(m.rows(), m.cols()) - m;
    Vector v = Vector::LinSpaced(m.rows(), 1.0, 2.0).normalized();
    double mu = 0.0;
    for (int k = 0; k < iterations; ++k) {
        const Vector w = shifted * v;
        mu = v.dot(w);
        v = w.normalized();
    }
    return top - mu;
}

// Minimizes a 1-D function on [lo, hi]: grid at `step`, then golden-section
// refinement around the best grid point.
inline double grid_then_refine(const std::function<double(double)>& f, double lo, double hi, double step)
{
    double best = lo;
    double best_val = f(lo);
    for (double u = lo; u <= hi; u += step) {
        const double v = f(u);
        if (v < best_val) {
            best_val = v;
            best = u;
        }
    }
    double a = best - step;
    double b = best + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 200; ++k) {
        const double c = b - g * (b - a);
        const double d = a + g * (b - a);
        if (f(c) < f(d))
            b = d;
        else
            a = c;
    }
    return 0.5 * (a + b);
}

}  // namespace evgame::testing
