#pragma once

#include "bjq/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bjq {

// Hamilton's two-point function S(x, x', t) with the boundary momenta of
// the solved trajectory from x' (time 0) to x (time t).
struct ActionResult {
    double S = 0.0;
    std::vector<double> p0;  // initial momentum
    std::vector<double> pt;  // final momentum
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct ShootingOptions {
    std::size_t steps = 0;      // 0: choose from t (t / 4e-4, clamped to [64, 4000])
    double tolerance = 1e-10;   // boundary residual, max norm
    std::size_t maxIterations = 50;
    double jacobianStep = 1e-6;  // relative finite-difference step on p0
};

inline std::size_t shooting_steps_for(double t, const ShootingOptions& opts) {
    if (opts.steps) return opts.steps;
    const auto suggested = static_cast<std::size_t>(std::ceil(t / 4e-4));
    return std::clamp<std::size_t>(suggested, 64, 4000);
}

// Shooting method: Newton iteration on the initial momentum so that the
// flow started at x' lands on x at time t. The first guess is the
// free-particle momentum m (x - x') / t, which lies in the basin of the
// unique short-time trajectory.
inline ActionResult two_point_action(const HamiltonianSpec& H, const std::vector<double>& x,
                                     const std::vector<double>& xPrime, double t,
                                     const ShootingOptions& opts = {}) {
    if (!(t > 0.0)) throw std::invalid_argument("two_point_action: t must be positive");
    const std::size_t n = H.dims();
    if (x.size() != n || xPrime.size() != n)
        throw std::invalid_argument("two_point_action: boundary size mismatch");

    const std::size_t steps = shooting_steps_for(t, opts);

    ActionResult result;
    result.p0.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double mass = H.is_kinetic_potential() ? H.masses()[j] : 1.0;
        result.p0[j] = mass * (x[j] - xPrime[j]) / t;
    }

    std::vector<double> residual(n);
    std::vector<std::vector<double>> jac(n, std::vector<double>(n));
    FlowResult flow;

    // Returns the max-norm boundary residual, or infinity when the flow
    // blows up (possible for steep potentials under a bad momentum guess).
    auto evaluate = [&](const std::vector<double>& p0) {
        try {
            flow = flow_rk4(H, xPrime, p0, t, steps);
        } catch (const std::runtime_error&) {
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t j = 0; j < n; ++j) residual[j] = flow.x[j] - x[j];
        double norm = 0.0;
        for (double r : residual) norm = std::max(norm, std::abs(r));
        return norm;
    };

    double norm = evaluate(result.p0);
    if (!std::isfinite(norm)) {
        result.residual = norm;
        return result;
    }
    for (result.iterations = 0; result.iterations < opts.maxIterations && norm > opts.tolerance;
         ++result.iterations) {
        // finite-difference Jacobian d(endpoint)/d(p0)
        std::vector<double> base = residual;
        bool probeFailed = false;
        for (std::size_t c = 0; c < n && !probeFailed; ++c) {
            const double h = opts.jacobianStep * std::max(1.0, std::abs(result.p0[c]));
            std::vector<double> probe = result.p0;
            probe[c] += h;
            try {
                FlowResult fp = flow_rk4(H, xPrime, probe, t, steps);
                for (std::size_t r = 0; r < n; ++r) jac[r][c] = (fp.x[r] - x[r] - base[r]) / h;
            } catch (const std::runtime_error&) {
                probeFailed = true;
            }
        }
        if (probeFailed) break;
        // solve jac * delta = base by Gaussian elimination (n <= 3 in practice)
        std::vector<double> rhs = base;
        std::vector<std::vector<double>> a = jac;
        bool singular = false;
        for (std::size_t col = 0; col < n && !singular; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
            if (std::abs(a[pivot][col]) < 1e-300) {
                singular = true;
                break;
            }
            std::swap(a[col], a[pivot]);
            std::swap(rhs[col], rhs[pivot]);
            for (std::size_t r = col + 1; r < n; ++r) {
                const double f = a[r][col] / a[col][col];
                for (std::size_t c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
                rhs[r] -= f * rhs[col];
            }
        }
        if (singular) break;
        std::vector<double> delta(n);
        for (std::size_t r = n; r-- > 0;) {
            double v = rhs[r];
            for (std::size_t c = r + 1; c < n; ++c) v -= a[r][c] * delta[c];
            delta[r] = v / a[r][r];
        }
        // backtracking: halve the step while it makes things worse
        const std::vector<double> previous = result.p0;
        const double previousNorm = norm;
        double scale = 1.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (std::size_t j = 0; j < n; ++j) result.p0[j] = previous[j] - scale * delta[j];
            norm = evaluate(result.p0);
            if (std::isfinite(norm) && norm < previousNorm) break;
            scale *= 0.5;
        }
        if (!std::isfinite(norm) || norm >= previousNorm) {
            result.p0 = previous;
            norm = evaluate(result.p0);
            break;  // stalled
        }
    }

    result.residual = norm;
    result.converged = norm <= opts.tolerance;
    result.S = flow.action;
    result.pt = flow.p;
    return result;
}

}  // namespace bjq
