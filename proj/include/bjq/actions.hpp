#pragma once

#include "bjq/convergence.hpp"
#include "bjq/quadrature.hpp"
#include "bjq/quantize.hpp"
#include "bjq/shooting.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjq {

// Segment average of the potential along the straight line from x' to x:
//   vbar(x, x') = int_0^1 V(tau x + (1 - tau) x') dtau.
// Exact term rule for polynomials, 16-node Gauss-Legendre otherwise.
inline double vbar(const Potential& V, std::span<const double> x, std::span<const double> xPrime) {
    const std::size_t n = V.dims();
    if (x.size() != n || xPrime.size() != n) throw std::invalid_argument("vbar: argument size mismatch");
    if (V.poly()) {
        static thread_local std::vector<double> ps;
        ps.assign(n, 0.0);
        TwoPointSymbol avg = average_symbol(*V.poly());
        return avg.evaluate(x, xPrime, ps);
    }
    static thread_local std::vector<double> mid;
    mid.resize(n);
    return gauss_legendre_unit([&](double tau) {
        for (std::size_t j = 0; j < n; ++j) mid[j] = tau * x[j] + (1.0 - tau) * xPrime[j];
        return V.value(mid);
    });
}

// Short-time action approximation built from the averaged potential:
//   sum_j m_j (x_j - x'_j)^2 / (2t) - vbar(x, x') t.
inline double sbar_kinetic_potential(std::span<const double> x, std::span<const double> xPrime, double t,
                                     std::span<const double> masses, const Potential& V) {
    if (!(t > 0.0)) throw std::invalid_argument("sbar_kinetic_potential: t must be positive");
    const std::size_t n = V.dims();
    if (x.size() != n || xPrime.size() != n || masses.size() != n)
        throw std::invalid_argument("sbar_kinetic_potential: argument size mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = x[j] - xPrime[j];
        s += masses[j] * d * d / (2.0 * t);
    }
    return s - vbar(V, x, xPrime) * t;
}

// General-Hamiltonian variant evaluated with the boundary momentum of the
// solved trajectory:  p_t (x - x') - Hbar(x, x', p_t) t.
inline double sbar_general(const HamiltonianSpec& H, std::span<const double> x,
                           std::span<const double> xPrime, const ActionResult& bvp, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("sbar_general: t must be positive");
    if (!bvp.converged) throw std::runtime_error("sbar_general: boundary-value solve did not converge");
    const std::size_t n = H.dims();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += bvp.pt[j] * (x[j] - xPrime[j]);
    if (H.is_kinetic_potential()) {
        // averaged symbol of p^2/2m + V is the kinetic part plus vbar
        double avgH = vbar(H.potential(), x, xPrime);
        for (std::size_t j = 0; j < n; ++j) avgH += bvp.pt[j] * bvp.pt[j] / (2.0 * H.masses()[j]);
        return s - avgH * t;
    }
    return s - average_symbol(H.poly()).evaluate(x, xPrime, bvp.pt) * t;
}

inline double sbar_general(const HamiltonianSpec& H, std::span<const double> x,
                           std::span<const double> xPrime, double t, const ShootingOptions& opts = {}) {
    std::vector<double> xv(x.begin(), x.end()), xp(xPrime.begin(), xPrime.end());
    ActionResult bvp = two_point_action(H, xv, xp, t, opts);
    return sbar_general(H, x, xPrime, bvp, t);
}

struct MidpointActions {
    double s1;  // endpoint-averaged potential: (V(x) + V(x')) / 2
    double s2;  // midpoint-evaluated potential: V((x + x') / 2)
};

inline MidpointActions midpoint_actions(std::span<const double> x, std::span<const double> xPrime,
                                        double t, std::span<const double> masses, const Potential& V) {
    if (!(t > 0.0)) throw std::invalid_argument("midpoint_actions: t must be positive");
    const std::size_t n = V.dims();
    if (x.size() != n || xPrime.size() != n || masses.size() != n)
        throw std::invalid_argument("midpoint_actions: argument size mismatch");
    double kinetic = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = x[j] - xPrime[j];
        kinetic += masses[j] * d * d / (2.0 * t);
    }
    static thread_local std::vector<double> mid;
    mid.resize(n);
    for (std::size_t j = 0; j < n; ++j) mid[j] = 0.5 * (x[j] + xPrime[j]);
    const double v1 = 0.5 * (V.value(x) + V.value(xPrime));
    const double v2 = V.value(mid);
    return {kinetic - v1 * t, kinetic - v2 * t};
}

// Errors of the approximate actions against the solved two-point action,
// one convergence report per approximant. Boundary-value failures skip the
// sample and are recorded on every affected report.
inline std::map<std::string, ConvergenceReport> action_error_study(const HamiltonianSpec& H,
                                                                   const std::vector<double>& x,
                                                                   const std::vector<double>& xPrime,
                                                                   const std::vector<double>& tGrid,
                                                                   const ShootingOptions& opts = {}) {
    const bool kinetic = H.is_kinetic_potential();
    std::vector<std::pair<double, double>> sbarErr, s1Err, s2Err;
    std::vector<std::pair<double, std::string>> skipped;

    for (double t : tGrid) {
        if (!(t > 0.0)) throw std::invalid_argument("action_error_study: t grid must be positive");
        ActionResult bvp = two_point_action(H, x, xPrime, t, opts);
        if (!bvp.converged) {
            skipped.emplace_back(t, "bvp-not-converged");
            continue;
        }
        // errors at the rounding floor count as exact agreement, so that
        // e.g. the free particle yields an (honestly) empty fit
        const double floor = 1e-12 * std::max(1.0, std::abs(bvp.S));
        auto record = [&](std::vector<std::pair<double, double>>& dst, double approx) {
            const double err = std::abs(bvp.S - approx);
            dst.emplace_back(t, err < floor ? 0.0 : err);
        };
        if (kinetic) {
            record(sbarErr, sbar_kinetic_potential(x, xPrime, t, H.masses(), H.potential()));
            const MidpointActions mid = midpoint_actions(x, xPrime, t, H.masses(), H.potential());
            record(s1Err, mid.s1);
            record(s2Err, mid.s2);
        } else {
            record(sbarErr, sbar_general(H, x, xPrime, bvp, t));
        }
    }

    std::map<std::string, ConvergenceReport> out;
    auto finish = [&](const char* key, std::vector<std::pair<double, double>>& samples) {
        ConvergenceReport rep = fit_loglog(std::move(samples));
        rep.skipped = skipped;
        out.emplace(key, std::move(rep));
    };
    finish("sbar", sbarErr);
    if (kinetic) {
        finish("s1", s1Err);
        finish("s2", s2Err);
    }
    return out;
}

}  // namespace bjq
