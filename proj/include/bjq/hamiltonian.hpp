#pragma once

#include "bjq/classical_poly.hpp"
#include "bjq/quantize.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bjq {

using PotentialFn = std::function<double(std::span<const double>)>;

// Potential energy V(x) on R^n, either an exact polynomial (gradients by
// exact differentiation) or an opaque callable (gradients by central
// differences).
class Potential {
public:
    static Potential from_poly(ClassicalPoly xOnly) {
        if (xOnly.uses_momentum()) throw std::invalid_argument("Potential: polynomial must be x-only");
        Potential v;
        v.dims_ = xOnly.dims();
        v.gradient_.reserve(v.dims_);
        for (std::size_t j = 0; j < v.dims_; ++j) v.gradient_.push_back(xOnly.derivative_x(j));
        v.poly_ = std::move(xOnly);
        return v;
    }

    static Potential from_function(std::size_t dims, PotentialFn fn) {
        Potential v;
        v.dims_ = dims;
        v.fn_ = std::move(fn);
        return v;
    }

    static Potential zero(std::size_t dims) { return from_poly(ClassicalPoly::zero(dims)); }

    std::size_t dims() const { return dims_; }
    const std::optional<ClassicalPoly>& poly() const { return poly_; }

    double value(std::span<const double> x) const {
        if (poly_) {
            static thread_local std::vector<double> zeros;
            zeros.assign(x.size(), 0.0);
            return poly_->evaluate(x, zeros);
        }
        return fn_(x);
    }

    void gradient(std::span<const double> x, std::span<double> out) const {
        if (poly_) {
            static thread_local std::vector<double> zeros;
            zeros.assign(x.size(), 0.0);
            for (std::size_t j = 0; j < dims_; ++j) out[j] = gradient_[j].evaluate(x, zeros);
            return;
        }
        static thread_local std::vector<double> probe;
        probe.assign(x.begin(), x.end());
        for (std::size_t j = 0; j < dims_; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            probe[j] = x[j] + h;
            const double fp = fn_(probe);
            probe[j] = x[j] - h;
            const double fm = fn_(probe);
            probe[j] = x[j];
            out[j] = (fp - fm) / (2.0 * h);
        }
    }

private:
    std::size_t dims_ = 1;
    std::optional<ClassicalPoly> poly_;
    std::vector<ClassicalPoly> gradient_;
    PotentialFn fn_;
};

// Hamiltonian driving the classical flow: either kinetic-plus-potential
// sum_j p_j^2 / 2 m_j + V(x), or a general polynomial H(x, p).
class HamiltonianSpec {
public:
    static HamiltonianSpec kinetic_potential(std::vector<double> masses, Potential V, double hbar = 1.0) {
        if (masses.size() != V.dims())
            throw std::invalid_argument("HamiltonianSpec: one mass per dimension");
        for (double m : masses)
            if (!(m > 0)) throw std::invalid_argument("HamiltonianSpec: masses must be positive");
        HamiltonianSpec h;
        h.masses_ = std::move(masses);
        h.potential_ = std::move(V);
        h.hbar_ = hbar;
        return h;
    }

    static HamiltonianSpec general_poly(ClassicalPoly H, double hbar = 1.0) {
        HamiltonianSpec h;
        h.dHdx_.reserve(H.dims());
        h.dHdp_.reserve(H.dims());
        for (std::size_t j = 0; j < H.dims(); ++j) {
            h.dHdx_.push_back(H.derivative_x(j));
            h.dHdp_.push_back(H.derivative_p(j));
        }
        h.hpoly_ = std::move(H);
        h.hbar_ = hbar;
        return h;
    }

    bool is_kinetic_potential() const { return !hpoly_.has_value(); }
    std::size_t dims() const { return hpoly_ ? hpoly_->dims() : masses_.size(); }
    double hbar() const { return hbar_; }
    const std::vector<double>& masses() const { return masses_; }
    const Potential& potential() const { return *potential_; }
    const ClassicalPoly& poly() const { return *hpoly_; }

    double value(std::span<const double> x, std::span<const double> p) const {
        if (hpoly_) return hpoly_->evaluate(x, p);
        double e = potential_->value(x);
        for (std::size_t j = 0; j < masses_.size(); ++j) e += p[j] * p[j] / (2.0 * masses_[j]);
        return e;
    }

    // xdot = dH/dp, pdot = -dH/dx
    void derivatives(std::span<const double> x, std::span<const double> p, std::span<double> xdot,
                     std::span<double> pdot) const {
        if (hpoly_) {
            for (std::size_t j = 0; j < dims(); ++j) {
                xdot[j] = dHdp_[j].evaluate(x, p);
                pdot[j] = -dHdx_[j].evaluate(x, p);
            }
            return;
        }
        potential_->gradient(x, pdot);
        for (std::size_t j = 0; j < masses_.size(); ++j) {
            xdot[j] = p[j] / masses_[j];
            pdot[j] = -pdot[j];
        }
    }

    // p . dH/dp - H, the integrand of the action along a flow line.
    double lagrangian(std::span<const double> x, std::span<const double> p,
                      std::span<const double> xdot) const {
        double pv = 0.0;
        for (std::size_t j = 0; j < dims(); ++j) pv += p[j] * xdot[j];
        return pv - value(x, p);
    }

private:
    std::vector<double> masses_;
    std::optional<Potential> potential_;
    std::optional<ClassicalPoly> hpoly_;
    std::vector<ClassicalPoly> dHdx_, dHdp_;
    double hbar_ = 1.0;
};

struct TrajectorySample {
    double time;
    std::vector<double> x;
    std::vector<double> p;
};

struct FlowResult {
    std::vector<double> x;
    std::vector<double> p;
    double action = 0.0;  // int (p . xdot - H) ds along the solved path
    std::vector<TrajectorySample> trajectory;
};

// Fixed-step fourth-order Runge-Kutta integration of Hamilton's equations,
// accumulating the action alongside the state.
inline FlowResult flow_rk4(const HamiltonianSpec& H, std::vector<double> x0, std::vector<double> p0,
                           double t, std::size_t steps, bool recordTrajectory = false) {
    if (steps < 1) throw std::invalid_argument("flow_rk4: steps must be >= 1");
    const std::size_t n = H.dims();
    if (x0.size() != n || p0.size() != n) throw std::invalid_argument("flow_rk4: state size mismatch");

    std::vector<double> x = std::move(x0), p = std::move(p0);
    double action = 0.0;
    const double h = t / static_cast<double>(steps);

    std::vector<double> kx[4], kp[4];
    double ks[4];
    for (auto& v : kx) v.resize(n);
    for (auto& v : kp) v.resize(n);
    std::vector<double> xt(n), pt(n);

    FlowResult result;
    if (recordTrajectory) result.trajectory.push_back({0.0, x, p});

    auto stage = [&](int s, double frac, int prev) {
        if (s == 0) {
            H.derivatives(x, p, kx[0], kp[0]);
            ks[0] = H.lagrangian(x, p, kx[0]);
            return;
        }
        for (std::size_t j = 0; j < n; ++j) {
            xt[j] = x[j] + frac * h * kx[prev][j];
            pt[j] = p[j] + frac * h * kp[prev][j];
        }
        H.derivatives(xt, pt, kx[s], kp[s]);
        ks[s] = H.lagrangian(xt, pt, kx[s]);
    };

    for (std::size_t step = 0; step < steps; ++step) {
        stage(0, 0.0, 0);
        stage(1, 0.5, 0);
        stage(2, 0.5, 1);
        stage(3, 1.0, 2);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] += h / 6.0 * (kx[0][j] + 2 * kx[1][j] + 2 * kx[2][j] + kx[3][j]);
            p[j] += h / 6.0 * (kp[0][j] + 2 * kp[1][j] + 2 * kp[2][j] + kp[3][j]);
            if (!std::isfinite(x[j]) || !std::isfinite(p[j]))
                throw std::runtime_error("flow_rk4: state became non-finite");
        }
        action += h / 6.0 * (ks[0] + 2 * ks[1] + 2 * ks[2] + ks[3]);
        if (recordTrajectory)
            result.trajectory.push_back({h * static_cast<double>(step + 1), x, p});
    }

    result.x = std::move(x);
    result.p = std::move(p);
    result.action = action;
    return result;
}

}  // namespace bjq
