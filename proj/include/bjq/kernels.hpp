#pragma once

#include "bjq/classical_poly.hpp"
#include "bjq/convergence.hpp"
#include "bjq/grid.hpp"
#include "bjq/hamiltonian.hpp"
#include "bjq/parallel.hpp"
#include "bjq/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjq {

// 1D potential for the grid laboratory. Polynomials evaluate by Horner's
// rule with exact derivative coefficients; callables fall back to finite
// differences for slopes and Gauss-Legendre for segment averages.
class ScalarPotential {
public:
    static ScalarPotential from_poly(const ClassicalPoly& poly) {
        if (poly.dims() != 1 || poly.uses_momentum())
            throw std::invalid_argument("ScalarPotential: expected a 1D position-only polynomial");
        ScalarPotential v;
        v.coeffs_.assign(poly.max_x_degree(0) + 1, 0.0);
        for (const auto& [m, c] : poly.terms()) v.coeffs_[m.xExp[0]] = to_double(c);
        v.isPoly_ = true;
        return v;
    }

    static ScalarPotential from_function(std::function<double(double)> fn) {
        ScalarPotential v;
        v.fn_ = std::move(fn);
        return v;
    }

    static ScalarPotential from_potential(const Potential& p) {
        if (p.dims() != 1) throw std::invalid_argument("ScalarPotential: potential must be 1D");
        if (p.poly()) return from_poly(*p.poly());
        return from_function([p](double x) { return p.value(std::span<const double>(&x, 1)); });
    }

    bool is_poly() const { return isPoly_; }

    double value(double x) const {
        if (!isPoly_) return fn_(x);
        double acc = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
        return acc;
    }

    double slope(double x) const {
        if (isPoly_) {
            double acc = 0.0;
            for (std::size_t k = coeffs_.size(); k-- > 1;)
                acc = acc * x + coeffs_[k] * static_cast<double>(k);
            return acc;
        }
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        return (fn_(x + h) - fn_(x - h)) / (2.0 * h);
    }

    double curvature(double x) const {
        if (isPoly_) {
            double acc = 0.0;
            for (std::size_t k = coeffs_.size(); k-- > 2;)
                acc = acc * x + coeffs_[k] * static_cast<double>(k * (k - 1));
            return acc;
        }
        const double h = 1e-4 * std::max(1.0, std::abs(x));
        return (fn_(x + h) - 2.0 * fn_(x) + fn_(x - h)) / (h * h);
    }

    // Average along the segment [x', x]: exact per-power rule for
    // polynomials, 16-node Gauss-Legendre otherwise.
    double segment_average(double x, double xPrime) const {
        if (!isPoly_)
            return gauss_legendre_unit([&](double tau) { return fn_(tau * x + (1.0 - tau) * xPrime); });
        double acc = 0.0;
        for (std::size_t m = 0; m < coeffs_.size(); ++m) {
            if (coeffs_[m] == 0.0) continue;
            // sum_k x^k x'^(m-k) / (m+1)
            double sum = 0.0, xp = 1.0;
            for (std::size_t k = 0; k <= m; ++k) {
                double term = xp;
                for (std::size_t r = 0; r < m - k; ++r) term *= xPrime;
                sum += term;
                xp *= x;
            }
            acc += coeffs_[m] * sum / static_cast<double>(m + 1);
        }
        return acc;
    }

private:
    std::vector<double> coeffs_;
    bool isPoly_ = false;
    std::function<double(double)> fn_;
};

inline double vbar(const ScalarPotential& V, double x, double xPrime) {
    return V.segment_average(x, xPrime);
}

enum class KernelKind { KS, VanVleck, Midpoint1, Midpoint2, Exact };

inline const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::KS: return "ks";
        case KernelKind::VanVleck: return "vanvleck";
        case KernelKind::Midpoint1: return "midpoint1";
        case KernelKind::Midpoint2: return "midpoint2";
        case KernelKind::Exact: return "exact";
    }
    return "?";
}

// Complex matrix sampling a two-point propagator K(x, x', t) on the grid.
// The matrix acts on states through apply_kernel's trapezoid rule, so the
// entries carry kernel (density) units; at t -> 0 the diagonal approaches
// the discrete delta 1/w.
struct KernelMatrix {
    Grid1D grid;
    double t;
    KernelKind kind;
    Eigen::MatrixXcd entries;
};

// Band-limited Fresnel factor: the free-particle momentum integral
//   (1/2 pi hbar) int e^{i(p d - p^2 t / 2m)/hbar} dp
// evaluated over the grid's conjugate momenta p_k = 2 pi hbar k / (N dx),
// |k| <= N/2 - 1, returned for every offset d = j dx, j = -(N-1)..N-1.
// Where the chirp is resolved by the grid this agrees with the closed-form
// sqrt(m / 2 pi i hbar t) e^{i m d^2 / 2 hbar t} (branch e^{-i pi/4}); at
// small t the closed form aliases under trapezoid application while this
// quadrature of the same integral remains accurate, and it tends to the
// discrete delta as t -> 0.
inline Eigen::VectorXcd fresnel_offsets(const Grid1D& g, double t, double mass, double hbar) {
    const int n = g.nPoints;
    const double period = n * g.dx();
    const int kMax = n / 2 - 1;
    Eigen::VectorXcd out(2 * n - 1);
    std::vector<std::complex<double>> multiplier(2 * kMax + 1);
    for (int k = -kMax; k <= kMax; ++k) {
        const double p = 2.0 * std::numbers::pi * hbar * k / period;
        multiplier[k + kMax] = std::polar(1.0, -p * p * t / (2.0 * mass * hbar));
    }
    for (int j = -(n - 1); j <= n - 1; ++j) {
        const double d = j * g.dx();
        std::complex<double> acc = 0.0;
        for (int k = -kMax; k <= kMax; ++k) {
            const double p = 2.0 * std::numbers::pi * hbar * k / period;
            acc += multiplier[k + kMax] * std::polar(1.0, p * d / hbar);
        }
        out(j + n - 1) = acc / period;
    }
    return out;
}

namespace detail {

template <class PhaseFn>
KernelMatrix chirp_kernel(const Grid1D& g, double t, double mass, double hbar, KernelKind kind,
                          PhaseFn&& potentialTerm) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel: t must be positive");
    const Eigen::VectorXcd chirp = fresnel_offsets(g, t, mass, hbar);
    KernelMatrix K{g, t, kind, Eigen::MatrixXcd(g.nPoints, g.nPoints)};
    for (int i = 0; i < g.nPoints; ++i) {
        const double xi = g.point(i);
        for (int j = 0; j < g.nPoints; ++j) {
            const double xj = g.point(j);
            K.entries(i, j) =
                chirp(i - j + g.nPoints - 1) * std::polar(1.0, -potentialTerm(xi, xj) * t / hbar);
        }
    }
    return K;
}

}  // namespace detail

// Kerner-Sutcliffe propagator: free-particle Fresnel factor times the
// segment-averaged potential phase e^{-i vbar(x, x') t / hbar}.
inline KernelMatrix ks_kernel(const Grid1D& g, double t, double mass, const ScalarPotential& V,
                              double hbar) {
    return detail::chirp_kernel(g, t, mass, hbar, KernelKind::KS,
                                [&](double x, double xp) { return V.segment_average(x, xp); });
}

// Midpoint propagators: same Fresnel factor with the potential phase taken
// from (V(x) + V(x'))/2 (variant 1) or V((x + x')/2) (variant 2).
inline KernelMatrix midpoint_kernel(const Grid1D& g, double t, double mass, const ScalarPotential& V,
                                    double hbar, int variant) {
    if (variant == 1)
        return detail::chirp_kernel(g, t, mass, hbar, KernelKind::Midpoint1, [&](double x, double xp) {
            return 0.5 * (V.value(x) + V.value(xp));
        });
    if (variant == 2)
        return detail::chirp_kernel(g, t, mass, hbar, KernelKind::Midpoint2, [&](double x, double xp) {
            return V.value(0.5 * (x + xp));
        });
    throw std::invalid_argument("midpoint_kernel: variant must be 1 or 2");
}

namespace detail {

struct Shoot1D {
    double S = 0.0;
    double p0 = 0.0;
    double pt = 0.0;
    bool converged = false;
};

// Scalar shooting with the variational equation integrated alongside the
// state, so each Newton step needs a single flow. Used by the Van Vleck
// lattice where hundreds of thousands of solves per kernel matter.
template <class Pot>
Shoot1D shoot_1d(const Pot& V, double mass, double xTarget, double xStart, double t, int steps,
                 double p0Guess, double tol, int maxIter) {
    Shoot1D out;
    double p0 = p0Guess;
    const double h = t / steps;

    auto flow = [&](double p0v, double& xEnd, double& pEnd, double& dxdp0, double& action) {
        double x = xStart, p = p0v, dx = 0.0, dp = 1.0, S = 0.0;
        for (int s = 0; s < steps; ++s) {
            double kx[4], kp[4], kdx[4], kdp[4], kS[4];
            double xs = x, ps = p, dxs = dx, dps = dp;
            for (int stg = 0; stg < 4; ++stg) {
                kx[stg] = ps / mass;
                kp[stg] = -V.slope(xs);
                kdx[stg] = dps / mass;
                kdp[stg] = -V.curvature(xs) * dxs;
                kS[stg] = ps * ps / (2.0 * mass) - V.value(xs);
                const double frac = stg == 2 ? 1.0 : 0.5;
                if (stg < 3) {
                    xs = x + frac * h * kx[stg];
                    ps = p + frac * h * kp[stg];
                    dxs = dx + frac * h * kdx[stg];
                    dps = dp + frac * h * kdp[stg];
                }
            }
            x += h / 6.0 * (kx[0] + 2 * kx[1] + 2 * kx[2] + kx[3]);
            p += h / 6.0 * (kp[0] + 2 * kp[1] + 2 * kp[2] + kp[3]);
            dx += h / 6.0 * (kdx[0] + 2 * kdx[1] + 2 * kdx[2] + kdx[3]);
            dp += h / 6.0 * (kdp[0] + 2 * kdp[1] + 2 * kdp[2] + kdp[3]);
            S += h / 6.0 * (kS[0] + 2 * kS[1] + 2 * kS[2] + kS[3]);
            if (!std::isfinite(x) || !std::isfinite(p)) return false;
        }
        xEnd = x;
        pEnd = p;
        dxdp0 = dx;
        action = S;
        return true;
    };

    double xEnd = 0, pEnd = 0, sens = 0, action = 0;
    if (!flow(p0, xEnd, pEnd, sens, action)) return out;
    double residual = xEnd - xTarget;
    for (int it = 0; it < maxIter && std::abs(residual) > tol; ++it) {
        if (sens == 0.0) break;
        const double step = residual / sens;
        double scale = 1.0;
        const double prevResidual = std::abs(residual);
        bool improved = false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            const double candidate = p0 - scale * step;
            if (flow(candidate, xEnd, pEnd, sens, action) &&
                std::abs(xEnd - xTarget) < prevResidual) {
                p0 = candidate;
                residual = xEnd - xTarget;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;
    }
    out.converged = std::abs(residual) <= tol;
    out.S = action;
    out.p0 = p0;
    out.pt = pEnd;
    return out;
}

}  // namespace detail

struct VanVleckOptions {
    double tolerance = 1e-10;
    int maxIterations = 50;
    int steps = 0;  // 0: choose from t
};

inline int vanvleck_steps_for(double t, const VanVleckOptions& opts) {
    if (opts.steps) return opts.steps;
    return std::clamp(static_cast<int>(std::ceil(t / 5e-4)), 64, 1000);
}

namespace detail {

// Two-point actions on the grid extended by one spacing on each side, so
// the trajectory-density cross difference has room at the boundary.
// S(i, j) = action from x' = xe[j] to x = xe[i]; Newton warm-starts from
// the neighbouring solve.
inline Eigen::MatrixXd action_lattice(const ScalarPotential& V, double mass, const Grid1D& g, double t,
                                      const VanVleckOptions& opts) {
    const int n = g.nPoints + 2;
    const double dx = g.dx();
    Eigen::MatrixXd S(n, n);
    const int steps = vanvleck_steps_for(t, opts);
    std::optional<std::pair<double, double>> firstFailure;
    std::mutex failureMutex;

    parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t row) {
        const double xi = g.xMin + (static_cast<int>(row) - 1) * dx;
        double warm = 0.0;
        bool haveWarm = false;
        for (int j = 0; j < n; ++j) {
            const double xj = g.xMin + (j - 1) * dx;
            // free-particle guess plus the leading potential correction
            const double coldGuess =
                mass * (xi - xj) / t + 0.5 * t * V.slope(0.5 * (xi + xj));
            double guess = haveWarm ? warm - mass * dx / t : coldGuess;
            detail::Shoot1D sol = detail::shoot_1d(V, mass, xi, xj, t, steps, guess, opts.tolerance,
                                                   opts.maxIterations);
            if (!sol.converged && haveWarm)  // retry from the cold guess
                sol = detail::shoot_1d(V, mass, xi, xj, t, steps, coldGuess, opts.tolerance,
                                       opts.maxIterations);
            if (!sol.converged) {
                std::lock_guard<std::mutex> lock(failureMutex);
                if (!firstFailure) firstFailure = {xi, xj};
                return;
            }
            S(static_cast<int>(row), j) = sol.S;
            warm = sol.p0;
            haveWarm = true;
        }
    });

    if (firstFailure) {
        std::ostringstream os;
        os << "van Vleck kernel: boundary-value solve failed at (x=" << firstFailure->first
           << ", x'=" << firstFailure->second << ", t=" << t << ")";
        throw std::runtime_error(os.str());
    }
    return S;
}

// Assembles sqrt(rho / 2 pi i hbar) e^{iS/hbar} as [band-limited Fresnel
// factor] x sqrt(rho t / m) e^{i(S - m d^2/2t)/hbar}. The second factor is
// smooth in both arguments, so the trapezoid rule resolves it; the chirp
// lives entirely in the Fresnel factor, and the t -> 0 delta limit and the
// e^{-i pi/4} branch come with it.
inline KernelMatrix vanvleck_from_lattice(const Eigen::MatrixXd& S, const Grid1D& g, double t,
                                          double mass, double hbar) {
    const int n = g.nPoints;
    const double dx = g.dx();
    const Eigen::VectorXcd chirp = fresnel_offsets(g, t, mass, hbar);
    KernelMatrix K{g, t, KernelKind::VanVleck, Eigen::MatrixXcd(n, n)};
    for (int i = 0; i < n; ++i) {
        const double xi = g.point(i);
        for (int j = 0; j < n; ++j) {
            const double xj = g.point(j);
            // rho = -d^2 S / dx dx' by the cross difference at lattice spacing
            const double rho =
                -(S(i + 2, j + 2) - S(i + 2, j) - S(i, j + 2) + S(i, j)) / (4.0 * dx * dx);
            const double d = xi - xj;
            const std::complex<double> smooth =
                std::sqrt(std::complex<double>(rho * t / mass)) *
                std::polar(1.0, (S(i + 1, j + 1) - mass * d * d / (2.0 * t)) / hbar);
            K.entries(i, j) = chirp(i - j + n - 1) * smooth;
        }
    }
    return K;
}

}  // namespace detail

// Van Vleck propagator sqrt(rho / 2 pi i hbar) e^{iS/hbar} with S solved
// per entry by the shooting method and rho = -d^2S/dxdx' by central
// differences at the grid spacing.
inline KernelMatrix vanvleck_kernel(const ScalarPotential& V, double mass, const Grid1D& g, double t,
                                    double hbar, const VanVleckOptions& opts = {}) {
    if (!(t > 0.0)) throw std::invalid_argument("vanvleck_kernel: t must be positive");
    const Eigen::MatrixXd S = detail::action_lattice(V, mass, g, t, opts);
    return detail::vanvleck_from_lattice(S, g, t, mass, hbar);
}

inline KernelMatrix vanvleck_kernel(const HamiltonianSpec& H, const Grid1D& g, double t, double hbar,
                                    const VanVleckOptions& opts = {}) {
    if (!H.is_kinetic_potential() || H.dims() != 1)
        throw std::invalid_argument("vanvleck_kernel: needs a 1D kinetic-plus-potential Hamiltonian");
    return vanvleck_kernel(ScalarPotential::from_potential(H.potential()), H.masses()[0], g, t, hbar,
                           opts);
}

// Same assembly from a closed-form action S(x, x'), for Hamiltonians whose
// two-point function is known exactly (quadratic cases).
inline KernelMatrix vanvleck_kernel_from_action(const std::function<double(double, double)>& S,
                                                const Grid1D& g, double t, double mass, double hbar) {
    if (!(t > 0.0)) throw std::invalid_argument("vanvleck_kernel_from_action: t must be positive");
    const int n = g.nPoints + 2;
    const double dx = g.dx();
    Eigen::MatrixXd lattice(n, n);
    for (int i = 0; i < n; ++i) {
        const double xi = g.xMin + (i - 1) * dx;
        for (int j = 0; j < n; ++j) lattice(i, j) = S(xi, g.xMin + (j - 1) * dx);
    }
    return detail::vanvleck_from_lattice(lattice, g, t, mass, hbar);
}

// Numerically exact reference: eigendecomposition of the real symmetric
// discretization H = -hbar^2/(2m) D2 + diag(V) with Dirichlet ends. The
// evolution e^{-iHt/hbar} carries no step-size error in t, so convergence
// slopes measured against it are uncontaminated. D2 uses the fourth-order
// five-point stencil: the second-order stencil's O(dx^2) bias enters every
// measured error as ~1e-4 t on the standard grid, drowning the t^2 signal
// of the better kernels at the small end of the time grid.
class ExactEvolver {
public:
    ExactEvolver(const Grid1D& g, double mass, const ScalarPotential& V, double hbar)
        : grid_(g), hbar_(hbar), weights_(trapezoid_weights(g)) {
        const int n = g.nPoints;
        const double dx = g.dx();
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
        const double kinetic = hbar * hbar / (2.0 * mass * dx * dx);
        for (int i = 0; i < n; ++i) {
            H(i, i) = 2.5 * kinetic + V.value(g.point(i));
            if (i + 1 < n) {
                H(i, i + 1) = -4.0 / 3.0 * kinetic;
                H(i + 1, i) = -4.0 / 3.0 * kinetic;
            }
            if (i + 2 < n) {
                H(i, i + 2) = kinetic / 12.0;
                H(i + 2, i) = kinetic / 12.0;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("ExactEvolver: eigendecomposition failed");
        evals_ = solver.eigenvalues();
        evecs_ = solver.eigenvectors();
    }

    const Grid1D& grid() const { return grid_; }

    // U(t) = evecs e^{-i E t/hbar} evecs^T, plain matrix action; entries are
    // rescaled by 1/w_j so that the trapezoid application reproduces it.
    KernelMatrix kernel(double t) const {
        const Eigen::VectorXcd phases =
            (std::complex<double>(0, -t / hbar_) * evals_.cast<std::complex<double>>().array())
                .exp()
                .matrix();
        Eigen::MatrixXcd U = evecs_.cast<std::complex<double>>() * phases.asDiagonal() *
                             evecs_.transpose().cast<std::complex<double>>();
        for (int j = 0; j < grid_.nPoints; ++j) U.col(j) /= weights_(j);
        return {grid_, t, KernelKind::Exact, std::move(U)};
    }

    WaveFunction evolve(const WaveFunction& psi, double t) const {
        if (psi.grid != grid_) throw std::invalid_argument("ExactEvolver: grid mismatch");
        const Eigen::VectorXcd phases =
            (std::complex<double>(0, -t / hbar_) * evals_.cast<std::complex<double>>().array())
                .exp()
                .matrix();
        Eigen::VectorXcd modal = evecs_.transpose().cast<std::complex<double>>() * psi.values;
        modal.array() *= phases.array();
        return {grid_, evecs_.cast<std::complex<double>>() * modal};
    }

    const Eigen::VectorXd& eigenvalues() const { return evals_; }

private:
    Grid1D grid_;
    double hbar_;
    Eigen::VectorXd weights_;
    Eigen::VectorXd evals_;
    Eigen::MatrixXd evecs_;
};

inline KernelMatrix exact_reference(const Grid1D& g, double mass, const ScalarPotential& V, double hbar,
                                    double t) {
    return ExactEvolver(g, mass, V, hbar).kernel(t);
}

// psi(x) = int K(x, x') psi0(x') dx' by the trapezoid rule.
inline WaveFunction apply_kernel(const KernelMatrix& K, const WaveFunction& psi) {
    if (K.grid != psi.grid) throw std::invalid_argument("apply_kernel: grid mismatch");
    const Eigen::VectorXd w = trapezoid_weights(K.grid);
    Eigen::VectorXcd weighted = w.cast<std::complex<double>>().asDiagonal() * psi.values;
    return {K.grid, K.entries * weighted};
}

using KernelBuilder = std::function<KernelMatrix(double)>;

// Applies the builder's kernel at dt = t/N, N times.
inline WaveFunction compose_steps(const KernelBuilder& builder, std::size_t n, double t,
                                  const WaveFunction& psi0) {
    if (n < 1) throw std::invalid_argument("compose_steps: N must be >= 1");
    const KernelMatrix K = builder(t / static_cast<double>(n));
    WaveFunction psi = psi0;
    for (std::size_t s = 0; s < n; ++s) psi = apply_kernel(K, psi);
    return psi;
}

// One-step L2 error against the exact reference for each builder over the
// time grid; failures (for instance Van Vleck entries past a focal point)
// skip the sample and are recorded on the report.
inline std::map<std::string, ConvergenceReport> wavefunction_error_study(
    const std::map<std::string, KernelBuilder>& builders, const WaveFunction& psi0,
    const std::vector<double>& tGrid, const ExactEvolver& oracle) {
    std::map<std::string, ConvergenceReport> out;
    for (const auto& [name, builder] : builders) {
        std::vector<std::pair<double, double>> samples;
        std::vector<std::pair<double, std::string>> skipped;
        for (double t : tGrid) {
            if (!(t > 0.0)) throw std::invalid_argument("wavefunction_error_study: t must be positive");
            try {
                const WaveFunction approx = apply_kernel(builder(t), psi0);
                double err = l2_distance(approx, oracle.evolve(psi0, t));
                if (err < 1e-13) err = 0.0;  // rounding floor for unit-norm states
                samples.emplace_back(t, err);
            } catch (const std::exception& err) {
                skipped.emplace_back(t, err.what());
            }
        }
        ConvergenceReport rep = fit_loglog(std::move(samples));
        rep.skipped = std::move(skipped);
        out.emplace(name, std::move(rep));
    }
    return out;
}

}  // namespace bjq
