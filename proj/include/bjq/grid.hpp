#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace bjq {

// Uniform 1D grid including both endpoints.
struct Grid1D {
    double xMin;
    double xMax;
    int nPoints;

    Grid1D(double xmin, double xmax, int n) : xMin(xmin), xMax(xmax), nPoints(n) {
        if (!(xMax > xMin)) throw std::invalid_argument("Grid1D: xMax must exceed xMin");
        if (nPoints < 16) throw std::invalid_argument("Grid1D: nPoints must be >= 16");
    }

    double dx() const { return (xMax - xMin) / (nPoints - 1); }
    double point(int i) const { return xMin + i * dx(); }

    friend bool operator==(const Grid1D& a, const Grid1D& b) {
        return a.xMin == b.xMin && a.xMax == b.xMax && a.nPoints == b.nPoints;
    }
    friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }
};

// Trapezoid quadrature weights (dx, halved at the two ends).
inline Eigen::VectorXd trapezoid_weights(const Grid1D& g) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.nPoints, g.dx());
    w(0) *= 0.5;
    w(g.nPoints - 1) *= 0.5;
    return w;
}

struct WaveFunction {
    Grid1D grid;
    Eigen::VectorXcd values;

    WaveFunction(Grid1D g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.nPoints)
            throw std::invalid_argument("WaveFunction: value count must match the grid");
    }

    double norm() const {
        const Eigen::VectorXd w = trapezoid_weights(grid);
        return std::sqrt((w.array() * values.array().abs2()).sum());
    }
};

inline double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid != b.grid) throw std::invalid_argument("l2_distance: grid mismatch");
    const Eigen::VectorXd w = trapezoid_weights(a.grid);
    return std::sqrt((w.array() * (a.values - b.values).array().abs2()).sum());
}

inline std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid != b.grid) throw std::invalid_argument("inner_product: grid mismatch");
    const Eigen::VectorXd w = trapezoid_weights(a.grid);
    return (w.array().cast<std::complex<double>>() * a.values.array().conjugate() * b.values.array())
        .sum();
}

// Normalized Gaussian centered at x0: (1/(pi sigma^2))^(1/4) e^{-(x-x0)^2 / (2 sigma^2)}.
inline WaveFunction gaussian_state(const Grid1D& g, double x0 = 0.0, double sigma = 1.0) {
    Eigen::VectorXcd v(g.nPoints);
    const double norm = std::pow(std::numbers::pi * sigma * sigma, -0.25);
    for (int i = 0; i < g.nPoints; ++i) {
        const double d = g.point(i) - x0;
        v(i) = norm * std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return {g, std::move(v)};
}

// The standard initial state of the laboratory: a unit Gaussian.
inline WaveFunction unit_gaussian(const Grid1D& g) { return gaussian_state(g); }

}  // namespace bjq
