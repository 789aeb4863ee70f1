#pragma once

#include <array>
#include <utility>

namespace bjq {

// 16-node Gauss-Legendre rule on [0, 1]; exact for polynomials up to
// degree 31, which covers every segment average the tests throw at it.
inline constexpr std::array<std::pair<double, double>, 16> kGaussLegendre16{{
    {0.0052995325041750307, 0.013576229705877019},
    {0.0277124884633837, 0.031126761969323853},
    {0.067184398806084122, 0.047579255841246296},
    {0.1222977958224985, 0.062314485627767015},
    {0.19106187779867811, 0.074797994408288382},
    {0.27099161117138632, 0.08457825969750131},
    {0.35919822461037054, 0.091301707522461806},
    {0.45249374508118129, 0.094725305227534293},
    {0.54750625491881877, 0.094725305227534293},
    {0.64080177538962946, 0.091301707522461806},
    {0.72900838882861363, 0.08457825969750131},
    {0.80893812220132189, 0.074797994408288382},
    {0.87770220417750155, 0.062314485627767015},
    {0.93281560119391593, 0.047579255841246296},
    {0.9722875115366163, 0.031126761969323853},
    {0.99470046749582497, 0.013576229705877019},
}};

// integral of f over [0, 1]
template <class F>
double gauss_legendre_unit(F&& f) {
    double acc = 0.0;
    for (const auto& [node, weight] : kGaussLegendre16) acc += weight * f(node);
    return acc;
}

}  // namespace bjq
