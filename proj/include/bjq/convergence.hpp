#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace bjq {

// (t, error) samples with a least-squares power-law fit on (log t, log err).
// Samples with non-positive or non-finite error are excluded from the fit;
// fewer than two usable samples flags the report as degenerate.
struct ConvergenceReport {
    std::vector<std::pair<double, double>> samples;  // sorted ascending in t
    double slope = 0.0;
    double intercept = 0.0;
    double rSquared = 0.0;
    std::size_t fittedCount = 0;
    bool degenerate = true;

    std::vector<std::pair<double, std::string>> skipped;  // (t, reason)
};

inline ConvergenceReport fit_loglog(std::vector<std::pair<double, double>> samples) {
    ConvergenceReport rep;
    std::sort(samples.begin(), samples.end());
    rep.samples = std::move(samples);

    std::vector<double> lx, ly;
    for (const auto& [t, err] : rep.samples) {
        if (!(t > 0.0) || !(err > 0.0) || !std::isfinite(err)) continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(err));
    }
    rep.fittedCount = lx.size();
    if (rep.fittedCount < 2) return rep;

    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return rep;
    rep.slope = (n * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / n;

    double ssRes = 0, ssTot = 0;
    const double meanY = sy / n;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double fit = rep.intercept + rep.slope * lx[i];
        ssRes += (ly[i] - fit) * (ly[i] - fit);
        ssTot += (ly[i] - meanY) * (ly[i] - meanY);
    }
    rep.rSquared = ssTot > 0 ? 1.0 - ssRes / ssTot : 1.0;
    rep.degenerate = false;
    return rep;
}

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// CSV layout: '# key=value' comment header, one 't,error' row per sample,
// closing '# slope=<v> r2=<v>' comment. 17 significant digits throughout.
inline void write_csv(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& header,
                      const ConvergenceReport& rep) {
    for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
    for (const auto& [t, err] : rep.samples)
        os << format_g17(t) << "," << format_g17(err) << "\n";
    for (const auto& [t, reason] : rep.skipped)
        os << "# skipped t=" << format_g17(t) << " reason=" << reason << "\n";
    if (rep.degenerate)
        os << "# slope=nan r2=nan degenerate=1\n";
    else
        os << "# slope=" << format_g17(rep.slope) << " r2=" << format_g17(rep.rSquared) << "\n";
}

// The standard laboratory time grid: t = t0 * 2^-k, k = 0..count-1.
inline std::vector<double> geometric_time_grid(double t0 = 0.2, std::size_t count = 8) {
    std::vector<double> ts(count);
    for (std::size_t k = 0; k < count; ++k) ts[k] = t0 * std::pow(2.0, -static_cast<double>(k));
    return ts;
}

}  // namespace bjq
