#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ndsim {

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // 95% normal-approximation half width
    int n = 0;
    double lo() const { return mean - half_width; }
    double hi() const { return mean + half_width; }
};

inline MeanCi mean_ci(const std::vector<double>& values, double z = 1.959963984540054) {
    if (values.empty()) throw std::invalid_argument("mean_ci: empty sample");
    MeanCi r;
    r.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    r.mean = sum / r.n;
    if (r.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - r.mean) * (v - r.mean);
        r.half_width = z * std::sqrt(ss / (r.n - 1) / r.n);
    }
    return r;
}

struct ProportionCi {
    double p = 0.0, lo = 0.0, hi = 1.0;
    std::int64_t exposure = 0;
};

inline ProportionCi proportion_ci(std::int64_t successes, std::int64_t exposure,
                                  double z = 1.959963984540054) {
    if (exposure <= 0) throw std::invalid_argument("proportion_ci: no exposure");
    ProportionCi r;
    r.exposure = exposure;
    r.p = static_cast<double>(successes) / static_cast<double>(exposure);
    const double se = std::sqrt(std::max(r.p * (1.0 - r.p), 0.0) / static_cast<double>(exposure));
    r.lo = std::max(0.0, r.p - z * se);
    r.hi = std::min(1.0, r.p + z * se);
    return r;
}

// paired per-index differences a[i] - b[i]; z = mean / se for one-sided tests
struct PairedDiff {
    double mean_diff = 0.0;
    double se = 0.0;
    double z = 0.0;
    int n = 0;
};

inline PairedDiff paired_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("paired_diff: need two equal samples of size >= 2");
    PairedDiff r;
    r.n = static_cast<int>(a.size());
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    auto m = mean_ci(d);
    r.mean_diff = m.mean;
    r.se = m.half_width / 1.959963984540054;
    r.z = r.se > 0.0 ? r.mean_diff / r.se : (r.mean_diff == 0.0 ? 0.0 : INFINITY * (r.mean_diff > 0 ? 1 : -1));
    return r;
}

// least-squares slope with a 95% interval, for trend/flatness checks
struct SlopeCi {
    double slope = 0.0;
    double half_width = 0.0;
    double lo() const { return slope - half_width; }
    double hi() const { return slope + half_width; }
};

inline SlopeCi slope_ci(const std::vector<double>& x, const std::vector<double>& y,
                        double z = 1.959963984540054) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("slope_ci: need matched samples of size >= 3");
    const int n = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("slope_ci: degenerate x values");
    SlopeCi r;
    r.slope = sxy / sxx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - my - r.slope * (x[i] - mx);
        rss += e * e;
    }
    const double sigma2 = rss / std::max(1, n - 2);
    r.half_width = z * std::sqrt(sigma2 / sxx);
    return r;
}

}  // namespace ndsim
