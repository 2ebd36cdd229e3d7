#pragma once

#include <cmath>

namespace ipd {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

// Volume of the unit l_p ball in R^k: (2 Gamma(1/p + 1))^k / Gamma(k/p + 1).
inline double unit_lp_ball_volume(double p, int k) {
    return std::exp(k * (std::log(2.0) + std::lgamma(1.0 / p + 1.0)) -
                    std::lgamma(static_cast<double>(k) / p + 1.0));
}

// Surface measure of the unit sphere S^m embedded in R^{m+1}.
inline double unit_sphere_surface(int m) {
    double a = 0.5 * (m + 1);
    return 2.0 * std::pow(M_PI, a) / std::tgamma(a);
}

}  // namespace ipd
