#include "ipd/quadrature.hpp"

#include <cmath>
#include <cstddef>

#include "ipd/errors.hpp"

namespace ipd::quad {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw invalid_parameter("gauss_legendre: order must be >= 1");
    GaussRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);
    // Newton iteration on P_n from the Chebyshev-like initial guess; roots
    // come in +/- pairs so only the lower half is computed.
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            deriv = n * (x * p1 - p0) / (x * x - 1.0);
            double step = p1 / deriv;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(half - 1)] = 0.0;
    return rule;
}

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi,
                     int panels, int order) {
    if (lo.size() != hi.size() || lo.empty())
        throw invalid_parameter("integrate_box: malformed box");
    if (panels < 1) throw invalid_parameter("integrate_box: panels must be >= 1");
    const int k = static_cast<int>(lo.size());
    for (int a = 0; a < k; ++a)
        if (!(lo[a] < hi[a])) throw invalid_parameter("integrate_box: empty axis");

    GaussRule rule = gauss_legendre(order);
    const int per_axis = panels * order;
    // Flattened composite points and weights per axis.
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(k)),
        ws(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
        double h = (hi[a] - lo[a]) / panels;
        auto& x = xs[static_cast<std::size_t>(a)];
        auto& w = ws[static_cast<std::size_t>(a)];
        x.reserve(static_cast<std::size_t>(per_axis));
        w.reserve(static_cast<std::size_t>(per_axis));
        for (int p = 0; p < panels; ++p) {
            double mid = lo[a] + h * (p + 0.5);
            for (int j = 0; j < order; ++j) {
                x.push_back(mid + 0.5 * h * rule.nodes[static_cast<std::size_t>(j)]);
                w.push_back(0.5 * h * rule.weights[static_cast<std::size_t>(j)]);
            }
        }
    }

    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<double> point(static_cast<std::size_t>(k));
    double total = 0.0;
    for (;;) {
        double weight = 1.0;
        for (int a = 0; a < k; ++a) {
            auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
            point[static_cast<std::size_t>(a)] = xs[static_cast<std::size_t>(a)][i];
            weight *= ws[static_cast<std::size_t>(a)][i];
        }
        total += weight * f(point);
        int a = k - 1;
        while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == per_axis) {
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return total;
}

}  // namespace ipd::quad
