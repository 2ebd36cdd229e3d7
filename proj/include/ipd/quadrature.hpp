#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ipd::quad {

// Nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// Tensor-product composite Gauss-Legendre over the axis-aligned box [lo, hi]
// with `panels` subdivisions per axis and an `order`-point rule per panel.
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lo, std::span<const double> hi,
                     int panels, int order = 8);

}  // namespace ipd::quad
