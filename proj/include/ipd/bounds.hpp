#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ipd/ballgeom.hpp"
#include "ipd/density.hpp"
#include "ipd/distances.hpp"

namespace ipd::bounds {

using ballgeom::Box;
using distances::DistanceSpec;
using distances::Point;

struct L2Report {
    double value = 0.0;
    double quadrature_error = 0.0;
    double truncation_tail = 0.0;
};

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

// Population discrepancy with its propagated Monte Carlo error; the error is
// zero on the closed-form path.
struct DeltaKEstimate {
    double value = 0.0;
    double mc_error = 0.0;
};

enum class CdfMethod { Auto, ClosedForm, MonteCarlo };

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double slack = 0.0;  // rhs - lhs
    // echo of the inputs the verdict was computed from
    double t = 0.0;
    std::vector<double> xi;
    double scale_constant = 1.0;  // c for the L2 form, C for the discrepancy form
    double delta_constant = 1.0;  // delta_* lower or delta^* upper
    double tolerance = 0.0;       // 1e-9 + propagated numerical and MC error
};

struct RatePoint {
    double shift = 0.0;
    double log_delta_k = 0.0;
    double log_l2 = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<RatePoint> points;
    double theoretical_exponent = 0.0;  // beta / (alpha + beta)
    double c_hat = 0.0;                 // max over points of l2 / delta_k^exponent
};

// Smallest axis-aligned box whose marginal tails are negligible for both
// densities (Gaussians at 8 sigma). Unsupported for FisherS2.
Box default_box(const DensitySpec& f, const DensitySpec& g);

// Tensor Gauss-Legendre integral of (f-g)^2 over the box. The box must cover
// at least 1 - 1e-6 of both masses (checked through the marginal CDFs).
L2Report l2_distance_sq(const DensitySpec& f, const DensitySpec& g, const Box& box,
                        int panels);
// Same machinery for the integral of f^2.
L2Report l2_norm_sq(const DensitySpec& f, const Box& box, int panels);

// P(h(X,Y) < u) for independent X ~ f, Y ~ g when a closed form exists:
// 1-D Gaussians under any l_p, and isotropic 2-D Gaussians under l_2.
std::optional<double> population_pair_cdf(const DistanceSpec& spec, const DensitySpec& f,
                                          const DensitySpec& g, double u);

// Population Delta_K(t); pass t = infinity for Delta_K(inf). Closed-form CDFs
// when available, otherwise mc_pairs independent pair draws per curve.
DeltaKEstimate population_delta_k(const DistanceSpec& spec, const DensitySpec& f,
                                  const DensitySpec& g, double t,
                                  CdfMethod method = CdfMethod::Auto,
                                  std::int64_t mc_pairs = 1'000'000,
                                  std::uint64_t seed = 0);

// [F_XX(t) + F_YY(t) - 2 F_XY(t)] / Phi(xi, t).
McEstimate small_ball_normalized(const DistanceSpec& spec, const DensitySpec& f,
                                 const DensitySpec& g, double t, const Point& xi,
                                 CdfMethod method = CdfMethod::Auto,
                                 std::int64_t mc_pairs = 1'000'000,
                                 std::uint64_t seed = 0);

// r(xi, t): outer integral by importance sampling from (f+g)/2, inner integral
// over the ball B_t(x) by rejection from its bounding box.
McEstimate remainder_r(const DistanceSpec& spec, const DensitySpec& f,
                       const DensitySpec& g, const Point& xi, double t,
                       std::int64_t mc_n = 20'000, std::uint64_t seed = 0);

// All-ones for positive-orthant families, the north pole on the sphere, the
// origin otherwise.
Point default_xi(const DistanceSpec& spec);

// ||f-g||^2 <= (1/(c delta_*)) [Delta_K(t)/Phi(xi,t) + r(xi,t)]
BoundCheck check_ineq_l2(const DistanceSpec& spec, const DensitySpec& f,
                         const DensitySpec& g, const Point& xi, double t, double c = 1.0,
                         double delta_star = 1.0, std::uint64_t seed = 0,
                         std::int64_t remainder_n = 20'000);

// Delta_K(t) <= C delta^* Phi(xi,t) (||f|| + ||g||) ||f-g||
BoundCheck check_ineq_delta_k(const DistanceSpec& spec, const DensitySpec& f,
                              const DensitySpec& g, const Point& xi, double t,
                              double big_c = 1.0, double delta_sup = 1.0,
                              std::uint64_t seed = 0);

// Shifts base by each ladder value along the first coordinate, computes
// population Delta_K(inf) and ||f-g||^2, and fits log l2 against log Delta_K.
RateFit rate_experiment(const DistanceSpec& spec, const DensitySpec& base,
                        const std::vector<double>& ladder, double alpha, double beta,
                        std::uint64_t seed = 0);

}  // namespace ipd::bounds
