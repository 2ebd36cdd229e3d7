#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipd/density.hpp"
#include "ipd/distances.hpp"

namespace ipd::ballgeom {

using distances::DistanceSpec;
using distances::Point;

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    double volume() const;
    bool contains(std::span<const double> y) const;
};

struct VolumeEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  // box_volume * sqrt(p(1-p)/n)
    long long n_samples = 0;
    double box_volume = 0.0;
    std::uint64_t seed = 0;
};

struct VolumeBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::string source;
};

enum class VolumeMethod { Exact, MonteCarlo };

enum class RegularityVerdict { VolumeRegularConsistent, Inconclusive, ViolationDetected };

std::string verdict_name(RegularityVerdict v);

struct RegularityReport {
    std::vector<double> t_grid;  // strictly decreasing
    std::vector<double> phi_x;
    std::vector<double> phi_y;
    std::vector<double> delta_t_values;
    std::optional<double> delta_limit;
    // min and max of delta_t / delta_limit over the grid (delta_limit taken
    // as 1 when no analytic limit exists).
    double c_hat = 0.0;
    double C_hat = 0.0;
    RegularityVerdict verdict = RegularityVerdict::Inconclusive;
};

struct RegularityOptions {
    std::vector<double> t_grid;  // strictly decreasing, >= 5 points
    long long mc_n = 100000;
    std::uint64_t seed = 0;
    int threads = 1;
    // Acceptance band for delta_t / delta_limit in the verdict.
    double sandwich_lo = 1.0 / 3.0;
    double sandwich_hi = 3.0;
};

struct AhlforsFit {
    double alpha_hat = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> t_grid;
};

struct OscillationEstimate {
    std::vector<double> t_grid;
    std::vector<double> per_t;  // ball-averaged |f(y) - f(x)| per radius
    double value = 0.0;         // max of per_t
};

// t_max, t_max/2, ..., t_max/2^(count-1).
std::vector<double> dyadic_grid(double t_max, int count = 8);

// Surface measure of the geodesic cap of radius t on the unit sphere
// S^(ambient_dim - 1). Closed form 2*pi*(1 - cos t) for ambient_dim = 3,
// Simpson quadrature of the cap integral otherwise. Radii >= pi give the
// whole sphere.
double sphere_cap_volume(int ambient_dim, double t);

// Exact Phi(x,t) where a closed form exists; absent for Canberra k >= 2,
// Bray-Curtis, and entropic.
std::optional<double> volume_exact(const DistanceSpec& spec, const Point& x, double t);

// Inscribed and circumscribed rectangle volumes. Canberra and entropic only.
VolumeBounds volume_bounds(const DistanceSpec& spec, const Point& x, double t);

// Axis-aligned box containing B_t(x).
Box bounding_box(const DistanceSpec& spec, const Point& x, double t);

// Hit-or-miss estimate of Phi(x,t) over bounding_box(spec, x, t).
// Deterministic for fixed (seed, n), independent of thread count.
VolumeEstimate volume_mc(const DistanceSpec& spec, const Point& x, double t,
                         long long n, std::uint64_t seed, int threads = 1);

// Same estimate over a caller-supplied box. With a common box and seed the
// hit sets are nested across radii, so estimates are monotone in t.
VolumeEstimate volume_mc_in_box(const DistanceSpec& spec, const Point& x, double t,
                                const Box& box, long long n, std::uint64_t seed,
                                int threads = 1);

// Volume ratio Phi(x,t) / Phi(y,t).
double delta_t(const DistanceSpec& spec, const Point& x, const Point& y, double t,
               VolumeMethod method, long long mc_n = 100000, std::uint64_t seed = 0,
               int threads = 1);

// Analytic small-t limit delta(x,y); absent for the oscillatory family.
std::optional<double> delta_limit(const DistanceSpec& spec, const Point& x,
                                  const Point& y);

RegularityReport check_volume_regularity(const DistanceSpec& spec, const Point& x,
                                         const Point& y, const RegularityOptions& options);

// Least-squares slope of log Phi against log t over the grid (>= 5 points).
AhlforsFit estimate_ahlfors_alpha(const DistanceSpec& spec, const Point& x,
                                  std::vector<double> t_grid, long long mc_n,
                                  std::uint64_t seed, int threads = 1);

// Ball-averaged |f(y) - f(x)| at each grid radius via rejection sampling in
// the bounding box; fails with InsufficientAcceptance below 100 accepted
// points at any radius.
OscillationEstimate centered_oscillation(
    const std::function<double(std::span<const double>)>& f, const DistanceSpec& spec,
    const Point& x, const std::vector<double>& t_grid, long long mc_n,
    std::uint64_t seed);
OscillationEstimate centered_oscillation(const DensitySpec& f, const DistanceSpec& spec,
                                         const Point& x, const std::vector<double>& t_grid,
                                         long long mc_n, std::uint64_t seed);

}  // namespace ipd::ballgeom
