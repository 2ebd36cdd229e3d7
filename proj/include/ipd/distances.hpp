#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ipd/errors.hpp"

namespace ipd::distances {

enum class Domain { Euclidean, PositiveOrthant, UnitSphere };

struct Point {
    std::vector<double> coords;
    Domain domain = Domain::Euclidean;

    Point() = default;
    Point(std::vector<double> c, Domain d = Domain::Euclidean)
        : coords(std::move(c)), domain(d) {}

    int dim() const { return static_cast<int>(coords.size()); }
};

// Strictly increasing map [0,inf) -> [0,inf) with gamma(0) = 0. Used to build
// monotone transforms of a homogeneous base distance.
class MonotoneMap {
  public:
    enum class Kind { Identity, Power, Log1p, TableSpline };

    static MonotoneMap identity();
    static MonotoneMap power(double q);
    static MonotoneMap log1p_map();
    // Knots (u_i, v_i), strictly increasing in both coordinates, first knot
    // (0,0). Monotone piecewise cubic (Fritsch-Carlson) between knots, linear
    // continuation beyond the last knot.
    static MonotoneMap table_spline(std::vector<std::pair<double, double>> knots);

    Kind kind() const { return kind_; }
    double power_exponent() const { return q_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    double operator()(double d) const;
    // Inverse to relative error <= 1e-12.
    double inverse(double t) const;

  private:
    MonotoneMap() = default;
    Kind kind_ = Kind::Identity;
    double q_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
    std::vector<double> slopes_;  // Hermite endpoint slopes for TableSpline
};

struct Lp {
    double p;
};
struct LpPowP {
    double p;
};
struct Canberra {};
struct BrayCurtis {};
struct Entropic {};
struct MonotoneTransform {
    Lp base;  // homogeneous translation-invariant base
    MonotoneMap gamma;
};
struct SphereGeodesic {
    int ambient_dim;
};
struct OscillatoryTest {
    double eps;              // in [0, 0.5]; 0 degenerates to |x-y|_1
    double amplitude_scale;  // in (0, 1)
};

using Family = std::variant<Lp, LpPowP, Canberra, BrayCurtis, Entropic,
                            MonotoneTransform, SphereGeodesic, OscillatoryTest>;

// Scale below which the oscillatory radius profile is defined.
inline constexpr double kOscillatoryT0 = 0.1;

struct DistanceSpec {
    Family family;
    int dim = 1;

    static DistanceSpec lp(double p, int dim);
    static DistanceSpec lp_pow_p(double p, int dim);
    static DistanceSpec canberra(int dim);
    static DistanceSpec bray_curtis(int dim);
    static DistanceSpec entropic(int dim);
    static DistanceSpec monotone_transform(double base_p, MonotoneMap gamma, int dim);
    static DistanceSpec sphere_geodesic(int ambient_dim);
    static DistanceSpec oscillatory(double eps, double amplitude_scale, int dim);

    Domain required_domain() const;
    std::string family_name() const;
};

double eval(const DistanceSpec& spec, const Point& x, const Point& y);
bool is_symmetric(const DistanceSpec& spec);

// Center-dependent amplitude A(x) = amplitude_scale * (1 + tanh(x_1)) / 2.
double oscillatory_amplitude(const OscillatoryTest& f, const Point& x);
// r_x(t) = t * (1 + eps * A(x) * sin(log(1/t))) for t in (0, t0).
double oscillatory_radius(const OscillatoryTest& f, const Point& x, double t);
// Solves r_x(t) = |x-y|_1 by bisection to absolute tolerance 1e-12.
double oscillatory_eval(const OscillatoryTest& f, const Point& x, const Point& y);

}  // namespace ipd::distances
