#include "ipd/ballgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "ipd/mathutil.hpp"
#include "ipd/rng.hpp"

namespace ipd::ballgeom {

namespace {

using distances::BrayCurtis;
using distances::Canberra;
using distances::Entropic;
using distances::Lp;
using distances::LpPowP;
using distances::MonotoneTransform;
using distances::OscillatoryTest;
using distances::SphereGeodesic;

void check_radius(double t) {
    if (!(t > 0) || !std::isfinite(t)) throw invalid_radius("radius t must be positive");
}

void check_center(const DistanceSpec& spec, const Point& x) {
    if (x.dim() != spec.dim)
        throw dimension_mismatch("center dimension does not match the distance spec");
}

double product_abs(const std::vector<double>& v) {
    double p = 1.0;
    for (double c : v) p *= std::abs(c);
    return p;
}

// Entropic per-coordinate penalty eta(y) = x*log(x/y) - x + y, convex on
// (0, inf) with minimum 0 at y = x.
double entropic_eta(double x, double y) { return x * std::log(x / y) - x + y; }

// Root of eta(y) = t on the requested side of x, bisected to a tight bracket
// whose outer end is returned so the enclosing interval errs outward.
double entropic_endpoint(double x, double t, bool left) {
    double inner = x;
    double outer;
    if (left) {
        outer = x / 2;
        while (entropic_eta(x, outer) <= t) {
            outer /= 2;
            if (outer < 1e-300) return 1e-300;
        }
    } else {
        outer = 2 * x;
        while (entropic_eta(x, outer) <= t) outer *= 2;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (inner + outer);
        if (mid == inner || mid == outer) break;
        if (entropic_eta(x, mid) <= t)
            inner = mid;
        else
            outer = mid;
    }
    return outer;
}

struct HitTest {
    const DistanceSpec& spec;
    const Point& x;
    double t;
    // L1 radius of the oscillatory ball, precomputed since the ball is
    // exactly {y : |y - x|_1 < r_x(t)}.
    double osc_radius = 0.0;

    HitTest(const DistanceSpec& s, const Point& c, double radius)
        : spec(s), x(c), t(radius) {
        if (const auto* f = std::get_if<OscillatoryTest>(&spec.family))
            osc_radius = distances::oscillatory_radius(*f, x, t);
    }

    bool operator()(const Point& y) const {
        if (std::holds_alternative<OscillatoryTest>(spec.family)) {
            double s = 0.0;
            for (int i = 0; i < x.dim(); ++i) s += std::abs(y.coords[i] - x.coords[i]);
            return s < osc_radius;
        }
        try {
            return distances::eval(spec, x, y) < t;
        } catch (const domain_violation&) {
            // Sampled point outside the family domain cannot lie in the ball.
            return false;
        }
    }
};

struct SumCount {
    double sum = 0.0;
    long long count = 0;
    SumCount& operator+=(const SumCount& o) {
        sum += o.sum;
        count += o.count;
        return *this;
    }
};

// Probes whether exact volumes are available for this spec; throws are
// propagated (e.g. radii beyond a family's validity).
bool exact_available(const DistanceSpec& spec, const Point& x, double t) {
    return volume_exact(spec, x, t).has_value();
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx;
        double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0 ? std::clamp(fit.slope * fit.slope * sxx / syy, 0.0, 1.0) : 1.0;
    return fit;
}

}  // namespace

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
}

bool Box::contains(std::span<const double> y) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (y[i] < lo[i] || y[i] > hi[i]) return false;
    return true;
}

std::string verdict_name(RegularityVerdict v) {
    switch (v) {
        case RegularityVerdict::VolumeRegularConsistent: return "VolumeRegularConsistent";
        case RegularityVerdict::Inconclusive: return "Inconclusive";
        case RegularityVerdict::ViolationDetected: return "ViolationDetected";
    }
    return "Inconclusive";
}

std::vector<double> dyadic_grid(double t_max, int count) {
    if (!(t_max > 0) || !std::isfinite(t_max))
        throw invalid_parameter("dyadic grid needs t_max > 0");
    if (count < 1) throw invalid_parameter("dyadic grid needs at least one point");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) grid[static_cast<std::size_t>(j)] = t_max * std::ldexp(1.0, -j);
    return grid;
}

double sphere_cap_volume(int ambient_dim, double t) {
    if (ambient_dim < 2) throw invalid_parameter("sphere needs ambient dimension >= 2");
    check_radius(t);
    const double pi = 3.14159265358979323846;
    double s_max = std::min(t, pi);
    if (ambient_dim == 3) return 2 * pi * (1 - std::cos(s_max));
    // Cap measure = Vol(S^(d-2)) * int_0^s_max sin^(d-2), composite Simpson.
    const int panels = 10000;
    double h = s_max / panels;
    auto f = [&](double s) { return std::pow(std::sin(s), ambient_dim - 2); };
    double acc = f(0.0) + f(s_max);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return unit_sphere_surface(ambient_dim - 2) * acc * h / 3.0;
}

std::optional<double> volume_exact(const DistanceSpec& spec, const Point& x, double t) {
    check_radius(t);
    check_center(spec, x);
    struct Vis {
        const DistanceSpec& spec;
        const Point& x;
        double t;

        std::optional<double> operator()(const Lp& f) const {
            return unit_lp_ball_volume(f.p, spec.dim) * std::pow(t, spec.dim);
        }
        std::optional<double> operator()(const LpPowP& f) const {
            return unit_lp_ball_volume(f.p, spec.dim) *
                   std::pow(std::pow(t, 1.0 / f.p), spec.dim);
        }
        std::optional<double> operator()(const Canberra&) const {
            if (spec.dim != 1) return std::nullopt;
            if (t >= 1)
                throw invalid_radius("Canberra interval volume requires t < 1");
            return 4 * t * std::abs(x.coords[0]) / (1 - t * t);
        }
        std::optional<double> operator()(const BrayCurtis&) const { return std::nullopt; }
        std::optional<double> operator()(const Entropic&) const { return std::nullopt; }
        std::optional<double> operator()(const MonotoneTransform& f) const {
            double r = f.gamma.inverse(t);
            return unit_lp_ball_volume(f.base.p, spec.dim) * std::pow(r, spec.dim);
        }
        std::optional<double> operator()(const SphereGeodesic& f) const {
            return sphere_cap_volume(f.ambient_dim, t);
        }
        std::optional<double> operator()(const OscillatoryTest& f) const {
            double r = distances::oscillatory_radius(f, x, t);
            return unit_lp_ball_volume(1.0, spec.dim) * std::pow(r, spec.dim);
        }
    };
    return std::visit(Vis{spec, x, t}, spec.family);
}

VolumeBounds volume_bounds(const DistanceSpec& spec, const Point& x, double t) {
    check_radius(t);
    check_center(spec, x);
    int k = spec.dim;
    if (std::holds_alternative<Canberra>(spec.family)) {
        if (t >= 1) throw invalid_radius("Canberra rectangle bounds require t < 1");
        for (double c : x.coords)
            if (c == 0)
                throw precondition_violation("Canberra bounds need all center coordinates nonzero");
        double s = t / k;
        double lower = std::pow(4 * s / (1 - s * s), k) * product_abs(x.coords);
        double upper = std::pow(4 * t / (1 - t * t), k) * product_abs(x.coords);
        return {lower, upper, "canberra_rectangles"};
    }
    if (std::holds_alternative<Entropic>(spec.family)) {
        double xmin = std::numeric_limits<double>::infinity();
        for (double c : x.coords) {
            if (!(c > 0)) throw domain_violation("entropic center must be strictly positive");
            xmin = std::min(xmin, c);
        }
        if (!(t < k * xmin / 2))
            throw precondition_violation("entropic bounds require t < k*min(x_i)/2");
        double lower = 1.0, upper = 1.0;
        for (double c : x.coords) {
            lower *= 2 * std::sqrt((6.0 / 11.0) * c * (t / k));
            upper *= 2 * std::sqrt(3.0 * c * t);
        }
        return {lower, upper, "entropic_rectangles"};
    }
    throw unsupported_family("rectangle bounds exist only for Canberra and entropic");
}

Box bounding_box(const DistanceSpec& spec, const Point& x, double t) {
    check_radius(t);
    check_center(spec, x);
    struct Vis {
        const Point& x;
        double t;

        Box cube(double half) const {
            Box b;
            b.lo.reserve(x.coords.size());
            b.hi.reserve(x.coords.size());
            for (double c : x.coords) {
                b.lo.push_back(c - half);
                b.hi.push_back(c + half);
            }
            return b;
        }

        Box operator()(const Lp&) const { return cube(t); }
        Box operator()(const LpPowP& f) const { return cube(std::pow(t, 1.0 / f.p)); }
        Box operator()(const MonotoneTransform& f) const { return cube(f.gamma.inverse(t)); }
        Box operator()(const OscillatoryTest& f) const {
            if (t >= distances::kOscillatoryT0)
                throw invalid_radius("oscillatory balls are defined for t below t0");
            return cube((1 + f.eps) * t);
        }
        Box operator()(const Canberra&) const {
            if (t >= 1) throw invalid_radius("Canberra balls are unbounded for t >= 1");
            Box b;
            for (double c : x.coords) {
                if (c == 0)
                    throw precondition_violation(
                        "Canberra bounding box needs all center coordinates nonzero");
                double a = c * (1 - t) / (1 + t);
                double d = c * (1 + t) / (1 - t);
                b.lo.push_back(std::min(a, d));
                b.hi.push_back(std::max(a, d));
            }
            return b;
        }
        Box operator()(const BrayCurtis&) const {
            if (t >= 1) throw invalid_radius("Bray-Curtis balls are unbounded for t >= 1");
            double sx = 0.0;
            for (double c : x.coords) {
                if (!(c > 0))
                    throw domain_violation("Bray-Curtis center must be strictly positive");
                sx += c;
            }
            // h < t forces sum(y) < sum(x)(1+t)/(1-t), hence every coordinate
            // offset |x_i - y_i| < 2t*sum(x)/(1-t).
            double r = 2 * t * sx / (1 - t);
            Box b;
            for (double c : x.coords) {
                b.lo.push_back(std::max(c - r, 0.0));
                b.hi.push_back(c + r);
            }
            return b;
        }
        Box operator()(const Entropic&) const {
            // Hull of the circumscribed rectangle x_i +- sqrt(3 x_i t) and the
            // exact per-coordinate interval {y : eta(y) < t}, so containment
            // holds at every radius while small radii keep the rectangle form.
            Box b;
            for (double c : x.coords) {
                if (!(c > 0)) throw domain_violation("entropic center must be strictly positive");
                double half = std::sqrt(3.0 * c * t);
                double lo = std::min(c - half, entropic_endpoint(c, t, true));
                double hi = std::max(c + half, entropic_endpoint(c, t, false));
                b.lo.push_back(std::max(lo, 0.0));
                b.hi.push_back(hi);
            }
            return b;
        }
        Box operator()(const SphereGeodesic&) const {
            throw unsupported_family("no Euclidean bounding box for the sphere surface");
        }
    };
    return std::visit(Vis{x, t}, spec.family);
}

VolumeEstimate volume_mc(const DistanceSpec& spec, const Point& x, double t, long long n,
                         std::uint64_t seed, int threads) {
    if (n < 1000) throw invalid_parameter("volume_mc needs n >= 1000");
    return volume_mc_in_box(spec, x, t, bounding_box(spec, x, t), n, seed, threads);
}

VolumeEstimate volume_mc_in_box(const DistanceSpec& spec, const Point& x, double t,
                                const Box& box, long long n, std::uint64_t seed,
                                int threads) {
    check_radius(t);
    check_center(spec, x);
    if (n < 1) throw invalid_parameter("volume_mc needs a positive sample count");
    if (static_cast<int>(box.lo.size()) != spec.dim || box.hi.size() != box.lo.size())
        throw dimension_mismatch("box dimension does not match the distance spec");
    HitTest hit(spec, x, t);
    int k = spec.dim;
    long long hits = chunked_accumulate<long long>(
        n, seed, threads, [&](long long, long long draws, Rng& rng) {
            Point y(std::vector<double>(static_cast<std::size_t>(k)), x.domain);
            long long h = 0;
            for (long long i = 0; i < draws; ++i) {
                for (int j = 0; j < k; ++j) {
                    std::size_t u = static_cast<std::size_t>(j);
                    y.coords[u] = rng.uniform(box.lo[u], box.hi[u]);
                }
                if (hit(y)) ++h;
            }
            return h;
        });
    double box_vol = box.volume();
    double p = static_cast<double>(hits) / static_cast<double>(n);
    VolumeEstimate est;
    est.value = box_vol * p;
    est.stderr_ = box_vol * std::sqrt(p * (1 - p) / static_cast<double>(n));
    est.n_samples = n;
    est.box_volume = box_vol;
    est.seed = seed;
    return est;
}

double delta_t(const DistanceSpec& spec, const Point& x, const Point& y, double t,
               VolumeMethod method, long long mc_n, std::uint64_t seed, int threads) {
    if (method == VolumeMethod::Exact) {
        auto vx = volume_exact(spec, x, t);
        auto vy = volume_exact(spec, y, t);
        if (!vx || !vy)
            throw unsupported_family("no exact volume for this family; use Monte Carlo");
        if (!(*vy > 0)) throw degenerate_denominator("Phi(y,t) = 0");
        return *vx / *vy;
    }
    VolumeEstimate ex = volume_mc(spec, x, t, mc_n, substream_seed(seed, 0), threads);
    VolumeEstimate ey = volume_mc(spec, y, t, mc_n, substream_seed(seed, 1), threads);
    if (!(ey.value > 0)) throw degenerate_denominator("Phi(y,t) estimate is zero");
    return ex.value / ey.value;
}

std::optional<double> delta_limit(const DistanceSpec& spec, const Point& x, const Point& y) {
    check_center(spec, x);
    check_center(spec, y);
    if (std::holds_alternative<Canberra>(spec.family)) {
        double d = 1.0;
        for (int i = 0; i < spec.dim; ++i) {
            std::size_t u = static_cast<std::size_t>(i);
            if (y.coords[u] == 0)
                throw domain_violation("delta limit needs nonzero y coordinates");
            d *= std::abs(x.coords[u] / y.coords[u]);
        }
        return d;
    }
    if (std::holds_alternative<BrayCurtis>(spec.family)) {
        double d = 1.0;
        for (int i = 0; i < spec.dim; ++i) {
            std::size_t u = static_cast<std::size_t>(i);
            if (!(x.coords[u] > 0) || !(y.coords[u] > 0))
                throw domain_violation("delta limit needs strictly positive coordinates");
            d *= std::abs(x.coords[u] / y.coords[u]);
        }
        return d;
    }
    if (std::holds_alternative<Entropic>(spec.family)) {
        double d = 1.0;
        for (int i = 0; i < spec.dim; ++i) {
            std::size_t u = static_cast<std::size_t>(i);
            if (!(x.coords[u] > 0) || !(y.coords[u] > 0))
                throw domain_violation("delta limit needs strictly positive coordinates");
            d *= std::sqrt(x.coords[u] / y.coords[u]);
        }
        return d;
    }
    if (std::holds_alternative<OscillatoryTest>(spec.family)) return std::nullopt;
    // Translation-invariant families and the sphere: volumes are center-free.
    return 1.0;
}

RegularityReport check_volume_regularity(const DistanceSpec& spec, const Point& x,
                                         const Point& y, const RegularityOptions& options) {
    const std::vector<double>& grid = options.t_grid;
    if (grid.size() < 5)
        throw invalid_parameter("regularity check needs at least 5 grid radii");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0)) throw invalid_parameter("grid radii must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1]))
            throw invalid_parameter("grid radii must be strictly decreasing");
    }
    RegularityReport rep;
    rep.t_grid = grid;
    bool exact = exact_available(spec, x, grid.front()) && exact_available(spec, y, grid.front());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i];
        double px, py;
        if (exact) {
            px = *volume_exact(spec, x, t);
            py = *volume_exact(spec, y, t);
        } else {
            px = volume_mc(spec, x, t, options.mc_n, substream_seed(options.seed, 2 * i),
                           options.threads)
                     .value;
            py = volume_mc(spec, y, t, options.mc_n, substream_seed(options.seed, 2 * i + 1),
                           options.threads)
                     .value;
        }
        rep.phi_x.push_back(px);
        rep.phi_y.push_back(py);
        rep.delta_t_values.push_back(px / py);
    }
    rep.delta_limit = delta_limit(spec, x, y);
    double dl = rep.delta_limit.value_or(1.0);

    bool all_ok = true;
    rep.c_hat = std::numeric_limits<double>::infinity();
    rep.C_hat = -std::numeric_limits<double>::infinity();
    for (double d : rep.delta_t_values) {
        if (!std::isfinite(d) || !(d > 0)) all_ok = false;
        rep.c_hat = std::min(rep.c_hat, d / dl);
        rep.C_hat = std::max(rep.C_hat, d / dl);
    }

    if (!all_ok) {
        rep.verdict = RegularityVerdict::ViolationDetected;
        return rep;
    }
    bool monotone_inc = true, monotone_dec = true;
    for (std::size_t i = 1; i < rep.delta_t_values.size(); ++i) {
        if (!(rep.delta_t_values[i] > rep.delta_t_values[i - 1])) monotone_inc = false;
        if (!(rep.delta_t_values[i] < rep.delta_t_values[i - 1])) monotone_dec = false;
    }
    double dmin = *std::min_element(rep.delta_t_values.begin(), rep.delta_t_values.end());
    double dmax = *std::max_element(rep.delta_t_values.begin(), rep.delta_t_values.end());
    if ((monotone_inc || monotone_dec) && dmax > 10 * dmin) {
        rep.verdict = RegularityVerdict::ViolationDetected;
        return rep;
    }

    bool shrinking = rep.phi_x.back() < 0.01 * rep.phi_x.front();
    for (std::size_t i = 1; i < rep.phi_x.size() && shrinking; ++i)
        if (!(rep.phi_x[i] < rep.phi_x[i - 1])) shrinking = false;
    bool sandwiched = true;
    if (rep.delta_limit) {
        for (double d : rep.delta_t_values)
            if (d / dl < options.sandwich_lo || d / dl > options.sandwich_hi) sandwiched = false;
    }
    rep.verdict = (shrinking && sandwiched) ? RegularityVerdict::VolumeRegularConsistent
                                            : RegularityVerdict::Inconclusive;
    return rep;
}

AhlforsFit estimate_ahlfors_alpha(const DistanceSpec& spec, const Point& x,
                                  std::vector<double> t_grid, long long mc_n,
                                  std::uint64_t seed, int threads) {
    if (t_grid.size() < 5) throw invalid_parameter("Ahlfors fit needs at least 5 grid radii");
    for (double t : t_grid)
        if (!(t > 0)) throw invalid_parameter("grid radii must be positive");
    bool exact = exact_available(spec, x, t_grid.front());
    std::vector<double> log_t, log_phi;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double phi = exact ? *volume_exact(spec, x, t_grid[i])
                           : volume_mc(spec, x, t_grid[i], mc_n, substream_seed(seed, i),
                                       threads)
                                 .value;
        if (!(phi > 0))
            throw insufficient_coverage("zero volume estimate; raise mc_n or the radii");
        log_t.push_back(std::log(t_grid[i]));
        log_phi.push_back(std::log(phi));
    }
    OlsFit fit = ols(log_t, log_phi);
    AhlforsFit out;
    out.alpha_hat = fit.slope;
    out.intercept = fit.intercept;
    out.r_squared = fit.r_squared;
    out.t_grid = std::move(t_grid);
    return out;
}

OscillationEstimate centered_oscillation(
    const std::function<double(std::span<const double>)>& f, const DistanceSpec& spec,
    const Point& x, const std::vector<double>& t_grid, long long mc_n, std::uint64_t seed) {
    if (t_grid.empty()) throw invalid_parameter("oscillation estimate needs a radius grid");
    for (double t : t_grid)
        if (!(t > 0)) throw invalid_parameter("grid radii must be positive");
    if (mc_n < 1) throw invalid_parameter("oscillation estimate needs a positive sample count");
    double fx = f(x.coords);
    OscillationEstimate est;
    est.t_grid = t_grid;
    int k = spec.dim;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double t = t_grid[i];
        Box box = bounding_box(spec, x, t);
        HitTest hit(spec, x, t);
        SumCount acc = chunked_accumulate<SumCount>(
            mc_n, substream_seed(seed, i), 1, [&](long long, long long draws, Rng& rng) {
                Point y(std::vector<double>(static_cast<std::size_t>(k)), x.domain);
                SumCount sc;
                for (long long d = 0; d < draws; ++d) {
                    for (int j = 0; j < k; ++j) {
                        std::size_t u = static_cast<std::size_t>(j);
                        y.coords[u] = rng.uniform(box.lo[u], box.hi[u]);
                    }
                    if (hit(y)) {
                        sc.sum += std::abs(f(y.coords) - fx);
                        ++sc.count;
                    }
                }
                return sc;
            });
        if (acc.count < 100)
            throw insufficient_acceptance("fewer than 100 ball points accepted; raise mc_n");
        est.per_t.push_back(acc.sum / static_cast<double>(acc.count));
    }
    est.value = *std::max_element(est.per_t.begin(), est.per_t.end());
    return est;
}

OscillationEstimate centered_oscillation(const DensitySpec& f, const DistanceSpec& spec,
                                         const Point& x, const std::vector<double>& t_grid,
                                         long long mc_n, std::uint64_t seed) {
    return centered_oscillation(
        [&f](std::span<const double> y) { return f.pdf(y); }, spec, x, t_grid, mc_n, seed);
}

}  // namespace ipd::ballgeom
