#include "ipd/distances.hpp"

#include <algorithm>
#include <cmath>

namespace ipd::distances {

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw invalid_parameter(std::string(what) + " must be finite");
}

double hermite(double u, double u0, double u1, double v0, double v1, double m0,
               double m1) {
    double h = u1 - u0;
    double s = (u - u0) / h;
    double s2 = s * s;
    double s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1;
    double h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2;
    double h11 = s3 - s2;
    return h00 * v0 + h10 * h * m0 + h01 * v1 + h11 * h * m1;
}

}  // namespace

MonotoneMap MonotoneMap::identity() {
    MonotoneMap m;
    m.kind_ = Kind::Identity;
    return m;
}

MonotoneMap MonotoneMap::power(double q) {
    check_finite(q, "power exponent");
    if (q <= 0) throw invalid_parameter("power exponent must be positive");
    MonotoneMap m;
    m.kind_ = Kind::Power;
    m.q_ = q;
    return m;
}

MonotoneMap MonotoneMap::log1p_map() {
    MonotoneMap m;
    m.kind_ = Kind::Log1p;
    return m;
}

MonotoneMap MonotoneMap::table_spline(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw invalid_parameter("table spline needs at least 2 knots");
    if (knots.front().first != 0.0 || knots.front().second != 0.0)
        throw invalid_parameter("table spline must start at (0,0)");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i + 1].first > knots[i].first) ||
            !(knots[i + 1].second > knots[i].second))
            throw invalid_parameter("table spline knots must be strictly increasing");
    }
    for (auto& [u, v] : knots) {
        check_finite(u, "knot");
        check_finite(v, "knot");
    }
    MonotoneMap m;
    m.kind_ = Kind::TableSpline;
    m.knots_ = std::move(knots);
    // Fritsch-Carlson slopes: monotone Hermite interpolant for increasing data.
    std::size_t n = m.knots_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = m.knots_[i + 1].first - m.knots_[i].first;
        d[i] = (m.knots_[i + 1].second - m.knots_[i].second) / h[i];
    }
    m.slopes_.resize(n);
    m.slopes_[0] = d[0];
    m.slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double w1 = 2 * h[i] + h[i - 1];
        double w2 = h[i] + 2 * h[i - 1];
        m.slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
    return m;
}

double MonotoneMap::operator()(double dd) const {
    if (!(dd >= 0)) throw invalid_parameter("monotone map argument must be >= 0");
    switch (kind_) {
        case Kind::Identity:
            return dd;
        case Kind::Power:
            return std::pow(dd, q_);
        case Kind::Log1p:
            return std::log1p(dd);
        case Kind::TableSpline: {
            if (dd >= knots_.back().first) {
                // linear continuation with the terminal slope
                return knots_.back().second + slopes_.back() * (dd - knots_.back().first);
            }
            std::size_t hi = 1;
            while (knots_[hi].first < dd) ++hi;
            std::size_t lo = hi - 1;
            return hermite(dd, knots_[lo].first, knots_[hi].first, knots_[lo].second,
                           knots_[hi].second, slopes_[lo], slopes_[hi]);
        }
    }
    return dd;
}

double MonotoneMap::inverse(double t) const {
    if (!(t >= 0)) throw invalid_parameter("monotone map inverse argument must be >= 0");
    switch (kind_) {
        case Kind::Identity:
            return t;
        case Kind::Power:
            return std::pow(t, 1.0 / q_);
        case Kind::Log1p:
            return std::expm1(t);
        case Kind::TableSpline: {
            if (t == 0.0) return 0.0;
            if (t >= knots_.back().second)
                return knots_.back().first + (t - knots_.back().second) / slopes_.back();
            double lo = 0.0, hi = knots_.back().first;
            // bisection; width below 1e-13 * scale gives relative error <= 1e-12
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((*this)(mid) < t)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo <= 1e-13 * std::max(1.0, lo)) break;
            }
            return 0.5 * (lo + hi);
        }
    }
    return t;
}

namespace {

void check_dim(int dim) {
    if (dim < 1) throw invalid_parameter("dimension must be >= 1");
}

}  // namespace

DistanceSpec DistanceSpec::lp(double p, int dim) {
    check_dim(dim);
    check_finite(p, "p");
    if (p < 1) throw invalid_parameter("Lp needs p >= 1");
    return {Lp{p}, dim};
}

DistanceSpec DistanceSpec::lp_pow_p(double p, int dim) {
    check_dim(dim);
    check_finite(p, "p");
    if (p < 1) throw invalid_parameter("LpPowP needs p >= 1");
    return {LpPowP{p}, dim};
}

DistanceSpec DistanceSpec::canberra(int dim) {
    check_dim(dim);
    return {Canberra{}, dim};
}

DistanceSpec DistanceSpec::bray_curtis(int dim) {
    check_dim(dim);
    return {BrayCurtis{}, dim};
}

DistanceSpec DistanceSpec::entropic(int dim) {
    check_dim(dim);
    return {Entropic{}, dim};
}

DistanceSpec DistanceSpec::monotone_transform(double base_p, MonotoneMap gamma, int dim) {
    check_dim(dim);
    check_finite(base_p, "p");
    if (base_p < 1) throw invalid_parameter("MonotoneTransform base needs p >= 1");
    return {MonotoneTransform{Lp{base_p}, std::move(gamma)}, dim};
}

DistanceSpec DistanceSpec::sphere_geodesic(int ambient_dim) {
    if (ambient_dim < 2) throw invalid_parameter("sphere needs ambient dimension >= 2");
    return {SphereGeodesic{ambient_dim}, ambient_dim};
}

DistanceSpec DistanceSpec::oscillatory(double eps, double amplitude_scale, int dim) {
    check_dim(dim);
    check_finite(eps, "eps");
    check_finite(amplitude_scale, "amplitude_scale");
    // eps capped at 0.5 so r_x'(t) = 1 + eps*A*(sin - cos)(log(1/t)) stays positive
    if (eps < 0 || eps > 0.5)
        throw invalid_parameter("oscillatory eps must lie in [0, 0.5]");
    if (amplitude_scale <= 0 || amplitude_scale >= 1)
        throw invalid_parameter("oscillatory amplitude_scale must lie in (0, 1)");
    return {OscillatoryTest{eps, amplitude_scale}, dim};
}

Domain DistanceSpec::required_domain() const {
    if (std::holds_alternative<BrayCurtis>(family) || std::holds_alternative<Entropic>(family))
        return Domain::PositiveOrthant;
    if (std::holds_alternative<SphereGeodesic>(family)) return Domain::UnitSphere;
    return Domain::Euclidean;
}

std::string DistanceSpec::family_name() const {
    struct Visitor {
        std::string operator()(const Lp&) const { return "lp"; }
        std::string operator()(const LpPowP&) const { return "lp_pow_p"; }
        std::string operator()(const Canberra&) const { return "canberra"; }
        std::string operator()(const BrayCurtis&) const { return "bray_curtis"; }
        std::string operator()(const Entropic&) const { return "entropic"; }
        std::string operator()(const MonotoneTransform&) const { return "monotone_transform"; }
        std::string operator()(const SphereGeodesic&) const { return "sphere_geodesic"; }
        std::string operator()(const OscillatoryTest&) const { return "oscillatory_test"; }
    };
    return std::visit(Visitor{}, family);
}

namespace {

void require_dims(const DistanceSpec& spec, const Point& x, const Point& y) {
    if (x.dim() != spec.dim || y.dim() != spec.dim)
        throw dimension_mismatch("point dimension does not match distance spec");
}

void require_positive(const Point& p, const char* family) {
    for (double c : p.coords)
        if (!(c > 0))
            throw domain_violation(std::string(family) +
                                   " requires strictly positive coordinates");
}

void require_unit(const Point& p) {
    double s = 0;
    for (double c : p.coords) s += c * c;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-9)
        throw domain_violation("sphere geodesic requires unit-norm points");
}

double lp_norm(const Point& x, const Point& y, double p) {
    double s = 0;
    for (int i = 0; i < x.dim(); ++i) s += std::pow(std::abs(x.coords[i] - y.coords[i]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace

double oscillatory_amplitude(const OscillatoryTest& f, const Point& x) {
    return f.amplitude_scale * 0.5 * (1.0 + std::tanh(x.coords.at(0)));
}

double oscillatory_radius(const OscillatoryTest& f, const Point& x, double t) {
    if (!(t > 0) || t >= kOscillatoryT0)
        throw invalid_radius("oscillatory radius profile is defined for t in (0, t0)");
    double a = oscillatory_amplitude(f, x);
    return t * (1.0 + f.eps * a * std::sin(std::log(1.0 / t)));
}

double oscillatory_eval(const OscillatoryTest& f, const Point& x, const Point& y) {
    double s = 0;
    for (int i = 0; i < x.dim(); ++i) s += std::abs(x.coords[i] - y.coords[i]);
    if (s == 0) return 0.0;
    if (f.eps == 0) {
        if (s >= kOscillatoryT0) throw out_of_scale("separation beyond oscillatory scale t0");
        return s;
    }
    double a = oscillatory_amplitude(f, x);
    auto r = [&](double t) { return t * (1.0 + f.eps * a * std::sin(std::log(1.0 / t))); };
    double hi = kOscillatoryT0;
    if (s >= r(hi)) throw out_of_scale("separation beyond oscillatory scale t0");
    double lo = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (r(mid) < s)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double eval(const DistanceSpec& spec, const Point& x, const Point& y) {
    require_dims(spec, x, y);
    struct Visitor {
        const DistanceSpec& spec;
        const Point& x;
        const Point& y;

        double operator()(const Lp& f) const { return lp_norm(x, y, f.p); }

        double operator()(const LpPowP& f) const {
            double s = 0;
            for (int i = 0; i < x.dim(); ++i)
                s += std::pow(std::abs(x.coords[i] - y.coords[i]), f.p);
            return s;
        }

        double operator()(const Canberra&) const {
            double s = 0;
            for (int i = 0; i < x.dim(); ++i) {
                double num = std::abs(x.coords[i] - y.coords[i]);
                double den = std::abs(x.coords[i]) + std::abs(y.coords[i]);
                if (den > 0) s += num / den;  // 0/0 term counts as 0
            }
            return s;
        }

        double operator()(const BrayCurtis&) const {
            require_positive(x, "Bray-Curtis");
            require_positive(y, "Bray-Curtis");
            double num = 0, den = 0;
            for (int i = 0; i < x.dim(); ++i) {
                num += std::abs(x.coords[i] - y.coords[i]);
                den += x.coords[i] + y.coords[i];
            }
            return num / den;
        }

        double operator()(const Entropic&) const {
            require_positive(x, "entropic distance");
            require_positive(y, "entropic distance");
            double s = 0;
            for (int i = 0; i < x.dim(); ++i) {
                double xi = x.coords[i], yi = y.coords[i];
                s += std::abs(xi * std::log(xi / yi) - xi + yi);
            }
            return s;
        }

        double operator()(const MonotoneTransform& f) const {
            return f.gamma(lp_norm(x, y, f.base.p));
        }

        double operator()(const SphereGeodesic&) const {
            require_unit(x);
            require_unit(y);
            // chord form 2*asin(|x-y|/2): exact at coincident points and
            // well conditioned near them, unlike acos of the dot product
            double chord2 = 0;
            for (int i = 0; i < x.dim(); ++i) {
                double d = x.coords[i] - y.coords[i];
                chord2 += d * d;
            }
            return 2 * std::asin(std::min(1.0, 0.5 * std::sqrt(chord2)));
        }

        double operator()(const OscillatoryTest& f) const {
            return oscillatory_eval(f, x, y);
        }
    };
    return std::visit(Visitor{spec, x, y}, spec.family);
}

bool is_symmetric(const DistanceSpec& spec) {
    return !std::holds_alternative<Entropic>(spec.family) &&
           !std::holds_alternative<OscillatoryTest>(spec.family);
}

}  // namespace ipd::distances
