#include "ipd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "ipd/errors.hpp"
#include "ipd/mathutil.hpp"
#include "ipd/quadrature.hpp"
#include "ipd/rng.hpp"

namespace ipd::bounds {

namespace {

constexpr int kQuadPanels = 64;

// ---------- closed-form pair-distance laws ----------

// Law of h(X,Y) for independent Gaussian arguments when a closed form exists:
// folded normal |N(m, s^2)| in 1-D (any l_p), Rice(nu, s) for isotropic 2-D l_2.
struct PairLaw {
    bool rice = false;
    double m = 0.0;
    double s = 1.0;
    double nu = 0.0;
};

std::optional<PairLaw> closed_form_law(const DistanceSpec& spec, const DensitySpec& f,
                                       const DensitySpec& g) {
    const auto* gf = std::get_if<DiagGaussian>(&f.family());
    const auto* gg = std::get_if<DiagGaussian>(&g.family());
    if (!gf || !gg) return std::nullopt;
    if (f.dim() != g.dim() || spec.dim != f.dim()) return std::nullopt;
    const auto* lp = std::get_if<distances::Lp>(&spec.family);
    if (!lp) return std::nullopt;
    if (f.dim() == 1) {
        PairLaw law;
        law.m = gf->mean[0] - gg->mean[0];
        law.s = std::sqrt(gf->var[0] + gg->var[0]);
        return law;
    }
    if (f.dim() == 2 && lp->p == 2.0 && gf->var[0] == gf->var[1] &&
        gg->var[0] == gg->var[1]) {
        PairLaw law;
        law.rice = true;
        law.nu = std::hypot(gf->mean[0] - gg->mean[0], gf->mean[1] - gg->mean[1]);
        law.s = std::sqrt(gf->var[0] + gg->var[0]);
        return law;
    }
    return std::nullopt;
}

// e^{-z} I_0(z); the series branch keeps cyl_bessel_i away from overflow.
double scaled_bessel_i0(double z) {
    if (z <= 30.0) return std::exp(-z) * std::cyl_bessel_i(0.0, z);
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 30; ++k) {
        double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * z);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * M_PI * z);
}

double rice_pdf(double r, double nu, double s) {
    if (r <= 0.0) return 0.0;
    double e = (r - nu) / s;
    return r / (s * s) * std::exp(-0.5 * e * e) * scaled_bessel_i0(r * nu / (s * s));
}

double law_cdf(const PairLaw& law, double u) {
    if (u <= 0.0) return 0.0;
    if (!law.rice)
        return normal_cdf((u - law.m) / law.s) - normal_cdf((-u - law.m) / law.s);
    if (law.nu == 0.0) return -std::expm1(-u * u / (2.0 * law.s * law.s));
    int panels = std::clamp(static_cast<int>(std::ceil(64.0 * u / law.s)), 256, 65536);
    double h = u / panels, acc = 0.0, left = 0.0;
    for (int i = 0; i < panels; ++i) {
        double a = i * h;
        double mid = rice_pdf(a + 0.5 * h, law.nu, law.s);
        double right = rice_pdf(a + h, law.nu, law.s);
        acc += h / 6.0 * (left + 4.0 * mid + right);
        left = right;
    }
    return std::min(acc, 1.0);
}

// CDF at u_i = (i+1) du in one cumulative pass.
std::vector<double> law_cdf_grid(const PairLaw& law, int n, double du) {
    std::vector<double> out(static_cast<std::size_t>(n));
    if (!law.rice || law.nu == 0.0) {
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] = law_cdf(law, (i + 1) * du);
        return out;
    }
    double acc = 0.0, left = 0.0;
    for (int i = 0; i < n; ++i) {
        double a = i * du;
        double mid = rice_pdf(a + 0.5 * du, law.nu, law.s);
        double right = rice_pdf(a + du, law.nu, law.s);
        acc += du / 6.0 * (left + 4.0 * mid + right);
        out[static_cast<std::size_t>(i)] = std::min(acc, 1.0);
        left = right;
    }
    return out;
}

// Radius beyond which the law's CDF is 1 to machine accuracy.
double law_saturation(const PairLaw& law) {
    return (law.rice ? law.nu : std::abs(law.m)) + 10.0 * law.s;
}

DeltaKEstimate delta_k_closed(const PairLaw& xx, const PairLaw& yy, const PairLaw& xy,
                              double t) {
    double umax = t;
    if (!std::isfinite(t))
        umax = std::max({law_saturation(xx), law_saturation(yy), law_saturation(xy)});
    const int n = 8192;
    double du = umax / n;
    auto fxx = law_cdf_grid(xx, n, du);
    auto fyy = law_cdf_grid(yy, n, du);
    auto fxy = law_cdf_grid(xy, n, du);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        auto j = static_cast<std::size_t>(i);
        s1 = std::max(s1, std::abs(fxx[j] - fxy[j]));
        s2 = std::max(s2, std::abs(fyy[j] - fxy[j]));
    }
    return {s1 + s2, 0.0};
}

// ---------- Monte Carlo pair-distance curves ----------

std::vector<double> mc_pair_distances(const DistanceSpec& spec, const DensitySpec& a,
                                      const DensitySpec& b, std::int64_t m,
                                      std::uint64_t seed) {
    Rng rng(seed);
    Point x, y;
    x.coords.resize(static_cast<std::size_t>(a.dim()));
    y.coords.resize(static_cast<std::size_t>(b.dim()));
    std::vector<double> out(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) {
        a.sample_into(rng, x.coords);
        b.sample_into(rng, y.coords);
        out[static_cast<std::size_t>(i)] = distances::eval(spec, x, y);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double ecdf_strict(const std::vector<double>& sorted, double u) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), u);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

DeltaKEstimate delta_k_mc(const DistanceSpec& spec, const DensitySpec& f,
                          const DensitySpec& g, double t, std::int64_t m,
                          std::uint64_t seed) {
    if (m < 100'000)
        throw invalid_parameter("population_delta_k: Monte Carlo needs >= 1e5 pair draws");
    auto xx = mc_pair_distances(spec, f, f, m, substream_seed(seed, 1));
    auto yy = mc_pair_distances(spec, g, g, m, substream_seed(seed, 2));
    auto xy = mc_pair_distances(spec, f, g, m, substream_seed(seed, 3));

    // Thinned pooled grid; with strict "<" the value at an atom equals the
    // constant the step functions take on the interval ending there.
    std::vector<double> pooled;
    pooled.reserve(xx.size() + yy.size() + xy.size());
    pooled.insert(pooled.end(), xx.begin(), xx.end());
    pooled.insert(pooled.end(), yy.begin(), yy.end());
    pooled.insert(pooled.end(), xy.begin(), xy.end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> grid;
    const std::size_t target = 16384;
    std::size_t stride = std::max<std::size_t>(1, pooled.size() / target);
    for (std::size_t i = stride - 1; i < pooled.size(); i += stride) {
        double u = pooled[i];
        if (u <= t) grid.push_back(u);
    }
    double top = pooled.back();
    if (std::isfinite(t)) {
        grid.push_back(t);
    } else if (grid.empty() || grid.back() < top) {
        grid.push_back(top);
    }
    if (!std::isfinite(t)) grid.push_back(top + std::max(1.0, std::abs(top)));

    double s1 = 0.0, s2 = 0.0;
    for (double u : grid) {
        double fxy = ecdf_strict(xy, u);
        s1 = std::max(s1, std::abs(ecdf_strict(xx, u) - fxy));
        s2 = std::max(s2, std::abs(ecdf_strict(yy, u) - fxy));
    }
    return {s1 + s2, 2.0 * 1.36 / std::sqrt(static_cast<double>(m))};
}

// ---------- quadrature plumbing ----------

struct AxisInterval {
    double lo, hi;
};

AxisInterval axis_support(const DensitySpec& d, int axis) {
    auto a = static_cast<std::size_t>(axis);
    if (const auto* gauss = std::get_if<DiagGaussian>(&d.family())) {
        double sd = std::sqrt(gauss->var[a]);
        return {gauss->mean[a] - 8.0 * sd, gauss->mean[a] + 8.0 * sd};
    }
    if (const auto* expo = std::get_if<ProductExponential>(&d.family()))
        return {0.0, 40.0 / expo->rates[a]};
    if (const auto* logn = std::get_if<ProductLognormal>(&d.family()))
        return {std::exp(logn->mu[a] - 8.0 * logn->sigma[a]),
                std::exp(logn->mu[a] + 8.0 * logn->sigma[a])};
    throw unsupported_family("axis-aligned boxes are not defined on the sphere");
}

double box_coverage(const DensitySpec& d, const Box& box) {
    double cov = 1.0;
    for (int a = 0; a < d.dim(); ++a) {
        auto i = static_cast<std::size_t>(a);
        cov *= std::max(0.0, d.marginal_cdf(a, box.hi[i]) - d.marginal_cdf(a, box.lo[i]));
    }
    return cov;
}

void check_box_dims(const DensitySpec& f, const Box& box) {
    if (static_cast<int>(box.lo.size()) != f.dim() || box.lo.size() != box.hi.size())
        throw dimension_mismatch("quadrature box does not match the density dimension");
}

// ---------- volume of the right ball at xi ----------

struct PhiValue {
    double value = 0.0;
    double err = 0.0;
};

PhiValue phi_at(const DistanceSpec& spec, const Point& xi, double t, std::uint64_t seed) {
    if (auto exact = ballgeom::volume_exact(spec, xi, t)) {
        if (*exact <= 0.0)
            throw degenerate_denominator("ball volume at xi is zero");
        return {*exact, 0.0};
    }
    auto est = ballgeom::volume_mc(spec, xi, t, 1'000'000, seed);
    if (est.value <= 0.0) throw degenerate_denominator("ball volume at xi is zero");
    return {est.value, est.stderr_};
}

void check_density_pair(const DistanceSpec& spec, const DensitySpec& f,
                        const DensitySpec& g) {
    if (f.dim() != g.dim() || f.dim() != spec.dim)
        throw dimension_mismatch("densities and distance must share one dimension");
}

}  // namespace

Box default_box(const DensitySpec& f, const DensitySpec& g) {
    if (f.dim() != g.dim())
        throw dimension_mismatch("default_box: densities of different dimension");
    Box box;
    box.lo.resize(static_cast<std::size_t>(f.dim()));
    box.hi.resize(static_cast<std::size_t>(f.dim()));
    for (int a = 0; a < f.dim(); ++a) {
        AxisInterval u = axis_support(f, a);
        AxisInterval v = axis_support(g, a);
        box.lo[static_cast<std::size_t>(a)] = std::min(u.lo, v.lo);
        box.hi[static_cast<std::size_t>(a)] = std::max(u.hi, v.hi);
    }
    return box;
}

L2Report l2_distance_sq(const DensitySpec& f, const DensitySpec& g, const Box& box,
                        int panels) {
    if (f.dim() != g.dim())
        throw dimension_mismatch("l2_distance_sq: densities of different dimension");
    check_box_dims(f, box);
    if (panels < 32) throw invalid_parameter("l2_distance_sq: need >= 32 panels per axis");
    double cov_f = box_coverage(f, box);
    double cov_g = box_coverage(g, box);
    if (cov_f < 1.0 - 1e-6 || cov_g < 1.0 - 1e-6)
        throw insufficient_coverage("quadrature box misses too much density mass");
    auto integrand = [&](std::span<const double> x) {
        double d = f.pdf(x) - g.pdf(x);
        return d * d;
    };
    double full = quad::integrate_box(integrand, box.lo, box.hi, panels);
    double half = quad::integrate_box(integrand, box.lo, box.hi, panels / 2);
    L2Report report;
    report.value = full;
    report.quadrature_error = std::abs(full - half);
    report.truncation_tail = 2.0 * f.sup() * (1.0 - cov_f) + 2.0 * g.sup() * (1.0 - cov_g);
    return report;
}

L2Report l2_norm_sq(const DensitySpec& f, const Box& box, int panels) {
    check_box_dims(f, box);
    if (panels < 32) throw invalid_parameter("l2_norm_sq: need >= 32 panels per axis");
    double cov = box_coverage(f, box);
    if (cov < 1.0 - 1e-6)
        throw insufficient_coverage("quadrature box misses too much density mass");
    auto integrand = [&](std::span<const double> x) {
        double v = f.pdf(x);
        return v * v;
    };
    double full = quad::integrate_box(integrand, box.lo, box.hi, panels);
    double half = quad::integrate_box(integrand, box.lo, box.hi, panels / 2);
    L2Report report;
    report.value = full;
    report.quadrature_error = std::abs(full - half);
    report.truncation_tail = f.sup() * (1.0 - cov);
    return report;
}

std::optional<double> population_pair_cdf(const DistanceSpec& spec, const DensitySpec& f,
                                          const DensitySpec& g, double u) {
    auto law = closed_form_law(spec, f, g);
    if (!law) return std::nullopt;
    return law_cdf(*law, u);
}

DeltaKEstimate population_delta_k(const DistanceSpec& spec, const DensitySpec& f,
                                  const DensitySpec& g, double t, CdfMethod method,
                                  std::int64_t mc_pairs, std::uint64_t seed) {
    check_density_pair(spec, f, g);
    if (t <= 0.0) throw invalid_radius("population_delta_k: t must be positive");
    if (method != CdfMethod::MonteCarlo) {
        auto xy = closed_form_law(spec, f, g);
        if (xy) {
            auto xx = closed_form_law(spec, f, f);
            auto yy = closed_form_law(spec, g, g);
            return delta_k_closed(*xx, *yy, *xy, t);
        }
        if (method == CdfMethod::ClosedForm)
            throw unsupported_family("no closed-form pair-distance law for this setup");
    }
    return delta_k_mc(spec, f, g, t, mc_pairs, seed);
}

McEstimate small_ball_normalized(const DistanceSpec& spec, const DensitySpec& f,
                                 const DensitySpec& g, double t, const Point& xi,
                                 CdfMethod method, std::int64_t mc_pairs,
                                 std::uint64_t seed) {
    check_density_pair(spec, f, g);
    if (t <= 0.0) throw invalid_radius("small_ball_normalized: t must be positive");
    double num = 0.0, num_err = 0.0;
    auto law_xy = closed_form_law(spec, f, g);
    if (method == CdfMethod::MonteCarlo || (method == CdfMethod::Auto && !law_xy)) {
        if (mc_pairs < 1'000'000)
            throw invalid_parameter("small_ball_normalized: needs >= 1e6 pair draws");
        double pxx = ecdf_strict(mc_pair_distances(spec, f, f, mc_pairs,
                                                   substream_seed(seed, 1)), t);
        double pyy = ecdf_strict(mc_pair_distances(spec, g, g, mc_pairs,
                                                   substream_seed(seed, 2)), t);
        double pxy = ecdf_strict(mc_pair_distances(spec, f, g, mc_pairs,
                                                   substream_seed(seed, 3)), t);
        num = pxx + pyy - 2.0 * pxy;
        double m = static_cast<double>(mc_pairs);
        num_err = std::sqrt((pxx * (1.0 - pxx) + pyy * (1.0 - pyy) +
                             4.0 * pxy * (1.0 - pxy)) / m);
    } else {
        if (!law_xy)
            throw unsupported_family("no closed-form pair-distance law for this setup");
        num = law_cdf(*closed_form_law(spec, f, f), t) +
              law_cdf(*closed_form_law(spec, g, g), t) - 2.0 * law_cdf(*law_xy, t);
    }
    PhiValue phi = phi_at(spec, xi, t, substream_seed(seed, 4));
    McEstimate out;
    out.value = num / phi.value;
    out.stderr_ = num_err / phi.value + std::abs(num) * phi.err / (phi.value * phi.value);
    return out;
}

McEstimate remainder_r(const DistanceSpec& spec, const DensitySpec& f,
                       const DensitySpec& g, const Point& xi, double t,
                       std::int64_t mc_n, std::uint64_t seed) {
    check_density_pair(spec, f, g);
    if (t <= 0.0) throw invalid_radius("remainder_r: t must be positive");
    if (mc_n < 100) throw invalid_parameter("remainder_r: needs >= 100 outer samples");
    PhiValue phi = phi_at(spec, xi, t, substream_seed(seed, 0));

    const int inner = 256;
    Rng rng(substream_seed(seed, 1));
    Point x, y;
    auto k = static_cast<std::size_t>(f.dim());
    x.coords.resize(k);
    y.coords.resize(k);
    double sum = 0.0, sumsq = 0.0;
    std::int64_t inner_trials = 0, inner_hits = 0;
    for (std::int64_t i = 0; i < mc_n; ++i) {
        if (rng.uniform01() < 0.5) {
            f.sample_into(rng, x.coords);
        } else {
            g.sample_into(rng, x.coords);
        }
        double fx = f.pdf(x.coords), gx = g.pdf(x.coords);
        double q = 0.5 * (fx + gx);
        double term = 0.0;
        if (q > 0.0 && fx != gx) {
            double weight = std::abs(fx - gx) / q;
            double dfx = fx - gx;
            Box bx = ballgeom::bounding_box(spec, x, t);
            double acc = 0.0;
            for (int j = 0; j < inner; ++j) {
                for (std::size_t a = 0; a < k; ++a)
                    y.coords[a] = rng.uniform(bx.lo[a], bx.hi[a]);
                ++inner_trials;
                try {
                    if (distances::eval(spec, x, y) < t) {
                        ++inner_hits;
                        acc += std::abs((f.pdf(y.coords) - g.pdf(y.coords)) - dfx);
                    }
                } catch (const domain_violation&) {
                    // outside the family domain, cannot lie in the ball
                } catch (const out_of_scale&) {
                    // beyond the oscillatory scale means beyond radius t
                }
            }
            term = weight * bx.volume() * acc / inner;
        }
        sum += term;
        sumsq += term * term;
    }
    if (inner_trials > 0 && inner_hits < 100)
        throw insufficient_acceptance("ball rejection sampling starved in remainder_r");
    double n = static_cast<double>(mc_n);
    double mean = sum / n;
    double var = std::max(0.0, (sumsq - sum * sum / n) / std::max(1.0, n - 1.0));
    double se = std::sqrt(var / n);
    McEstimate out;
    out.value = mean / phi.value;
    out.stderr_ = se / phi.value + mean * phi.err / (phi.value * phi.value);
    return out;
}

Point default_xi(const DistanceSpec& spec) {
    Point xi;
    auto k = static_cast<std::size_t>(spec.dim);
    switch (spec.required_domain()) {
        case distances::Domain::PositiveOrthant:
            xi.coords.assign(k, 1.0);
            xi.domain = distances::Domain::PositiveOrthant;
            break;
        case distances::Domain::UnitSphere:
            xi.coords.assign(k, 0.0);
            xi.coords.back() = 1.0;
            xi.domain = distances::Domain::UnitSphere;
            break;
        case distances::Domain::Euclidean:
            xi.coords.assign(k, 0.0);
            break;
    }
    return xi;
}

BoundCheck check_ineq_l2(const DistanceSpec& spec, const DensitySpec& f,
                         const DensitySpec& g, const Point& xi, double t, double c,
                         double delta_star, std::uint64_t seed, std::int64_t remainder_n) {
    check_density_pair(spec, f, g);
    if (t <= 0.0) throw invalid_radius("check_ineq_l2: t must be positive");
    if (c <= 0.0 || delta_star <= 0.0)
        throw invalid_parameter("check_ineq_l2: constants must be positive");
    L2Report lhs = l2_distance_sq(f, g, default_box(f, g), kQuadPanels);
    DeltaKEstimate dk = population_delta_k(spec, f, g, t, CdfMethod::Auto, 1'000'000,
                                           substream_seed(seed, 1));
    PhiValue phi = phi_at(spec, xi, t, substream_seed(seed, 2));
    McEstimate rem = remainder_r(spec, f, g, xi, t, remainder_n, substream_seed(seed, 3));

    BoundCheck out;
    out.lhs = lhs.value;
    out.rhs = (dk.value / phi.value + rem.value) / (c * delta_star);
    double mc_err = (dk.mc_error / phi.value + rem.stderr_ +
                     dk.value * phi.err / (phi.value * phi.value)) /
                    (c * delta_star);
    out.tolerance = 1e-9 + lhs.quadrature_error + lhs.truncation_tail + 3.0 * mc_err;
    out.holds = out.lhs <= out.rhs + out.tolerance;
    out.slack = out.rhs - out.lhs;
    out.t = t;
    out.xi = xi.coords;
    out.scale_constant = c;
    out.delta_constant = delta_star;
    return out;
}

BoundCheck check_ineq_delta_k(const DistanceSpec& spec, const DensitySpec& f,
                              const DensitySpec& g, const Point& xi, double t,
                              double big_c, double delta_sup, std::uint64_t seed) {
    check_density_pair(spec, f, g);
    if (t <= 0.0) throw invalid_radius("check_ineq_delta_k: t must be positive");
    if (big_c <= 0.0 || delta_sup <= 0.0)
        throw invalid_parameter("check_ineq_delta_k: constants must be positive");
    DeltaKEstimate dk = population_delta_k(spec, f, g, t, CdfMethod::Auto, 1'000'000,
                                           substream_seed(seed, 1));
    PhiValue phi = phi_at(spec, xi, t, substream_seed(seed, 2));
    L2Report cross = l2_distance_sq(f, g, default_box(f, g), kQuadPanels);
    L2Report ff = l2_norm_sq(f, default_box(f, f), kQuadPanels);
    L2Report gg = l2_norm_sq(g, default_box(g, g), kQuadPanels);
    double nf = std::sqrt(ff.value);
    double ng = std::sqrt(gg.value);
    double nfg = std::sqrt(cross.value);

    BoundCheck out;
    out.lhs = dk.value;
    out.rhs = big_c * delta_sup * phi.value * (nf + ng) * nfg;
    // quadrature error on the norms, propagated through the square roots
    double quad_err = 0.0;
    if (nfg > 0.0)
        quad_err = big_c * delta_sup * phi.value *
                   ((nf + ng) * (cross.quadrature_error + cross.truncation_tail) /
                        (2.0 * nfg) +
                    nfg * (ff.quadrature_error + gg.quadrature_error) /
                        (2.0 * std::max(1e-300, std::min(nf, ng))));
    double mc_err = dk.mc_error + big_c * delta_sup * phi.err * (nf + ng) * nfg;
    out.tolerance = 1e-9 + quad_err + 3.0 * mc_err;
    out.holds = out.lhs <= out.rhs + out.tolerance;
    out.slack = out.rhs - out.lhs;
    out.t = t;
    out.xi = xi.coords;
    out.scale_constant = big_c;
    out.delta_constant = delta_sup;
    return out;
}

RateFit rate_experiment(const DistanceSpec& spec, const DensitySpec& base,
                        const std::vector<double>& ladder, double alpha, double beta,
                        std::uint64_t seed) {
    if (ladder.size() < 4)
        throw invalid_parameter("rate_experiment: need at least 4 ladder points");
    if (alpha <= 0.0 || beta <= 0.0)
        throw invalid_parameter("rate_experiment: exponents must be positive");
    for (std::size_t j = 1; j < ladder.size(); ++j)
        if (!(ladder[j] < ladder[j - 1]))
            throw invalid_parameter("rate_experiment: ladder must decrease strictly");

    RateFit fit;
    fit.theoretical_exponent = beta / (alpha + beta);
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        double mu = ladder[j];
        if (mu <= 0.0)
            throw degenerate_ladder("rate_experiment: zero shift collapses a rung");
        DensitySpec g = base.shifted_first(mu);
        DeltaKEstimate dk = population_delta_k(spec, base, g, inf, CdfMethod::Auto,
                                               1'000'000, substream_seed(seed, j));
        L2Report l2 = l2_distance_sq(base, g, default_box(base, g), kQuadPanels);
        if (dk.value <= 0.0 || l2.value <= 0.0)
            throw degenerate_ladder("rate_experiment: degenerate rung");
        fit.points.push_back({mu, std::log(dk.value), std::log(l2.value)});
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    auto n = static_cast<double>(fit.points.size());
    for (const auto& p : fit.points) {
        sx += p.log_delta_k;
        sy += p.log_l2;
        sxx += p.log_delta_k * p.log_delta_k;
        sxy += p.log_delta_k * p.log_l2;
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : fit.points)
        best = std::max(best, p.log_l2 - fit.theoretical_exponent * p.log_delta_k);
    fit.c_hat = std::exp(best);
    return fit;
}

}  // namespace ipd::bounds
