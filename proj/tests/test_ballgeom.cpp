#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "ipd/ballgeom.hpp"
#include "ipd/density.hpp"
#include "ipd/distances.hpp"
#include "ipd/mathutil.hpp"
#include "ipd/rng.hpp"
#include "test_util.hpp"

using namespace ipd;
using namespace ipd::ballgeom;
using distances::DistanceSpec;
using distances::Domain;
using distances::Point;

namespace {

constexpr double kPi = 3.14159265358979323846;

Point pt(std::initializer_list<double> c, Domain d = Domain::Euclidean) {
    return Point(std::vector<double>(c), d);
}

}  // namespace

TEST_CASE("dyadic grid") {
    auto g = dyadic_grid(0.2, 4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 0.2);
    CHECK(g[1] == 0.1);
    CHECK(g[3] == 0.025);
    CHECK(dyadic_grid(1.0).size() == 8);
    CHECK_THROWS_AS(dyadic_grid(0.0, 4), invalid_parameter);
    CHECK_THROWS_AS(dyadic_grid(0.5, 0), invalid_parameter);
}

TEST_CASE("exact volumes, hand values") {
    auto can1 = DistanceSpec::canberra(1);
    auto v = volume_exact(can1, pt({2}), 0.5);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(16.0 / 3.0).epsilon(1e-14));
    // interval volume collapses at the origin
    CHECK(*volume_exact(can1, pt({0}), 0.5) == 0.0);
    // unit disc
    auto l2 = DistanceSpec::lp(2, 2);
    CHECK(*volume_exact(l2, pt({3, -1}), 1.0) == doctest::Approx(kPi).epsilon(1e-13));
    // hemisphere cap and the whole sphere
    auto sph = DistanceSpec::sphere_geodesic(3);
    Point north({0, 0, 1}, Domain::UnitSphere);
    CHECK(*volume_exact(sph, north, kPi / 2) == doctest::Approx(2 * kPi).epsilon(1e-13));
    CHECK(*volume_exact(sph, north, 10.0) == doctest::Approx(4 * kPi).epsilon(1e-13));

    CHECK_THROWS_AS(volume_exact(can1, pt({2}), 0.0), invalid_radius);
    CHECK_THROWS_AS(volume_exact(can1, pt({2}), 1.0), invalid_radius);
    CHECK_FALSE(volume_exact(DistanceSpec::canberra(2), pt({1, 1}), 0.3).has_value());
    CHECK_FALSE(volume_exact(DistanceSpec::bray_curtis(2),
                             pt({1, 1}, Domain::PositiveOrthant), 0.3)
                    .has_value());
    CHECK_FALSE(volume_exact(DistanceSpec::entropic(1), pt({1}, Domain::PositiveOrthant), 0.1)
                    .has_value());
}

TEST_CASE("exact volumes, scaling families") {
    // L1 ball in 3-D: (2t)^3 / 3!
    auto l1 = DistanceSpec::lp(1, 3);
    CHECK(*volume_exact(l1, pt({0, 0, 0}), 0.5) ==
          doctest::Approx(8 * 0.125 / 6.0).epsilon(1e-13));
    // p-th power metric takes radius t^(1/p)
    auto l2p = DistanceSpec::lp_pow_p(2, 2);
    CHECK(*volume_exact(l2p, pt({0, 0}), 0.25) == doctest::Approx(kPi * 0.25).epsilon(1e-13));
    // monotone transform of L2 by gamma(d) = d^2 has inverse radius sqrt(t)
    auto mt = DistanceSpec::monotone_transform(2, distances::MonotoneMap::power(2), 2);
    CHECK(*volume_exact(mt, pt({0, 0}), 0.25) == doctest::Approx(kPi * 0.25).epsilon(1e-12));
    // oscillatory ball is the L1 ball of the warped radius
    auto osc = DistanceSpec::oscillatory(0.3, 0.8, 1);
    auto f = std::get<distances::OscillatoryTest>(osc.family);
    double t = 0.05;
    CHECK(*volume_exact(osc, pt({1}), t) ==
          doctest::Approx(2 * distances::oscillatory_radius(f, pt({1}), t)).epsilon(1e-13));
}

TEST_CASE("sphere cap quadrature agrees with closed forms") {
    // S^1: arc length 2t
    CHECK(sphere_cap_volume(2, 0.7) == doctest::Approx(1.4).epsilon(1e-10));
    // S^3: 2*pi*(t - sin t cos t)
    for (double t : {0.3, 1.0, 2.5}) {
        double exact = 2 * kPi * (t - std::sin(t) * std::cos(t));
        CHECK(sphere_cap_volume(4, t) == doctest::Approx(exact).epsilon(1e-9));
    }
    // radii beyond pi saturate at the full measure
    CHECK(sphere_cap_volume(4, 50.0) == doctest::Approx(2 * kPi * kPi).epsilon(1e-9));
}

TEST_CASE("gray expansion consistency on the 2-sphere") {
    for (double t = 0.05; t <= 0.5 + 1e-12; t += 0.05) {
        double cap = 2 * kPi * (1 - std::cos(t));
        double gray = kPi * t * t * (1 - t * t / 12.0);
        CHECK(std::abs(cap - gray) <= 0.01 * kPi * t * t);
    }
}

TEST_CASE("rectangle bounds, hand values") {
    auto can1 = DistanceSpec::canberra(1);
    auto b = volume_bounds(can1, pt({2}), 0.5);
    CHECK(b.lower == doctest::Approx(16.0 / 3.0).epsilon(1e-14));
    CHECK(b.upper == doctest::Approx(16.0 / 3.0).epsilon(1e-14));

    auto can2 = DistanceSpec::canberra(2);
    auto b2 = volume_bounds(can2, pt({1, 1}), 0.3);
    CHECK(b2.lower == doctest::Approx(std::pow(0.6 / 0.9775, 2)).epsilon(1e-14));
    CHECK(b2.upper == doctest::Approx(std::pow(1.2 / 0.91, 2)).epsilon(1e-14));
    CHECK(b2.lower <= b2.upper);

    auto ent = DistanceSpec::entropic(1);
    auto be = volume_bounds(ent, pt({1}, Domain::PositiveOrthant), 0.01);
    CHECK(be.lower == doctest::Approx(2 * std::sqrt(0.06 / 11.0)).epsilon(1e-14));
    CHECK(be.upper == doctest::Approx(2 * std::sqrt(0.03)).epsilon(1e-14));

    CHECK_THROWS_AS(volume_bounds(DistanceSpec::lp(2, 2), pt({0, 0}), 0.5),
                    unsupported_family);
    CHECK_THROWS_AS(volume_bounds(can2, pt({1, 0}), 0.3), precondition_violation);
    CHECK_THROWS_AS(volume_bounds(ent, pt({1}, Domain::PositiveOrthant), 0.6),
                    precondition_violation);
    CHECK_THROWS_AS(volume_bounds(can1, pt({2}), 1.2), invalid_radius);
}

TEST_CASE("bounding boxes, hand values") {
    auto can1 = DistanceSpec::canberra(1);
    auto b = bounding_box(can1, pt({1}), 1.0 / 3.0);
    CHECK(b.lo[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(b.hi[0] == doctest::Approx(2.0).epsilon(1e-14));

    auto l1 = DistanceSpec::lp(1, 2);
    auto bc = bounding_box(l1, pt({0, 0}), 1.0);
    CHECK(bc.lo[0] == -1.0);
    CHECK(bc.hi[1] == 1.0);
    CHECK(bc.volume() == doctest::Approx(4.0));

    auto ent = DistanceSpec::entropic(1);
    auto be = bounding_box(ent, pt({4}, Domain::PositiveOrthant), 0.01);
    CHECK(be.lo[0] == doctest::Approx(4 - std::sqrt(0.12)).epsilon(1e-13));
    CHECK(be.hi[0] == doctest::Approx(4 + std::sqrt(0.12)).epsilon(1e-13));

    // negative Canberra center mirrors the interval
    auto bn = bounding_box(can1, pt({-1}), 1.0 / 3.0);
    CHECK(bn.lo[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(bn.hi[0] == doctest::Approx(-0.5).epsilon(1e-14));

    CHECK_THROWS_AS(bounding_box(DistanceSpec::sphere_geodesic(3),
                                 Point({0, 0, 1}, Domain::UnitSphere), 0.3),
                    unsupported_family);
    CHECK_THROWS_AS(bounding_box(can1, pt({0}), 0.3), precondition_violation);
    CHECK_THROWS_AS(bounding_box(DistanceSpec::oscillatory(0.3, 0.8, 1), pt({1}), 0.2),
                    invalid_radius);
}

TEST_CASE("box containment under rejection probes") {
    Rng rng(411);
    // Probe an enlarged box; any point of the ball must land inside the
    // nominal box. Centers include a strongly anisotropic Bray-Curtis case.
    struct Config {
        DistanceSpec spec;
        Point x;
        double t;
    };
    std::vector<Config> configs;
    configs.push_back({DistanceSpec::bray_curtis(2),
                       pt({0.1, 10}, Domain::PositiveOrthant), 0.05});
    configs.push_back({DistanceSpec::bray_curtis(2),
                       pt({1, 1}, Domain::PositiveOrthant), 0.3});
    configs.push_back({DistanceSpec::entropic(1), pt({1}, Domain::PositiveOrthant), 0.45});
    configs.push_back({DistanceSpec::entropic(2),
                       pt({0.5, 4}, Domain::PositiveOrthant), 0.8});
    for (const auto& cfg : configs) {
        Box box = bounding_box(cfg.spec, cfg.x, cfg.t);
        int k = cfg.spec.dim;
        Point y(std::vector<double>(static_cast<std::size_t>(k)), cfg.x.domain);
        long long inside_ball_outside_box = 0;
        for (int i = 0; i < 250000; ++i) {
            for (int j = 0; j < k; ++j) {
                std::size_t u = static_cast<std::size_t>(j);
                double w = box.hi[u] - box.lo[u];
                double lo = std::max(box.lo[u] - w, 1e-9);
                y.coords[u] = rng.uniform(lo, box.hi[u] + w);
            }
            double h = distances::eval(cfg.spec, cfg.x, y);
            if (h < cfg.t && !box.contains(y.coords)) ++inside_ball_outside_box;
        }
        CHECK(inside_ball_outside_box == 0);
    }
}

TEST_CASE("hit-or-miss volume against exact oracles") {
    auto can1 = DistanceSpec::canberra(1);
    auto est = volume_mc(can1, pt({2}), 0.1, 1000000, 77);
    double exact = 4 * 0.1 * 2 / (1 - 0.01);
    CHECK(std::abs(est.value - exact) <= 4 * est.stderr_ + 1e-12 * exact);
    CHECK(est.value <= est.box_volume);
    CHECK(est.n_samples == 1000000);

    auto l2 = DistanceSpec::lp(2, 2);
    auto disc = volume_mc(l2, pt({0, 0}), 1.0, 1000000, 78);
    CHECK(disc.stderr_ > 0);
    CHECK(std::abs(disc.value - kPi) <= 4 * disc.stderr_);

    auto can2 = DistanceSpec::canberra(2);
    auto mid = volume_mc(can2, pt({1, 1}), 0.3, 1000000, 79);
    auto b = volume_bounds(can2, pt({1, 1}), 0.3);
    CHECK(mid.value >= b.lower - 4 * mid.stderr_);
    CHECK(mid.value <= b.upper + 4 * mid.stderr_);

    CHECK_THROWS_AS(volume_mc(can1, pt({2}), 0.1, 100, 77), invalid_parameter);
}

TEST_CASE("sandwich bounds hold for Monte Carlo volumes") {
    Rng rng(2024);
    for (int rep = 0; rep < 50; ++rep) {
        int k = 1 + static_cast<int>(rng.index(3));
        // Canberra config
        {
            auto spec = DistanceSpec::canberra(k);
            std::vector<double> c(static_cast<std::size_t>(k));
            for (auto& v : c) v = (rng.uniform01() < 0.5 ? -1 : 1) * rng.uniform(0.5, 3.0);
            Point x(c);
            double t = rng.uniform(0.05, 0.5);
            auto b = volume_bounds(spec, x, t);
            auto est = volume_mc(spec, x, t, 20000, 9000 + static_cast<std::uint64_t>(rep));
            // k=1 box coincides with the exact interval, so allow rounding slack
            CHECK(est.value >= b.lower - 4 * est.stderr_ - 1e-12 * std::max(1.0, b.lower));
            CHECK(est.value <= b.upper + 4 * est.stderr_ + 1e-12 * std::max(1.0, b.upper));
        }
        // entropic config
        {
            auto spec = DistanceSpec::entropic(k);
            std::vector<double> c(static_cast<std::size_t>(k));
            double cmin = 1e300;
            for (auto& v : c) {
                v = rng.uniform(0.5, 3.0);
                cmin = std::min(cmin, v);
            }
            Point x(c, Domain::PositiveOrthant);
            double t = 0.8 * k * cmin / 2 * rng.uniform(0.05, 1.0);
            auto b = volume_bounds(spec, x, t);
            auto est = volume_mc(spec, x, t, 20000, 40000 + static_cast<std::uint64_t>(rep));
            CHECK(est.value >= b.lower - 4 * est.stderr_);
            CHECK(est.value <= b.upper + 4 * est.stderr_);
        }
    }
}

TEST_CASE("exact and Monte Carlo volumes agree across families") {
    Rng rng(515);
    for (int rep = 0; rep < 50; ++rep) {
        int k = 1 + static_cast<int>(rng.index(3));
        DistanceSpec spec = DistanceSpec::lp(1, k);
        switch (rep % 5) {
            case 0: spec = DistanceSpec::canberra(1); k = 1; break;
            case 1: spec = DistanceSpec::lp(1 + rng.uniform01() * 2, k); break;
            case 2: spec = DistanceSpec::lp_pow_p(2, k); break;
            case 3:
                spec = DistanceSpec::monotone_transform(
                    2, distances::MonotoneMap::power(1.5), k);
                break;
            case 4: spec = DistanceSpec::oscillatory(0.4, 0.7, k); break;
        }
        std::vector<double> c(static_cast<std::size_t>(k));
        for (auto& v : c) v = rng.uniform(0.5, 3.0);
        Point x(c);
        double t = std::holds_alternative<distances::OscillatoryTest>(spec.family)
                       ? rng.uniform(0.005, 0.09)
                       : rng.uniform(0.05, 0.5);
        double exact = *volume_exact(spec, x, t);
        auto est = volume_mc(spec, x, t, 40000, 600 + static_cast<std::uint64_t>(rep));
        CHECK(std::abs(est.value - exact) <= 4 * est.stderr_ + 1e-12 * std::max(1.0, exact));
    }
}

TEST_CASE("nested sampling keeps volume estimates monotone in t") {
    auto can2 = DistanceSpec::canberra(2);
    Point x = pt({1, 2});
    double t_max = 0.3;
    Box box = bounding_box(can2, x, t_max);
    double prev = -1.0;
    for (double t : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
        auto est = volume_mc_in_box(can2, x, t, box, 50000, 321);
        CHECK(est.value >= prev);
        prev = est.value;
    }

    auto ent = DistanceSpec::entropic(1);
    Point xe = pt({2}, Domain::PositiveOrthant);
    Box ebox = bounding_box(ent, xe, 0.4);
    prev = -1.0;
    for (double t : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        auto est = volume_mc_in_box(ent, xe, t, ebox, 50000, 322);
        CHECK(est.value >= prev);
        prev = est.value;
    }
}

TEST_CASE("volume ratios for exact families") {
    auto can1 = DistanceSpec::canberra(1);
    for (double t : {0.05, 0.2, 0.5, 0.9}) {
        CHECK(delta_t(can1, pt({4}), pt({2}), t, VolumeMethod::Exact) ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    Rng rng(808);
    for (int rep = 0; rep < 200; ++rep) {
        double a = (rng.uniform01() < 0.5 ? -1 : 1) * rng.uniform(0.2, 5.0);
        double b = (rng.uniform01() < 0.5 ? -1 : 1) * rng.uniform(0.2, 5.0);
        double t = rng.uniform(0.01, 0.99);
        CHECK(delta_t(can1, pt({a}), pt({b}), t, VolumeMethod::Exact) ==
              doctest::Approx(std::abs(a / b)).epsilon(1e-12));
    }
    auto l2 = DistanceSpec::lp(2, 3);
    CHECK(delta_t(l2, pt({5, 1, 0}), pt({-2, 0, 4}), 0.7, VolumeMethod::Exact) == 1.0);
    CHECK_THROWS_AS(delta_t(can1, pt({2}), pt({0}), 0.5, VolumeMethod::Exact),
                    degenerate_denominator);
    CHECK_THROWS_AS(
        delta_t(DistanceSpec::entropic(1), pt({2}, Domain::PositiveOrthant),
                pt({1}, Domain::PositiveOrthant), 0.1, VolumeMethod::Exact),
        unsupported_family);
}

TEST_CASE("volume ratios by Monte Carlo stay inside the bounds-ratio interval") {
    // entropic 1-D: delta_t near sqrt(x/y) = 2
    auto ent = DistanceSpec::entropic(1);
    Point x = pt({4}, Domain::PositiveOrthant);
    Point y = pt({1}, Domain::PositiveOrthant);
    for (double t : {1e-2, 1e-3, 1e-4}) {
        double d = delta_t(ent, x, y, t, VolumeMethod::MonteCarlo, 200000, 5150);
        auto bx = volume_bounds(ent, x, t);
        auto by = volume_bounds(ent, y, t);
        CHECK(d >= bx.lower / by.upper);
        CHECK(d <= bx.upper / by.lower);
    }
    // Canberra 2-D against delta = prod |x_i / y_i|
    auto can2 = DistanceSpec::canberra(2);
    Point cx = pt({1, 1});
    Point cy = pt({2, 3});
    for (double t : {0.05, 0.02}) {
        double d = delta_t(can2, cx, cy, t, VolumeMethod::MonteCarlo, 200000, 6161);
        auto bx = volume_bounds(can2, cx, t);
        auto by = volume_bounds(can2, cy, t);
        CHECK(d >= bx.lower / by.upper);
        CHECK(d <= bx.upper / by.lower);
    }
}

TEST_CASE("analytic delta limits") {
    CHECK(*delta_limit(DistanceSpec::canberra(2), pt({4, 9}), pt({2, 3})) ==
          doctest::Approx(6.0).epsilon(1e-14));
    CHECK(*delta_limit(DistanceSpec::entropic(2), pt({4, 9}, Domain::PositiveOrthant),
                       pt({1, 1}, Domain::PositiveOrthant)) ==
          doctest::Approx(6.0).epsilon(1e-14));
    CHECK(*delta_limit(DistanceSpec::bray_curtis(2), pt({4, 9}, Domain::PositiveOrthant),
                       pt({2, 3}, Domain::PositiveOrthant)) ==
          doctest::Approx(6.0).epsilon(1e-14));
    CHECK(*delta_limit(DistanceSpec::lp(1, 2), pt({4, 9}), pt({2, 3})) == 1.0);
    CHECK(*delta_limit(DistanceSpec::sphere_geodesic(3),
                       Point({0, 0, 1}, Domain::UnitSphere),
                       Point({1, 0, 0}, Domain::UnitSphere)) == 1.0);
    CHECK_FALSE(delta_limit(DistanceSpec::oscillatory(0.3, 0.8, 1), pt({1}), pt({2}))
                    .has_value());
    CHECK_THROWS_AS(delta_limit(DistanceSpec::canberra(1), pt({1}), pt({0})),
                    domain_violation);
}

TEST_CASE("regularity report on Canberra via Monte Carlo") {
    RegularityOptions opt;
    opt.t_grid = {0.2, 0.1, 0.05, 0.02, 0.01};
    opt.mc_n = 100000;
    opt.seed = 99;
    auto rep = check_volume_regularity(DistanceSpec::canberra(2), pt({1, 1}), pt({2, 3}), opt);
    CHECK(rep.verdict == RegularityVerdict::VolumeRegularConsistent);
    REQUIRE(rep.delta_limit.has_value());
    CHECK(*rep.delta_limit == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(rep.c_hat >= opt.sandwich_lo);
    CHECK(rep.C_hat <= opt.sandwich_hi);
    CHECK(rep.c_hat <= rep.C_hat);
    for (double d : rep.delta_t_values) CHECK(d > 0);
}

TEST_CASE("regularity report on translation-invariant and oscillatory families") {
    RegularityOptions opt;
    opt.t_grid = dyadic_grid(0.2, 8);
    auto rep = check_volume_regularity(DistanceSpec::lp(2, 3), pt({1, 0, -2}), pt({0, 0, 0}), opt);
    CHECK(rep.verdict == RegularityVerdict::VolumeRegularConsistent);
    for (double d : rep.delta_t_values) CHECK(d == 1.0);

    // centers with very different oscillation amplitudes
    RegularityOptions osc_opt;
    osc_opt.t_grid = dyadic_grid(0.08, 10);
    auto spec = DistanceSpec::oscillatory(0.5, 0.9, 1);
    auto osc = check_volume_regularity(spec, pt({5}), pt({-5}), osc_opt);
    CHECK(osc.verdict == RegularityVerdict::VolumeRegularConsistent);
    CHECK_FALSE(osc.delta_limit.has_value());
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < osc.delta_t_values.size(); ++i) {
        inc = inc && osc.delta_t_values[i] > osc.delta_t_values[i - 1];
        dec = dec && osc.delta_t_values[i] < osc.delta_t_values[i - 1];
    }
    CHECK_FALSE(inc);
    CHECK_FALSE(dec);
    double dmin = *std::min_element(osc.delta_t_values.begin(), osc.delta_t_values.end());
    double dmax = *std::max_element(osc.delta_t_values.begin(), osc.delta_t_values.end());
    CHECK(dmin > 0.5);
    CHECK(dmax < 2.0);
}

TEST_CASE("regularity violation on a collapsing center") {
    RegularityOptions opt;
    opt.t_grid = {0.5, 0.4, 0.3, 0.2, 0.1};
    auto rep = check_volume_regularity(DistanceSpec::canberra(1), pt({0}), pt({2}), opt);
    CHECK(rep.verdict == RegularityVerdict::ViolationDetected);
}

TEST_CASE("regularity check validates the grid") {
    RegularityOptions opt;
    opt.t_grid = {0.2, 0.1, 0.05};
    CHECK_THROWS_AS(check_volume_regularity(DistanceSpec::lp(2, 1), pt({0}), pt({1}), opt),
                    invalid_parameter);
    opt.t_grid = {0.2, 0.2, 0.1, 0.05, 0.02};
    CHECK_THROWS_AS(check_volume_regularity(DistanceSpec::lp(2, 1), pt({0}), pt({1}), opt),
                    invalid_parameter);
}

TEST_CASE("ahlfors exponents from exact volumes") {
    auto fit = estimate_ahlfors_alpha(DistanceSpec::lp(2, 3), pt({0, 0, 0}),
                                      dyadic_grid(1.0 / 8, 6), 1000, 1);
    CHECK(fit.alpha_hat == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    auto pfit = estimate_ahlfors_alpha(DistanceSpec::lp_pow_p(2, 3), pt({0, 0, 0}),
                                       dyadic_grid(1.0 / 8, 6), 1000, 1);
    CHECK(pfit.alpha_hat == doctest::Approx(1.5).epsilon(1e-9));

    CHECK_THROWS_AS(estimate_ahlfors_alpha(DistanceSpec::lp(2, 3), pt({0, 0, 0}),
                                           dyadic_grid(0.5, 4), 1000, 1),
                    invalid_parameter);
}

TEST_CASE("ahlfors exponents from Monte Carlo volumes") {
    auto can = estimate_ahlfors_alpha(DistanceSpec::canberra(2), pt({1, 1}),
                                      dyadic_grid(0.2, 8), 200000, 12);
    CHECK(can.alpha_hat >= 1.8);
    CHECK(can.alpha_hat <= 2.2);

    auto ent1 = estimate_ahlfors_alpha(DistanceSpec::entropic(1),
                                       pt({1}, Domain::PositiveOrthant),
                                       dyadic_grid(0.004, 8), 1000000, 13);
    CHECK(ent1.alpha_hat >= 0.45);
    CHECK(ent1.alpha_hat <= 0.55);

    auto ent2 = estimate_ahlfors_alpha(DistanceSpec::entropic(2),
                                       pt({1, 2}, Domain::PositiveOrthant),
                                       dyadic_grid(0.02, 8), 1000000, 14);
    CHECK(ent2.alpha_hat >= 0.85);
    CHECK(ent2.alpha_hat <= 1.15);
}

TEST_CASE("centered oscillation of a Gaussian shrinks with the radius") {
    auto f = DensitySpec::diag_gaussian({0.0}, {1.0});
    auto can1 = DistanceSpec::canberra(1);
    std::vector<double> grid = {0.1, 0.05, 0.01};
    auto est = centered_oscillation(f, can1, pt({2}), grid, 100000, 5);
    REQUIRE(est.per_t.size() == 3);
    CHECK(est.per_t[0] > est.per_t[1]);
    CHECK(est.per_t[1] > est.per_t[2]);
    CHECK(est.per_t[2] > 0);
    CHECK(est.value == est.per_t[0]);
    // mean-value bound: sup |phi'| = phi(1) at the inflection point
    double supgrad = normal_pdf(1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Box b = bounding_box(can1, pt({2}), grid[i]);
        CHECK(est.per_t[i] <= supgrad * (b.hi[0] - b.lo[0]));
    }
}

TEST_CASE("centered oscillation of a constant is zero") {
    auto constant = [](std::span<const double>) { return 0.25; };
    auto l2 = DistanceSpec::lp(2, 2);
    auto est = centered_oscillation(constant, l2, pt({1, -1}), {0.5, 0.25, 0.125}, 20000, 6);
    for (double v : est.per_t) CHECK(v == 0.0);
    CHECK(est.value == 0.0);
}

TEST_CASE("centered oscillation reports starved acceptance") {
    auto constant = [](std::span<const double>) { return 1.0; };
    auto l1 = DistanceSpec::lp(1, 3);
    CHECK_THROWS_AS(
        centered_oscillation(constant, l1, pt({0, 0, 0}), {0.5}, 200, 7),
        insufficient_acceptance);
}

TEST_CASE("volume estimates are independent of thread count") {
    auto can2 = DistanceSpec::canberra(2);
    auto a = volume_mc(can2, pt({1, 2}), 0.2, 300000, 42, 1);
    auto b = volume_mc(can2, pt({1, 2}), 0.2, 300000, 42, 4);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
}
