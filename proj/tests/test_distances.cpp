#include <doctest.h>

#include <cmath>
#include <vector>

#include "ipd/distances.hpp"
#include "ipd/rng.hpp"
#include "test_util.hpp"

using namespace ipd::distances;
using test_util::nearby_point;
using test_util::random_point;

namespace {

Point pt(std::initializer_list<double> c, Domain d = Domain::Euclidean) {
    return Point(std::vector<double>(c), d);
}

}  // namespace

TEST_CASE("canberra hand values") {
    auto spec = DistanceSpec::canberra(1);
    CHECK(eval(spec, pt({1}), pt({3})) == doctest::Approx(0.5).epsilon(1e-14));
    // zero-zero coordinate contributes 0, zero vs nonzero contributes 1
    auto spec2 = DistanceSpec::canberra(2);
    CHECK(eval(spec2, pt({0, 1}), pt({0, 2})) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(eval(spec, pt({0}), pt({5})) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eval(spec, pt({0}), pt({0})) == 0.0);
    // negative coordinates are allowed
    CHECK(eval(spec, pt({-1}), pt({-3})) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("entropic hand value and asymmetry witness") {
    auto spec = DistanceSpec::entropic(1);
    double e = std::exp(1.0);
    // |1*log(1/e) - 1 + e| = e - 2
    CHECK(eval(spec, pt({1}, Domain::PositiveOrthant), pt({e}, Domain::PositiveOrthant)) ==
          doctest::Approx(e - 2.0).epsilon(1e-14));
    // reversed arguments give |e*1 - e + 1| = 1
    CHECK(eval(spec, pt({e}, Domain::PositiveOrthant), pt({1}, Domain::PositiveOrthant)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(is_symmetric(spec));
    CHECK_THROWS_AS(eval(spec, pt({0.0}, Domain::PositiveOrthant),
                         pt({1.0}, Domain::PositiveOrthant)),
                    ipd::domain_violation);
    CHECK_THROWS_AS(eval(spec, pt({-1.0}, Domain::PositiveOrthant),
                         pt({1.0}, Domain::PositiveOrthant)),
                    ipd::domain_violation);
}

TEST_CASE("bray-curtis hand value and ricotta-podani decomposition") {
    auto spec = DistanceSpec::bray_curtis(2);
    auto x = pt({2, 1}, Domain::PositiveOrthant);
    auto y = pt({1, 2}, Domain::PositiveOrthant);
    CHECK(eval(spec, x, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // h_BC = sum_i w_i * |x_i-y_i|/(x_i+y_i) with w_i = (x_i+y_i)/sum_j(x_j+y_j)
    ipd::Rng rng(20260819);
    for (int k : {1, 2, 5}) {
        auto bc = DistanceSpec::bray_curtis(k);
        for (int rep = 0; rep < 1000; ++rep) {
            auto a = random_point(rng, k, Domain::PositiveOrthant);
            auto b = random_point(rng, k, Domain::PositiveOrthant);
            double total = 0;
            for (int i = 0; i < k; ++i) total += a.coords[i] + b.coords[i];
            double wsum = 0, weighted = 0;
            for (int i = 0; i < k; ++i) {
                double w = (a.coords[i] + b.coords[i]) / total;
                wsum += w;
                weighted += w * std::abs(a.coords[i] - b.coords[i]) /
                            (a.coords[i] + b.coords[i]);
            }
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(eval(bc, a, b) == doctest::Approx(weighted).epsilon(1e-12));
        }
    }
}

TEST_CASE("lp and lp^p values") {
    auto l2 = DistanceSpec::lp(2, 2);
    CHECK(eval(l2, pt({0, 0}), pt({3, 4})) == doctest::Approx(5.0).epsilon(1e-14));
    auto l1 = DistanceSpec::lp(1, 3);
    CHECK(eval(l1, pt({0, 0, 0}), pt({1, -2, 3})) == doctest::Approx(6.0).epsilon(1e-14));
    auto l3p = DistanceSpec::lp_pow_p(3, 2);
    CHECK(eval(l3p, pt({0, 0}), pt({1, 2})) == doctest::Approx(9.0).epsilon(1e-14));
    // monotone transform of L2 with power 2 equals component-additive L2^2
    auto mt = DistanceSpec::monotone_transform(2, MonotoneMap::power(2), 2);
    auto sq = DistanceSpec::lp_pow_p(2, 2);
    ipd::Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        auto a = random_point(rng, 2, Domain::Euclidean);
        auto b = random_point(rng, 2, Domain::Euclidean);
        CHECK(eval(mt, a, b) == doctest::Approx(eval(sq, a, b)).epsilon(1e-12));
    }
}

TEST_CASE("sphere geodesic") {
    auto spec = DistanceSpec::sphere_geodesic(3);
    CHECK(eval(spec, pt({1, 0, 0}, Domain::UnitSphere), pt({0, 1, 0}, Domain::UnitSphere)) ==
          doctest::Approx(M_PI / 2).epsilon(1e-14));
    CHECK(eval(spec, pt({1, 0, 0}, Domain::UnitSphere), pt({-1, 0, 0}, Domain::UnitSphere)) ==
          doctest::Approx(M_PI).epsilon(1e-14));
    CHECK_THROWS_AS(eval(spec, pt({1, 1, 0}, Domain::UnitSphere),
                         pt({0, 1, 0}, Domain::UnitSphere)),
                    ipd::domain_violation);
}

TEST_CASE("dimension mismatch") {
    auto spec = DistanceSpec::lp(2, 2);
    CHECK_THROWS_AS(eval(spec, pt({1, 2}), pt({1, 2, 3})), ipd::dimension_mismatch);
    CHECK_THROWS_AS(eval(spec, pt({1}), pt({2})), ipd::dimension_mismatch);
}

TEST_CASE("invalid construction parameters") {
    CHECK_THROWS_AS(DistanceSpec::lp(0.5, 1), ipd::invalid_parameter);
    CHECK_THROWS_AS(DistanceSpec::lp(2, 0), ipd::invalid_parameter);
    CHECK_THROWS_AS(DistanceSpec::oscillatory(0.7, 0.5, 1), ipd::invalid_parameter);
    CHECK_THROWS_AS(DistanceSpec::oscillatory(0.3, 1.2, 1), ipd::invalid_parameter);
    CHECK_THROWS_AS(DistanceSpec::sphere_geodesic(1), ipd::invalid_parameter);
    CHECK_THROWS_AS(MonotoneMap::power(-1), ipd::invalid_parameter);
    CHECK_THROWS_AS(MonotoneMap::table_spline({{0, 0}, {1, 0.5}, {2, 0.4}}),
                    ipd::invalid_parameter);
    CHECK_THROWS_AS(MonotoneMap::table_spline({{0.5, 0}, {1, 1}}), ipd::invalid_parameter);
}

TEST_CASE("identity of indiscernibles, all families") {
    struct Case {
        DistanceSpec spec;
        double perturb;  // separation scale for the y draw
    };
    std::vector<Case> cases = {
        {DistanceSpec::lp(2, 3), 1.0},
        {DistanceSpec::lp_pow_p(3, 2), 1.0},
        {DistanceSpec::canberra(3), 1.0},
        {DistanceSpec::bray_curtis(2), 1.0},
        {DistanceSpec::entropic(2), 1.0},
        {DistanceSpec::monotone_transform(2, MonotoneMap::log1p_map(), 2), 1.0},
        {DistanceSpec::sphere_geodesic(3), 0.1},
        {DistanceSpec::oscillatory(0.3, 0.8, 2), 0.01},
    };
    ipd::Rng rng(99);
    for (const auto& c : cases) {
        CAPTURE(c.spec.family_name());
        Domain dom = c.spec.required_domain();
        for (int rep = 0; rep < 10000; ++rep) {
            auto x = random_point(rng, c.spec.dim, dom);
            CHECK(eval(c.spec, x, x) == 0.0);
            auto y = nearby_point(rng, x, c.perturb);
            if (y.coords == x.coords) continue;
            CHECK(eval(c.spec, x, y) > 0.0);
        }
    }
}

TEST_CASE("symmetry flags are honest") {
    std::vector<DistanceSpec> symmetric = {
        DistanceSpec::lp(2, 3),
        DistanceSpec::lp_pow_p(2, 3),
        DistanceSpec::canberra(3),
        DistanceSpec::bray_curtis(3),
        DistanceSpec::monotone_transform(1, MonotoneMap::power(0.5), 3),
        DistanceSpec::sphere_geodesic(3),
    };
    ipd::Rng rng(4242);
    for (const auto& spec : symmetric) {
        CAPTURE(spec.family_name());
        CHECK(is_symmetric(spec));
        Domain dom = spec.required_domain();
        for (int rep = 0; rep < 2000; ++rep) {
            auto x = random_point(rng, spec.dim, dom);
            auto y = random_point(rng, spec.dim, dom);
            CHECK(eval(spec, x, y) == doctest::Approx(eval(spec, y, x)).epsilon(1e-12));
        }
    }

    // asymmetric witness: centers with different oscillation amplitudes,
    // separated well below the scale t0
    auto osc = DistanceSpec::oscillatory(0.4, 0.9, 2);
    CHECK_FALSE(is_symmetric(osc));
    auto x = pt({0.0, 0.0});
    auto y = pt({0.05, 0.01});
    CHECK(eval(osc, x, y) != doctest::Approx(eval(osc, y, x)).epsilon(1e-12));
}

TEST_CASE("monotone maps round trip") {
    auto spline = MonotoneMap::table_spline(
        {{0, 0}, {0.5, 0.2}, {1, 0.9}, {2, 1.4}, {5, 4.0}, {10, 12.0}});
    std::vector<MonotoneMap> maps = {MonotoneMap::identity(), MonotoneMap::power(2),
                                     MonotoneMap::power(0.37), MonotoneMap::log1p_map(),
                                     spline};
    for (const auto& gamma : maps) {
        for (int i = 0; i <= 60; ++i) {
            double d = std::pow(10.0, -3.0 + 6.0 * i / 60.0);  // 1e-3 .. 1e3
            double t = gamma(d);
            CHECK(gamma.inverse(t) == doctest::Approx(d).epsilon(1e-10));
            CHECK(gamma(gamma.inverse(t)) == doctest::Approx(t).epsilon(1e-10));
        }
        CHECK(gamma(0.0) == 0.0);
    }
    // spline interpolates its knots and is strictly increasing between them
    for (auto [u, v] : spline.knots()) CHECK(spline(u) == doctest::Approx(v).epsilon(1e-12));
    double prev = -1;
    for (int i = 0; i <= 500; ++i) {
        double u = 12.0 * i / 500.0;
        double v = spline(u);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("oscillatory distance") {
    auto f = OscillatoryTest{0.3, 0.8};
    auto spec = DistanceSpec::oscillatory(0.3, 0.8, 1);

    // eps = 0 degenerates to |x-y|_1
    auto flat = DistanceSpec::oscillatory(0.0, 0.8, 2);
    CHECK(eval(flat, pt({1, 2}), pt({1.01, 2.02})) == doctest::Approx(0.03).epsilon(1e-12));

    // round trip through the forward radius profile
    auto x = pt({0.7});
    for (double t : {0.09, 0.03, 0.007, 0.0004}) {
        double s = oscillatory_radius(f, x, t);
        auto y = pt({x.coords[0] + s});
        CHECK(eval(spec, x, y) == doctest::Approx(t).epsilon(1e-9));
    }

    // r_x is strictly increasing on (0, t0)
    double prev = 0;
    for (int i = 1; i <= 2000; ++i) {
        double t = ipd::distances::kOscillatoryT0 * i / 2001.0;
        double r = oscillatory_radius(f, x, t);
        CHECK(r > prev);
        prev = r;
    }

    CHECK_THROWS_AS(eval(spec, pt({0.0}), pt({5.0})), ipd::out_of_scale);
}
