#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "ipd/density.hpp"
#include "ipd/empirics.hpp"
#include "ipd/io.hpp"
#include "ipd/json_io.hpp"
#include "ipd/rng.hpp"

namespace {

namespace fs = std::filesystem;
using ipd::json_io::json;

const std::string kCli = IPD_CLI_PATH;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_points(const std::string& path, const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << ipd::io::format_double(row[i]);
        }
        out << '\n';
    }
}

void write_sample_csv(const std::string& path, const ipd::empirics::Sample& s) {
    std::string text;
    for (int i = 0; i < s.n; ++i) {
        const auto row = s.row(i);
        for (int j = 0; j < s.k; ++j) {
            if (j) text += ',';
            text += ipd::io::format_double(row[j]);
        }
        text += '\n';
    }
    ipd::io::atomic_write_text(path, text);
}

json load_report(const std::string& path) {
    return ipd::json_io::parse(ipd::io::read_text(path), path);
}

}  // namespace

TEST_CASE("dist writes sorted vectors with the right pair counts") {
    TempDir dir("ipd_cli_dist");
    write_points(dir.file("x.csv"), {{0}, {1}, {3}});
    write_points(dir.file("y.csv"), {{1}, {2}, {3}});

    const int rc = run_cli("dist --x " + dir.file("x.csv") + " --y " + dir.file("y.csv") +
                           " --distance lp --p 1 --out " + dir.path.string());
    REQUIRE(rc == 0);

    const auto xx = ipd::io::read_csv(dir.file("dist_xx.csv"));
    const auto yy = ipd::io::read_csv(dir.file("dist_yy.csv"));
    const auto xy = ipd::io::read_csv(dir.file("dist_xy.csv"));
    CHECK(xx.size() == 3);
    CHECK(yy.size() == 3);
    CHECK(xy.size() == 9);
    for (std::size_t i = 1; i < xy.size(); ++i) CHECK(xy[i - 1][0] <= xy[i][0]);
    CHECK(xx[0][0] == 1.0);
    CHECK(xx[2][0] == 3.0);

    const auto report = load_report(dir.file("dist_report.json"));
    CHECK(report.at("schema") == 1);
    CHECK(report.at("counts").at("pairs_xy") == 9);
    CHECK(report.at("config").at("distance").at("family") == "lp");
    CHECK(report.at("config").at("seed") == 0);
}

TEST_CASE("domain rules drive the dist exit codes") {
    TempDir dir("ipd_cli_domain");
    write_points(dir.file("neg.csv"), {{-1}, {2}, {5}});

    // Canberra is defined on all of R^k, so negative data passes.
    CHECK(run_cli("dist --x " + dir.file("neg.csv") + " --distance canberra --out " +
                  dir.path.string()) == 0);
    // The entropic family needs positive data; the default euclidean tag is
    // incompatible.
    CHECK(run_cli("dist --x " + dir.file("neg.csv") + " --distance entropic --out " +
                  dir.path.string()) == 2);
    // Declaring the positive orthant fails at read time on the same file.
    CHECK(run_cli("dist --x " + dir.file("neg.csv") +
                  " --distance entropic --domain positive --out " + dir.path.string()) == 2);

    write_points(dir.file("pos.csv"), {{0.5}, {2}, {5}});
    CHECK(run_cli("dist --x " + dir.file("pos.csv") +
                  " --distance entropic --domain positive --out " + dir.path.string()) == 0);

    CHECK(run_cli("dist --out " + dir.path.string()) == 1);  // missing --x
    CHECK(run_cli("dist --x " + dir.file("missing.csv") + " --out " + dir.path.string()) == 2);
}

TEST_CASE("usage and numerical failures map onto exit codes") {
    TempDir dir("ipd_cli_codes");
    write_points(dir.file("x.csv"), {{0}, {1}, {3}});

    CHECK(run_cli("nonsense") == 1);
    CHECK(run_cli("volume --center 5 --distance canberra --out " + dir.path.string()) == 1);
    CHECK(run_cli("volume --center 5 --t 0.05 --method nope --out " + dir.path.string()) == 1);
    CHECK(run_cli("volume --center 5 --t 1.5 --distance canberra --out " + dir.path.string()) ==
          1);
    CHECK(run_cli("figures fig3 --out " + dir.path.string()) == 1);
    CHECK(run_cli("figures fig1 --resolution 16 --out " + dir.path.string()) == 1);
    CHECK(run_cli("test --x " + dir.file("x.csv") + " --y " + dir.file("x.csv") +
                  " --permutations 0 --out " + dir.path.string()) == 1);

    // The small-t limit is undefined on a zero coordinate: a domain problem.
    CHECK(run_cli("regularity --x 1 --y 0 --distance canberra --t-max 0.4 --out " +
                  dir.path.string()) == 2);

    // A rate ladder reaching shift 0 has no usable rung: a numerical failure.
    CHECK(run_cli("bounds --mode rate --base-mean 5 --base-var 1 "
                  "--ladder 0.4,0.2,0.1,0 --out " +
                  dir.path.string()) == 3);
}

TEST_CASE("volume report matches the closed form and the MC estimate") {
    TempDir dir("ipd_cli_volume");

    REQUIRE(run_cli("volume --center 5 --t 0.05 --distance canberra --method exact --out " +
                    dir.path.string()) == 0);
    auto report = load_report(dir.file("volume_report.json"));
    CHECK(report.at("value").get<double>() ==
          doctest::Approx(4.0 * 0.05 * 5.0 / (1.0 - 0.0025)).epsilon(1e-12));

    REQUIRE(run_cli("volume --center 5 --t 0.05 --distance canberra --method mc "
                    "--mc-n 200000 --seed 7 --out " +
                    dir.path.string()) == 0);
    report = load_report(dir.file("volume_report.json"));
    const double est = report.at("estimate").at("value").get<double>();
    const double se = report.at("estimate").at("stderr").get<double>();
    CHECK(std::abs(est - 1.0025062656641603) <= 4.0 * se);

    REQUIRE(run_cli("volume --center 1,1 --t 0.1 --distance entropic --method bounds --out " +
                    dir.path.string()) == 0);
    report = load_report(dir.file("volume_report.json"));
    CHECK(report.at("bounds").at("lower").get<double>() > 0.0);
    CHECK(report.at("bounds").at("lower").get<double>() <=
          report.at("bounds").at("upper").get<double>());
}

TEST_CASE("regularity reports the expected Ahlfors exponents") {
    TempDir dir("ipd_cli_reg");

    REQUIRE(run_cli("regularity --x 1,1 --y 2,1 --distance entropic --t-max 0.2 "
                    "--mc-n 50000 --seed 5 --out " +
                    dir.path.string()) == 0);
    auto report = load_report(dir.file("regularity_report.json"));
    const double alpha2 = report.at("ahlfors").at("alpha_hat").get<double>();
    CHECK(alpha2 > 0.85);
    CHECK(alpha2 < 1.15);
    CHECK(report.at("regularity").at("verdict") == "VolumeRegularConsistent");

    // L2 in dimension 3 has exact volumes, so the fitted slope is exactly 3.
    REQUIRE(run_cli("regularity --x 0,0,0 --y 1,0,0 --distance lp --p 2 --t-max 0.4 --out " +
                    dir.path.string()) == 0);
    report = load_report(dir.file("regularity_report.json"));
    CHECK(report.at("ahlfors").at("alpha_hat").get<double>() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(report.at("regularity").at("delta_limit").get<double>() == 1.0);

    REQUIRE(run_cli("regularity --x 0.3,0.2 --y 0.1,0.1 --distance oscillatory_test "
                    "--eps 0.3 --amplitude-scale 0.6 --t-max 0.05 --mc-n 40000 --out " +
                    dir.path.string()) == 0);
    report = load_report(dir.file("regularity_report.json"));
    CHECK(report.at("regularity").at("verdict") == "VolumeRegularConsistent");
    CHECK(report.at("regularity").at("delta_limit").is_null());
}

TEST_CASE("ecdf reproduces the two-point discrepancy") {
    TempDir dir("ipd_cli_ecdf");
    write_points(dir.file("x.csv"), {{0}, {1}});
    write_points(dir.file("y.csv"), {{0}, {1}});

    REQUIRE(run_cli("ecdf --x " + dir.file("x.csv") + " --y " + dir.file("y.csv") +
                    " --distance lp --p 1 --out " + dir.path.string()) == 0);
    const auto report = load_report(dir.file("ecdf_report.json"));
    CHECK(report.at("discrepancy").at("delta_k_inf").get<double>() == 1.0);
    const auto& grid = report.at("ecdf").at("grid");
    const auto& dk = report.at("discrepancy").at("delta_k");
    REQUIRE(grid.size() == dk.size());
    for (std::size_t i = 1; i < dk.size(); ++i)
        CHECK(dk[i].get<double>() >= dk[i - 1].get<double>());
}

TEST_CASE("permutation test via the CLI keeps its power and level behavior") {
    TempDir dir("ipd_cli_test");
    const auto f = ipd::DensitySpec::diag_gaussian({0.0}, {1.0});
    const auto g = f.shifted_first(2.0);

    // Identical files: the test must not reject.
    const auto base = ipd::empirics::generate(f, 100, ipd::substream_seed(99, 1));
    write_sample_csv(dir.file("same.csv"), base);
    REQUIRE(run_cli("test --x " + dir.file("same.csv") + " --y " + dir.file("same.csv") +
                    " --distance lp --p 2 --permutations 199 --seed 4 --out " +
                    dir.path.string()) == 0);
    auto report = load_report(dir.file("test_report.json"));
    CHECK(report.at("result").at("p_value").get<double>() > 0.05);

    // A two sigma shift at n = m = 100 rejects in at least 90 of 100 seeds.
    int rejections = 0;
    for (std::uint64_t s = 1; s <= 100; ++s) {
        write_sample_csv(dir.file("fx.csv"),
                         ipd::empirics::generate(f, 100, ipd::substream_seed(s, 1)));
        write_sample_csv(dir.file("fy.csv"),
                         ipd::empirics::generate(g, 100, ipd::substream_seed(s, 2)));
        REQUIRE(run_cli("test --x " + dir.file("fx.csv") + " --y " + dir.file("fy.csv") +
                        " --distance lp --p 2 --permutations 199 --seed " + std::to_string(s) +
                        " --out " + dir.path.string()) == 0);
        report = load_report(dir.file("test_report.json"));
        if (report.at("result").at("p_value").get<double>() <= 0.05) ++rejections;
    }
    CHECK(rejections >= 90);
}

TEST_CASE("reruns with identical arguments are byte-identical") {
    TempDir dir("ipd_cli_rerun");
    write_points(dir.file("x.csv"), {{0}, {1}, {3}});
    write_points(dir.file("y.csv"), {{1}, {2}, {3}});

    const std::string args = "test --x " + dir.file("x.csv") + " --y " + dir.file("y.csv") +
                             " --distance lp --p 2 --permutations 199 --seed 12 --out " +
                             dir.path.string();
    REQUIRE(run_cli(args) == 0);
    const std::string first = ipd::io::read_text(dir.file("test_report.json"));
    REQUIRE(run_cli(args) == 0);
    CHECK(ipd::io::read_text(dir.file("test_report.json")) == first);

    const std::string dist_args = "dist --x " + dir.file("x.csv") + " --distance lp --p 1 " +
                                  "--out " + dir.path.string();
    REQUIRE(run_cli(dist_args) == 0);
    const std::string csv = ipd::io::read_text(dir.file("dist_xx.csv"));
    const std::string rep = ipd::io::read_text(dir.file("dist_report.json"));
    REQUIRE(run_cli(dist_args) == 0);
    CHECK(ipd::io::read_text(dir.file("dist_xx.csv")) == csv);
    CHECK(ipd::io::read_text(dir.file("dist_report.json")) == rep);

    const std::string fig_args = "figures fig1 --resolution 64 --out " + dir.path.string();
    REQUIRE(run_cli(fig_args) == 0);
    const std::string svg = ipd::io::read_text(dir.file("fig1.svg"));
    REQUIRE(run_cli(fig_args) == 0);
    CHECK(ipd::io::read_text(dir.file("fig1.svg")) == svg);
}

TEST_CASE("config files fill in unset flags and lose to explicit ones") {
    TempDir dir("ipd_cli_config");
    write_points(dir.file("x.csv"), {{0}, {1}, {3}});
    ipd::io::atomic_write_text(dir.file("cfg.json"),
                               "{\"statistic\": \"cvm\", \"permutations\": 299, \"seed\": 9,"
                               " \"y\": \"" + dir.file("x.csv") + "\"}\n");

    REQUIRE(run_cli("test --x " + dir.file("x.csv") + " --config " + dir.file("cfg.json") +
                    " --out " + dir.path.string()) == 0);
    auto report = load_report(dir.file("test_report.json"));
    CHECK(report.at("config").at("statistic") == "cvm");
    CHECK(report.at("config").at("permutations") == 299);
    CHECK(report.at("config").at("seed") == 9);
    CHECK(report.at("result").at("statistic_kind") == "CramerVonMises");

    REQUIRE(run_cli("test --x " + dir.file("x.csv") + " --config " + dir.file("cfg.json") +
                    " --statistic sup --out " + dir.path.string()) == 0);
    report = load_report(dir.file("test_report.json"));
    CHECK(report.at("config").at("statistic") == "sup");

    CHECK(run_cli("test --x " + dir.file("x.csv") + " --config " + dir.file("nope.json") +
                  " --out " + dir.path.string()) == 2);
}

TEST_CASE("figures subcommand writes the rasters it reports") {
    TempDir dir("ipd_cli_fig");

    REQUIRE(run_cli("figures fig1 --out " + dir.path.string()) == 0);
    auto report = load_report(dir.file("fig1_report.json"));
    CHECK(report.at("config").at("resolution") == 64);
    for (const auto& f : report.at("files")) CHECK(fs::exists(dir.file(f.get<std::string>())));

    // Spot check the advertised cell values.
    double best = 1e18, phi = 0.0;
    for (const auto& row : ipd::io::read_csv(dir.file("fig1_canberra.csv"))) {
        const double d = (row[0] - 5.0) * (row[0] - 5.0) + (row[1] - 0.05) * (row[1] - 0.05);
        if (d < best) {
            best = d;
            phi = row[2];
        }
    }
    CHECK(phi == doctest::Approx(1.0025).epsilon(0.05));

    REQUIRE(run_cli("figures fig2 --out " + dir.path.string()) == 0);
    report = load_report(dir.file("fig2_report.json"));
    CHECK(report.at("files").size() == 9);
    for (const auto& f : report.at("files")) CHECK(fs::exists(dir.file(f.get<std::string>())));

    auto members = [&](const std::string& name) {
        std::vector<std::pair<double, double>> cells;
        for (const auto& row : ipd::io::read_csv(dir.file(name)))
            if (row[2] == 1.0) cells.push_back({row[0], row[1]});
        std::sort(cells.begin(), cells.end());
        return cells;
    };
    const auto r02 = members("fig2_radius_02.csv");
    const auto r04 = members("fig2_radius_04.csv");
    CHECK(!r02.empty());
    CHECK(std::includes(r04.begin(), r04.end(), r02.begin(), r02.end()));
}

TEST_CASE("bounds subcommand checks both inequalities and fits rates") {
    TempDir dir("ipd_cli_bounds");

    REQUIRE(run_cli("bounds --mode checks --f-mean 0 --f-var 1 --g-mean 1 --g-var 1 "
                    "--t-grid 0.2,0.1 --remainder-n 4000 --seed 11 --out " +
                    dir.path.string()) == 0);
    auto report = load_report(dir.file("bounds_report.json"));
    CHECK(report.at("all_hold") == true);
    REQUIRE(report.at("checks_l2").size() == 2);
    REQUIRE(report.at("checks_delta_k").size() == 2);
    for (const auto& c : report.at("checks_l2")) {
        CHECK(c.at("holds") == true);
        CHECK(c.at("lhs").get<double>() <= c.at("rhs").get<double>());
    }
    CHECK(report.at("config").at("f").at("family") == "diag_gaussian");

    REQUIRE(run_cli("bounds --mode rate --base-mean 5 --base-var 1 "
                    "--ladder 0.4,0.2,0.1,0.05,0.025 --alpha 1 --beta 1 --seed 2 --out " +
                    dir.path.string()) == 0);
    report = load_report(dir.file("bounds_report.json"));
    CHECK(report.at("rate").at("theoretical_exponent").get<double>() == 0.5);
    CHECK(report.at("rate").at("slope").get<double>() > 0.45);
    CHECK(report.at("rate").at("points").size() == 5);

    // Densities may come from the config file instead of flags.
    ipd::io::atomic_write_text(
        dir.file("exp.json"),
        "{\"mode\": \"checks\", \"f\": {\"family\": \"diag_gaussian\", \"mean\": [0], "
        "\"var\": [1]}, \"g\": {\"family\": \"diag_gaussian\", \"mean\": [0.5], "
        "\"var\": [1]}, \"t_grid\": [0.1], \"remainder_n\": 4000}\n");
    REQUIRE(run_cli("bounds --config " + dir.file("exp.json") + " --out " + dir.path.string()) ==
            0);
    report = load_report(dir.file("bounds_report.json"));
    CHECK(report.at("all_hold") == true);
    CHECK(report.at("config").at("g").at("mean")[0].get<double>() == 0.5);

    CHECK(run_cli("bounds --mode rate --base-mean 5 --base-var 1 --out " + dir.path.string()) ==
          1);
}
