// Command line front end. Subcommands map onto the library modules; every
// JSON report embeds the fully resolved configuration, so a rerun with the
// same arguments produces byte-identical files.
//
// Exit codes: 0 success, 1 usage, 2 domain or data, 3 numerical.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipd/ballgeom.hpp"
#include "ipd/bounds.hpp"
#include "ipd/density.hpp"
#include "ipd/distances.hpp"
#include "ipd/empirics.hpp"
#include "ipd/errors.hpp"
#include "ipd/figures.hpp"
#include "ipd/io.hpp"
#include "ipd/json_io.hpp"

namespace {

using ipd::json_io::json;

int exit_code_for(const ipd::error& e) {
    if (dynamic_cast<const ipd::invalid_parameter*>(&e) ||
        dynamic_cast<const ipd::invalid_radius*>(&e) ||
        dynamic_cast<const ipd::unsupported_family*>(&e) ||
        dynamic_cast<const ipd::precondition_violation*>(&e))
        return 1;
    if (dynamic_cast<const ipd::domain_violation*>(&e) ||
        dynamic_cast<const ipd::dimension_mismatch*>(&e) ||
        dynamic_cast<const ipd::io_failure*>(&e) ||
        dynamic_cast<const ipd::out_of_scale*>(&e))
        return 2;
    return 3;
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out = ".";
    std::string config_path;
    json cfg = json::object();
};

// Config file values fill in options that were not passed on the command
// line; explicit flags always win.
template <typename T>
void cfg_fill(const json& cfg, const CLI::Option* opt, const char* key, T* value) {
    if (opt != nullptr && opt->count() > 0) return;
    if (!cfg.contains(key)) return;
    try {
        *value = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ipd::invalid_parameter(std::string("config field has wrong type: ") + key);
    }
}

struct DistanceFlags {
    std::string name = "lp";
    double p = 2.0;
    int dim = 0;  // 0 = take from the data
    double eps = 0.25;
    double amplitude_scale = 0.5;
    int ambient_dim = 3;
    std::string gamma = "identity";
    double gamma_q = 2.0;

    CLI::Option* name_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* dim_opt = nullptr;
    CLI::Option* eps_opt = nullptr;
    CLI::Option* amp_opt = nullptr;
    CLI::Option* ambient_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* gamma_q_opt = nullptr;
};

void add_distance_flags(CLI::App* sub, DistanceFlags* f) {
    f->name_opt = sub->add_option("--distance", f->name,
                                  "Family: lp, lp_pow_p, canberra, bray_curtis, entropic, "
                                  "monotone_transform, sphere_geodesic, oscillatory_test");
    f->p_opt = sub->add_option("--p", f->p, "Exponent for lp, lp_pow_p and monotone bases");
    f->dim_opt = sub->add_option("--dim", f->dim, "Point dimension (default: from the data)");
    f->eps_opt = sub->add_option("--eps", f->eps, "Oscillation strength for oscillatory_test");
    f->amp_opt = sub->add_option("--amplitude-scale", f->amplitude_scale,
                                 "Amplitude scale for oscillatory_test");
    f->ambient_opt =
        sub->add_option("--ambient-dim", f->ambient_dim, "Ambient dimension for sphere_geodesic");
    f->gamma_opt =
        sub->add_option("--gamma", f->gamma, "Monotone map: identity, power, log1p");
    f->gamma_q_opt = sub->add_option("--gamma-q", f->gamma_q, "Exponent for --gamma power");
}

ipd::distances::DistanceSpec resolve_distance(const DistanceFlags& f, const json& cfg,
                                              int data_dim) {
    using ipd::distances::DistanceSpec;
    // A full distance object in the config wins unless --distance was given.
    if (cfg.contains("distance") && (f.name_opt == nullptr || f.name_opt->count() == 0))
        return ipd::json_io::distance_from_json(cfg.at("distance"));

    DistanceFlags r = f;
    cfg_fill(cfg, f.name_opt, "family", &r.name);
    cfg_fill(cfg, f.p_opt, "p", &r.p);
    cfg_fill(cfg, f.dim_opt, "dim", &r.dim);
    cfg_fill(cfg, f.eps_opt, "eps", &r.eps);
    cfg_fill(cfg, f.amp_opt, "amplitude_scale", &r.amplitude_scale);
    cfg_fill(cfg, f.ambient_opt, "ambient_dim", &r.ambient_dim);
    cfg_fill(cfg, f.gamma_opt, "gamma", &r.gamma);
    cfg_fill(cfg, f.gamma_q_opt, "gamma_q", &r.gamma_q);

    const int dim = r.dim > 0 ? r.dim : data_dim;
    if (dim <= 0) throw ipd::invalid_parameter("cannot infer --dim; pass it explicitly");

    if (r.name == "lp") return DistanceSpec::lp(r.p, dim);
    if (r.name == "lp_pow_p") return DistanceSpec::lp_pow_p(r.p, dim);
    if (r.name == "canberra") return DistanceSpec::canberra(dim);
    if (r.name == "bray_curtis") return DistanceSpec::bray_curtis(dim);
    if (r.name == "entropic") return DistanceSpec::entropic(dim);
    if (r.name == "monotone_transform") {
        ipd::distances::MonotoneMap gamma = ipd::distances::MonotoneMap::identity();
        if (r.gamma == "power")
            gamma = ipd::distances::MonotoneMap::power(r.gamma_q);
        else if (r.gamma == "log1p")
            gamma = ipd::distances::MonotoneMap::log1p_map();
        else if (r.gamma != "identity")
            throw ipd::invalid_parameter("unknown --gamma: " + r.gamma);
        return DistanceSpec::monotone_transform(r.p, gamma, dim);
    }
    if (r.name == "sphere_geodesic") {
        const int ambient = f.ambient_opt->count() > 0 || cfg.contains("ambient_dim")
                                ? r.ambient_dim
                                : (data_dim > 0 ? data_dim : r.ambient_dim);
        return DistanceSpec::sphere_geodesic(ambient);
    }
    if (r.name == "oscillatory_test")
        return DistanceSpec::oscillatory(r.eps, r.amplitude_scale, dim);
    throw ipd::invalid_parameter("unknown distance family: " + r.name);
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    return (std::filesystem::path(g.out) / name).string();
}

json global_config(const GlobalOpts& g, const std::string& command) {
    return json{{"command", command}, {"seed", g.seed}, {"threads", g.threads}, {"out", g.out}};
}

ipd::distances::Point make_point(std::vector<double> coords,
                                 const ipd::distances::DistanceSpec& spec) {
    return ipd::distances::Point(std::move(coords), spec.required_domain());
}

ipd::DensitySpec density_from(const json& cfg, const char* key, const CLI::Option* mean_opt,
                              const std::vector<double>& mean, const std::vector<double>& var,
                              const char* what) {
    if (cfg.contains(key)) return ipd::json_io::density_from_json(cfg.at(key));
    if (mean_opt != nullptr && mean_opt->count() > 0) {
        std::vector<double> v = var;
        if (v.empty()) v.assign(mean.size(), 1.0);
        return ipd::DensitySpec::diag_gaussian(mean, v);
    }
    throw ipd::invalid_parameter(std::string("missing density: ") + what);
}

// ---- dist ----------------------------------------------------------------

struct DistArgs {
    std::string x_path, y_path, domain = "euclidean";
    DistanceFlags dist;
    CLI::Option *x_opt = nullptr, *y_opt = nullptr, *domain_opt = nullptr;
};

int run_dist(const GlobalOpts& g, const DistArgs& a) {
    std::string x_path = a.x_path, y_path = a.y_path, domain = a.domain;
    cfg_fill(g.cfg, a.x_opt, "x", &x_path);
    cfg_fill(g.cfg, a.y_opt, "y", &y_path);
    cfg_fill(g.cfg, a.domain_opt, "domain", &domain);
    if (x_path.empty()) throw ipd::invalid_parameter("dist needs --x");

    const auto dom = ipd::io::parse_domain(domain);
    const auto X = ipd::io::read_sample(x_path, dom);
    const auto spec = resolve_distance(a.dist, g.cfg, X.k);

    json config = global_config(g, "dist");
    config["x"] = x_path;
    config["y"] = y_path.empty() ? json(nullptr) : json(y_path);
    config["domain"] = domain;
    config["distance"] = ipd::json_io::distance_to_json(spec);

    const auto d_xx = ipd::empirics::pairwise_distances(spec, X);
    ipd::io::write_value_csv(out_path(g, "dist_xx.csv"), "distance", d_xx);
    json files = json::array({"dist_xx.csv"});
    json counts{{"n_x", X.n}, {"pairs_xx", d_xx.size()}};

    if (!y_path.empty()) {
        const auto Y = ipd::io::read_sample(y_path, dom);
        const auto d_yy = ipd::empirics::pairwise_distances(spec, Y);
        const auto d_xy = ipd::empirics::pairwise_distances(spec, X, &Y);
        ipd::io::write_value_csv(out_path(g, "dist_yy.csv"), "distance", d_yy);
        ipd::io::write_value_csv(out_path(g, "dist_xy.csv"), "distance", d_xy);
        files.push_back("dist_yy.csv");
        files.push_back("dist_xy.csv");
        counts["n_y"] = Y.n;
        counts["pairs_yy"] = d_yy.size();
        counts["pairs_xy"] = d_xy.size();
    }

    ipd::json_io::write_report(out_path(g, "dist_report.json"),
                               json{{"config", config}, {"counts", counts}, {"files", files}});
    return 0;
}

// ---- volume ---------------------------------------------------------------

struct VolumeArgs {
    std::vector<double> center;
    double t = 0.0;
    std::string method = "exact";
    long long mc_n = 1000000;
    DistanceFlags dist;
    CLI::Option *center_opt = nullptr, *t_opt = nullptr, *method_opt = nullptr,
                *mc_n_opt = nullptr;
};

int run_volume(const GlobalOpts& g, const VolumeArgs& a) {
    std::vector<double> center = a.center;
    double t = a.t;
    std::string method = a.method;
    long long mc_n = a.mc_n;
    cfg_fill(g.cfg, a.center_opt, "center", &center);
    cfg_fill(g.cfg, a.t_opt, "t", &t);
    cfg_fill(g.cfg, a.method_opt, "method", &method);
    cfg_fill(g.cfg, a.mc_n_opt, "mc_n", &mc_n);
    if (center.empty()) throw ipd::invalid_parameter("volume needs --center");
    if (!std::isfinite(t)) throw ipd::invalid_parameter("volume needs a finite --t");

    const auto spec = resolve_distance(a.dist, g.cfg, static_cast<int>(center.size()));
    const auto x = make_point(center, spec);

    json config = global_config(g, "volume");
    config["center"] = center;
    config["t"] = t;
    config["method"] = method;
    config["mc_n"] = mc_n;
    config["distance"] = ipd::json_io::distance_to_json(spec);

    json report{{"config", config}};
    if (method == "exact") {
        const auto v = ipd::ballgeom::volume_exact(spec, x, t);
        if (!v)
            throw ipd::unsupported_family("no closed-form volume for " + spec.family_name());
        report["value"] = *v;
    } else if (method == "mc") {
        report["estimate"] =
            ipd::json_io::to_json(ipd::ballgeom::volume_mc(spec, x, t, mc_n, g.seed, g.threads));
    } else if (method == "bounds") {
        report["bounds"] = ipd::json_io::to_json(ipd::ballgeom::volume_bounds(spec, x, t));
    } else {
        throw ipd::invalid_parameter("unknown --method: " + method);
    }
    ipd::json_io::write_report(out_path(g, "volume_report.json"), std::move(report));
    return 0;
}

// ---- regularity -----------------------------------------------------------

struct RegularityArgs {
    std::vector<double> x, y, t_grid;
    double t_max = 0.4;
    int t_count = 8;
    long long mc_n = 100000;
    DistanceFlags dist;
    CLI::Option *x_opt = nullptr, *y_opt = nullptr, *grid_opt = nullptr, *t_max_opt = nullptr,
                *t_count_opt = nullptr, *mc_n_opt = nullptr;
};

int run_regularity(const GlobalOpts& g, const RegularityArgs& a) {
    std::vector<double> xc = a.x, yc = a.y, t_grid = a.t_grid;
    double t_max = a.t_max;
    int t_count = a.t_count;
    long long mc_n = a.mc_n;
    cfg_fill(g.cfg, a.x_opt, "x", &xc);
    cfg_fill(g.cfg, a.y_opt, "y", &yc);
    cfg_fill(g.cfg, a.grid_opt, "t_grid", &t_grid);
    cfg_fill(g.cfg, a.t_max_opt, "t_max", &t_max);
    cfg_fill(g.cfg, a.t_count_opt, "t_count", &t_count);
    cfg_fill(g.cfg, a.mc_n_opt, "mc_n", &mc_n);
    if (xc.empty() || yc.empty()) throw ipd::invalid_parameter("regularity needs --x and --y");
    if (t_grid.empty()) t_grid = ipd::ballgeom::dyadic_grid(t_max, t_count);

    const auto spec = resolve_distance(a.dist, g.cfg, static_cast<int>(xc.size()));
    const auto x = make_point(xc, spec);
    const auto y = make_point(yc, spec);

    ipd::ballgeom::RegularityOptions opts;
    opts.t_grid = t_grid;
    opts.mc_n = mc_n;
    opts.seed = g.seed;
    opts.threads = g.threads;
    const auto report = ipd::ballgeom::check_volume_regularity(spec, x, y, opts);
    const auto fit = ipd::ballgeom::estimate_ahlfors_alpha(spec, x, t_grid, mc_n, g.seed,
                                                           g.threads);

    json config = global_config(g, "regularity");
    config["x"] = xc;
    config["y"] = yc;
    config["t_grid"] = t_grid;
    config["mc_n"] = mc_n;
    config["distance"] = ipd::json_io::distance_to_json(spec);

    ipd::json_io::write_report(out_path(g, "regularity_report.json"),
                               json{{"config", config},
                                    {"regularity", ipd::json_io::to_json(report)},
                                    {"ahlfors", ipd::json_io::to_json(fit)}});
    return 0;
}

// ---- ecdf -----------------------------------------------------------------

struct EcdfArgs {
    std::string x_path, y_path, domain = "euclidean";
    std::vector<double> grid;
    DistanceFlags dist;
    CLI::Option *x_opt = nullptr, *y_opt = nullptr, *domain_opt = nullptr, *grid_opt = nullptr;
};

int run_ecdf(const GlobalOpts& g, const EcdfArgs& a) {
    std::string x_path = a.x_path, y_path = a.y_path, domain = a.domain;
    std::vector<double> grid = a.grid;
    cfg_fill(g.cfg, a.x_opt, "x", &x_path);
    cfg_fill(g.cfg, a.y_opt, "y", &y_path);
    cfg_fill(g.cfg, a.domain_opt, "domain", &domain);
    cfg_fill(g.cfg, a.grid_opt, "grid", &grid);
    if (x_path.empty() || y_path.empty()) throw ipd::invalid_parameter("ecdf needs --x and --y");

    const auto dom = ipd::io::parse_domain(domain);
    const auto X = ipd::io::read_sample(x_path, dom);
    const auto Y = ipd::io::read_sample(y_path, dom);
    const auto spec = resolve_distance(a.dist, g.cfg, X.k);

    const auto triple = ipd::empirics::ecdf_triple(spec, X, Y, grid);
    const auto disc = ipd::empirics::kolmogorov_discrepancy(triple);

    json config = global_config(g, "ecdf");
    config["x"] = x_path;
    config["y"] = y_path;
    config["domain"] = domain;
    config["grid"] = grid;
    config["distance"] = ipd::json_io::distance_to_json(spec);

    ipd::json_io::write_report(out_path(g, "ecdf_report.json"),
                               json{{"config", config},
                                    {"ecdf", ipd::json_io::to_json(triple)},
                                    {"discrepancy", ipd::json_io::to_json(disc)}});
    return 0;
}

// ---- test -----------------------------------------------------------------

struct TestArgs {
    std::string x_path, y_path, domain = "euclidean", statistic = "sup";
    int permutations = 999;
    DistanceFlags dist;
    CLI::Option *x_opt = nullptr, *y_opt = nullptr, *domain_opt = nullptr, *stat_opt = nullptr,
                *perm_opt = nullptr;
};

int run_test(const GlobalOpts& g, const TestArgs& a) {
    std::string x_path = a.x_path, y_path = a.y_path, domain = a.domain, statistic = a.statistic;
    int permutations = a.permutations;
    cfg_fill(g.cfg, a.x_opt, "x", &x_path);
    cfg_fill(g.cfg, a.y_opt, "y", &y_path);
    cfg_fill(g.cfg, a.domain_opt, "domain", &domain);
    cfg_fill(g.cfg, a.stat_opt, "statistic", &statistic);
    cfg_fill(g.cfg, a.perm_opt, "permutations", &permutations);
    if (x_path.empty() || y_path.empty()) throw ipd::invalid_parameter("test needs --x and --y");

    ipd::empirics::StatisticKind kind;
    if (statistic == "sup")
        kind = ipd::empirics::StatisticKind::SupDeltaK;
    else if (statistic == "cvm")
        kind = ipd::empirics::StatisticKind::CramerVonMises;
    else
        throw ipd::invalid_parameter("unknown --statistic: " + statistic);

    const auto dom = ipd::io::parse_domain(domain);
    const auto X = ipd::io::read_sample(x_path, dom);
    const auto Y = ipd::io::read_sample(y_path, dom);
    const auto spec = resolve_distance(a.dist, g.cfg, X.k);

    const auto result =
        ipd::empirics::permutation_test(spec, X, Y, kind, permutations, g.seed, g.threads);

    json config = global_config(g, "test");
    config["x"] = x_path;
    config["y"] = y_path;
    config["domain"] = domain;
    config["statistic"] = statistic;
    config["permutations"] = permutations;
    config["distance"] = ipd::json_io::distance_to_json(spec);

    ipd::json_io::write_report(out_path(g, "test_report.json"),
                               json{{"config", config},
                                    {"result", ipd::json_io::to_json(result)}});
    return 0;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
    std::string mode = "checks";
    std::vector<double> f_mean, f_var, g_mean, g_var, base_mean, base_var;
    std::vector<double> t_grid{0.4, 0.2, 0.1, 0.05};
    std::vector<double> xi, ladder;
    double c = 1.0, delta_star = 1.0, big_c = 1.0, delta_sup = 1.0;
    double alpha = 1.0, beta = 1.0;
    std::int64_t remainder_n = 20000, mc_pairs = 1000000;
    DistanceFlags dist;
    CLI::Option *mode_opt = nullptr, *f_mean_opt = nullptr, *f_var_opt = nullptr,
                *g_mean_opt = nullptr, *g_var_opt = nullptr, *base_mean_opt = nullptr,
                *base_var_opt = nullptr, *grid_opt = nullptr, *xi_opt = nullptr,
                *ladder_opt = nullptr, *c_opt = nullptr, *delta_star_opt = nullptr,
                *big_c_opt = nullptr, *delta_sup_opt = nullptr, *alpha_opt = nullptr,
                *beta_opt = nullptr, *remainder_opt = nullptr, *mc_pairs_opt = nullptr;
};

int run_bounds(const GlobalOpts& g, const BoundsArgs& a) {
    BoundsArgs r = a;
    cfg_fill(g.cfg, a.mode_opt, "mode", &r.mode);
    cfg_fill(g.cfg, a.grid_opt, "t_grid", &r.t_grid);
    cfg_fill(g.cfg, a.xi_opt, "xi", &r.xi);
    cfg_fill(g.cfg, a.ladder_opt, "ladder", &r.ladder);
    cfg_fill(g.cfg, a.c_opt, "c", &r.c);
    cfg_fill(g.cfg, a.delta_star_opt, "delta_star", &r.delta_star);
    cfg_fill(g.cfg, a.big_c_opt, "big_c", &r.big_c);
    cfg_fill(g.cfg, a.delta_sup_opt, "delta_sup", &r.delta_sup);
    cfg_fill(g.cfg, a.alpha_opt, "alpha", &r.alpha);
    cfg_fill(g.cfg, a.beta_opt, "beta", &r.beta);
    cfg_fill(g.cfg, a.remainder_opt, "remainder_n", &r.remainder_n);
    cfg_fill(g.cfg, a.mc_pairs_opt, "mc_pairs", &r.mc_pairs);

    if (r.mode == "rate") {
        const auto base =
            density_from(g.cfg, "base", a.base_mean_opt, r.base_mean, r.base_var, "base");
        if (r.ladder.empty()) throw ipd::invalid_parameter("rate mode needs --ladder");
        const auto spec = resolve_distance(a.dist, g.cfg, base.dim());
        const auto fit =
            ipd::bounds::rate_experiment(spec, base, r.ladder, r.alpha, r.beta, g.seed);

        json config = global_config(g, "bounds");
        config["mode"] = r.mode;
        config["base"] = ipd::json_io::density_to_json(base);
        config["ladder"] = r.ladder;
        config["alpha"] = r.alpha;
        config["beta"] = r.beta;
        config["distance"] = ipd::json_io::distance_to_json(spec);
        ipd::json_io::write_report(out_path(g, "bounds_report.json"),
                                   json{{"config", config},
                                        {"rate", ipd::json_io::to_json(fit)}});
        return 0;
    }
    if (r.mode != "checks") throw ipd::invalid_parameter("unknown --mode: " + r.mode);

    const auto f = density_from(g.cfg, "f", a.f_mean_opt, r.f_mean, r.f_var, "f");
    const auto gd = density_from(g.cfg, "g", a.g_mean_opt, r.g_mean, r.g_var, "g");
    const auto spec = resolve_distance(a.dist, g.cfg, f.dim());
    const auto xi = r.xi.empty() ? ipd::bounds::default_xi(spec)
                                 : make_point(r.xi, spec);

    json config = global_config(g, "bounds");
    config["mode"] = r.mode;
    config["f"] = ipd::json_io::density_to_json(f);
    config["g"] = ipd::json_io::density_to_json(gd);
    config["t_grid"] = r.t_grid;
    config["xi"] = xi.coords;
    config["c"] = r.c;
    config["delta_star"] = r.delta_star;
    config["big_c"] = r.big_c;
    config["delta_sup"] = r.delta_sup;
    config["remainder_n"] = r.remainder_n;
    config["distance"] = ipd::json_io::distance_to_json(spec);

    json l2_checks = json::array();
    json dk_checks = json::array();
    bool all_hold = true;
    for (double t : r.t_grid) {
        const auto c1 = ipd::bounds::check_ineq_l2(spec, f, gd, xi, t, r.c, r.delta_star,
                                                   g.seed, r.remainder_n);
        const auto c2 = ipd::bounds::check_ineq_delta_k(spec, f, gd, xi, t, r.big_c,
                                                        r.delta_sup, g.seed);
        all_hold = all_hold && c1.holds && c2.holds;
        l2_checks.push_back(ipd::json_io::to_json(c1));
        dk_checks.push_back(ipd::json_io::to_json(c2));
    }
    ipd::json_io::write_report(out_path(g, "bounds_report.json"),
                               json{{"config", config},
                                    {"checks_l2", l2_checks},
                                    {"checks_delta_k", dk_checks},
                                    {"all_hold", all_hold}});
    return 0;
}

// ---- figures ---------------------------------------------------------------

struct FiguresArgs {
    std::string which;
    int resolution = 64;
    CLI::Option *which_opt = nullptr, *resolution_opt = nullptr;
};

int run_figures(const GlobalOpts& g, const FiguresArgs& a) {
    std::string which = a.which;
    int resolution = a.resolution;
    cfg_fill(g.cfg, a.which_opt, "which", &which);
    cfg_fill(g.cfg, a.resolution_opt, "resolution", &resolution);

    std::vector<std::string> paths;
    if (which == "fig1")
        paths = ipd::figures::fig1(g.out, resolution);
    else if (which == "fig2")
        paths = ipd::figures::fig2(g.out, resolution);
    else
        throw ipd::invalid_parameter("unknown figure: " + which + " (expected fig1 or fig2)");

    json config = global_config(g, "figures");
    config["which"] = which;
    config["resolution"] = resolution;
    json files = json::array();
    for (const auto& p : paths) files.push_back(std::filesystem::path(p).filename().string());
    ipd::json_io::write_report(out_path(g, which + "_report.json"),
                               json{{"config", config}, {"files", files}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpoint distance distributions under generalized distances"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed (default 0)");
    app.add_option("--threads", g.threads, "Worker threads (default 1)");
    app.add_option("--out", g.out, "Output directory (default .)");
    app.add_option("--config", g.config_path, "JSON file with defaults for unset flags");

    DistArgs dist_args;
    auto* dist = app.add_subcommand("dist", "Sorted within and between distance vectors");
    dist->fallthrough();
    dist_args.x_opt = dist->add_option("--x", dist_args.x_path, "CSV of points, one per row");
    dist_args.y_opt = dist->add_option("--y", dist_args.y_path, "Second CSV (optional)");
    dist_args.domain_opt =
        dist->add_option("--domain", dist_args.domain, "euclidean, positive, sphere");
    add_distance_flags(dist, &dist_args.dist);

    VolumeArgs volume_args;
    auto* volume = app.add_subcommand("volume", "Ball volume at a center and radius");
    volume->fallthrough();
    volume_args.center_opt =
        volume->add_option("--center", volume_args.center, "Center coordinates")->delimiter(',');
    volume_args.t_opt = volume->add_option("--t", volume_args.t, "Radius");
    volume_args.method_opt =
        volume->add_option("--method", volume_args.method, "exact, mc, bounds");
    volume_args.mc_n_opt = volume->add_option("--mc-n", volume_args.mc_n, "MC sample count");
    add_distance_flags(volume, &volume_args.dist);

    RegularityArgs reg_args;
    auto* regularity =
        app.add_subcommand("regularity", "Volume-regularity diagnostics and Ahlfors fit");
    regularity->fallthrough();
    reg_args.x_opt = regularity->add_option("--x", reg_args.x, "First center")->delimiter(',');
    reg_args.y_opt = regularity->add_option("--y", reg_args.y, "Second center")->delimiter(',');
    reg_args.grid_opt =
        regularity->add_option("--t-grid", reg_args.t_grid, "Explicit radius grid")
            ->delimiter(',');
    reg_args.t_max_opt =
        regularity->add_option("--t-max", reg_args.t_max, "Top of the dyadic grid");
    reg_args.t_count_opt =
        regularity->add_option("--t-count", reg_args.t_count, "Dyadic grid length");
    reg_args.mc_n_opt = regularity->add_option("--mc-n", reg_args.mc_n, "MC samples per radius");
    add_distance_flags(regularity, &reg_args.dist);

    EcdfArgs ecdf_args;
    auto* ecdf = app.add_subcommand("ecdf", "Distance ECDF triple and discrepancy curve");
    ecdf->fallthrough();
    ecdf_args.x_opt = ecdf->add_option("--x", ecdf_args.x_path, "CSV of points");
    ecdf_args.y_opt = ecdf->add_option("--y", ecdf_args.y_path, "CSV of points");
    ecdf_args.domain_opt =
        ecdf->add_option("--domain", ecdf_args.domain, "euclidean, positive, sphere");
    ecdf_args.grid_opt =
        ecdf->add_option("--grid", ecdf_args.grid, "Explicit evaluation grid")->delimiter(',');
    add_distance_flags(ecdf, &ecdf_args.dist);

    TestArgs test_args;
    auto* test = app.add_subcommand("test", "Permutation two-sample test");
    test->fallthrough();
    test_args.x_opt = test->add_option("--x", test_args.x_path, "CSV of points");
    test_args.y_opt = test->add_option("--y", test_args.y_path, "CSV of points");
    test_args.domain_opt =
        test->add_option("--domain", test_args.domain, "euclidean, positive, sphere");
    test_args.stat_opt =
        test->add_option("--statistic", test_args.statistic, "sup or cvm");
    test_args.perm_opt =
        test->add_option("--permutations", test_args.permutations, "Permutation count B");
    add_distance_flags(test, &test_args.dist);

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "Population bound checks and rate ladders");
    bounds->fallthrough();
    bounds_args.mode_opt = bounds->add_option("--mode", bounds_args.mode, "checks or rate");
    bounds_args.f_mean_opt =
        bounds->add_option("--f-mean", bounds_args.f_mean, "Gaussian f mean")->delimiter(',');
    bounds_args.f_var_opt =
        bounds->add_option("--f-var", bounds_args.f_var, "Gaussian f variances")->delimiter(',');
    bounds_args.g_mean_opt =
        bounds->add_option("--g-mean", bounds_args.g_mean, "Gaussian g mean")->delimiter(',');
    bounds_args.g_var_opt =
        bounds->add_option("--g-var", bounds_args.g_var, "Gaussian g variances")->delimiter(',');
    bounds_args.base_mean_opt =
        bounds->add_option("--base-mean", bounds_args.base_mean, "Rate-mode base mean")
            ->delimiter(',');
    bounds_args.base_var_opt =
        bounds->add_option("--base-var", bounds_args.base_var, "Rate-mode base variances")
            ->delimiter(',');
    bounds_args.grid_opt =
        bounds->add_option("--t-grid", bounds_args.t_grid, "Radii for the checks")
            ->delimiter(',');
    bounds_args.xi_opt =
        bounds->add_option("--xi", bounds_args.xi, "Reference point")->delimiter(',');
    bounds_args.ladder_opt =
        bounds->add_option("--ladder", bounds_args.ladder, "Decreasing shifts for rate mode")
            ->delimiter(',');
    bounds_args.c_opt = bounds->add_option("--c", bounds_args.c, "Scale constant c");
    bounds_args.delta_star_opt =
        bounds->add_option("--delta-star", bounds_args.delta_star, "Lower volume ratio");
    bounds_args.big_c_opt = bounds->add_option("--big-c", bounds_args.big_c, "Scale constant C");
    bounds_args.delta_sup_opt =
        bounds->add_option("--delta-sup", bounds_args.delta_sup, "Upper volume ratio");
    bounds_args.alpha_opt = bounds->add_option("--alpha", bounds_args.alpha, "Volume exponent");
    bounds_args.beta_opt = bounds->add_option("--beta", bounds_args.beta, "Smoothness order");
    bounds_args.remainder_opt =
        bounds->add_option("--remainder-n", bounds_args.remainder_n, "Remainder MC draws");
    bounds_args.mc_pairs_opt =
        bounds->add_option("--mc-pairs", bounds_args.mc_pairs, "MC pairs for discrepancies");
    add_distance_flags(bounds, &bounds_args.dist);

    FiguresArgs fig_args;
    auto* figures = app.add_subcommand("figures", "Figure rasters as CSV plus SVG");
    figures->fallthrough();
    fig_args.which_opt =
        figures->add_option("which", fig_args.which, "fig1 or fig2");
    fig_args.resolution_opt =
        figures->add_option("--resolution", fig_args.resolution, "Raster cells per axis (>= 64)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!g.config_path.empty())
            g.cfg = ipd::json_io::parse(ipd::io::read_text(g.config_path), g.config_path);
        if (!g.cfg.is_object()) throw ipd::invalid_parameter("config must be a JSON object");
        cfg_fill(g.cfg, app.get_option("--seed"), "seed", &g.seed);
        cfg_fill(g.cfg, app.get_option("--threads"), "threads", &g.threads);
        cfg_fill(g.cfg, app.get_option("--out"), "out", &g.out);
        if (g.threads < 1) throw ipd::invalid_parameter("--threads must be >= 1");

        if (dist->parsed()) return run_dist(g, dist_args);
        if (volume->parsed()) return run_volume(g, volume_args);
        if (regularity->parsed()) return run_regularity(g, reg_args);
        if (ecdf->parsed()) return run_ecdf(g, ecdf_args);
        if (test->parsed()) return run_test(g, test_args);
        if (bounds->parsed()) return run_bounds(g, bounds_args);
        if (figures->parsed()) return run_figures(g, fig_args);
        throw ipd::invalid_parameter("no subcommand given");
    } catch (const ipd::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
