#include "ipd/json_io.hpp"

#include <utility>

#include "ipd/errors.hpp"
#include "ipd/io.hpp"

namespace ipd::json_io {

namespace {

double need_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw invalid_parameter(std::string("missing numeric field: ") + key);
    return j[key].get<double>();
}

std::vector<double> need_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw invalid_parameter(std::string("missing array field: ") + key);
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw invalid_parameter(std::string("non-numeric entry in ") + key);
        out.push_back(v.get<double>());
    }
    return out;
}

int spec_dim(const json& j) {
    return static_cast<int>(need_number(j, "dim"));
}

json gamma_to_json(const distances::MonotoneMap& g) {
    using Kind = distances::MonotoneMap::Kind;
    json out;
    switch (g.kind()) {
        case Kind::Identity:
            out["kind"] = "identity";
            break;
        case Kind::Power:
            out["kind"] = "power";
            out["q"] = g.power_exponent();
            break;
        case Kind::Log1p:
            out["kind"] = "log1p";
            break;
        case Kind::TableSpline: {
            out["kind"] = "table_spline";
            json knots = json::array();
            for (const auto& [u, v] : g.knots()) knots.push_back({u, v});
            out["knots"] = std::move(knots);
            break;
        }
    }
    return out;
}

distances::MonotoneMap gamma_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw invalid_parameter("gamma needs a \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "identity") return distances::MonotoneMap::identity();
    if (kind == "power") return distances::MonotoneMap::power(need_number(j, "q"));
    if (kind == "log1p") return distances::MonotoneMap::log1p_map();
    if (kind == "table_spline") {
        if (!j.contains("knots") || !j["knots"].is_array())
            throw invalid_parameter("table_spline needs \"knots\"");
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j["knots"]) {
            if (!k.is_array() || k.size() != 2)
                throw invalid_parameter("each knot must be [u, v]");
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
        }
        return distances::MonotoneMap::table_spline(std::move(knots));
    }
    throw invalid_parameter("unknown gamma kind: " + kind);
}

}  // namespace

json distance_to_json(const distances::DistanceSpec& spec) {
    using namespace distances;
    json out;
    out["family"] = spec.family_name();
    out["dim"] = spec.dim;
    if (const auto* lp = std::get_if<Lp>(&spec.family)) {
        out["p"] = lp->p;
    } else if (const auto* lpp = std::get_if<LpPowP>(&spec.family)) {
        out["p"] = lpp->p;
    } else if (const auto* mt = std::get_if<MonotoneTransform>(&spec.family)) {
        out["base_p"] = mt->base.p;
        out["gamma"] = gamma_to_json(mt->gamma);
    } else if (const auto* sg = std::get_if<SphereGeodesic>(&spec.family)) {
        out["ambient_dim"] = sg->ambient_dim;
    } else if (const auto* osc = std::get_if<OscillatoryTest>(&spec.family)) {
        out["eps"] = osc->eps;
        out["amplitude_scale"] = osc->amplitude_scale;
    }
    return out;
}

distances::DistanceSpec distance_from_json(const json& j) {
    using distances::DistanceSpec;
    if (!j.is_object() || !j.contains("family"))
        throw invalid_parameter("distance needs a \"family\"");
    const std::string family = j["family"].get<std::string>();
    if (family == "lp") return DistanceSpec::lp(need_number(j, "p"), spec_dim(j));
    if (family == "lp_pow_p") return DistanceSpec::lp_pow_p(need_number(j, "p"), spec_dim(j));
    if (family == "canberra") return DistanceSpec::canberra(spec_dim(j));
    if (family == "bray_curtis") return DistanceSpec::bray_curtis(spec_dim(j));
    if (family == "entropic") return DistanceSpec::entropic(spec_dim(j));
    if (family == "monotone_transform")
        return DistanceSpec::monotone_transform(need_number(j, "base_p"),
                                                gamma_from_json(j.value("gamma", json::object())),
                                                spec_dim(j));
    if (family == "sphere_geodesic")
        return DistanceSpec::sphere_geodesic(static_cast<int>(need_number(j, "ambient_dim")));
    if (family == "oscillatory_test")
        return DistanceSpec::oscillatory(need_number(j, "eps"),
                                         need_number(j, "amplitude_scale"), spec_dim(j));
    throw invalid_parameter("unknown distance family: " + family);
}

json density_to_json(const DensitySpec& d) {
    json out;
    out["family"] = d.family_name();
    if (const auto* g = std::get_if<DiagGaussian>(&d.family())) {
        out["mean"] = g->mean;
        out["var"] = g->var;
    } else if (const auto* e = std::get_if<ProductExponential>(&d.family())) {
        out["rates"] = e->rates;
    } else if (const auto* l = std::get_if<ProductLognormal>(&d.family())) {
        out["mu"] = l->mu;
        out["sigma"] = l->sigma;
    } else if (const auto* f = std::get_if<FisherS2>(&d.family())) {
        out["kappa"] = f->kappa;
        out["mu"] = {f->mu[0], f->mu[1], f->mu[2]};
    }
    return out;
}

DensitySpec density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw invalid_parameter("density needs a \"family\"");
    const std::string family = j["family"].get<std::string>();
    if (family == "diag_gaussian")
        return DensitySpec::diag_gaussian(need_array(j, "mean"), need_array(j, "var"));
    if (family == "product_exponential")
        return DensitySpec::product_exponential(need_array(j, "rates"));
    if (family == "product_lognormal")
        return DensitySpec::product_lognormal(need_array(j, "mu"), need_array(j, "sigma"));
    if (family == "fisher_s2") {
        std::array<double, 3> mu{0, 0, 1};
        if (j.contains("mu")) {
            auto v = need_array(j, "mu");
            if (v.size() != 3) throw invalid_parameter("fisher_s2 mu must have 3 entries");
            mu = {v[0], v[1], v[2]};
        }
        return DensitySpec::fisher_s2(need_number(j, "kappa"), mu);
    }
    throw invalid_parameter("unknown density family: " + family);
}

json to_json(const ballgeom::VolumeEstimate& v) {
    return json{{"value", v.value},
                {"stderr", v.stderr_},
                {"n_samples", v.n_samples},
                {"box_volume", v.box_volume},
                {"seed", v.seed}};
}

json to_json(const ballgeom::VolumeBounds& v) {
    return json{{"lower", v.lower}, {"upper", v.upper}, {"source", v.source}};
}

json to_json(const ballgeom::RegularityReport& r) {
    json out{{"t_grid", r.t_grid},
             {"phi_x", r.phi_x},
             {"phi_y", r.phi_y},
             {"delta_t", r.delta_t_values},
             {"c_hat", r.c_hat},
             {"C_hat", r.C_hat},
             {"verdict", ballgeom::verdict_name(r.verdict)}};
    if (r.delta_limit)
        out["delta_limit"] = *r.delta_limit;
    else
        out["delta_limit"] = nullptr;
    return out;
}

json to_json(const ballgeom::AhlforsFit& f) {
    return json{{"alpha_hat", f.alpha_hat},
                {"intercept", f.intercept},
                {"r_squared", f.r_squared},
                {"t_grid", f.t_grid}};
}

json to_json(const empirics::EcdfTriple& t) {
    return json{{"grid", t.grid}, {"f_xx", t.f_xx}, {"f_yy", t.f_yy}, {"f_xy", t.f_xy}};
}

json to_json(const empirics::DiscrepancyReport& d) {
    return json{{"t_grid", d.t_grid}, {"delta_k", d.delta_k}, {"delta_k_inf", d.delta_k_inf}};
}

json to_json(const empirics::TestResult& r) {
    return json{{"statistic", r.statistic},
                {"p_value", r.p_value},
                {"n_permutations", r.n_permutations},
                {"statistic_kind", empirics::statistic_name(r.statistic_kind)}};
}

json to_json(const bounds::L2Report& r) {
    return json{{"value", r.value},
                {"quadrature_error", r.quadrature_error},
                {"truncation_tail", r.truncation_tail}};
}

json to_json(const bounds::McEstimate& e) {
    return json{{"value", e.value}, {"stderr", e.stderr_}};
}

json to_json(const bounds::DeltaKEstimate& e) {
    return json{{"value", e.value}, {"mc_error", e.mc_error}};
}

json to_json(const bounds::BoundCheck& c) {
    return json{{"lhs", c.lhs},
                {"rhs", c.rhs},
                {"holds", c.holds},
                {"slack", c.slack},
                {"t", c.t},
                {"xi", c.xi},
                {"scale_constant", c.scale_constant},
                {"delta_constant", c.delta_constant},
                {"tolerance", c.tolerance}};
}

json to_json(const bounds::RateFit& f) {
    json points = json::array();
    for (const auto& p : f.points)
        points.push_back(
            {{"shift", p.shift}, {"log_delta_k", p.log_delta_k}, {"log_l2", p.log_l2}});
    return json{{"slope", f.slope},
                {"intercept", f.intercept},
                {"points", std::move(points)},
                {"theoretical_exponent", f.theoretical_exponent},
                {"c_hat", f.c_hat}};
}

void write_report(const std::string& path, json report) {
    report["schema"] = 1;
    io::atomic_write_text(path, report.dump(2) + "\n");
}

json parse(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw io_failure("malformed JSON in " + what);
    return j;
}

}  // namespace ipd::json_io
