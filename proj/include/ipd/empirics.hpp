#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ipd/density.hpp"
#include "ipd/distances.hpp"

namespace ipd::empirics {

using distances::DistanceSpec;
using distances::Domain;

struct Sample {
    std::vector<double> data;  // row-major n x k
    int n = 0;
    int k = 0;
    Domain domain = Domain::Euclidean;
    std::string label;

    std::span<const double> row(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(k),
                static_cast<std::size_t>(k)};
    }
};

// True when data tagged `declared` may be fed to a family requiring
// `required` (Euclidean accepts everything, the others only themselves).
bool domain_compatible(Domain declared, Domain required);

// Densities double as samplers.
using SamplerSpec = DensitySpec;

Sample generate(const SamplerSpec& dist, int n, std::uint64_t seed);

// Within-sample distances when b is null (both orderings for asymmetric h,
// unordered pairs otherwise), all n*m ordered cross distances when b is
// given. Sorted ascending.
std::vector<double> pairwise_distances(const DistanceSpec& spec, const Sample& a,
                                       const Sample* b = nullptr);

struct EcdfTriple {
    std::vector<double> grid;  // strictly increasing
    std::vector<double> f_xx;
    std::vector<double> f_yy;
    std::vector<double> f_xy;
};

// F(t) = (#distances < t) / #pairs on the grid; the default grid is the
// union of observed distances, midpoints between neighbours, and one point
// beyond the maximum, thinned to at most 4096 points.
EcdfTriple ecdf_triple(const DistanceSpec& spec, const Sample& x, const Sample& y,
                       const std::vector<double>& grid = {});

struct DiscrepancyReport {
    std::vector<double> t_grid;
    std::vector<double> delta_k;  // nondecreasing, in [0, 2]
    double delta_k_inf = 0.0;
};

DiscrepancyReport kolmogorov_discrepancy(const EcdfTriple& triple);

// Law of |X - Y| for independent X ~ N(a, sigma^2), Y ~ N(a + mu, sigma^2).
struct GaussianPairModel {
    double mu = 0.0;
    double sigma = 1.0;
};

double closed_form_distance_cdf(const GaussianPairModel& model, double t);

enum class StatisticKind { SupDeltaK, CramerVonMises };

std::string statistic_name(StatisticKind kind);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int n_permutations = 0;
    StatisticKind statistic_kind = StatisticKind::SupDeltaK;
};

// Relabels the pooled points B times; the statistic is either the plug-in
// Delta_K(inf) or the Cramer-von Mises functional against the pooled
// distance ECDF. p = (1 + #{permuted >= observed}) / (1 + B).
TestResult permutation_test(const DistanceSpec& spec, const Sample& x, const Sample& y,
                            StatisticKind kind, int B, std::uint64_t seed, int threads = 1);

}  // namespace ipd::empirics
