#include "ipd/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>

#include "ipd/mathutil.hpp"
#include "ipd/rng.hpp"

namespace ipd::empirics {

namespace {

using distances::Point;

void check_sample(const DistanceSpec& spec, const Sample& s) {
    if (s.n < 2) throw invalid_parameter("samples need at least 2 points");
    if (s.k != spec.dim)
        throw dimension_mismatch("sample dimension does not match the distance spec");
    if (static_cast<std::size_t>(s.n) * static_cast<std::size_t>(s.k) != s.data.size())
        throw invalid_parameter("sample storage does not match its declared shape");
    if (!domain_compatible(s.domain, spec.required_domain()))
        throw domain_violation("sample domain is incompatible with the distance family");
}

// Grid of observed values, midpoints, and one point past the maximum;
// input must be sorted. Thinned to at most 4096 points.
std::vector<double> default_grid(std::vector<double> sorted_values) {
    sorted_values.erase(std::unique(sorted_values.begin(), sorted_values.end()),
                        sorted_values.end());
    std::vector<double> grid;
    grid.reserve(2 * sorted_values.size() + 1);
    for (std::size_t i = 0; i < sorted_values.size(); ++i) {
        grid.push_back(sorted_values[i]);
        if (i + 1 < sorted_values.size()) {
            double mid = 0.5 * (sorted_values[i] + sorted_values[i + 1]);
            if (mid > sorted_values[i] && mid < sorted_values[i + 1]) grid.push_back(mid);
        }
    }
    double top = sorted_values.back();
    grid.push_back(top + std::max(1.0, std::abs(top)));
    const std::size_t cap = 4096;
    if (grid.size() <= cap) return grid;
    std::vector<double> thin;
    thin.reserve(cap);
    for (std::size_t j = 0; j < cap; ++j) {
        std::size_t idx = j * (grid.size() - 1) / (cap - 1);
        thin.push_back(grid[idx]);
    }
    thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
    return thin;
}

// F(t) = (#values < t) / denom for each grid point; values sorted.
std::vector<double> ecdf_on_grid(const std::vector<double>& sorted_values,
                                 const std::vector<double>& grid, double denom) {
    std::vector<double> f;
    f.reserve(grid.size());
    for (double t : grid) {
        auto it = std::lower_bound(sorted_values.begin(), sorted_values.end(), t);
        f.push_back(static_cast<double>(it - sorted_values.begin()) / denom);
    }
    return f;
}

}  // namespace

bool domain_compatible(Domain declared, Domain required) {
    if (required == Domain::Euclidean) return true;
    return declared == required;
}

Sample generate(const SamplerSpec& dist, int n, std::uint64_t seed) {
    if (n < 2) throw invalid_parameter("generate needs n >= 2");
    Sample s;
    s.n = n;
    s.k = dist.dim();
    s.domain = dist.domain();
    s.label = dist.family_name();
    s.data.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(s.k));
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        std::span<double> row{s.data.data() + static_cast<std::size_t>(i) * s.k,
                              static_cast<std::size_t>(s.k)};
        dist.sample_into(rng, row);
    }
    return s;
}

std::vector<double> pairwise_distances(const DistanceSpec& spec, const Sample& a,
                                       const Sample* b) {
    check_sample(spec, a);
    if (b) check_sample(spec, *b);
    bool symmetric = distances::is_symmetric(spec);
    std::size_t k = static_cast<std::size_t>(a.k);
    Point u(std::vector<double>(k), a.domain);
    Point v(std::vector<double>(k), b ? b->domain : a.domain);
    auto load = [&](Point& p, const Sample& s, int i) {
        auto r = s.row(i);
        std::copy(r.begin(), r.end(), p.coords.begin());
    };
    std::vector<double> out;
    if (!b) {
        std::size_t n = static_cast<std::size_t>(a.n);
        out.reserve(symmetric ? n * (n - 1) / 2 : n * (n - 1));
        for (int i = 0; i < a.n; ++i) {
            load(u, a, i);
            for (int j = i + 1; j < a.n; ++j) {
                load(v, a, j);
                out.push_back(distances::eval(spec, u, v));
                if (!symmetric) out.push_back(distances::eval(spec, v, u));
            }
        }
    } else {
        out.reserve(static_cast<std::size_t>(a.n) * static_cast<std::size_t>(b->n));
        for (int i = 0; i < a.n; ++i) {
            load(u, a, i);
            for (int j = 0; j < b->n; ++j) {
                load(v, *b, j);
                out.push_back(distances::eval(spec, u, v));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

EcdfTriple ecdf_triple(const DistanceSpec& spec, const Sample& x, const Sample& y,
                       const std::vector<double>& grid) {
    std::vector<double> dxx = pairwise_distances(spec, x);
    std::vector<double> dyy = pairwise_distances(spec, y);
    std::vector<double> dxy = pairwise_distances(spec, x, &y);
    EcdfTriple triple;
    if (!grid.empty()) {
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw invalid_parameter("ecdf grid must be strictly increasing");
        triple.grid = grid;
    } else {
        std::vector<double> all;
        all.reserve(dxx.size() + dyy.size() + dxy.size());
        all.insert(all.end(), dxx.begin(), dxx.end());
        all.insert(all.end(), dyy.begin(), dyy.end());
        all.insert(all.end(), dxy.begin(), dxy.end());
        std::sort(all.begin(), all.end());
        triple.grid = default_grid(std::move(all));
    }
    triple.f_xx = ecdf_on_grid(dxx, triple.grid, static_cast<double>(dxx.size()));
    triple.f_yy = ecdf_on_grid(dyy, triple.grid, static_cast<double>(dyy.size()));
    triple.f_xy = ecdf_on_grid(dxy, triple.grid, static_cast<double>(dxy.size()));
    return triple;
}

DiscrepancyReport kolmogorov_discrepancy(const EcdfTriple& triple) {
    DiscrepancyReport rep;
    rep.t_grid = triple.grid;
    rep.delta_k.reserve(triple.grid.size());
    double sup_xx = 0.0, sup_yy = 0.0;
    for (std::size_t i = 0; i < triple.grid.size(); ++i) {
        sup_xx = std::max(sup_xx, std::abs(triple.f_xx[i] - triple.f_xy[i]));
        sup_yy = std::max(sup_yy, std::abs(triple.f_yy[i] - triple.f_xy[i]));
        rep.delta_k.push_back(sup_xx + sup_yy);
    }
    rep.delta_k_inf = rep.delta_k.empty() ? 0.0 : rep.delta_k.back();
    return rep;
}

double closed_form_distance_cdf(const GaussianPairModel& model, double t) {
    if (!(model.sigma > 0)) throw invalid_parameter("pair model needs sigma > 0");
    if (t <= 0) return 0.0;
    double s = model.sigma * std::sqrt(2.0);
    return normal_cdf((t - model.mu) / s) - normal_cdf((-t - model.mu) / s);
}

std::string statistic_name(StatisticKind kind) {
    return kind == StatisticKind::SupDeltaK ? "SupDeltaK" : "CramerVonMises";
}

TestResult permutation_test(const DistanceSpec& spec, const Sample& x, const Sample& y,
                            StatisticKind kind, int B, std::uint64_t seed, int threads) {
    if (B < 99) throw invalid_parameter("permutation test needs B >= 99");
    check_sample(spec, x);
    check_sample(spec, y);
    if (x.k != y.k) throw dimension_mismatch("samples have different dimensions");
    bool symmetric = distances::is_symmetric(spec);
    int n = x.n, m = y.n, N = n + m;

    // pooled points
    std::vector<Point> pool;
    pool.reserve(static_cast<std::size_t>(N));
    for (int i = 0; i < n; ++i) {
        auto r = x.row(i);
        pool.emplace_back(std::vector<double>(r.begin(), r.end()), x.domain);
    }
    for (int j = 0; j < m; ++j) {
        auto r = y.row(j);
        pool.emplace_back(std::vector<double>(r.begin(), r.end()), y.domain);
    }

    // all ordered pooled distances and the common evaluation grid
    std::vector<double> dist(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 0.0);
    auto at = [N](int i, int j) {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(N) +
               static_cast<std::size_t>(j);
    };
    std::vector<double> observed;
    observed.reserve(static_cast<std::size_t>(N) * (static_cast<std::size_t>(N) - 1) /
                     (symmetric ? 2 : 1));
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            double dij = distances::eval(spec, pool[static_cast<std::size_t>(i)],
                                         pool[static_cast<std::size_t>(j)]);
            double dji =
                symmetric ? dij
                          : distances::eval(spec, pool[static_cast<std::size_t>(j)],
                                            pool[static_cast<std::size_t>(i)]);
            dist[at(i, j)] = dij;
            dist[at(j, i)] = dji;
            observed.push_back(dij);
            if (!symmetric) observed.push_back(dji);
        }
    std::sort(observed.begin(), observed.end());
    std::vector<double> grid = default_grid(std::move(observed));
    std::size_t G = grid.size();

    // cell index per ordered pair: first grid point strictly above the value
    std::vector<std::uint16_t> cell(dist.size(), 0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            auto it = std::upper_bound(grid.begin(), grid.end(), dist[at(i, j)]);
            cell[at(i, j)] = static_cast<std::uint16_t>(it - grid.begin());
        }

    // pooled-distance ECDF weights per cell, for the CvM integral
    std::vector<double> h_weight(G + 1, 0.0);
    if (kind == StatisticKind::CramerVonMises) {
        double total = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                if (i == j || (symmetric && j < i)) continue;
                h_weight[cell[at(i, j)]] += 1.0;
                total += 1.0;
            }
        for (double& w : h_weight) w /= total;
    }

    double denom_xx = symmetric ? n * (n - 1) / 2.0 : n * (n - 1);
    double denom_yy = symmetric ? m * (m - 1) / 2.0 : m * (m - 1);
    double denom_xy = static_cast<double>(n) * m;

    auto statistic = [&](const std::vector<int>& idx, std::vector<int>& hist_xx,
                         std::vector<int>& hist_yy, std::vector<int>& hist_xy) {
        std::fill(hist_xx.begin(), hist_xx.end(), 0);
        std::fill(hist_yy.begin(), hist_yy.end(), 0);
        std::fill(hist_xy.begin(), hist_xy.end(), 0);
        for (int a = 0; a < n; ++a)
            for (int b2 = a + 1; b2 < n; ++b2) {
                ++hist_xx[cell[at(idx[static_cast<std::size_t>(a)],
                                  idx[static_cast<std::size_t>(b2)])]];
                if (!symmetric)
                    ++hist_xx[cell[at(idx[static_cast<std::size_t>(b2)],
                                      idx[static_cast<std::size_t>(a)])]];
            }
        for (int a = n; a < N; ++a)
            for (int b2 = a + 1; b2 < N; ++b2) {
                ++hist_yy[cell[at(idx[static_cast<std::size_t>(a)],
                                  idx[static_cast<std::size_t>(b2)])]];
                if (!symmetric)
                    ++hist_yy[cell[at(idx[static_cast<std::size_t>(b2)],
                                      idx[static_cast<std::size_t>(a)])]];
            }
        for (int a = 0; a < n; ++a)
            for (int b2 = n; b2 < N; ++b2)
                ++hist_xy[cell[at(idx[static_cast<std::size_t>(a)],
                                  idx[static_cast<std::size_t>(b2)])]];
        long long cxx = 0, cyy = 0, cxy = 0;
        double sup_xx = 0.0, sup_yy = 0.0, cvm = 0.0;
        for (std::size_t g = 0; g < G; ++g) {
            cxx += hist_xx[g];
            cyy += hist_yy[g];
            cxy += hist_xy[g];
            double fxx = static_cast<double>(cxx) / denom_xx;
            double fyy = static_cast<double>(cyy) / denom_yy;
            double fxy = static_cast<double>(cxy) / denom_xy;
            double dx = fxx - fxy;
            double dy = fyy - fxy;
            sup_xx = std::max(sup_xx, std::abs(dx));
            sup_yy = std::max(sup_yy, std::abs(dy));
            cvm += h_weight[g] * (dx * dx + dy * dy);
        }
        return kind == StatisticKind::SupDeltaK ? sup_xx + sup_yy : cvm;
    };

    std::vector<int> identity(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) identity[static_cast<std::size_t>(i)] = i;
    std::vector<int> hx(G + 1), hy(G + 1), hxy(G + 1);
    double observed_stat = statistic(identity, hx, hy, hxy);

    auto run_block = [&](int b_lo, int b_hi, long long& exceed) {
        std::vector<int> idx(static_cast<std::size_t>(N));
        std::vector<int> lx(G + 1), ly(G + 1), lxy(G + 1);
        long long count = 0;
        for (int b = b_lo; b < b_hi; ++b) {
            for (int i = 0; i < N; ++i) idx[static_cast<std::size_t>(i)] = i;
            Rng rng(seed, static_cast<std::uint64_t>(b));
            for (int i = N - 1; i > 0; --i) {
                int j = static_cast<int>(rng.index(static_cast<std::uint64_t>(i + 1)));
                std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
            }
            if (statistic(idx, lx, ly, lxy) >= observed_stat) ++count;
        }
        exceed = count;
    };

    long long exceed = 0;
    if (threads <= 1) {
        run_block(0, B, exceed);
    } else {
        int nt = std::min(threads, B);
        std::vector<long long> partial(static_cast<std::size_t>(nt), 0);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(nt));
        int per = (B + nt - 1) / nt;
        for (int w = 0; w < nt; ++w) {
            int lo = w * per;
            int hi = std::min(B, lo + per);
            if (lo >= hi) break;
            workers.emplace_back(run_block, lo, hi, std::ref(partial[static_cast<std::size_t>(w)]));
        }
        for (auto& th : workers) th.join();
        for (long long p : partial) exceed += p;
    }

    TestResult res;
    res.statistic = observed_stat;
    res.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + B);
    res.n_permutations = B;
    res.statistic_kind = kind;
    return res;
}

}  // namespace ipd::empirics
