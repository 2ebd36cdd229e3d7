#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace ipd {

// splitmix64, used to derive independent substream seeds from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
    return splitmix64(s);
}

// Deterministic generator for one substream. Floating-point draws are built
// directly from the 53 high bits so results do not depend on library
// internals of the std distributions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    Rng(std::uint64_t seed, std::uint64_t stream) : eng_(substream_seed(seed, stream)) {}

    std::uint64_t bits() { return eng_(); }

    // Uniform on [0,1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1), never returns an endpoint.
    double uniform_open01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; one spare value cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_open01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double exponential(double rate) { return -std::log1p(-uniform_open01()) / rate; }

    std::uint64_t index(std::uint64_t n) { return eng_() % n; }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Number of draws assigned to one substream chunk of a Monte Carlo run.
inline constexpr long long kMcChunk = 1 << 16;

// Runs fn(chunk_index, chunk_draws, rng) over ceil(n/kMcChunk) chunks and
// accumulates the returned values in chunk order, so the result is identical
// for any thread count. fn must not touch shared state.
template <class T, class Fn>
T chunked_accumulate(long long n, std::uint64_t seed, int threads, Fn fn) {
    long long n_chunks = (n + kMcChunk - 1) / kMcChunk;
    std::vector<T> partial(static_cast<std::size_t>(n_chunks));
    auto run_range = [&](long long lo, long long hi) {
        for (long long c = lo; c < hi; ++c) {
            long long draws = std::min<long long>(kMcChunk, n - c * kMcChunk);
            Rng rng(seed, static_cast<std::uint64_t>(c));
            partial[static_cast<std::size_t>(c)] = fn(c, draws, rng);
        }
    };
    if (threads <= 1 || n_chunks <= 1) {
        run_range(0, n_chunks);
    } else {
        int nt = std::min<long long>(threads, n_chunks);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        long long per = (n_chunks + nt - 1) / nt;
        for (int i = 0; i < nt; ++i) {
            long long lo = i * per;
            long long hi = std::min(n_chunks, lo + per);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    T total{};
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace ipd
