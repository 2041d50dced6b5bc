// Sampling-based estimator of entropy, varentropy, and the output entropy
// covariance. Deliberately simple: it is the independent cross-check for the
// closed-form machinery.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "polarv/dist.hpp"
#include "polarv/polar2.hpp"

namespace polarv {

// Counter-based generator: draw k of stream `seed` is a pure function of
// (seed, k), so parallel shards reproduce bit-for-bit.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() { return at(seed_, counter_++); }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }
    void set_counter(std::uint64_t c) { counter_ = c; }

    // splitmix64 finalizer over the (seed, index) pair
    static std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

struct McEstimate {
    double mean = 0.0;
    double variance_of_estimator = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;

    double standard_error() const { return std::sqrt(variance_of_estimator); }
};

namespace detail {

inline const std::vector<double>& cumulative_masses(const AlphaDistribution& f,
                                                    std::vector<double>& cache) {
    if (cache.empty()) {
        double acc = 0.0;
        for (const Atom& a : f.atoms()) cache.push_back(acc += a.mass);
        cache.back() = 1.0;
    }
    return cache;
}

inline double draw_alpha(const AlphaDistribution& f, const std::vector<double>& cum, double u) {
    std::size_t lo = 0, hi = cum.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cum[mid] < u)
            lo = mid + 1;
        else
            hi = mid;
    }
    return f.atoms()[lo].alpha;
}

}  // namespace detail

// One realization of (X, A) with its entropy value h = -log2 p(X | A).
struct BdeSample {
    int x;
    double alpha;
    double h;
};

inline BdeSample sample_bde(const AlphaDistribution& f, CounterRng& rng) {
    std::vector<double> cum;
    detail::cumulative_masses(f, cum);
    const double a = detail::draw_alpha(f, cum, rng.next_unit());
    const int x = rng.next_unit() < a ? 0 : 1;
    const double p = (x == 0) ? a : 1.0 - a;
    if (p <= 0.0) throw std::logic_error("sample_bde: drew a zero-probability symbol");
    return {x, a, -std::log2(p)};
}

inline unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("POLARV_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned long>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

inline constexpr int kJackknifeBlocks = 100;

// Sample covariance of (h-, h+) with a jackknife standard error over 100
// blocks. Each sample consumes four RNG draws at a fixed counter offset, so
// the estimate does not depend on how the sample range is sharded.
inline McEstimate estimate_cov(const AlphaDistribution& f1, const AlphaDistribution& f2,
                               std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples < static_cast<std::uint64_t>(kJackknifeBlocks))
        throw std::domain_error("estimate_cov: need at least one sample per jackknife block");
    std::vector<double> cum1, cum2;
    detail::cumulative_masses(f1, cum1);
    detail::cumulative_masses(f2, cum2);

    struct BlockSums {
        double sm = 0.0, sp = 0.0, smp = 0.0;
        std::uint64_t n = 0;
    };
    std::vector<BlockSums> blocks(kJackknifeBlocks);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<BlockSums>& out) {
        for (std::uint64_t i = begin; i < end; ++i) {
            CounterRng rng(seed, i * 4);
            const double a1 = detail::draw_alpha(f1, cum1, rng.next_unit());
            const int x1 = rng.next_unit() < a1 ? 0 : 1;
            const double a2 = detail::draw_alpha(f2, cum2, rng.next_unit());
            const int x2 = rng.next_unit() < a2 ? 0 : 1;

            const int u1 = x1 ^ x2;
            const double pm = star(a1, a2);  // P(U1 = 0 | a1, a2)
            const double p_u1 = (u1 == 0) ? pm : 1.0 - pm;
            if (p_u1 <= 0.0) throw std::logic_error("estimate_cov: zero-probability branch");
            const double hm = -std::log2(p_u1);

            const double ap = (u1 == 0) ? a1 * a2 / pm : (1.0 - a1) * a2 / (1.0 - pm);
            const double p_u2 = (x2 == 0) ? ap : 1.0 - ap;
            if (p_u2 <= 0.0) throw std::logic_error("estimate_cov: zero-probability branch");
            const double hp = -std::log2(p_u2);

            BlockSums& b = out[static_cast<std::size_t>(i * kJackknifeBlocks / n_samples)];
            b.sm += hm;
            b.sp += hp;
            b.smp += hm * hp;
            b.n += 1;
        }
    };

    const unsigned workers = worker_count();
    if (workers <= 1) {
        run_range(0, n_samples, blocks);
    } else {
        std::vector<std::vector<BlockSums>> partial(workers,
                                                    std::vector<BlockSums>(kJackknifeBlocks));
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t begin = n_samples * w / workers;
            std::uint64_t end = n_samples * (w + 1) / workers;
            threads.emplace_back([&, begin, end, w] { run_range(begin, end, partial[w]); });
        }
        for (auto& t : threads) t.join();
        for (const auto& part : partial)
            for (int b = 0; b < kJackknifeBlocks; ++b) {
                blocks[b].sm += part[b].sm;
                blocks[b].sp += part[b].sp;
                blocks[b].smp += part[b].smp;
                blocks[b].n += part[b].n;
            }
    }

    double sm = 0.0, sp = 0.0, smp = 0.0;
    for (const BlockSums& b : blocks) {
        sm += b.sm;
        sp += b.sp;
        smp += b.smp;
    }
    const double n = static_cast<double>(n_samples);
    const double full = smp / n - (sm / n) * (sp / n);

    // Leave-one-block-out estimates.
    double jsum = 0.0, jsq = 0.0;
    for (const BlockSums& b : blocks) {
        const double nn = n - static_cast<double>(b.n);
        const double theta = (smp - b.smp) / nn - ((sm - b.sm) / nn) * ((sp - b.sp) / nn);
        jsum += theta;
        jsq += theta * theta;
    }
    const double bcount = static_cast<double>(kJackknifeBlocks);
    const double jmean = jsum / bcount;
    const double var = (bcount - 1.0) / bcount * (jsq - bcount * jmean * jmean);

    return {full, var < 0.0 ? 0.0 : var, n_samples, seed};
}

// Mean and varentropy of a single BDE by sampling; used against the
// closed-form values.
inline std::pair<McEstimate, McEstimate> estimate_hv(const AlphaDistribution& f,
                                                     std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::domain_error("estimate_hv: n_samples must be positive");
    std::vector<double> cum;
    detail::cumulative_masses(f, cum);
    double s = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        CounterRng rng(seed, i * 2);
        const double a = detail::draw_alpha(f, cum, rng.next_unit());
        const int x = rng.next_unit() < a ? 0 : 1;
        const double h = -std::log2(x == 0 ? a : 1.0 - a);
        s += h;
        s2 += h * h;
        s3 += h * h * h;
        s4 += h * h * h * h;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = s / n;
    const double m2 = s2 / n - mean * mean;
    // var(sample variance) ~ (m4 - m2^2)/n
    const double m4c = s4 / n - 4 * mean * s3 / n + 6 * mean * mean * s2 / n - 3 * mean * mean * mean * mean;
    McEstimate h_est{mean, m2 / n, n_samples, seed};
    McEstimate v_est{m2, (m4c - m2 * m2) / n < 0 ? 0.0 : (m4c - m2 * m2) / n, n_samples, seed};
    return {h_est, v_est};
}

}  // namespace polarv
