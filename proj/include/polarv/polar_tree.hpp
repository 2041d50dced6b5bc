// Order-2^n recursive polar transform with mass-preserving quantization and
// the level-wise polarization statistics (average varentropy, decrements,
// bad-index fractions, entropy histograms).

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polarv/dist.hpp"
#include "polarv/polar2.hpp"

namespace polarv {

// Raised when an exact-mode evolution outgrows the atom budget; callers
// should rerun with quantization.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuantizeConfig {
    std::size_t max_atoms = 4096;  // identity below this atom count
    std::size_t bin_count = 4096;  // uniform cells over [0,1] otherwise

    void validate() const {
        if (max_atoms < 2 || bin_count < 2)
            throw std::domain_error("QuantizeConfig: max_atoms and bin_count must be >= 2");
    }
};

// Default exact-mode budget: a distribution growing past this many atoms
// aborts the run rather than exhausting memory.
inline constexpr std::size_t kExactAtomBudget = std::size_t{1} << 21;

struct QuantizeDiag {
    double delta_h = 0.0;  // |H before - H after|
    double delta_v = 0.0;  // |V before - V after|
};

namespace detail {

struct BinAccumulator {
    explicit BinAccumulator(std::size_t bins) : mass(bins, 0.0), alpha_mass(bins, 0.0), bins_(bins) {}

    void add(double alpha, double m) {
        std::size_t i = static_cast<std::size_t>(alpha * static_cast<double>(bins_));
        if (i >= bins_) i = bins_ - 1;
        mass[i] += m;
        alpha_mass[i] += alpha * m;
    }

    AlphaDistribution take() const {
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < bins_; ++i)
            if (mass[i] > 0.0) atoms.push_back({alpha_mass[i] / mass[i], mass[i]});
        return AlphaDistribution::from_atoms(std::move(atoms));
    }

    std::vector<double> mass, alpha_mass;
    std::size_t bins_;
};

}  // namespace detail

// Mass- and mean-preserving binning onto a uniform grid; identity while the
// atom count fits the budget.
inline AlphaDistribution quantize(const AlphaDistribution& f, const QuantizeConfig& cfg,
                                  QuantizeDiag* diag = nullptr) {
    cfg.validate();
    if (f.size() <= cfg.max_atoms) {
        if (diag) *diag = {};
        return f;
    }
    detail::BinAccumulator acc(cfg.bin_count);
    for (const Atom& a : f.atoms()) acc.add(a.alpha, a.mass);
    AlphaDistribution q = acc.take();
    if (diag) {
        diag->delta_h = std::abs(conditional_entropy(f) - conditional_entropy(q));
        diag->delta_v = std::abs(varentropy(f) - varentropy(q));
    }
    return q;
}

namespace detail {

// One quantized pair step. When the product support would exceed the atom
// budget the atoms are streamed straight into the bins, which yields the
// same result as materializing and then binning.
inline std::pair<AlphaDistribution, AlphaDistribution> pair_step(const AlphaDistribution& f1,
                                                                 const AlphaDistribution& f2,
                                                                 const std::optional<QuantizeConfig>& cfg) {
    const std::size_t product = f1.size() * f2.size();
    if (!cfg) {
        if (product > kExactAtomBudget)
            throw ResourceError(
                "exact polar evolution exceeds the atom budget; rerun with quantization");
        return polar_pair(f1, f2);
    }
    cfg->validate();
    if (product <= cfg->max_atoms) {
        auto [fm, fp] = polar_pair(f1, f2);
        return {quantize(fm, *cfg), quantize(fp, *cfg)};
    }
    BinAccumulator minus(cfg->bin_count), plus(cfg->bin_count);
    for (const Atom& x : f1.atoms()) {
        for (const Atom& y : f2.atoms()) {
            const double m = x.mass * y.mass;
            const double s = x.alpha * y.alpha + (1.0 - x.alpha) * (1.0 - y.alpha);
            minus.add(s, m);
            if (s > kBranchMassFloor) plus.add(x.alpha * y.alpha / s, m * s);
            const double sb = 1.0 - s;
            if (sb > kBranchMassFloor) plus.add((1.0 - x.alpha) * y.alpha / sb, m * sb);
        }
    }
    return {minus.take(), plus.take()};
}

}  // namespace detail

// Recursive order-N transform: pairwise size-2 steps on (i, i+N/2), then two
// independent order-N/2 transforms on the halves. Exact when quantize is
// absent.
inline std::vector<AlphaDistribution> polar_transform_n(std::vector<AlphaDistribution> inputs,
                                                        const std::optional<QuantizeConfig>& cfg = {}) {
    const std::size_t n = inputs.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::domain_error("polar_transform_n: input length must be a power of two");
    if (n == 1) return inputs;
    const std::size_t half = n / 2;
    std::vector<AlphaDistribution> primed, dprimed;
    primed.reserve(half);
    dprimed.reserve(half);
    for (std::size_t i = 0; i < half; ++i) {
        auto [fm, fp] = detail::pair_step(inputs[i], inputs[i + half], cfg);
        primed.push_back(std::move(fm));
        dprimed.push_back(std::move(fp));
    }
    std::vector<AlphaDistribution> out = polar_transform_n(std::move(primed), cfg);
    std::vector<AlphaDistribution> hi = polar_transform_n(std::move(dprimed), cfg);
    out.insert(out.end(), std::make_move_iterator(hi.begin()), std::make_move_iterator(hi.end()));
    return out;
}

// Single-step varentropy decrease C(F) = V(F) - [V(F-) + V(F+)]/2, exact.
inline double c_functional(const AlphaDistribution& f) {
    auto [fm, fp] = polar_pair(f, f);
    double c = varentropy(f) - (varentropy(fm) + varentropy(fp)) / 2.0;
    return c < 0.0 ? 0.0 : c;
}

struct TraceLevel {
    int n = 0;
    double v_bar = 0.0;
    double d_n = 0.0;  // v_bar(n) - v_bar(n-1); 0 at level 0
    double p_n_delta = 0.0;
    std::vector<std::uint64_t> entropy_histogram;  // 101 bins, bin k ~ H = k/100
};

struct PolarizationTrace {
    std::vector<TraceLevel> levels;
};

inline constexpr int kHistogramBins = 101;

namespace detail {

inline TraceLevel trace_level(int n, double prev_v_bar, double delta,
                              const std::vector<AlphaDistribution>& dists) {
    TraceLevel lvl;
    lvl.n = n;
    lvl.entropy_histogram.assign(kHistogramBins, 0);
    CompensatedSum vsum;
    std::size_t bad = 0;
    for (const AlphaDistribution& f : dists) {
        const double v = varentropy(f);
        vsum.add(v);
        if (v >= delta) ++bad;
        int bin = static_cast<int>(std::lround(conditional_entropy(f) * 100.0));
        lvl.entropy_histogram[std::clamp(bin, 0, kHistogramBins - 1)]++;
    }
    lvl.v_bar = vsum.value() / static_cast<double>(dists.size());
    lvl.d_n = (n == 0) ? 0.0 : lvl.v_bar - prev_v_bar;
    lvl.p_n_delta = static_cast<double>(bad) / static_cast<double>(dists.size());
    return lvl;
}

}  // namespace detail

// I.i.d. polarization trace. Level n holds the 2^n distinct distributions of
// the order-2^n transform; each level comes from pairing every level-(n-1)
// distribution with itself, minus halves first.
inline PolarizationTrace polarize_iid(const AlphaDistribution& f0, int n_max, double delta,
                                      const std::optional<QuantizeConfig>& cfg = {}) {
    if (n_max < 0) throw std::domain_error("polarize_iid: n_max must be >= 0");
    if (!(delta > 0.0)) throw std::domain_error("polarize_iid: delta must be positive");
    PolarizationTrace trace;
    std::vector<AlphaDistribution> dists{f0};
    trace.levels.push_back(detail::trace_level(0, 0.0, delta, dists));
    for (int n = 1; n <= n_max; ++n) {
        std::vector<AlphaDistribution> next;
        next.reserve(dists.size() * 2);
        std::vector<AlphaDistribution> plus_half;
        plus_half.reserve(dists.size());
        for (const AlphaDistribution& f : dists) {
            auto [fm, fp] = detail::pair_step(f, f, cfg);
            next.push_back(std::move(fm));
            plus_half.push_back(std::move(fp));
        }
        next.insert(next.end(), std::make_move_iterator(plus_half.begin()),
                    std::make_move_iterator(plus_half.end()));
        dists = std::move(next);
        trace.levels.push_back(detail::trace_level(n, trace.levels.back().v_bar, delta, dists));
    }
    return trace;
}

}  // namespace polarv
