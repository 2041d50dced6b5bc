// Atomic alpha-distribution representation of a binary data element (BDE)
// and the single-BDE information measures built on it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polarv {

// Two alphas closer than this are the same atom.
inline constexpr double kMergeTol = 1e-12;
// Slack for deciding an atom sits at 0, 1/2 or 1 during classification.
inline constexpr double kClassifyTol = 1e-9;
// Uniform bound on varentropy of any BDE.
inline constexpr double kVarentropyBound = 2.2434;

struct Atom {
    double alpha;  // P(X=0 | y), or the folded beta value
    double mass;
};

namespace detail {

// Neumaier compensated sum; the mass-sum invariant is checked at 1e-12 so
// plain accumulation over large atom sets is not good enough.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Sort, merge atoms whose positions collide within kMergeTol (mass-weighted
// mean position), drop non-positive masses, and check the mass invariant.
inline std::vector<Atom> canonicalize(std::vector<Atom> atoms, double lo, double hi,
                                      const char* what) {
    for (auto& a : atoms) {
        if (!(a.alpha >= lo - kMergeTol && a.alpha <= hi + kMergeTol) || !std::isfinite(a.alpha))
            throw std::domain_error(std::string(what) + ": atom position " +
                                    std::to_string(a.alpha) + " outside [" + std::to_string(lo) +
                                    "," + std::to_string(hi) + "]");
        a.alpha = std::clamp(a.alpha, lo, hi);
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
            throw std::domain_error(std::string(what) + ": negative or non-finite mass");
    }
    std::erase_if(atoms, [](const Atom& a) { return a.mass <= 0.0; });
    if (atoms.empty()) throw std::domain_error(std::string(what) + ": no mass");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.alpha < b.alpha; });

    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!merged.empty() && a.alpha - merged.back().alpha <= kMergeTol) {
            Atom& m = merged.back();
            double w = m.mass + a.mass;
            m.alpha = (m.alpha * m.mass + a.alpha * a.mass) / w;
            m.mass = w;
        } else {
            merged.push_back(a);
        }
    }
    CompensatedSum total;
    for (const Atom& a : merged) total.add(a.mass);
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::domain_error(std::string(what) + ": masses sum to " +
                                std::to_string(total.value()) + ", expected 1");
    return merged;
}

}  // namespace detail

class AlphaDistribution {
public:
    static AlphaDistribution from_atoms(std::vector<Atom> atoms) {
        return AlphaDistribution(detail::canonicalize(std::move(atoms), 0.0, 1.0, "AlphaDistribution"));
    }
    static AlphaDistribution point(double alpha) { return from_atoms({{alpha, 1.0}}); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

private:
    explicit AlphaDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    std::vector<Atom> atoms_;
};

class BetaDistribution {
public:
    static BetaDistribution from_atoms(std::vector<Atom> atoms) {
        return BetaDistribution(detail::canonicalize(std::move(atoms), 0.0, 0.5, "BetaDistribution"));
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

private:
    explicit BetaDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    std::vector<Atom> atoms_;
};

// Binary entropy, base 2, with the 0 log 0 = 0 convention.
inline double binary_entropy(double a) {
    if (a < -kMergeTol || a > 1.0 + kMergeTol)
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    a = std::clamp(a, 0.0, 1.0);
    double s = 0.0;
    if (a > 0.0) s -= a * std::log2(a);
    if (a < 1.0) s -= (1.0 - a) * std::log2(1.0 - a);
    return s;
}

// Second-moment kernel: a log^2 a + (1-a) log^2 (1-a).
inline double binary_entropy2(double a) {
    if (a < -kMergeTol || a > 1.0 + kMergeTol)
        throw std::domain_error("binary_entropy2: argument outside [0,1]");
    a = std::clamp(a, 0.0, 1.0);
    double s = 0.0;
    if (a > 0.0) {
        double l = std::log2(a);
        s += a * l * l;
    }
    if (a < 1.0) {
        double l = std::log2(1.0 - a);
        s += (1.0 - a) * l * l;
    }
    return s;
}

namespace detail {

template <class Dist>
double entropy_of(const Dist& f) {
    CompensatedSum s;
    for (const Atom& a : f.atoms()) s.add(a.mass * binary_entropy(a.alpha));
    return s.value();
}

template <class Dist>
double varentropy_of(const Dist& f) {
    CompensatedSum m2;
    for (const Atom& a : f.atoms()) m2.add(a.mass * binary_entropy2(a.alpha));
    double h = entropy_of(f);
    double v = m2.value() - h * h;
    if (v < 0.0) {
        if (v < -1e-12) throw std::logic_error("varentropy: negative beyond tolerance");
        v = 0.0;
    }
    return v;
}

}  // namespace detail

inline double conditional_entropy(const AlphaDistribution& f) { return detail::entropy_of(f); }
inline double conditional_entropy(const BetaDistribution& f) { return detail::entropy_of(f); }
inline double varentropy(const AlphaDistribution& f) { return detail::varentropy_of(f); }
inline double varentropy(const BetaDistribution& f) { return detail::varentropy_of(f); }

// Fold to B = min{A, 1-A}, merging collided atoms.
inline BetaDistribution to_beta(const AlphaDistribution& f) {
    std::vector<Atom> atoms;
    atoms.reserve(f.size());
    for (const Atom& a : f.atoms()) atoms.push_back({std::min(a.alpha, 1.0 - a.alpha), a.mass});
    return BetaDistribution::from_atoms(std::move(atoms));
}

struct BdeClass {
    enum class Tag { perfect, purely_random, erasing, pure, general };

    Tag tag = Tag::general;
    // b for pure (0 for perfect, 1/2 for purely random), erasure probability
    // for erasing; unused for general.
    double param = 0.0;

    bool is_perfect() const { return tag == Tag::perfect; }
    bool is_purely_random() const { return tag == Tag::purely_random; }
    bool is_extreme() const { return is_perfect() || is_purely_random(); }
    bool is_erasing() const { return is_extreme() || tag == Tag::erasing; }
    bool is_pure() const { return is_extreme() || tag == Tag::pure; }

    const char* name() const {
        switch (tag) {
            case Tag::perfect: return "perfect";
            case Tag::purely_random: return "purely_random";
            case Tag::erasing: return "erasing";
            case Tag::pure: return "pure";
            default: return "general";
        }
    }
};

// Most specific class first: perfect / purely random before erasing before pure.
inline BdeClass classify(const AlphaDistribution& f) {
    BetaDistribution b = to_beta(f);
    double mass0 = 0.0, mass_half = 0.0, other = 0.0;
    for (const Atom& a : b.atoms()) {
        if (a.alpha <= kClassifyTol)
            mass0 += a.mass;
        else if (a.alpha >= 0.5 - kClassifyTol)
            mass_half += a.mass;
        else
            other += a.mass;
    }
    if (other <= 0.0) {
        if (mass_half <= 0.0) return {BdeClass::Tag::perfect, 0.0};
        if (mass0 <= 0.0) return {BdeClass::Tag::purely_random, 0.5};
        return {BdeClass::Tag::erasing, mass_half};
    }
    double bmin = b.atoms().front().alpha, bmax = b.atoms().back().alpha;
    if (bmax - bmin <= kClassifyTol) {
        double mean = 0.0;
        for (const Atom& a : b.atoms()) mean += a.alpha * a.mass;
        return {BdeClass::Tag::pure, mean};
    }
    return {BdeClass::Tag::general, 0.0};
}

inline AlphaDistribution make_bsc(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("make_bsc: eps outside [0,1]");
    if (eps == 0.5) return AlphaDistribution::point(0.5);
    return AlphaDistribution::from_atoms({{eps, 0.5}, {1.0 - eps, 0.5}});
}

inline AlphaDistribution make_bec(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("make_bec: eps outside [0,1]");
    if (eps == 0.0) return AlphaDistribution::from_atoms({{0.0, 0.5}, {1.0, 0.5}});
    if (eps == 1.0) return AlphaDistribution::point(0.5);
    return AlphaDistribution::from_atoms({{0.0, (1.0 - eps) / 2.0}, {0.5, eps}, {1.0, (1.0 - eps) / 2.0}});
}

// Binary-input AWGN channel y = (-1)^x c + z, z ~ N(0,1), equiprobable inputs.
// Uniform grid over [-c-8, c+8], exact Gaussian cell masses (tails folded into
// the end cells), alpha = 1/(1+exp(-2 c y)) at the cell midpoint.
inline AlphaDistribution make_biawgn(double c, int grid_points) {
    if (!(c > 0.0)) throw std::domain_error("make_biawgn: c must be positive");
    if (grid_points < 2) throw std::domain_error("make_biawgn: grid_points must be >= 2");
    const double lo = -c - 8.0, hi = c + 8.0;
    const double step = (hi - lo) / grid_points;
    auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    // CDF of the equiprobable output mixture.
    auto cdf = [&](double y) { return 0.5 * (phi(y - c) + phi(y + c)); };
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        double a = lo + i * step, b = (i + 1 == grid_points) ? hi : lo + (i + 1) * step;
        double mass = (i == 0 ? cdf(b) : (i + 1 == grid_points ? 1.0 - cdf(a) : cdf(b) - cdf(a)));
        if (mass <= 0.0) continue;
        double mid = 0.5 * (a + b);
        atoms.push_back({1.0 / (1.0 + std::exp(-2.0 * c * mid)), mass});
    }
    return AlphaDistribution::from_atoms(std::move(atoms));
}

}  // namespace polarv
