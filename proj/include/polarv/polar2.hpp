// Exact size-2 polar density evolution and the covariance decomposition
// cov(h-, h+) = cov1 + cov2 with its closed-form functionals.

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polarv/dist.hpp"

namespace polarv {

// Signals a violated internal identity, i.e. an implementation bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Binary convolution p*q = pq + (1-p)(1-q).
inline double star(double p, double q) {
    if (p < -kMergeTol || p > 1.0 + kMergeTol || q < -kMergeTol || q > 1.0 + kMergeTol)
        throw std::domain_error("star: argument outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    q = std::clamp(q, 0.0, 1.0);
    return p * q + (1.0 - p) * (1.0 - q);
}

// Mass weights below this are the probability-zero branches of the plus
// transform; they carry an indeterminate atom value and are dropped.
inline constexpr double kBranchMassFloor = 1e-300;

// Density evolution through one polar transform: returns (F-, F+).
inline std::pair<AlphaDistribution, AlphaDistribution> polar_pair(const AlphaDistribution& f1,
                                                                  const AlphaDistribution& f2) {
    const auto& a1 = f1.atoms();
    const auto& a2 = f2.atoms();
    std::vector<Atom> minus, plus;
    minus.reserve(a1.size() * a2.size());
    plus.reserve(2 * a1.size() * a2.size());
    for (const Atom& x : a1) {
        for (const Atom& y : a2) {
            const double m = x.mass * y.mass;
            const double s = x.alpha * y.alpha + (1.0 - x.alpha) * (1.0 - y.alpha);
            minus.push_back({s, m});
            if (s > kBranchMassFloor) plus.push_back({x.alpha * y.alpha / s, m * s});
            const double sb = 1.0 - s;  // star(1-a1, a2)
            if (sb > kBranchMassFloor) plus.push_back({(1.0 - x.alpha) * y.alpha / sb, m * sb});
        }
    }
    return {AlphaDistribution::from_atoms(std::move(minus)),
            AlphaDistribution::from_atoms(std::move(plus))};
}

// Per-sample covariance kernel f(p,q) of cov1. Exactly zero when p or q is in
// {0, 1/2, 1}: the short-circuit avoids evaluating 0 * log(0/x).
inline double f_cov(double p, double q) {
    if (p < -kMergeTol || p > 1.0 + kMergeTol || q < -kMergeTol || q > 1.0 + kMergeTol)
        throw std::domain_error("f_cov: argument outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    q = std::clamp(q, 0.0, 1.0);
    auto at_zero = [](double x) {
        return x <= kMergeTol || x >= 1.0 - kMergeTol || std::abs(x - 0.5) <= kMergeTol;
    };
    if (at_zero(p) || at_zero(q)) return 0.0;
    const double s = star(p, q);
    const double sb = star(p, 1.0 - q);
    return s * sb * std::log2(s / sb) *
           (binary_entropy(p * (1.0 - q) / sb) - binary_entropy(p * q / s));
}

// cov1 = E f(A1, A2) over the independent input atom pairs.
inline double cov1(const AlphaDistribution& f1, const AlphaDistribution& f2) {
    detail::CompensatedSum s;
    for (const Atom& x : f1.atoms())
        for (const Atom& y : f2.atoms()) s.add(x.mass * y.mass * f_cov(x.alpha, y.alpha));
    return s.value();
}

// Conditional means of the output entropy variables given the alpha pair.
inline double h_minus_fn(double p, double q) { return binary_entropy(star(p, q)); }
inline double h_plus_fn(double p, double q) {
    return binary_entropy(p) + binary_entropy(q) - binary_entropy(star(p, q));
}

// cov2 = cov[H-(B), H+(B)] over the folded pair; the beta fold has fewer
// atoms and leaves both functions unchanged by their symmetries.
inline double cov2(const AlphaDistribution& f1, const AlphaDistribution& f2) {
    const BetaDistribution b1 = to_beta(f1), b2 = to_beta(f2);
    detail::CompensatedSum e_mp, e_m, e_p;
    for (const Atom& x : b1.atoms()) {
        for (const Atom& y : b2.atoms()) {
            const double m = x.mass * y.mass;
            const double hm = h_minus_fn(x.alpha, y.alpha);
            const double hp = h_plus_fn(x.alpha, y.alpha);
            e_mp.add(m * hm * hp);
            e_m.add(m * hm);
            e_p.add(m * hp);
        }
    }
    return e_mp.value() - e_m.value() * e_p.value();
}

struct TransformReport {
    AlphaDistribution f_minus;
    AlphaDistribution f_plus;
    std::pair<double, double> h_in;
    std::pair<double, double> v_in;
    std::pair<double, double> h_out;
    std::pair<double, double> v_out;
    double cov1 = 0.0;
    double cov2 = 0.0;
    double cov_total = 0.0;
};

inline TransformReport transform_report(const AlphaDistribution& f1, const AlphaDistribution& f2) {
    auto [fm, fp] = polar_pair(f1, f2);
    TransformReport r{std::move(fm), std::move(fp), {}, {}, {}, {}, 0.0, 0.0, 0.0};
    r.h_in = {conditional_entropy(f1), conditional_entropy(f2)};
    r.v_in = {varentropy(f1), varentropy(f2)};
    r.h_out = {conditional_entropy(r.f_minus), conditional_entropy(r.f_plus)};
    r.v_out = {varentropy(r.f_minus), varentropy(r.f_plus)};
    r.cov1 = cov1(f1, f2);
    r.cov2 = cov2(f1, f2);
    r.cov_total = r.cov1 + r.cov2;
    const double from_varentropies =
        (r.v_in.first + r.v_in.second - r.v_out.first - r.v_out.second) / 2.0;
    if (std::abs(r.cov_total - from_varentropies) > 1e-10)
        throw ConsistencyError("transform_report: cov1+cov2 disagrees with varentropy balance");
    return r;
}

}  // namespace polarv
