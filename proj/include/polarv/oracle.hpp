// Brute-force references used only for verification. Everything here is
// computed from first principles on the joint ensemble, independent of the
// closed-form path in polar2.hpp.

#pragma once

#include <cmath>
#include <vector>

#include "polarv/dist.hpp"

namespace polarv::oracle {

struct JointCov {
    double cov = 0.0;   // cov(h-, h+) over the full joint ensemble
    double cov1 = 0.0;  // E_Y cov_{X|Y}
    double cov2 = 0.0;  // cov_Y of the conditional means
    double e_minus = 0.0;
    double e_plus = 0.0;
};

// Exhaustive expectation over (atom1, atom2, x1, x2). For two m- and k-atom
// inputs this is 4mk outcomes; the BSCxBSC case is the classic 16-outcome
// enumeration.
inline JointCov enumerate_cov(const AlphaDistribution& f1, const AlphaDistribution& f2) {
    double e_mp = 0.0, e_m = 0.0, e_p = 0.0;
    double cov_within = 0.0;           // E_Y cov_{X|Y}(h-, h+)
    double em_ep = 0.0;                // E_Y [ E(h-|y) E(h+|y) ]
    for (const Atom& y1 : f1.atoms()) {
        for (const Atom& y2 : f2.atoms()) {
            const double a1 = y1.alpha, a2 = y2.alpha;
            const double my = y1.mass * y2.mass;
            double c_mp = 0.0, c_m = 0.0, c_p = 0.0;  // conditional moments at (y1, y2)
            for (int x1 = 0; x1 < 2; ++x1) {
                for (int x2 = 0; x2 < 2; ++x2) {
                    const double px1 = (x1 == 0) ? a1 : 1.0 - a1;
                    const double px2 = (x2 == 0) ? a2 : 1.0 - a2;
                    const double prob = px1 * px2;
                    if (prob <= 0.0) continue;
                    const int u1 = x1 ^ x2, u2 = x2;
                    // P(U1 = u1 | y) and P(U2 = u2 | u1, y), from scratch
                    const double pu1 = (u1 == 0) ? a1 * a2 + (1 - a1) * (1 - a2)
                                                 : a1 * (1 - a2) + (1 - a1) * a2;
                    const double pu2_joint = ((u1 ^ u2) == 0 ? a1 : 1.0 - a1) *
                                             (u2 == 0 ? a2 : 1.0 - a2);
                    const double hm = -std::log2(pu1);
                    const double hp = -std::log2(pu2_joint / pu1);
                    c_mp += prob * hm * hp;
                    c_m += prob * hm;
                    c_p += prob * hp;
                }
            }
            e_mp += my * c_mp;
            e_m += my * c_m;
            e_p += my * c_p;
            cov_within += my * (c_mp - c_m * c_p);
            em_ep += my * c_m * c_p;
        }
    }
    JointCov r;
    r.cov = e_mp - e_m * e_p;
    r.cov1 = cov_within;
    r.cov2 = em_ep - e_m * e_p;
    r.e_minus = e_m;
    r.e_plus = e_p;
    return r;
}

// Scalar erasure-probability recursion for an i.i.d. BEC input: each level
// maps z to the pair (2z - z^2, z^2). Average varentropy is mean z(1-z).
struct BecLevel {
    std::vector<double> erasures;
    double v_bar = 0.0;
};

inline std::vector<BecLevel> bec_recursion(double eps, int n_max) {
    std::vector<BecLevel> levels;
    std::vector<double> z{eps};
    for (int n = 0; n <= n_max; ++n) {
        double v = 0.0;
        for (double zz : z) v += zz * (1.0 - zz);
        levels.push_back({z, v / static_cast<double>(z.size())});
        std::vector<double> next;
        next.reserve(z.size() * 2);
        for (double zz : z) next.push_back(2.0 * zz - zz * zz);
        for (double zz : z) next.push_back(zz * zz);
        z = std::move(next);
    }
    return levels;
}

}  // namespace polarv::oracle
