// Deterministic random fixtures for property batteries.

#pragma once

#include <cstdint>
#include <vector>

#include "polarv/dist.hpp"
#include "polarv/mc.hpp"

namespace polarv {

// Random distribution with 1..max_atoms atoms, uniform alphas, masses from
// a normalized uniform draw. Duplicate alphas merge in the constructor.
inline AlphaDistribution random_distribution(CounterRng& rng, int max_atoms) {
    const int n = 1 + static_cast<int>(rng.next_unit() * max_atoms) % max_atoms;
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double m = rng.next_unit() + 1e-6;
        atoms.push_back({rng.next_unit(), m});
        total += m;
    }
    for (Atom& a : atoms) a.mass /= total;
    return AlphaDistribution::from_atoms(std::move(atoms));
}

}  // namespace polarv
