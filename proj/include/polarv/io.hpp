// File formats: JSON distributions and transform reports, CSV/JSON traces.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarv/dist.hpp"
#include "polarv/polar2.hpp"
#include "polarv/polar_tree.hpp"

namespace polarv::io {

// Full-precision decimal, locale-independent.
inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline nlohmann::json distribution_to_json(const AlphaDistribution& f) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : f.atoms()) atoms.push_back({{"alpha", a.alpha}, {"mass", a.mass}});
    return {{"atoms", atoms}};
}

inline AlphaDistribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
        throw std::runtime_error("distribution: expected {\"atoms\": [...]}");
    std::vector<Atom> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.contains("alpha") || !a.contains("mass"))
            throw std::runtime_error("distribution: atom needs \"alpha\" and \"mass\"");
        atoms.push_back({a["alpha"].get<double>(), a["mass"].get<double>()});
    }
    return AlphaDistribution::from_atoms(std::move(atoms));
}

inline AlphaDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    try {
        return distribution_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void save_distribution(const AlphaDistribution& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << distribution_to_json(f).dump(2) << "\n";
}

inline nlohmann::json report_to_json(const TransformReport& r) {
    return {{"f_minus", distribution_to_json(r.f_minus)},
            {"f_plus", distribution_to_json(r.f_plus)},
            {"h_in", {r.h_in.first, r.h_in.second}},
            {"v_in", {r.v_in.first, r.v_in.second}},
            {"h_out", {r.h_out.first, r.h_out.second}},
            {"v_out", {r.v_out.first, r.v_out.second}},
            {"cov1", r.cov1},
            {"cov2", r.cov2},
            {"cov_total", r.cov_total}};
}

inline std::string trace_to_csv(const PolarizationTrace& trace) {
    std::ostringstream out;
    out << "n,v_bar,d_n,p_n_delta";
    for (int k = 0; k < kHistogramBins; ++k) out << ",h" << k;
    out << "\n";
    for (const TraceLevel& lvl : trace.levels) {
        out << lvl.n << "," << num(lvl.v_bar) << "," << num(lvl.d_n) << ","
            << num(lvl.p_n_delta);
        for (auto count : lvl.entropy_histogram) out << "," << count;
        out << "\n";
    }
    return out.str();
}

inline nlohmann::json trace_to_json(const PolarizationTrace& trace) {
    nlohmann::json levels = nlohmann::json::array();
    for (const TraceLevel& lvl : trace.levels)
        levels.push_back({{"n", lvl.n},
                          {"v_bar", lvl.v_bar},
                          {"d_n", lvl.d_n},
                          {"p_n_delta", lvl.p_n_delta},
                          {"entropy_histogram", lvl.entropy_histogram}});
    return {{"levels", levels}};
}

}  // namespace polarv::io
