// polarv: density evolution of alpha-distributions under the polar
// transform, with entropy/varentropy measures, covariance decomposition,
// polarization traces, and a self-check battery.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarv/dist.hpp"
#include "polarv/io.hpp"
#include "polarv/mc.hpp"
#include "polarv/oracle.hpp"
#include "polarv/polar2.hpp"
#include "polarv/polar_tree.hpp"
#include "polarv/random.hpp"

namespace {

using namespace polarv;

int cmd_measure(const std::string& dist_path) {
    AlphaDistribution f = io::load_distribution(dist_path);
    nlohmann::json out = {{"H", conditional_entropy(f)},
                          {"V", varentropy(f)},
                          {"class", classify(f).name()}};
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_transform(const std::string& dist1, const std::string& dist2, const std::string& out_path) {
    AlphaDistribution f1 = io::load_distribution(dist1);
    AlphaDistribution f2 = io::load_distribution(dist2);
    nlohmann::json j = io::report_to_json(transform_report(f1, f2));
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
        out << j.dump(2) << "\n";
    }
    return 0;
}

AlphaDistribution make_channel(const std::string& channel, double eps) {
    if (channel == "bsc") return make_bsc(eps);
    if (channel == "bec") return make_bec(eps);
    throw CLI::ValidationError("--channel", "must be bsc or bec");
}

int cmd_sweep(const std::string& channel, double start, double end, double step,
              const std::string& out_path) {
    const double cap = (channel == "bsc") ? 0.5 : 1.0;
    if (!(step > 0.0) || !(start >= 0.0) || !(start <= end) || !(end <= cap + 1e-12))
        throw CLI::ValidationError("sweep", "need 0 <= start <= end <= " + std::to_string(cap) +
                                                " and step > 0");
    std::ostringstream csv;
    csv << "eps,v_in,v_minus,v_plus,cov,cov1,cov2\n";
    for (double eps = start; eps <= end + step / 2; eps += step) {
        const double e = std::min(eps, cap);
        AlphaDistribution f = make_channel(channel, e);
        TransformReport r = transform_report(f, f);
        csv << io::num(e) << "," << io::num(r.v_in.first) << "," << io::num(r.v_out.first) << ","
            << io::num(r.v_out.second) << "," << io::num(r.cov_total) << "," << io::num(r.cov1)
            << "," << io::num(r.cov2) << "\n";
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
        out << csv.str();
    }
    return 0;
}

int cmd_polarize(const std::string& channel, double eps, int levels, double delta,
                 const std::string& quantize_arg, const std::string& out_base) {
    std::optional<QuantizeConfig> cfg;
    if (quantize_arg != "off") {
        std::size_t bins = std::stoul(quantize_arg);
        cfg = QuantizeConfig{bins, bins};
    }
    AlphaDistribution f0 = make_channel(channel, eps);
    PolarizationTrace trace = polarize_iid(f0, levels, delta, cfg);
    if (out_base.empty()) {
        std::cout << io::trace_to_csv(trace);
    } else {
        std::ofstream csv(out_base + ".csv");
        std::ofstream json(out_base + ".json");
        if (!csv || !json) throw std::runtime_error(out_base + ": cannot open outputs");
        csv << io::trace_to_csv(trace);
        json << io::trace_to_json(trace).dump(2) << "\n";
        const TraceLevel& last = trace.levels.back();
        std::cout << "levels=" << last.n << " v_bar=" << io::num(last.v_bar)
                  << " p_n_delta=" << io::num(last.p_n_delta) << "\n";
    }
    return 0;
}

// ---- validate battery ----

struct Battery {
    int failed = 0;
    int passed = 0;
    std::uint64_t seed = 0;

    void check(bool ok, const std::string& name) {
        if (ok) {
            ++passed;
            std::cout << "PASS " << name << "\n";
        } else {
            ++failed;
            std::cout << "FAIL " << name << " seed=" << seed << "\n";
        }
    }
};

int cmd_validate(int trials, int atoms, std::uint64_t seed) {
    if (trials < 1 || atoms < 1) throw CLI::ValidationError("validate", "positive integers required");
    Battery b;
    b.seed = seed;
    CounterRng rng(seed);

    // Single-BDE invariants on random fixtures.
    bool mass_ok = true, bound_ok = true, fold_ok = true, prop1_ok = true;
    double max_v = 0.0;
    for (int t = 0; t < trials; ++t) {
        AlphaDistribution f = random_distribution(rng, atoms);
        double total = 0.0;
        for (const Atom& a : f.atoms()) total += a.mass;
        mass_ok &= std::abs(total - 1.0) <= 1e-12;
        const double v = varentropy(f);
        max_v = std::max(max_v, v);
        bound_ok &= v <= kVarentropyBound;
        BetaDistribution fb = to_beta(f);
        fold_ok &= std::abs(conditional_entropy(f) - conditional_entropy(fb)) <= 1e-12 &&
                   std::abs(v - varentropy(fb)) <= 1e-12;
        const double h = conditional_entropy(f);
        const bool extreme = classify(f).is_extreme();
        prop1_ok &= extreme == (v <= 1e-12);
        prop1_ok &= extreme == (std::min(h, std::abs(1.0 - h)) <= 1e-9);
    }
    b.check(mass_ok, "mass_conservation");
    b.check(bound_ok, "varentropy_bound");
    b.check(fold_ok, "fold_consistency");
    b.check(prop1_ok, "extreme_equivalence");
    std::cout << "INFO max_varentropy " << io::num(max_v)
              << (max_v <= 1.1716 + 1e-9 ? " (within 1.1716)" : " (above 1.1716)") << "\n";

    // Pair properties: non-negativity, conservation, contraction, decomposition.
    bool nonneg = true, chain = true, contract = true, decomp = true;
    for (int t = 0; t < trials; ++t) {
        AlphaDistribution f1 = random_distribution(rng, atoms);
        AlphaDistribution f2 = random_distribution(rng, atoms);
        TransformReport r = transform_report(f1, f2);
        nonneg &= r.cov1 >= -1e-12 && r.cov2 >= -1e-12;
        chain &= std::abs(r.h_out.first + r.h_out.second - r.h_in.first - r.h_in.second) < 1e-10;
        contract &= r.v_out.first + r.v_out.second <= r.v_in.first + r.v_in.second + 1e-10;
        decomp &= std::abs(r.cov_total - (r.v_in.first + r.v_in.second - r.v_out.first -
                                          r.v_out.second) / 2.0) < 1e-10;
    }
    b.check(nonneg, "cov_nonnegative");
    b.check(chain, "chain_rule");
    b.check(contract, "varentropy_contraction");
    b.check(decomp, "cov_decomposition");

    // Equality cases of the covariance sign result.
    {
        AlphaDistribution general = make_bsc(0.11);
        bool eq = transform_report(make_bsc(0.0), general).cov_total <= 1e-12 &&
                  transform_report(make_bec(1.0), general).cov_total <= 1e-12;
        AlphaDistribution g = random_distribution(rng, atoms);
        eq &= transform_report(make_bsc(0.0), g).cov_total <= 1e-12;
        b.check(eq, "extreme_equality");
        b.check(transform_report(make_bec(0.3), general).cov_total > 1e-6, "erasing_strict");
    }

    // Extreme-input propagation rows.
    {
        AlphaDistribution any = make_bsc(0.11);
        auto cls = [](const AlphaDistribution& f) { return classify(f); };
        auto [m1, p1] = polar_pair(make_bsc(0.0), any);
        auto [m2, p2] = polar_pair(make_bec(1.0), any);
        auto [m3, p3] = polar_pair(any, make_bsc(0.0));
        auto [m4, p4] = polar_pair(any, make_bec(1.0));
        bool ok = cls(m1).is_pure() && std::abs(cls(m1).param - 0.11) < 1e-9 && cls(p1).is_perfect();
        ok &= cls(m2).is_purely_random() && cls(p2).is_pure() && std::abs(cls(p2).param - 0.11) < 1e-9;
        ok &= cls(m3).is_pure() && std::abs(cls(m3).param - 0.11) < 1e-9 && cls(p3).is_perfect();
        ok &= cls(m4).is_purely_random() && cls(p4).is_pure() && std::abs(cls(p4).param - 0.11) < 1e-9;
        b.check(ok, "extreme_propagation");
    }

    // Closed forms against exhaustive enumeration on small supports.
    {
        bool ok = true;
        const int n = std::min(trials, 200);
        for (int t = 0; t < n; ++t) {
            AlphaDistribution f1 = random_distribution(rng, std::min(atoms, 4));
            AlphaDistribution f2 = random_distribution(rng, std::min(atoms, 4));
            ok &= std::abs(transform_report(f1, f2).cov_total -
                           oracle::enumerate_cov(f1, f2).cov) < 1e-10;
        }
        b.check(ok, "enumeration_equivalence");
    }

    // Monte-Carlo cross-checks.
    {
        bool ok = true;
        for (int t = 0; t < 3; ++t) {
            AlphaDistribution f1 = random_distribution(rng, std::min(atoms, 4));
            AlphaDistribution f2 = random_distribution(rng, std::min(atoms, 4));
            McEstimate est = estimate_cov(f1, f2, 200000, seed + 1000 + t);
            double exact = transform_report(f1, f2).cov_total;
            ok &= std::abs(est.mean - exact) <= 4.0 * est.standard_error() + 1e-9;
        }
        McEstimate bec = estimate_cov(make_bec(0.5), make_bec(0.5), 200000, seed + 2000);
        ok &= std::abs(bec.mean - 0.0625) <= 4.0 * bec.standard_error();
        b.check(ok, "mc_cross_check");
    }

    std::cout << nlohmann::json({{"passed", b.passed},
                                 {"failed", b.failed},
                                 {"trials", trials},
                                 {"atoms", atoms},
                                 {"seed", seed}})
                     .dump()
              << "\n";
    return b.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar transform density evolution and varentropy toolkit"};
    app.require_subcommand(1);

    std::string dist, dist1, dist2, out, channel = "bec", quantize_arg = "4096";
    double eps = 0.5, delta = 0.01, start = 0.0, end = 1.0, step = 0.01;
    int levels = 4, trials = 1000, atoms = 4;
    std::uint64_t seed = 42;

    auto* measure = app.add_subcommand("measure", "print H, V and class of a distribution file");
    measure->add_option("--dist", dist, "distribution JSON file")->required();

    auto* transform = app.add_subcommand("transform", "size-2 transform report for two inputs");
    transform->add_option("--dist1", dist1, "first input")->required();
    transform->add_option("--dist2", dist2, "second input")->required();
    transform->add_option("--out", out, "output JSON path (stdout if omitted)");

    auto* sweep = app.add_subcommand("sweep", "per-parameter transform curves as CSV");
    sweep->add_option("--channel", channel, "bsc or bec")->required();
    sweep->add_option("--start", start, "first parameter value");
    sweep->add_option("--end", end, "last parameter value");
    sweep->add_option("--step", step, "parameter increment");
    sweep->add_option("--out", out, "output CSV path (stdout if omitted)");

    auto* polarize = app.add_subcommand("polarize", "i.i.d. polarization trace");
    polarize->add_option("--channel", channel, "bsc or bec")->required();
    polarize->add_option("--eps", eps, "channel parameter")->required();
    polarize->add_option("--levels", levels, "number of levels");
    polarize->add_option("--delta", delta, "varentropy threshold for P_n(delta)");
    polarize->add_option("--quantize", quantize_arg, "bin count, or 'off' for exact");
    polarize->add_option("--out", out, "output base path; writes <out>.csv and <out>.json");

    auto* validate = app.add_subcommand("validate", "run the property battery");
    validate->add_option("--trials", trials, "random fixtures per property");
    validate->add_option("--atoms", atoms, "max atoms per random fixture");
    validate->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
        if (measure->parsed()) return cmd_measure(dist);
        if (transform->parsed()) return cmd_transform(dist1, dist2, out);
        if (sweep->parsed()) return cmd_sweep(channel, start, end, step, out);
        if (polarize->parsed()) return cmd_polarize(channel, eps, levels, delta, quantize_arg, out);
        if (validate->parsed()) return cmd_validate(trials, atoms, seed);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const polarv::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
