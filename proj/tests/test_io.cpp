#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "polarv/dist.hpp"
#include "polarv/io.hpp"
#include "polarv/mc.hpp"
#include "polarv/polar_tree.hpp"
#include "polarv/random.hpp"

using namespace polarv;

TEST_CASE("distribution json round trip") {
    CounterRng rng(71);
    for (int t = 0; t < 50; ++t) {
        auto f = random_distribution(rng, 8);
        auto g = io::distribution_from_json(io::distribution_to_json(f));
        REQUIRE(g.size() == f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            CHECK(g.atoms()[i].alpha == f.atoms()[i].alpha);
            CHECK(g.atoms()[i].mass == f.atoms()[i].mass);
        }
    }
}

TEST_CASE("parser enforces invariants and merges duplicates") {
    auto merged = io::distribution_from_json(
        nlohmann::json::parse(R"({"atoms":[{"alpha":0.3,"mass":0.5},{"alpha":0.3,"mass":0.5}]})"));
    CHECK(merged.size() == 1);
    CHECK(merged.atoms()[0].mass == 1.0);

    CHECK_THROWS(io::distribution_from_json(nlohmann::json::parse(R"({"atoms":[]})")));
    CHECK_THROWS(io::distribution_from_json(
        nlohmann::json::parse(R"({"atoms":[{"alpha":0.3,"mass":0.9}]})")));
    CHECK_THROWS(io::distribution_from_json(
        nlohmann::json::parse(R"({"atoms":[{"alpha":1.7,"mass":1.0}]})")));
    CHECK_THROWS(io::distribution_from_json(nlohmann::json::parse(R"({"x":1})")));
    CHECK_THROWS(io::distribution_from_json(
        nlohmann::json::parse(R"({"atoms":[{"alpha":0.3}]})")));
}

TEST_CASE("report json carries the fixed field names") {
    auto j = io::report_to_json(transform_report(make_bec(0.5), make_bec(0.5)));
    for (const char* key :
         {"f_minus", "f_plus", "h_in", "v_in", "h_out", "v_out", "cov1", "cov2", "cov_total"})
        CHECK(j.contains(key));
    CHECK(j["cov_total"].get<double>() == doctest::Approx(0.0625).epsilon(1e-13));
    CHECK(j["f_minus"].contains("atoms"));
}

TEST_CASE("numeric formatting is full precision") {
    CHECK(io::num(0.1) == "0.10000000000000001");
    CHECK(io::num(0.5) == "0.5");
    CHECK(io::num(-0.0625) == "-0.0625");
    double x = 0.1234567890123456789;
    CHECK(std::stod(io::num(x)) == x);  // round trip
}

TEST_CASE("trace csv layout") {
    auto trace = polarize_iid(make_bec(0.5), 2, 0.01);
    std::string csv = io::trace_to_csv(trace);
    CHECK(csv.rfind("n,v_bar,d_n,p_n_delta,h0,", 0) == 0);
    CHECK(csv.find("\n0,0.25,0,") != std::string::npos);
    CHECK(csv.find("\n1,0.1875,-0.0625,") != std::string::npos);
    // one header plus one row per level
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    auto j = io::trace_to_json(trace);
    REQUIRE(j["levels"].size() == 3);
    CHECK(j["levels"][1]["v_bar"].get<double>() == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(j["levels"][2]["entropy_histogram"].size() == 101);
}
