// One line per acceptance criterion. Exit status is the number of failures.
// BLOWUP_SLOW_BUDGET=<seconds> adds the n=4 unisolvence and cohomology runs.

#include "blowup/suites.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace blowup;

namespace {

// wall-clock limits per criterion, seconds
constexpr double kTableSeconds = 5;
constexpr double kUnisolvenceSeconds = 60;
constexpr double kDerivativeSeconds = 60;
constexpr double kWhitneySeconds = 10;
constexpr double kCohomologySeconds = 30;
constexpr double kHigherSeconds = 30;
constexpr double kMonteCarloSeconds = 300;
constexpr double kGlobalSeconds = 120;

// Monte Carlo settings
constexpr std::uint64_t kSamples = 100000;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = true;
    std::string detail;

    void add(const SuiteResult& r) {
        pass = pass && r.pass && r.complete;
        if (!detail.empty()) detail += "; ";
        detail += r.summary;
    }
    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double slow_budget() {
    const char* s = std::getenv("BLOWUP_SLOW_BUDGET");
    return s ? std::atof(s) : 0.0;
}

int failures = 0;

void criterion(int id, double limit, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit) {
        o.pass = false;
        o.detail += "; over time limit " + std::to_string(static_cast<int>(limit)) + " s";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s: %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
}

}  // namespace

int main() {
    const Deadline none;

    criterion(1, kTableSeconds, [] {
        Outcome o;
        for (int n : {2, 3}) {
            SuiteResult r = table_check(n);
            o.add(r);
            o.require(r.results["matched"].get<std::size_t>() == (n == 2 ? 4u : 8u), "entry count off");
        }
        return o;
    });

    criterion(2, kUnisolvenceSeconds, [&] {
        Outcome o;
        for (int n : {1, 2, 3}) o.add(unisolvence(n, -1, none, false));
        return o;
    });

    criterion(3, kDerivativeSeconds, [&] {
        Outcome o;
        for (int n : {1, 2, 3}) o.add(d_check(n, none));
        return o;
    });

    criterion(4, kWhitneySeconds, [&] {
        Outcome o;
        for (int n : {1, 2, 3}) o.add(whitney_check(n, none));
        return o;
    });

    criterion(5, kCohomologySeconds, [&] {
        Outcome o;
        const std::vector<std::vector<std::size_t>> f = {{2, 1}, {6, 6, 1}, {24, 36, 14, 1}};
        for (int n : {1, 2, 3}) {
            SuiteResult r = local_cohomology(n, none);
            o.add(r);
            o.require(r.results["f_vector"].get<std::vector<std::size_t>>() == f[static_cast<std::size_t>(n - 1)],
                      "f-vector off for n=" + std::to_string(n));
        }
        return o;
    });

    criterion(6, kCohomologySeconds, [] {
        Outcome o;
        for (int n : {1, 2, 3}) o.add(partition_of_unity(n));
        return o;
    });

    criterion(7, kHigherSeconds, [&] {
        Outcome o;
        SuiteResult r = higher_order(2, 3, HigherOrderChecks{}, none);
        o.add(r);
        o.require(r.results["count"].get<std::size_t>() == 19, "candidate count is not 19");
        o.require(r.results.contains("vanishing"), "vanishing census missing");
        // rank is evidence for an open question; a shortfall is reported only
        if (r.results.contains("independence") && !r.results["independence"]["independent"].get<bool>())
            o.detail += "; rank below 19 (reported)";
        return o;
    });

    criterion(8, kMonteCarloSeconds, [&] {
        Outcome o;
        o.add(mc_verify(McTarget::PF, 3, 1, kSamples, kSeed, none));
        o.add(mc_verify(McTarget::Higher, 2, 3, kSamples, kSeed + 1, none));
        return o;
    });

    criterion(9, kGlobalSeconds, [&] {
        Outcome o;
        SuiteResult r = global_assembly(bundled_meshes(), all_rules(), none);
        o.add(r);
        for (const auto& row : r.results["runs"]) {
            const std::string name = row["mesh"].get<std::string>();
            if (row["rule"] != "general" || (name != "torus7" && name != "octahedron")) continue;
            o.detail += "; " + name + " betti " + row["betti_blowup"].dump() + " vs simplicial " +
                        row["betti_simplicial"].dump() + " (reported)";
        }
        return o;
    });

    if (double budget = slow_budget(); budget > 0) {
        Deadline d(budget);
        SuiteResult u = unisolvence(4, -1, d, false);
        std::printf("slow: %s: %s\n", u.pass ? (u.complete ? "PASS" : "INCOMPLETE") : "FAIL", u.summary.c_str());
        SuiteResult c = local_cohomology(4, d);
        std::printf("slow: %s: %s\n", c.pass ? (c.complete ? "PASS" : "INCOMPLETE") : "FAIL", c.summary.c_str());
        if (!u.pass || !c.pass) ++failures;
    }

    return failures;
}
