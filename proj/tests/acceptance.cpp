// Acceptance suite: runs every verification suite and prints one pass/fail
// line per acceptance criterion. Exit code 0 iff all criteria pass.

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "tessforest/parallel.hpp"
#include "tessforest/verify.hpp"

using namespace tessforest;

namespace {

struct CriterionResult {
    int number;
    std::string title;
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const CheckResult& need(const SuiteReport& r, const char* name) {
    const CheckResult* c = r.find(name);
    if (!c) {
        static CheckResult missing;
        missing.name = std::string("MISSING:") + name;
        missing.pass = false;
        return missing;
    }
    return *c;
}

std::string describe(const CheckResult& c) {
    return c.name + " observed=" + fmt(c.observed) + " expected=" + fmt(c.expected) +
           (c.tolerance > 0.0 ? " tol=" + fmt(c.tolerance) : "") + " [" + fmt(c.seconds) + "s]";
}

} // namespace

int main(int argc, char** argv) {
    VerifyOptions opt;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0) opt.seed = std::strtoull(argv[i + 1], nullptr, 10);
        if (std::strcmp(argv[i], "--threads") == 0) opt.threads = std::atoi(argv[i + 1]);
    }
    bool single_threaded = resolve_threads(opt.threads) == 1;

    std::printf("running geometry suite...\n");
    SuiteReport geometry = run_geometry_suite(opt);
    std::printf("running markov suite...\n");
    SuiteReport markov = run_markov_suite(opt);
    std::printf("running equality suite...\n");
    SuiteReport equality = run_equality_suite(opt);
    std::printf("running biasvar suite...\n");
    SuiteReport biasvar = run_biasvar_suite(opt);
    std::printf("running rates suite...\n");
    SuiteReport rates = run_rates_suite(opt);

    std::vector<CriterionResult> results;

    {
        const CheckResult& c = need(geometry, "mondrian_cell_count");
        bool in_time = c.seconds < 60.0;
        results.push_back({1, "Mondrian cell count (1+lambda)^d = 25", c.pass && in_time,
                           describe(c) + (in_time ? "" : " RUNTIME>60s")});
    }
    {
        const CheckResult& c = need(geometry, "isotropic_cell_count");
        results.push_back({2, "isotropic cell count 1 + 8/pi + 4/pi", c.pass, describe(c)});
    }
    {
        const CheckResult& a = need(geometry, "zero_cell_scaling_axis");
        const CheckResult& b = need(geometry, "zero_cell_scaling_isotropic");
        const CheckResult& d = need(geometry, "zero_cell_scaling_discard_rate");
        results.push_back({3, "zero-cell scaling, lambda in {1,2,4}, k=1,2",
                           a.pass && b.pass && d.pass,
                           describe(a) + "; " + describe(b) + "; discard " + fmt(d.observed)});
    }
    {
        std::string detail;
        bool ok = true;
        for (const char* name : {"zero_cell_volume_ks_axis", "zero_cell_diameter_ks_axis",
                                 "zero_cell_volume_ks_isotropic", "zero_cell_diameter_ks_isotropic"}) {
            const CheckResult& c = need(equality, name);
            ok = ok && c.pass;
            detail += std::string(name) + " p=" + fmt(c.observed) + "; ";
        }
        results.push_back({4, "STIT-PHT zero-cell equality (KS p > 0.01)", ok, detail});
    }
    {
        const CheckResult& c = need(markov, "iterate_cell_count_ks");
        results.push_back({5, "Markov/iteration property (KS p > 0.01)", c.pass,
                           "p=" + fmt(c.observed) + " " + describe(c)});
    }
    {
        const CheckResult& c = need(geometry, "zero_cell_centering");
        results.push_back({6, "zero-cell centering E[centroid] = 0", c.pass, describe(c)});
    }
    {
        const CheckResult& c = need(rates, "c0_tree_slope");
        bool in_time = !single_threaded || c.seconds < 900.0;
        results.push_back({7, "Hoelder tree rate slope -2/3 +- 0.15", c.pass && in_time,
                           describe(c) + (in_time ? "" : " RUNTIME>15min")});
    }
    {
        const CheckResult& a = need(rates, "c1_forest_slope");
        const CheckResult& b = need(rates, "c1_forest_steeper_than_tree");
        results.push_back({8, "smooth forest rate slope -4/5 +- 0.15, steeper than tree",
                           a.pass && b.pass, describe(a) + "; margin=" + fmt(b.observed)});
    }
    {
        const CheckResult& c = need(rates, "c0_tree_slope_pht");
        results.push_back({9, "criterion-7 rate with the PHT sampler", c.pass, describe(c)});
    }
    {
        const CheckResult& c = need(biasvar, "risk_decomposition");
        results.push_back({10, "risk decomposition total = bias + variance", c.pass, describe(c)});
    }
    {
        const CheckResult& c = need(biasvar, "forest_dominance");
        results.push_back({11, "forest risk <= mean tree risk (Jensen)", c.pass, describe(c)});
    }
    {
        // Remaining geometry property checks plus their runtime budget.
        bool ok = true;
        double seconds = 0.0;
        std::string failed;
        for (const auto& c : geometry.checks) {
            if (c.name.rfind("mondrian_cell_count", 0) == 0 ||
                c.name.rfind("isotropic_cell_count", 0) == 0 ||
                c.name.rfind("zero_cell_scaling", 0) == 0 ||
                c.name.rfind("zero_cell_centering", 0) == 0)
                continue;
            seconds += c.seconds;
            if (!c.pass) {
                ok = false;
                failed += c.name + " ";
            }
        }
        bool in_time = seconds < 300.0;
        results.push_back({12, "LP/geometry/sampler property suites under 5 min",
                           ok && in_time,
                           "property checks " + std::string(ok ? "pass" : ("FAILED: " + failed)) +
                               ", " + fmt(seconds) + "s"});
    }

    std::printf("\n");
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::printf("criterion %2d %s  %s\n    %s\n", r.number, r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.detail.c_str());
    }
    std::printf("\nacceptance: %s (%zu/%zu criteria)\n", all ? "PASS" : "FAIL",
                static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                       [](const CriterionResult& r) { return r.pass; })),
                results.size());
    return all ? 0 : 1;
}
