#pragma once

#include "tessforest/serialize.hpp"
#include "tessforest/stats.hpp"

namespace tessforest {

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0; // allowed |observed - expected|
    std::string detail;
    double seconds = 0.0;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double elapsed_seconds = 0.0;
    // Extra deterministic output files (name -> content), e.g. the per-(n,
    // rep) CSV rows of rate experiments.
    std::vector<std::pair<std::string, std::string>> artifacts;

    bool pass() const;
    const CheckResult* find(const std::string& name) const;
    // Deterministic for a fixed (seed, format version): timings stay out of
    // the document and are only printed.
    Json to_json() const;
};

struct VerifyOptions {
    std::uint64_t seed = 0x7E55F05EEDULL;
    int threads = 0; // 0: all available
};

// Suites runnable from the CLI; sample sizes and tolerances are pinned in
// the implementation.
//   geometry — LP solver properties, cell-geometry properties, sampler laws,
//              zonoid closed forms, expected cell counts, zero-cell scaling
//              and centering
//   markov   — iteration property (cell-count law equality)
//   equality — STIT vs Poisson hyperplane zero-cell law equality
//   rates    — minimax-rate slope experiments
//   biasvar  — risk decomposition and forest dominance studies
SuiteReport run_geometry_suite(const VerifyOptions& opt);
SuiteReport run_markov_suite(const VerifyOptions& opt);
SuiteReport run_equality_suite(const VerifyOptions& opt);
SuiteReport run_rates_suite(const VerifyOptions& opt);
SuiteReport run_biasvar_suite(const VerifyOptions& opt);

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const VerifyOptions& opt);

} // namespace tessforest
