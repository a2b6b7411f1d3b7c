#pragma once

#include <string>
#include <variant>

#include "tessforest/forest.hpp"

namespace tessforest {

// ---- Closed-form expected cell counts -------------------------------------

// Axis-aligned phi on the unit cube with the rescaled lifetime convention
// (uniform basis atoms, lifetime d * lambda): E[N] = (1 + lambda)^d.
struct MondrianCubeCount {
    int d = 2;
    double lambda = 1.0;
};

// Isotropic phi, body given by its intrinsic volumes V_0..V_d.
struct IsotropicBodyCount {
    int d = 2;
    double lambda = 1.0;
    std::vector<double> intrinsic_volumes;
};

// Isotropic phi, ball window of the given radius.
struct IsotropicBallCount {
    int d = 2;
    double lambda = 1.0;
    double radius = 1.0;
};

using ClosedFormCount = std::variant<MondrianCubeCount, IsotropicBodyCount, IsotropicBallCount>;

double expected_cell_count(const ClosedFormCount& c);

// gamma_j = Gamma((j+1)/2) Gamma(d/2) / (Gamma(j/2) Gamma((d+1)/2)), j >= 1.
double gamma_j(int j, int d);
// kappa_k = volume of the unit ball in R^k.
double kappa_k(int k);

// ---- Kolmogorov-Smirnov ----------------------------------------------------

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sided two-sample KS with the asymptotic p-value at effective size
// |a||b|/(|a|+|b|). Requires both samples of size >= 50.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function of the Kolmogorov distribution (also usable for
// one-sample tests at t = sqrt(n) * D).
double kolmogorov_sf(double t);

// ---- Tuning rules ----------------------------------------------------------

enum class TuneRule { C0, C1 };

// lambda_n = L^{2/(d+2b)} n^{1/(d+2b)}         (C0)
//          = L^{2/(d+2b+2)} n^{1/(d+2b+2)}     (C1)
double tune_lambda(TuneRule rule, double n, double L, int d, double beta);

// M_n = ceil(L^{4b/(d+2b+2)} n^{2b/(d+2b+2)}), at least 1; values within
// 1e-9 of an integer snap to it before rounding up.
int tune_forest_size(double n, double L, int d, double beta);

// ---- Target function catalog ----------------------------------------------

enum class SmoothnessClass { C0Beta, C1Beta };

struct CatalogTarget {
    TargetFn f;
    std::string name;
    double sup_norm = 0.0;
};

// Targets with certified Hoelder-class membership (see the derivations in
// stats.cpp next to each family).
CatalogTarget make_target(SmoothnessClass cls, int d, double beta, double L, const Window& w);

// ---- Rate experiments -------------------------------------------------------

struct RateExperiment {
    int d = 1;
    double beta = 1.0;
    SmoothnessClass smoothness = SmoothnessClass::C0Beta;
    double L = 1.0;
    double sigma = 0.1;
    std::vector<std::size_t> n_grid;
    int reps = 50;
    TuneRule tuning = TuneRule::C0;
    bool forest_size_rule = false; // M_n from tune_forest_size; otherwise M = 1
    DirectionalDistribution phi = DirectionalDistribution::axis(1);
    SamplerKind sampler = SamplerKind::Stit;
    Window window{BoxWindow{{0.0}, {1.0}}};
    std::size_t n_test = 2000;
};

struct RatePoint {
    std::size_t n = 0;
    double lambda = 0.0;
    int m_trees = 1;
    double mean_risk = 0.0;
    double std_error = 0.0;
    std::vector<double> rep_risks;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;
    std::vector<RatePoint> points;
};

RateFit run_rate_experiment(const RateExperiment& e, RngStream stream, int threads = 0);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
};

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

// ---- Bias-variance decomposition -------------------------------------------

struct MeanSe {
    double mean = 0.0;
    double std_error = 0.0;
};

struct BiasVarianceReport {
    MeanSe total;       // E[(f - fhat)^2]
    MeanSe bias;        // E[(f - fbar_lambda)^2], fbar from the in-cell oracle
    MeanSe variance;    // E[(fbar_lambda - fhat)^2]
    MeanSe forest_bias; // E[(fbar_{lambda,M} - f)^2] at the given M
    MeanSe tilde_bias;  // E[(ftilde_lambda - f)^2], partition-averaged
    MeanSe gap;         // per-replicate total - bias - variance (0 in expectation)
};

struct BiasVarianceConfig {
    SamplerKind sampler = SamplerKind::Stit;
    Window window{BoxWindow{{0.0}, {1.0}}};
    DirectionalDistribution phi = DirectionalDistribution::axis(1);
    double lambda = 10.0;
    std::size_t n = 500;
    int m_trees = 1;
    double sigma = 0.1;
    int reps = 200;
    std::size_t n_test = 512;
    std::size_t oracle_per_cell = 1000;
};

BiasVarianceReport bias_variance_study(const BiasVarianceConfig& cfg, const TargetFn& f,
                                       const MuSampler& mu, RngStream stream, int threads = 0);

// Oracle for fbar_lambda: per-cell means of f under mu, with at least
// `min_per_cell` samples in every queried cell (subject to a global draw cap).
class CellMeanOracle {
public:
    CellMeanOracle(const Partition& p, const MuSampler& mu, const TargetFn& f,
                   std::size_t min_per_cell, RngStream& rng);

    // Mean of f over x's cell; falls back to f(x) when the cell was never hit.
    double value_at(const Vec& x) const;

private:
    const Partition& p_;
    const TargetFn& f_;
    AggregateMap table_;
};

MeanSe mean_se(const std::vector<double>& values);

} // namespace tessforest
