#include "tessforest/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tessforest/parallel.hpp"

namespace tessforest {

double gamma_j(int j, int d) {
    if (j < 1) throw std::invalid_argument("gamma_j: j must be >= 1");
    return std::tgamma((j + 1) / 2.0) * std::tgamma(d / 2.0) /
           (std::tgamma(j / 2.0) * std::tgamma((d + 1) / 2.0));
}

double kappa_k(int k) {
    return std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
}

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

double binomial(int n, int k) {
    return std::round(factorial(n) / (factorial(k) * factorial(n - k)));
}

struct CountEval {
    double operator()(const MondrianCubeCount& c) const {
        return std::pow(1.0 + c.lambda, c.d);
    }
    double operator()(const IsotropicBodyCount& c) const {
        if (static_cast<int>(c.intrinsic_volumes.size()) != c.d + 1)
            throw std::invalid_argument("expected_cell_count: need V_0..V_d");
        if (std::abs(c.intrinsic_volumes[0] - 1.0) > 1e-12)
            throw std::invalid_argument("expected_cell_count: V_0 must be 1");
        double total = 0.0;
        double gamma_prod = 1.0; // empty product for k = 0
        for (int k = 0; k <= c.d; ++k) {
            if (k >= 1) gamma_prod *= gamma_j(k, c.d);
            double vk = c.intrinsic_volumes[static_cast<std::size_t>(k)];
            if (vk < 0.0) throw std::invalid_argument("expected_cell_count: V_k must be >= 0");
            total += gamma_prod * std::pow(c.lambda, k) / factorial(k) * vk;
        }
        return total;
    }
    double operator()(const IsotropicBallCount& c) const {
        // V_k of the associated zonoid, a ball of radius c_d.
        double cd = std::tgamma(c.d / 2.0) /
                    (2.0 * std::sqrt(std::numbers::pi) * std::tgamma((c.d + 1) / 2.0));
        double total = 0.0;
        for (int k = 0; k <= c.d; ++k) {
            double vk_pi = binomial(c.d, k) * kappa_k(c.d) / kappa_k(c.d - k) * std::pow(cd, k);
            total += std::pow(c.lambda * c.radius, k) * kappa_k(k) * vk_pi;
        }
        return total;
    }
};

} // namespace

double expected_cell_count(const ClosedFormCount& c) { return std::visit(CountEval{}, c); }

double kolmogorov_sf(double t) {
    if (t <= 1e-12) return 1.0;
    if (t < 1.0) {
        // Theta-transformed series, accurate for small t.
        double sum = 0.0;
        for (int k = 1; k <= 21; k += 2) {
            double e = std::exp(-k * k * std::numbers::pi * std::numbers::pi / (8.0 * t * t));
            if (e < 1e-300) break;
            sum += e;
        }
        double cdf = std::sqrt(2.0 * std::numbers::pi) / t * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * k * k * t * t);
        if (term < 1e-300) break;
        sum += (k % 2 == 1) ? term : -term;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 50 || b.size() < 50)
        throw std::invalid_argument("ks_two_sample: both samples need >= 50 values");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double ne = na * nb / (na + nb);
    return {d, kolmogorov_sf(std::sqrt(ne) * d)};
}

double tune_lambda(TuneRule rule, double n, double L, int d, double beta) {
    if (n < 1.0 || L <= 0.0 || beta <= 0.0 || beta > 1.0)
        throw std::invalid_argument("tune_lambda: bad arguments");
    double denom = rule == TuneRule::C0 ? d + 2.0 * beta : d + 2.0 * beta + 2.0;
    return std::pow(L, 2.0 / denom) * std::pow(n, 1.0 / denom);
}

int tune_forest_size(double n, double L, int d, double beta) {
    if (n < 1.0 || L <= 0.0 || beta <= 0.0 || beta > 1.0)
        throw std::invalid_argument("tune_forest_size: bad arguments");
    double denom = d + 2.0 * beta + 2.0;
    double v = std::pow(L, 4.0 * beta / denom) * std::pow(n, 2.0 * beta / denom);
    double r = std::round(v);
    double m = std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : std::ceil(v);
    return static_cast<int>(std::max(1.0, m));
}

CatalogTarget make_target(SmoothnessClass cls, int d, double beta, double L, const Window& w) {
    if (!(beta > 0.0 && beta <= 1.0) || L <= 0.0)
        throw std::invalid_argument("make_target: bad class parameters");
    Vec center(static_cast<std::size_t>(d), 0.0);
    double diam = 0.0;
    if (w.is_box()) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < w.box().lower.size(); ++i) {
            center[i] = 0.5 * (w.box().lower[i] + w.box().upper[i]);
            double e = w.box().upper[i] - w.box().lower[i];
            d2 += e * e;
        }
        diam = std::sqrt(d2);
    } else {
        center = w.ball().center;
        diam = 2.0 * w.ball().radius;
    }

    if (cls == SmoothnessClass::C0Beta && beta < 1.0) {
        // f(x) = L ||x - x0||^beta. Beta-Hoelder with constant exactly L
        // since | ||u||^b - ||v||^b | <= | ||u|| - ||v|| |^b <= ||u-v||^b.
        // Sup norm L (diam/2)^beta, within the ball for diam <= 2.
        CatalogTarget t;
        t.name = "distance_pow";
        t.sup_norm = L * std::pow(diam / 2.0, beta);
        t.f = [L, beta, center](const Vec& x) { return L * std::pow(norm2(sub(x, center)), beta); };
        return t;
    }

    // Sine family f(x) = (L/2) sum_i sin(omega (x_i - x0_i)).
    // Per-coordinate derivative: (L omega / 2) cos(..), so
    //   ||grad f||_2 <= (L omega / 2) sqrt(d)       -> omega <= 2/sqrt(d)
    //   Lip(grad f)  <= L omega^2 / 2               -> omega <= sqrt(2)
    // and for beta < 1 the gradient is beta-Hoelder on the window when
    //   (omega^2/2) diam^{1-beta} <= 1             -> omega <= sqrt(2/diam^{1-beta}).
    // The minimum of the three keeps f in both C^{0,1}(L) and C^{1,beta}(L).
    double omega = std::min(2.0 / std::sqrt(static_cast<double>(d)), std::numbers::sqrt2);
    if (beta < 1.0)
        omega = std::min(omega, std::sqrt(2.0 / std::pow(std::max(1.0, diam), 1.0 - beta)));
    CatalogTarget t;
    t.name = "sine_sum";
    t.sup_norm = L / 2.0 * d;
    t.f = [L, omega, center](const Vec& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += std::sin(omega * (x[i] - center[i]));
        return 0.5 * L * s;
    };
    return t;
}

MeanSe mean_se(const std::vector<double>& values) {
    double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols_fit: bad input");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

RateFit run_rate_experiment(const RateExperiment& e, RngStream stream, int threads) {
    if (e.n_grid.size() < 4) throw std::invalid_argument("rate experiment: need >= 4 grid points");
    for (std::size_t i = 1; i < e.n_grid.size(); ++i)
        if (e.n_grid[i] <= e.n_grid[i - 1])
            throw std::invalid_argument("rate experiment: n_grid must be strictly increasing");

    CatalogTarget target = make_target(e.smoothness, e.d, e.beta, e.L, e.window);
    MuSampler mu = MuSampler::uniform(e.window);

    RateFit fit;
    fit.points.resize(e.n_grid.size());
    for (std::size_t i = 0; i < e.n_grid.size(); ++i) {
        RatePoint& pt = fit.points[i];
        pt.n = e.n_grid[i];
        double n = static_cast<double>(pt.n);
        pt.lambda = tune_lambda(e.tuning, n, e.L, e.d, e.beta);
        pt.m_trees = e.forest_size_rule ? tune_forest_size(n, e.L, e.d, e.beta) : 1;
        pt.rep_risks.assign(static_cast<std::size_t>(e.reps), 0.0);
    }

    std::size_t jobs = e.n_grid.size() * static_cast<std::size_t>(e.reps);
    RngStream root = stream.child("rate_experiment");
    parallel_for_index(jobs, threads, [&](std::size_t job) {
        std::size_t i = job / static_cast<std::size_t>(e.reps);
        std::size_t r = job % static_cast<std::size_t>(e.reps);
        RatePoint& pt = fit.points[i];
        RngStream s = root.child(i).child(r);
        RngStream data_rng = s.child("data");
        Dataset data = sample_dataset(mu, target.f, e.sigma, pt.n, e.d, data_rng);
        ForestModel forest = fit_forest(e.sampler, e.window, e.phi, pt.lambda, pt.m_trees, data,
                                        s.child("trees"));
        RngStream test_rng = s.child("test");
        pt.rep_risks[r] = estimate_risk(forest, target.f, mu, e.n_test, test_rng).risk;
    });

    std::vector<double> lx, ly;
    for (auto& pt : fit.points) {
        MeanSe ms = mean_se(pt.rep_risks);
        pt.mean_risk = ms.mean;
        pt.std_error = ms.std_error;
        if (pt.mean_risk < 1e-14) fit.degenerate = true;
        lx.push_back(std::log(static_cast<double>(pt.n)));
        ly.push_back(pt.mean_risk > 0.0 ? std::log(pt.mean_risk) : 0.0);
    }
    if (!fit.degenerate) {
        OlsFit o = ols_fit(lx, ly);
        fit.slope = o.slope;
        fit.intercept = o.intercept;
    }
    return fit;
}

CellMeanOracle::CellMeanOracle(const Partition& p, const MuSampler& mu, const TargetFn& f,
                               std::size_t min_per_cell, RngStream& rng)
    : p_(p), f_(f) {
    std::size_t n_cells = p.cell_count();
    std::size_t satisfied = 0;
    std::size_t draws = 0;
    const std::size_t cap = 20000000;
    while (satisfied < n_cells && draws < cap) {
        for (std::size_t k = 0; k < 8192; ++k) {
            Vec x = mu.sample(rng);
            CellAggregate& a = table_[p.cell_of(x)];
            a.count += 1;
            a.sum_y += f(x);
            if (a.count == min_per_cell) ++satisfied;
        }
        draws += 8192;
    }
}

double CellMeanOracle::value_at(const Vec& x) const {
    auto it = table_.find(p_.cell_of(x));
    if (it == table_.end() || it->second.count == 0) return f_(x);
    return it->second.sum_y / static_cast<double>(it->second.count);
}

BiasVarianceReport bias_variance_study(const BiasVarianceConfig& cfg, const TargetFn& f,
                                       const MuSampler& mu, RngStream stream, int threads) {
    if (cfg.reps < 100) throw std::invalid_argument("bias_variance_study: reps must be >= 100");
    std::size_t reps = static_cast<std::size_t>(cfg.reps);
    std::vector<double> total(reps), bias(reps), variance(reps), forest_bias(reps),
        tilde_bias(reps), gap(reps);

    RngStream root = stream.child("bias_variance");
    parallel_for_index(reps, threads, [&](std::size_t r) {
        RngStream s = root.child(r);
        RngStream part_rng = s.child("partition");
        Partition p = sample_partition(cfg.sampler, cfg.window, cfg.phi, cfg.lambda, part_rng);
        RngStream data_rng = s.child("data");
        Dataset data =
            sample_dataset(mu, f, cfg.sigma, cfg.n, cfg.window.dim(), data_rng);
        TreeModel tree = fit_tree(std::make_shared<Partition>(p), data);
        RngStream oracle_rng = s.child("oracle");
        CellMeanOracle oracle(p, mu, f, cfg.oracle_per_cell, oracle_rng);

        // Independent partitions (and oracles) for the forest-bias terms.
        std::vector<Partition> fparts;
        std::vector<CellMeanOracle> foracles;
        fparts.reserve(static_cast<std::size_t>(cfg.m_trees)); // oracles keep references
        foracles.reserve(static_cast<std::size_t>(cfg.m_trees));
        RngStream forest_rng = s.child("forest");
        for (int m = 0; m < cfg.m_trees; ++m) {
            fparts.push_back(sample_partition(cfg.sampler, cfg.window, cfg.phi, cfg.lambda,
                                              forest_rng.child(static_cast<std::uint64_t>(m))));
            RngStream orng = forest_rng.child(static_cast<std::uint64_t>(m)).child("oracle");
            foracles.emplace_back(fparts.back(), mu, f, cfg.oracle_per_cell, orng);
        }

        RngStream test_rng = s.child("test");
        double t_acc = 0.0, b_acc = 0.0, v_acc = 0.0, fb_acc = 0.0, tb_acc = 0.0;
        for (std::size_t j = 0; j < cfg.n_test; ++j) {
            Vec x = mu.sample(test_rng);
            double fx = f(x);
            double fhat = tree.predict(x);
            double fbar = oracle.value_at(x);
            t_acc += (fx - fhat) * (fx - fhat);
            b_acc += (fx - fbar) * (fx - fbar);
            v_acc += (fbar - fhat) * (fbar - fhat);

            double fm = 0.0;
            double fm2 = 0.0;
            for (const auto& om : foracles) {
                double v = om.value_at(x);
                fm += v;
                fm2 += v * v;
            }
            double m = static_cast<double>(cfg.m_trees);
            fm /= m;
            double fb = (fm - fx) * (fm - fx);
            fb_acc += fb;
            if (cfg.m_trees >= 2) {
                // Unbiased (ftilde - f)^2: subtract the within-forest
                // sampling variance of the mean.
                double s2 = (fm2 - m * fm * fm) / (m - 1.0);
                tb_acc += fb - s2 / m;
            } else {
                tb_acc += fb;
            }
        }
        double nt = static_cast<double>(cfg.n_test);
        total[r] = t_acc / nt;
        bias[r] = b_acc / nt;
        variance[r] = v_acc / nt;
        forest_bias[r] = fb_acc / nt;
        tilde_bias[r] = tb_acc / nt;
        gap[r] = total[r] - bias[r] - variance[r];
    });

    BiasVarianceReport rep;
    rep.total = mean_se(total);
    rep.bias = mean_se(bias);
    rep.variance = mean_se(variance);
    rep.forest_bias = mean_se(forest_bias);
    rep.tilde_bias = mean_se(tilde_bias);
    rep.gap = mean_se(gap);
    return rep;
}

} // namespace tessforest
