#include "tessforest/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tessforest/parallel.hpp"

namespace tessforest {

bool SuiteReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const CheckResult* SuiteReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

Json SuiteReport::to_json() const {
    Json checks_json = Json::array();
    for (const auto& c : checks) {
        checks_json.push_back(Json{{"name", c.name},
                                   {"pass", c.pass},
                                   {"observed", c.observed},
                                   {"expected", c.expected},
                                   {"tolerance", c.tolerance},
                                   {"detail", c.detail}});
    }
    return Json{{"format_version", kFormatVersion},
                {"suite", suite},
                {"pass", pass()},
                {"checks", checks_json}};
}

namespace {

using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point t0) {
    return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

// chi-square 0.99 quantiles for 1..6 degrees of freedom.
constexpr double kChi2Q99[] = {6.634897, 9.210340, 11.344867, 13.276704, 15.086272, 16.811894};

class SuiteBuilder {
public:
    explicit SuiteBuilder(std::string name) : start_(SteadyClock::now()) { report_.suite = std::move(name); }

    // |observed - expected| <= tolerance
    CheckResult& within(const std::string& name, double observed, double expected,
                        double tolerance, const std::string& detail = "") {
        CheckResult c;
        c.name = name;
        c.observed = observed;
        c.expected = expected;
        c.tolerance = tolerance;
        c.pass = std::abs(observed - expected) <= tolerance;
        c.detail = detail;
        c.seconds = take_time();
        report_.checks.push_back(std::move(c));
        return report_.checks.back();
    }

    // observed >= threshold (e.g. p-values)
    CheckResult& at_least(const std::string& name, double observed, double threshold,
                          const std::string& detail = "") {
        CheckResult c;
        c.name = name;
        c.observed = observed;
        c.expected = threshold;
        c.tolerance = 0.0;
        c.pass = observed >= threshold;
        c.detail = detail;
        c.seconds = take_time();
        report_.checks.push_back(std::move(c));
        return report_.checks.back();
    }

    // observed <= threshold
    CheckResult& at_most(const std::string& name, double observed, double threshold,
                         const std::string& detail = "") {
        CheckResult c;
        c.name = name;
        c.observed = observed;
        c.expected = threshold;
        c.tolerance = 0.0;
        c.pass = observed <= threshold;
        c.detail = detail;
        c.seconds = take_time();
        report_.checks.push_back(std::move(c));
        return report_.checks.back();
    }

    void artifact(std::string name, std::string content) {
        report_.artifacts.emplace_back(std::move(name), std::move(content));
    }

    SuiteReport finish() {
        report_.elapsed_seconds = seconds_since(start_);
        return std::move(report_);
    }

private:
    double take_time() {
        auto now = SteadyClock::now();
        double dt = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return dt;
    }

    SuiteReport report_;
    SteadyClock::time_point start_;
    SteadyClock::time_point last_ = SteadyClock::now();
};

Vec random_unit(RngStream& rng, int d) {
    Vec u(static_cast<std::size_t>(d));
    double n = 0.0;
    do {
        for (auto& c : u) c = rng.normal();
        n = norm2(u);
    } while (n < 1e-8);
    for (auto& c : u) c /= n;
    return u;
}

// A nonempty cell: the unit square refined by a few random cuts.
HPolytope random_cell(RngStream& rng, int cuts) {
    HPolytope cell = HPolytope::from_box({0.0, 0.0}, {1.0, 1.0});
    for (int k = 0; k < cuts; ++k) {
        Vec u = random_unit(rng, 2);
        double hi = support(cell, u);
        double lo = -support(cell, scaled(u, -1.0));
        double t = lo + (0.25 + 0.5 * rng.uniform()) * (hi - lo);
        SplitResult sr = split(cell, {u, t});
        if (sr.below && sr.above)
            cell = rng.uniform() < 0.5 ? std::move(*sr.below) : std::move(*sr.above);
    }
    return cell;
}

// Andrew's monotone chain; returns the hull counterclockwise. Test oracle
// for the LP: the support function of a V-polytope is a max over vertices.
std::vector<Vec> hull_2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// geometry suite
// ---------------------------------------------------------------------------

void check_lp_duality(SuiteBuilder& sb, RngStream root) {
    double worst = 0.0;
    for (int inst = 0; inst < 60; ++inst) {
        RngStream rng = root.child(static_cast<std::uint64_t>(inst));
        int d = 2 + inst % 2;
        int m = 3 + inst % 5;
        LpProblem primal;
        primal.objective = Vec(static_cast<std::size_t>(d));
        for (auto& c : primal.objective) c = rng.normal();
        for (int i = 0; i < m; ++i)
            primal.constraints.push_back({random_unit(rng, d), 0.2 + 1.3 * rng.uniform()});
        for (int i = 0; i < d; ++i) {
            Vec e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(i)] = 1.0;
            primal.constraints.push_back({e, 3.0});
            e[static_cast<std::size_t>(i)] = -1.0;
            primal.constraints.push_back({e, 3.0});
        }
        LpResult pr = solve_lp(primal);
        if (pr.status != LpStatus::Optimal) {
            worst = std::numeric_limits<double>::infinity();
            break;
        }
        // Dual: min b.y s.t. A^T y = c, y >= 0, posed as a maximization.
        std::size_t nm = primal.constraints.size();
        LpProblem dual;
        dual.objective = Vec(nm);
        for (std::size_t i = 0; i < nm; ++i) dual.objective[i] = -primal.constraints[i].bound;
        for (int k = 0; k < d; ++k) {
            Vec row(nm);
            for (std::size_t i = 0; i < nm; ++i) row[i] = primal.constraints[i].normal[static_cast<std::size_t>(k)];
            dual.constraints.push_back({row, primal.objective[static_cast<std::size_t>(k)]});
            dual.constraints.push_back({scaled(row, -1.0), -primal.objective[static_cast<std::size_t>(k)]});
        }
        for (std::size_t i = 0; i < nm; ++i) {
            Vec e(nm, 0.0);
            e[i] = -1.0;
            dual.constraints.push_back({e, 0.0});
        }
        LpResult dr = solve_lp(dual);
        if (dr.status != LpStatus::Optimal) {
            worst = std::numeric_limits<double>::infinity();
            break;
        }
        worst = std::max(worst, std::abs(pr.optimal_value - (-dr.optimal_value)));
    }
    sb.within("lp_duality", worst, 0.0, 10.0 * kLpTol, "max |primal - dual| over 60 instances");
}

void check_lp_vertex_oracle(SuiteBuilder& sb, RngStream root) {
    double worst = 0.0;
    int done = 0;
    for (int inst = 0; done < 10 && inst < 40; ++inst) {
        RngStream rng = root.child(static_cast<std::uint64_t>(inst));
        std::vector<Vec> pts;
        for (int i = 0; i < 8; ++i) pts.push_back({rng.normal(), rng.normal()});
        std::vector<Vec> hull = hull_2d(pts);
        if (hull.size() < 3) continue;
        ++done;
        LpProblem p;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Vec& a = hull[i];
            const Vec& b = hull[(i + 1) % hull.size()];
            Vec n = normalized({b[1] - a[1], a[0] - b[0]});
            p.constraints.push_back({n, dot(n, a)});
        }
        for (int k = 0; k < 100; ++k) {
            p.objective = random_unit(rng, 2);
            LpResult r = solve_lp(p);
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : hull) best = std::max(best, dot(p.objective, v));
            worst = std::max(worst, std::abs(r.optimal_value - best));
        }
    }
    sb.within("lp_vertex_oracle", worst, 0.0, kLpTol,
              "LP vs vertex-max over 10 hulls x 100 objectives");
}

void check_lp_determinism(SuiteBuilder& sb, RngStream root) {
    RngStream rng = root.child("det");
    LpProblem p;
    p.objective = {rng.normal(), rng.normal(), rng.normal()};
    for (int i = 0; i < 7; ++i) p.constraints.push_back({random_unit(rng, 3), 0.5 + rng.uniform()});
    LpResult a = solve_lp(p);
    LpResult b = solve_lp(p);
    bool same = a.status == b.status && a.optimal_value == b.optimal_value &&
                a.optimizer == b.optimizer;
    sb.within("lp_determinism", same ? 0.0 : 1.0, 0.0, 0.0, "bit-identical repeat solve");
}

void check_support_box(SuiteBuilder& sb, RngStream root) {
    RngStream rng = root.child("support_box");
    double worst = 0.0;
    for (int d : {2, 3}) {
        Vec lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            lo[static_cast<std::size_t>(i)] = -1.0 + rng.uniform();
            hi[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] + 0.5 + rng.uniform();
        }
        Window w = make_box_window(lo, hi);
        HPolytope p = HPolytope::from_box(lo, hi);
        for (int k = 0; k < 500; ++k) {
            Vec u = random_unit(rng, d);
            worst = std::max(worst, std::abs(support(p, u) - support(w, u)));
        }
    }
    sb.within("support_box_crosscheck", worst, 0.0, kLpTol, "1000 random directions, d=2,3");
}

void check_split_conservation(SuiteBuilder& sb, RngStream root, int threads) {
    const int cases = 24;
    std::vector<double> ratio(cases);
    parallel_for_index(cases, threads, [&](std::size_t i) {
        RngStream rng = root.child(i);
        HPolytope cell = random_cell(rng, 1 + static_cast<int>(i % 3));
        Vec u = random_unit(rng, 2);
        double hi = support(cell, u);
        double lo = -support(cell, scaled(u, -1.0));
        Hyperplane h{u, lo + (0.2 + 0.6 * rng.uniform()) * (hi - lo)};
        SplitResult sr = split(cell, h);
        McVolume vc = mc_volume(cell, 20000, rng);
        McVolume vb = mc_volume(*sr.below, 20000, rng);
        McVolume va = mc_volume(*sr.above, 20000, rng);
        double se = std::sqrt(vc.std_error * vc.std_error + vb.std_error * vb.std_error +
                              va.std_error * va.std_error);
        ratio[i] = std::abs(vb.estimate + va.estimate - vc.estimate) / (4.0 * std::max(se, 1e-12));
    });
    sb.at_most("split_conservation", *std::max_element(ratio.begin(), ratio.end()), 1.0,
               "max |vol(below)+vol(above)-vol(cell)| / 4SE over 24 random cuts");
}

void check_hits_split_consistency(SuiteBuilder& sb, RngStream root) {
    RngStream rng = root.child("hits_split");
    int bad = 0;
    for (int k = 0; k < 200; ++k) {
        HPolytope cell = random_cell(rng, k % 3);
        Vec u = random_unit(rng, 2);
        double hi = support(cell, u);
        double lo = -support(cell, scaled(u, -1.0));
        double span = hi - lo;
        double t = lo + (-0.5 + 2.0 * rng.uniform()) * span; // may miss the cell
        Hyperplane h{u, t};
        SplitResult sr = split(cell, h);
        bool two_sided = sr.below.has_value() && sr.above.has_value();
        if (hits(cell, h)) {
            bool touching = t >= hi - kLpTol || t <= lo + kLpTol;
            if (!(two_sided || touching)) ++bad;
        } else {
            // Exactly one side, equal to the whole cell.
            bool one = sr.below.has_value() != sr.above.has_value();
            const HPolytope& side = sr.below ? *sr.below : *sr.above;
            if (!one || side.halfspaces().size() != cell.halfspaces().size()) ++bad;
        }
    }
    sb.within("hits_split_consistency", bad, 0.0, 0.0, "200 random cell/hyperplane pairs");
}

void check_surrogate_homogeneity(SuiteBuilder& sb, RngStream root) {
    RngStream rng = root.child("homogeneity");
    auto dirs = make_direction_set(2, 64);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        HPolytope cell = random_cell(rng, k % 4);
        double base = diameter_surrogate(cell, dirs);
        for (double s : {2.0, 4.0, 0.5}) {
            double scaled_val = diameter_surrogate(dilated(cell, s), dirs);
            worst = std::max(worst, std::abs(scaled_val - s * base));
        }
    }
    sb.within("surrogate_homogeneity", worst, 0.0, 0.0,
              "exact 1-homogeneity under power-of-two dilations");
}

void check_zonoid_closed_forms(SuiteBuilder& sb) {
    auto axis2 = DirectionalDistribution::axis(2);
    auto iso2 = DirectionalDistribution::isotropic(2);
    double pi = std::numbers::pi;
    double worst = 0.0;
    worst = std::max(worst, std::abs(zonoid_support(axis2, {1.0, 1.0}) - 0.5));
    worst = std::max(worst, std::abs(isotropic_zonoid_radius(2) - 1.0 / pi));
    worst = std::max(worst, std::abs(zonoid_volume(axis2) - 0.25));
    worst = std::max(worst, std::abs(zonoid_volume(iso2) - 1.0 / pi));
    Window square = make_box_window({0.0, 0.0}, {1.0, 1.0});
    worst = std::max(worst, std::abs(lambda_of(axis2, square).value - 1.0));
    worst = std::max(worst, std::abs(lambda_of(iso2, square).value - 4.0 / pi));
    Window ball = make_ball_window({0.0, 0.0}, 3.0);
    worst = std::max(worst, std::abs(lambda_of(iso2, ball).value - 6.0));
    sb.within("zonoid_closed_forms", worst, 0.0, 1e-12, "7 closed-form identities");
}

void check_hmin_maximality(SuiteBuilder& sb, RngStream root) {
    RngStream rng = root.child("hmin");
    auto dirs = make_direction_set(2, 256);
    double c2 = isotropic_zonoid_radius(2);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 12; ++k) {
        int atoms = 2 + static_cast<int>(rng.uniform() * 5.0);
        std::vector<Vec> a;
        std::vector<double> w(static_cast<std::size_t>(atoms));
        double total = 0.0;
        for (int j = 0; j < atoms; ++j) {
            a.push_back(random_unit(rng, 2));
            w[static_cast<std::size_t>(j)] = 0.1 + rng.uniform();
            total += w[static_cast<std::size_t>(j)];
        }
        for (auto& x : w) x /= total;
        auto phi = DirectionalDistribution::discrete(a, w);
        double hmin = std::numeric_limits<double>::infinity();
        for (const auto& u : dirs) hmin = std::min(hmin, zonoid_support(phi, u));
        worst = std::max(worst, hmin - c2);
    }
    sb.at_most("hmin_isotropic_maximality", worst, 1e-9,
               "max over 12 random discrete phi of h_min(Pi_phi) - c_2");
}

void check_sampler_laws(SuiteBuilder& sb, RngStream root) {
    auto axis2 = DirectionalDistribution::axis(2);
    // Direction frequency, unit square (1/2, 1/2) and 2x1 rectangle (2/3, 1/3).
    {
        double worst_chi2 = 0.0;
        struct Case {
            Vec hi;
            double p1;
        } cases[] = {{{1.0, 1.0}, 0.5}, {{2.0, 1.0}, 2.0 / 3.0}};
        int ci = 0;
        for (const auto& c : cases) {
            HPolytope cell = HPolytope::from_box({0.0, 0.0}, c.hi);
            RngStream rng = root.child("freq").child(static_cast<std::uint64_t>(ci++));
            const int n = 10000;
            int n1 = 0;
            for (int k = 0; k < n; ++k) {
                HitSample s = sample_hit(axis2, cell, rng);
                if (std::abs(s.h.direction[0]) > 0.5) ++n1;
            }
            double e1 = n * c.p1, e2 = n * (1.0 - c.p1);
            double o1 = n1, o2 = n - n1;
            double chi2 = (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
            worst_chi2 = std::max(worst_chi2, chi2);
        }
        sb.at_most("sampler_direction_frequency", worst_chi2, kChi2Q99[0],
                   "chi-square vs size-biased direction law, 1e4 accepted samples");
    }
    // Waiting time ~ Exp(Lambda([cell])) on the unit square (Lambda = 1).
    {
        HPolytope cell = HPolytope::from_box({0.0, 0.0}, {1.0, 1.0});
        RngStream rng = root.child("waiting");
        const int n = 10000;
        std::vector<double> w(n);
        for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = sample_hit(axis2, cell, rng).waiting_time;
        double mean = sample_mean(w);
        double m2 = 0.0, m4 = 0.0;
        for (double x : w) {
            double d = x - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m4 /= n;
        double se_mean = std::sqrt(m2 / n);
        double se_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
        double dev = std::max(std::abs(mean - 1.0) / (4.0 * se_mean),
                              std::abs(m2 - 1.0) / (4.0 * se_var));
        sb.at_most("sampler_waiting_time", dev, 1.0,
                   "mean/variance of waiting time vs Exp(1), normalized by 4SE");
    }
    // Offsets conditioned on the direction are uniform on the support interval.
    {
        HPolytope cell = HPolytope::from_box({0.0, 0.0}, {2.0, 1.0});
        RngStream rng = root.child("offsets");
        std::vector<double> ts;
        for (int k = 0; k < 9000; ++k) {
            HitSample s = sample_hit(axis2, cell, rng);
            if (std::abs(s.h.direction[0]) > 0.5)
                ts.push_back(s.h.direction[0] > 0.0 ? s.h.offset : -s.h.offset);
        }
        std::sort(ts.begin(), ts.end());
        double n = static_cast<double>(ts.size());
        double dmax = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            double f = ts[i] / 2.0; // true CDF on (0,2)
            dmax = std::max(dmax, std::max((i + 1) / n - f, f - i / n));
        }
        double p = kolmogorov_sf(std::sqrt(n) * dmax);
        sb.at_least("sampler_offset_uniform", p, 0.01, "one-sample KS vs U(0,2), e1 offsets");
    }
}

void check_stit_no_cut(SuiteBuilder& sb, RngStream root, int threads) {
    // lambda * Lambda([W]) = 0.1 so P(single cell) = exp(-0.1).
    auto axis2 = DirectionalDistribution::axis(2);
    Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
    const int reps = 2000;
    std::vector<double> single(reps);
    RngStream rng = root.child("no_cut");
    parallel_for_index(reps, threads, [&](std::size_t r) {
        auto p = sample_stit(w, axis2, 0.1, rng.child(r));
        single[r] = p.cell_count() == 1 ? 1.0 : 0.0;
    });
    double p_hat = sample_mean(single);
    double p0 = std::exp(-0.1);
    double se = std::sqrt(p0 * (1.0 - p0) / reps);
    sb.within("stit_no_cut_probability", p_hat, p0, 4.0 * se, "2000 replicates at lambda*Lambda=0.1");
}

void check_pht_count(SuiteBuilder& sb, RngStream root, int threads) {
    auto axis2 = DirectionalDistribution::axis(2);
    Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
    const int reps = 2000;
    std::vector<double> counts(reps);
    RngStream rng = root.child("pht_count");
    parallel_for_index(reps, threads, [&](std::size_t r) {
        counts[r] = static_cast<double>(sample_pht(w, axis2, 4.0, rng.child(r)).hyperplanes().size());
    });
    MeanSe ms = mean_se(counts);
    sb.within("pht_hyperplane_count", ms.mean, 4.0, 4.0 * ms.std_error,
              "E[N hyperplanes] = lambda * Lambda([W]) = 4");
}

void check_tiling(SuiteBuilder& sb, RngStream root, int threads) {
    Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
    double worst = 0.0;
    struct Case {
        SamplerKind kind;
        DirectionalDistribution phi;
        double lambda;
    } cases[] = {{SamplerKind::Stit, DirectionalDistribution::axis(2), 3.0},
                 {SamplerKind::Pht, DirectionalDistribution::isotropic(2), 2.0}};
    int ci = 0;
    for (const auto& c : cases) {
        RngStream rng = root.child("tiling").child(static_cast<std::uint64_t>(ci++));
        for (int rep = 0; rep < 3; ++rep) {
            Partition p = sample_partition(c.kind, w, c.phi, c.lambda, rng.child(static_cast<std::uint64_t>(rep)));
            std::vector<double> sums(p.cell_count()), ses(p.cell_count());
            parallel_for_index(p.cell_count(), threads, [&](std::size_t i) {
                RngStream mc = rng.child(static_cast<std::uint64_t>(rep)).child("mc").child(i);
                McVolume v = mc_volume(p.cell(i), 8192, mc);
                sums[i] = v.estimate;
                ses[i] = v.std_error;
            });
            double total = 0.0, var = 0.0;
            for (std::size_t i = 0; i < sums.size(); ++i) {
                total += sums[i];
                var += ses[i] * ses[i];
            }
            double dev = std::abs(total - 1.0) / (4.0 * std::max(std::sqrt(var), 1e-12));
            worst = std::max(worst, dev);
        }
    }
    sb.at_most("tiling_conservation", worst, 1.0,
               "sum of cell volumes vs window volume, normalized by 4SE");
}

void check_cross_lookup(SuiteBuilder& sb, RngStream root) {
    auto axis2 = DirectionalDistribution::axis(2);
    Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
    RngStream rng = root.child("cross_lookup");
    PhtPartition pht = sample_pht(w, axis2, 3.0, rng.child("pht"));
    StitPartition stit = sample_stit(w, axis2, 3.0, rng.child("stit"));
    int bad = 0;
    RngStream pts = rng.child("points");
    // Map each enumerated PHT cell to its sign-vector key via an interior point.
    std::vector<CellKey> keys;
    for (std::size_t i = 0; i < pht.cell_count(); ++i) {
        auto verts = polygon_vertices_2d(pht.cell(i));
        if (verts.size() < 3) {
            keys.push_back(CellKey{});
            continue;
        }
        Vec c{0.0, 0.0};
        for (const auto& v : verts) {
            c[0] += v[0];
            c[1] += v[1];
        }
        c[0] /= static_cast<double>(verts.size());
        c[1] /= static_cast<double>(verts.size());
        keys.push_back(pht.cell_of(c));
    }
    for (int k = 0; k < 1000; ++k) {
        Vec x{pts.uniform(), pts.uniform()};
        CellKey key = pht.cell_of(x);
        bool found = false;
        for (std::size_t i = 0; i < pht.cell_count(); ++i) {
            if (contains(pht.cell(i), x) && keys[i] == key) { found = true; break; }
        }
        if (!found) ++bad;
        if (!contains(stit.cell(stit.leaf_of(x)), x)) ++bad;
    }
    sb.within("cross_lookup_consistency", bad, 0.0, 0.0,
              "cell_of vs enumerated-cell membership, 1000 points");
}

void check_mondrian_count(SuiteBuilder& sb, RngStream root, int threads) {
    // Example-3 convention: phi axis-uniform with lifetime d*lambda.
    auto axis2 = DirectionalDistribution::axis(2);
    Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
    const int reps = 2000;
    const double lambda_example = 4.0;
    double lifetime = 2.0 * lambda_example;
    std::vector<double> counts(reps);
    RngStream rng = root.child("mondrian_count");
    parallel_for_index(reps, threads, [&](std::size_t r) {
        counts[r] = static_cast<double>(sample_stit(w, axis2, lifetime, rng.child(r)).cell_count());
    });
    MeanSe ms = mean_se(counts);
    double expected = expected_cell_count(MondrianCubeCount{2, lambda_example});
    double tol = std::min(4.0 * ms.std_error, 0.05 * expected);
    sb.within("mondrian_cell_count", ms.mean, expected, tol,
              "2000 replicates; tolerance min(4SE, 5%)");
}

void check_isotropic_count(SuiteBuilder& sb, RngStream root, int threads) {
    auto iso2 = DirectionalDistribution::isotropic(2);
    Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
    const int reps = 2000;
    std::vector<double> counts(reps);
    RngStream rng = root.child("isotropic_count");
    parallel_for_index(reps, threads, [&](std::size_t r) {
        counts[r] = static_cast<double>(sample_stit(w, iso2, 2.0, rng.child(r)).cell_count());
    });
    MeanSe ms = mean_se(counts);
    double expected = expected_cell_count(IsotropicBodyCount{2, 2.0, {1.0, 2.0, 1.0}});
    sb.within("isotropic_cell_count", ms.mean, expected, 4.0 * ms.std_error,
              "2000 replicates vs closed form 1 + 8/pi + 4/pi");
}

void check_zero_cell_scaling(SuiteBuilder& sb, RngStream root, int threads) {
    Window w = make_box_window({-20.0, -20.0}, {20.0, 20.0});
    auto dirs = make_direction_set(2, 256);
    const double lambdas[] = {1.0, 2.0, 4.0};
    const int want = 2000;
    const int draws = 2100;
    std::size_t total_draws = 0, total_touch = 0;
    struct PhiCase {
        const char* name;
        DirectionalDistribution phi;
    } phis[] = {{"axis", DirectionalDistribution::axis(2)},
                {"isotropic", DirectionalDistribution::isotropic(2)}};
    for (const auto& pc : phis) {
        double m1[3], se1[3], m2[3], se2[3];
        bool enough = true;
        for (int li = 0; li < 3; ++li) {
            std::vector<double> g(draws);
            std::vector<char> touch(draws);
            RngStream rng = root.child("scaling").child(pc.name).child(static_cast<std::uint64_t>(li));
            parallel_for_index(draws, threads, [&](std::size_t i) {
                HPolytope z = sample_stit_zero_cell(w, pc.phi, lambdas[li], rng.child(i));
                touch[i] = touches_window_boundary(z, w.box()) ? 1 : 0;
                g[i] = diameter_surrogate(z, dirs);
            });
            std::vector<double> kept, kept2;
            for (int i = 0; i < draws; ++i) {
                total_draws++;
                if (touch[static_cast<std::size_t>(i)]) {
                    total_touch++;
                    continue;
                }
                if (static_cast<int>(kept.size()) < want) {
                    kept.push_back(g[static_cast<std::size_t>(i)]);
                    kept2.push_back(g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)]);
                }
            }
            if (static_cast<int>(kept.size()) < want) enough = false;
            MeanSe a = mean_se(kept), b = mean_se(kept2);
            m1[li] = a.mean;
            se1[li] = a.std_error;
            m2[li] = b.mean;
            se2[li] = b.std_error;
        }
        double worst = enough ? 0.0 : std::numeric_limits<double>::infinity();
        for (int li = 1; li < 3 && enough; ++li) {
            double s = lambdas[li];
            double d1 = std::abs(s * m1[li] - m1[0]);
            double tol1 = 4.0 * std::sqrt(s * s * se1[li] * se1[li] + se1[0] * se1[0]);
            worst = std::max(worst, d1 / tol1);
            double s2 = s * s;
            double d2 = std::abs(s2 * m2[li] - m2[0]);
            double tol2 = 4.0 * std::sqrt(s2 * s2 * se2[li] * se2[li] + se2[0] * se2[0]);
            worst = std::max(worst, d2 / tol2);
        }
        sb.at_most(std::string("zero_cell_scaling_") + pc.name, worst, 1.0,
                   "lambda^k * E[surrogate^k] constant over lambda in {1,2,4}, k=1,2; 2000 samples");
    }
    sb.at_most("zero_cell_scaling_discard_rate",
               static_cast<double>(total_touch) / static_cast<double>(total_draws), 0.01,
               "boundary-touching zero cells discarded");
}

void check_zero_cell_centering(SuiteBuilder& sb, RngStream root, int threads) {
    Window w = make_box_window({-10.0, -10.0}, {10.0, 10.0});
    struct PhiCase {
        const char* name;
        DirectionalDistribution phi;
    } phis[] = {{"axis", DirectionalDistribution::axis(2)},
                {"isotropic", DirectionalDistribution::isotropic(2)}};
    const int reps = 2000;
    double worst = 0.0;
    for (const auto& pc : phis) {
        std::vector<double> cx(reps), cy(reps);
        RngStream rng = root.child("centering").child(pc.name);
        parallel_for_index(reps, threads, [&](std::size_t i) {
            RngStream s = rng.child(i);
            HPolytope z = sample_stit_zero_cell(w, pc.phi, 3.0, s);
            RngStream mc = s.child("centroid");
            Vec c = centroid_estimate(z, 2048, mc);
            cx[i] = c[0];
            cy[i] = c[1];
        });
        MeanSe mx = mean_se(cx), my = mean_se(cy);
        worst = std::max(worst, std::abs(mx.mean) / (4.0 * mx.std_error));
        worst = std::max(worst, std::abs(my.mean) / (4.0 * my.std_error));
    }
    sb.at_most("zero_cell_centering", worst, 1.0,
               "|E[centroid(Z_0)]| per component, normalized by 4SE; lambda=3, 2000 samples");
}

} // namespace

SuiteReport run_geometry_suite(const VerifyOptions& opt) {
    SuiteBuilder sb("geometry");
    RngStream root(opt.seed);
    root = root.child("geometry");
    check_lp_duality(sb, root.child("duality"));
    check_lp_vertex_oracle(sb, root.child("vertex_oracle"));
    check_lp_determinism(sb, root);
    check_support_box(sb, root);
    check_split_conservation(sb, root.child("split"), opt.threads);
    check_hits_split_consistency(sb, root);
    check_surrogate_homogeneity(sb, root);
    check_zonoid_closed_forms(sb);
    check_hmin_maximality(sb, root);
    check_sampler_laws(sb, root.child("sampler"));
    check_stit_no_cut(sb, root, opt.threads);
    check_pht_count(sb, root, opt.threads);
    check_tiling(sb, root, opt.threads);
    check_cross_lookup(sb, root);
    check_mondrian_count(sb, root, opt.threads);
    check_isotropic_count(sb, root, opt.threads);
    check_zero_cell_scaling(sb, root, opt.threads);
    check_zero_cell_centering(sb, root, opt.threads);
    return sb.finish();
}

SuiteReport run_markov_suite(const VerifyOptions& opt) {
    SuiteBuilder sb("markov");
    RngStream root(opt.seed);
    root = root.child("markov");
    auto axis2 = DirectionalDistribution::axis(2);
    Window w2 = make_box_window({0.0, 0.0}, {1.0, 1.0});

    {
        const int reps = 2000;
        std::vector<double> a(reps), b(reps);
        RngStream rng = root.child("ks");
        parallel_for_index(reps, opt.threads, [&](std::size_t r) {
            RngStream s = rng.child(r);
            StitPartition p1 = sample_stit(w2, axis2, 1.5, s.child("first"));
            StitPartition it = iterate(p1, 1.5, s.child("second"));
            a[r] = static_cast<double>(it.cell_count());
            b[r] = static_cast<double>(sample_stit(w2, axis2, 3.0, s.child("direct")).cell_count());
        });
        KsResult ks = ks_two_sample(a, b);
        sb.at_least("iterate_cell_count_ks", ks.p_value, 0.01,
                    "iterate(STIT(1.5),1.5) vs STIT(3); 2000 replicates, D=" + std::to_string(ks.statistic));
    }
    {
        auto axis1 = DirectionalDistribution::axis(1);
        Window w1 = make_box_window({0.0}, {1.0});
        const int reps = 2000;
        std::vector<double> it_counts(reps), direct_counts(reps);
        RngStream rng = root.child("d1");
        parallel_for_index(reps, opt.threads, [&](std::size_t r) {
            RngStream s = rng.child(r);
            StitPartition p1 = sample_stit(w1, axis1, 2.0, s.child("first"));
            it_counts[r] = static_cast<double>(iterate(p1, 3.0, s.child("second")).cell_count());
            direct_counts[r] = static_cast<double>(sample_stit(w1, axis1, 5.0, s.child("direct")).cell_count());
        });
        MeanSe mi = mean_se(it_counts), md = mean_se(direct_counts);
        double dev = std::max(std::abs(mi.mean - 6.0) / (4.0 * mi.std_error),
                              std::abs(md.mean - 6.0) / (4.0 * md.std_error));
        sb.at_most("iterate_mean_additivity_d1", dev, 1.0,
                   "E[N] = 1 + l1 + l2 both via iterate and direct; d=1");
    }
    {
        const int reps = 500;
        std::vector<double> changed(reps);
        RngStream rng = root.child("noop");
        parallel_for_index(reps, opt.threads, [&](std::size_t r) {
            RngStream s = rng.child(r);
            StitPartition p1 = sample_stit(w2, axis2, 1.5, s.child("first"));
            StitPartition it = iterate(p1, 1e-6, s.child("second"));
            changed[r] = it.cell_count() != p1.cell_count() ? 1.0 : 0.0;
        });
        sb.at_most("iterate_small_lambda_noop", sample_mean(changed), 0.01,
                   "lambda2 -> 0 leaves the partition unchanged w.h.p.");
    }
    return sb.finish();
}

SuiteReport run_equality_suite(const VerifyOptions& opt) {
    SuiteBuilder sb("equality");
    RngStream root(opt.seed);
    root = root.child("equality");
    Window w = make_box_window({-10.0, -10.0}, {10.0, 10.0});
    auto dirs = make_direction_set(2, 256);
    const int n_samples = 2000;
    const double lambda = 3.0;

    struct PhiCase {
        const char* name;
        DirectionalDistribution phi;
    } phis[] = {{"axis", DirectionalDistribution::axis(2)},
                {"isotropic", DirectionalDistribution::isotropic(2)}};
    for (const auto& pc : phis) {
        std::vector<double> vol_stit(n_samples), vol_pht(n_samples);
        std::vector<double> diam_stit(n_samples), diam_pht(n_samples);
        RngStream rng = root.child(pc.name);
        parallel_for_index(n_samples, opt.threads, [&](std::size_t i) {
            RngStream s = rng.child("stit").child(i);
            HPolytope z = sample_stit_zero_cell(w, pc.phi, lambda, s);
            RngStream mc = s.child("vol");
            vol_stit[i] = mc_volume(z, 4096, mc).estimate;
            diam_stit[i] = diameter_surrogate(z, dirs);

            RngStream sp = rng.child("pht").child(i);
            HPolytope zp = sample_pht(w, pc.phi, lambda, sp).zero_cell();
            RngStream mcp = sp.child("vol");
            vol_pht[i] = mc_volume(zp, 4096, mcp).estimate;
            diam_pht[i] = diameter_surrogate(zp, dirs);
        });
        KsResult kv = ks_two_sample(vol_stit, vol_pht);
        sb.at_least(std::string("zero_cell_volume_ks_") + pc.name, kv.p_value, 0.01,
                    "two-sample KS on zero-cell MC volume, 2000 each");
        KsResult kd = ks_two_sample(diam_stit, diam_pht);
        sb.at_least(std::string("zero_cell_diameter_ks_") + pc.name, kd.p_value, 0.01,
                    "two-sample KS on zero-cell diameter surrogate, 2000 each");
    }
    {
        auto axis1 = DirectionalDistribution::axis(1);
        Window w1 = make_box_window({0.0}, {1.0});
        const int reps = 2000;
        std::vector<double> a(reps), b(reps);
        RngStream rng = root.child("d1");
        parallel_for_index(reps, opt.threads, [&](std::size_t r) {
            RngStream s = rng.child(r);
            a[r] = static_cast<double>(sample_stit(w1, axis1, 5.0, s.child("stit")).cell_count());
            b[r] = static_cast<double>(sample_pht(w1, axis1, 5.0, s.child("pht")).cell_count());
        });
        KsResult ks = ks_two_sample(a, b);
        sb.at_least("stit_pht_d1_cell_count_ks", ks.p_value, 0.01,
                    "d=1 STIT and PHT cell counts are equal in law");
    }
    return sb.finish();
}

namespace {

// One CSV row per (n, rep), per the experiment output contract.
std::string rate_fit_csv(const std::string& experiment, const RateFit& fit) {
    std::ostringstream out;
    out.precision(17);
    out << "experiment,n,rep,lambda,m_trees,risk\n";
    for (const auto& pt : fit.points) {
        for (std::size_t r = 0; r < pt.rep_risks.size(); ++r) {
            out << experiment << "," << pt.n << "," << r << "," << pt.lambda << "," << pt.m_trees
                << "," << pt.rep_risks[r] << "\n";
        }
    }
    return out.str();
}

} // namespace

SuiteReport run_rates_suite(const VerifyOptions& opt) {
    SuiteBuilder sb("rates");
    RngStream root(opt.seed);
    root = root.child("rates");
    const std::vector<std::size_t> grid{250, 500, 1000, 2000, 4000, 8000, 16000};

    RateExperiment c0;
    c0.d = 1;
    c0.beta = 1.0;
    c0.smoothness = SmoothnessClass::C0Beta;
    c0.L = 1.0;
    c0.sigma = 0.1;
    c0.n_grid = grid;
    c0.reps = 50;
    c0.tuning = TuneRule::C0;
    c0.forest_size_rule = false;
    c0.phi = DirectionalDistribution::axis(1);
    c0.sampler = SamplerKind::Stit;
    // Window length pi/omega: the sine target's derivative vanishes at both
    // window ends, and lambda_n * |W| stays large enough that near-empty
    // partitions (the heavy tail of the risk) are vanishingly rare.
    c0.window = make_box_window({0.0}, {std::numbers::pi / std::numbers::sqrt2});
    c0.n_test = 2000;

    RateFit f0 = run_rate_experiment(c0, root.child("c0_stit"), opt.threads);
    sb.artifact("rates_c0_stit.csv", rate_fit_csv("c0_stit", f0));
    sb.within("c0_tree_slope", f0.slope, -2.0 / 3.0, 0.15,
              "Hoelder tree rate, d=1, beta=1, lambda_n = n^{1/3}");
    {
        // Strictly decreasing along the grid up to noise: no step moves up
        // by more than 4SE, and the first-to-last drop clears 4SE.
        double worst_upstep = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < f0.points.size(); ++i) {
            const auto& a = f0.points[i - 1];
            const auto& b = f0.points[i];
            double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
            worst_upstep = std::max(worst_upstep, (b.mean_risk - a.mean_risk) / (4.0 * se));
        }
        const auto& first = f0.points.front();
        const auto& last = f0.points.back();
        double span_se = std::sqrt(first.std_error * first.std_error + last.std_error * last.std_error);
        bool overall = first.mean_risk - last.mean_risk > 4.0 * span_se;
        sb.at_most("c0_rate_monotonicity", overall ? worst_upstep : 2.0, 1.0,
                   "risk decreasing along the n grid: worst up-step / 4SE, overall drop > 4SE");
    }

    RateExperiment c1 = c0;
    c1.smoothness = SmoothnessClass::C1Beta;
    c1.tuning = TuneRule::C1;
    c1.forest_size_rule = true;
    c1.reps = 200;  // the slope-gap check needs tighter slope estimates
    c1.sigma = 0.25; // noise-variance-dominated risks separate the slopes cleanly
    // Larger n: keeps points-per-cell high enough that the single-tree
    // baseline is out of its overfitting transient.
    c1.n_grid = {1000, 2000, 4000, 8000, 16000, 32000, 64000};
    // Window length 3*pi/omega: the centered sine target has zero derivative
    // at both window ends (so cell truncation cannot add a slower-decaying
    // bias term), and the window is many cells wide at every lambda_n, which
    // keeps truncation transients out of the slope fit.
    c1.window = make_box_window({0.0}, {3.0 * std::numbers::pi / std::numbers::sqrt2});
    RateFit f1 = run_rate_experiment(c1, root.child("c1_forest"), opt.threads);
    sb.artifact("rates_c1_forest.csv", rate_fit_csv("c1_forest", f1));
    sb.within("c1_forest_slope", f1.slope, -0.8, 0.15,
              "smooth forest rate, d=1, beta=1, lambda_n = n^{1/5}, M_n = ceil(n^{2/5})");

    RateExperiment baseline = c1;
    baseline.tuning = TuneRule::C0;
    baseline.forest_size_rule = false;
    RateFit fb = run_rate_experiment(baseline, root.child("c1_tree_baseline"), opt.threads);
    sb.artifact("rates_c1_tree_baseline.csv", rate_fit_csv("c1_tree_baseline", fb));
    sb.at_most("c1_forest_steeper_than_tree", f1.slope - fb.slope, -0.05,
               "forest slope at least 0.05 steeper than the C0-tuned single tree");

    RateExperiment c0p = c0;
    c0p.sampler = SamplerKind::Pht;
    RateFit fp = run_rate_experiment(c0p, root.child("c0_pht"), opt.threads);
    sb.artifact("rates_c0_pht.csv", rate_fit_csv("c0_pht", fp));
    sb.within("c0_tree_slope_pht", fp.slope, -2.0 / 3.0, 0.15,
              "criterion-7 experiment rerun with the Poisson hyperplane sampler");
    return sb.finish();
}

SuiteReport run_biasvar_suite(const VerifyOptions& opt) {
    SuiteBuilder sb("biasvar");
    RngStream root(opt.seed);
    root = root.child("biasvar");

    {
        BiasVarianceConfig cfg;
        cfg.sampler = SamplerKind::Stit;
        cfg.window = make_box_window({0.0}, {1.0});
        cfg.phi = DirectionalDistribution::axis(1);
        cfg.lambda = 10.0;
        cfg.n = 500;
        cfg.m_trees = 1;
        cfg.sigma = 0.1;
        cfg.reps = 200;
        cfg.n_test = 512;
        cfg.oracle_per_cell = 1000;
        CatalogTarget t = make_target(SmoothnessClass::C0Beta, 1, 1.0, 1.0, cfg.window);
        MuSampler mu = MuSampler::uniform(cfg.window);
        BiasVarianceReport r = bias_variance_study(cfg, t.f, mu, root.child("decomp"), opt.threads);
        double dev = std::abs(r.gap.mean) / (4.0 * r.gap.std_error);
        sb.at_most("risk_decomposition", dev, 1.0,
                   "|total - bias - variance| / 4SE; d=1, lambda=10, n=500, 200 reps");
    }
    {
        // Fixed dataset; fresh forests per replicate.
        Window w = make_box_window({0.0, 0.0}, {1.0, 1.0});
        auto phi = DirectionalDistribution::axis(2);
        CatalogTarget t = make_target(SmoothnessClass::C0Beta, 2, 1.0, 1.0, w);
        MuSampler mu = MuSampler::uniform(w);
        RngStream data_rng = root.child("dominance_data");
        Dataset data = sample_dataset(mu, t.f, 0.1, 500, 2, data_rng);
        const int reps = 100;
        const int m = 16;
        std::vector<double> diff(reps);
        RngStream rng = root.child("dominance");
        parallel_for_index(reps, opt.threads, [&](std::size_t r) {
            RngStream s = rng.child(r);
            ForestModel forest = fit_forest(SamplerKind::Stit, w, phi, 5.0, m, data, s.child("trees"));
            RngStream test = s.child("test");
            double forest_mse = 0.0, tree_mse = 0.0;
            const int n_test = 2000;
            for (int k = 0; k < n_test; ++k) {
                Vec x = mu.sample(test);
                double fx = t.f(x);
                double sum = 0.0;
                for (const auto& tree : forest.trees()) {
                    double p = tree.predict(x);
                    sum += p;
                    tree_mse += (p - fx) * (p - fx);
                }
                double fp = sum / m;
                forest_mse += (fp - fx) * (fp - fx);
            }
            forest_mse /= n_test;
            tree_mse /= static_cast<double>(n_test) * m;
            diff[r] = forest_mse - tree_mse;
        });
        MeanSe d = mean_se(diff);
        sb.at_most("forest_dominance", d.mean, 4.0 * d.std_error,
                   "forest risk <= mean single-tree risk + 4SE; M=16, 100 replicates");
    }
    {
        BiasVarianceConfig cfg;
        cfg.sampler = SamplerKind::Stit;
        cfg.window = make_box_window({0.0}, {1.0});
        cfg.phi = DirectionalDistribution::axis(1);
        cfg.lambda = 50.0;
        cfg.n = 400;
        cfg.m_trees = 1;
        cfg.sigma = 0.1;
        cfg.reps = 100;
        cfg.n_test = 256;
        cfg.oracle_per_cell = 250;
        CatalogTarget t = make_target(SmoothnessClass::C0Beta, 1, 1.0, 1.0, cfg.window);
        MuSampler mu = MuSampler::uniform(cfg.window);
        BiasVarianceReport r = bias_variance_study(cfg, t.f, mu, root.child("vardom"), opt.threads);
        sb.at_least("variance_dominates_large_lambda", r.variance.mean / r.total.mean, 0.9,
                    "variance fraction of total risk at lambda=50, n=400");
    }
    {
        // Forest-bias scaling in 1/M: fbar samples from K partitions, grouped.
        Window w = make_box_window({0.0}, {1.0});
        auto phi = DirectionalDistribution::axis(1);
        CatalogTarget t = make_target(SmoothnessClass::C1Beta, 1, 1.0, 1.0, w);
        MuSampler mu = MuSampler::uniform(w);
        const double lambda = 4.0;
        const std::size_t K = 512;
        const std::size_t n_x = 256;
        RngStream rng = root.child("m_scaling");
        RngStream xs_rng = rng.child("x");
        std::vector<Vec> xs;
        for (std::size_t j = 0; j < n_x; ++j) xs.push_back(mu.sample(xs_rng));
        std::vector<std::vector<double>> fbar(K, std::vector<double>(n_x));
        parallel_for_index(K, opt.threads, [&](std::size_t k) {
            RngStream s = rng.child(k);
            Partition p = sample_partition(SamplerKind::Stit, w, phi, lambda, s.child("part"));
            RngStream orng = s.child("oracle");
            CellMeanOracle oracle(p, mu, t.f, 800, orng);
            for (std::size_t j = 0; j < n_x; ++j) fbar[k][j] = oracle.value_at(xs[j]);
        });
        // Column variances estimate Var(fbar^(1)) directly.
        double var_bar = 0.0;
        for (std::size_t j = 0; j < n_x; ++j) {
            double m = 0.0, m2 = 0.0;
            for (std::size_t k = 0; k < K; ++k) m += fbar[k][j];
            m /= static_cast<double>(K);
            for (std::size_t k = 0; k < K; ++k) {
                double d = fbar[k][j] - m;
                m2 += d * d;
            }
            var_bar += m2 / static_cast<double>(K - 1);
        }
        var_bar /= static_cast<double>(n_x);
        // fb(M) over disjoint groups of M partitions; linear in 1/M with
        // slope Var(fbar^(1)).
        std::vector<double> inv_m, fb;
        std::vector<double> fb64_groups, fb1_groups;
        for (std::size_t M : {std::size_t(1), std::size_t(2), std::size_t(4), std::size_t(8),
                              std::size_t(16), std::size_t(64)}) {
            std::size_t groups = K / M;
            double acc = 0.0;
            std::vector<double> group_vals(groups, 0.0);
            for (std::size_t gi = 0; gi < groups; ++gi) {
                double gacc = 0.0;
                for (std::size_t j = 0; j < n_x; ++j) {
                    double m = 0.0;
                    for (std::size_t k = gi * M; k < (gi + 1) * M; ++k) m += fbar[k][j];
                    m /= static_cast<double>(M);
                    double fx = t.f(xs[j]);
                    gacc += (m - fx) * (m - fx);
                }
                gacc /= static_cast<double>(n_x);
                group_vals[gi] = gacc;
                acc += gacc;
            }
            acc /= static_cast<double>(groups);
            inv_m.push_back(1.0 / static_cast<double>(M));
            fb.push_back(acc);
            if (M == 1) fb1_groups = group_vals;
            if (M == 64) fb64_groups = group_vals;
        }
        OlsFit o = ols_fit(inv_m, fb);
        sb.within("forest_bias_m_scaling", o.slope / var_bar, 1.0, 0.2,
                  "slope of E[(fbar_M - f)^2] in 1/M vs Var(fbar^(1)), within 20%");
        MeanSe f1 = mean_se(fb1_groups), f64 = mean_se(fb64_groups);
        sb.at_most("forest_bias_m64_le_m1",
                   f64.mean - f1.mean,
                   4.0 * std::sqrt(f1.std_error * f1.std_error + f64.std_error * f64.std_error),
                   "forest bias at M=64 not above M=1");
    }
    return sb.finish();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"geometry", "markov", "equality", "rates", "biasvar"};
    return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opt) {
    if (name == "geometry") return run_geometry_suite(opt);
    if (name == "markov") return run_markov_suite(opt);
    if (name == "equality") return run_equality_suite(opt);
    if (name == "rates") return run_rates_suite(opt);
    if (name == "biasvar") return run_biasvar_suite(opt);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace tessforest
