// Compares the serial reference loop against the OpenMP kernel on the
// replicate-parallel workloads and checks that both produce identical
// results (they must: every replicate uses its own derived rng stream).

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "CLI11.hpp"
#include "tessforest/parallel.hpp"
#include "tessforest/stats.hpp"
#include "tessforest/verify.hpp"

namespace tf = tessforest;

namespace {

using SteadyClock = std::chrono::steady_clock;

double run_timed(const std::function<void()>& fn) {
    auto t0 = SteadyClock::now();
    fn();
    return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

struct Workload {
    std::string name;
    std::function<std::vector<double>(bool parallel, int threads)> run;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial reference vs OpenMP kernel benchmark"};
    int threads = 0;
    std::uint64_t seed = 42;
    app.add_option("--threads", threads, "threads for the parallel run (0 = all)");
    app.add_option("--seed", seed, "master seed");
    CLI11_PARSE(app, argc, argv);
    threads = tf::resolve_threads(threads);

    auto window2 = tf::make_box_window({0.0, 0.0}, {1.0, 1.0});
    auto big_window = tf::make_box_window({-20.0, -20.0}, {20.0, 20.0});
    auto axis2 = tf::DirectionalDistribution::axis(2);
    auto iso2 = tf::DirectionalDistribution::isotropic(2);
    auto dirs = tf::make_direction_set(2, 256);

    std::vector<Workload> workloads;

    workloads.push_back({"stit_sampling_2d", [&](bool par, int thr) {
        const std::size_t reps = 600;
        std::vector<double> out(reps);
        tf::RngStream root(seed);
        auto body = [&](std::size_t i) {
            out[i] = static_cast<double>(
                tf::sample_stit(window2, axis2, 8.0, root.child("stit").child(i)).cell_count());
        };
        if (par) tf::parallel_for_index(reps, thr, body);
        else tf::serial_for_index(reps, body);
        return out;
    }});

    workloads.push_back({"zero_cell_diameter", [&](bool par, int thr) {
        const std::size_t reps = 1200;
        std::vector<double> out(reps);
        tf::RngStream root(seed);
        auto body = [&](std::size_t i) {
            auto z = tf::sample_stit_zero_cell(big_window, iso2, 2.0, root.child("zero").child(i));
            out[i] = tf::diameter_surrogate(z, dirs);
        };
        if (par) tf::parallel_for_index(reps, thr, body);
        else tf::serial_for_index(reps, body);
        return out;
    }});

    workloads.push_back({"rate_experiment_d1", [&](bool par, int thr) {
        tf::RateExperiment e;
        e.d = 1;
        e.n_grid = {250, 500, 1000, 2000};
        e.reps = 10;
        e.phi = tf::DirectionalDistribution::axis(1);
        e.window = tf::make_box_window({0.0}, {1.0});
        tf::RateFit f = tf::run_rate_experiment(e, tf::RngStream(seed), par ? thr : 1);
        std::vector<double> out{f.slope, f.intercept};
        for (const auto& p : f.points) out.push_back(p.mean_risk);
        return out;
    }});

    std::printf("%-22s %12s %12s %9s %10s\n", "workload", "serial [s]", "openmp [s]", "speedup",
                "identical");
    for (auto& w : workloads) {
        std::vector<double> serial_out, parallel_out;
        double ts = run_timed([&] { serial_out = w.run(false, 1); });
        double tp = run_timed([&] { parallel_out = w.run(true, threads); });
        bool same = serial_out == parallel_out;
        std::printf("%-22s %12.3f %12.3f %8.2fx %10s\n", w.name.c_str(), ts, tp, ts / tp,
                    same ? "yes" : "NO");
        if (!same) return 1;
    }
    std::printf("threads: %d, openmp: %s\n", threads, tf::openmp_enabled() ? "on" : "off");
    return 0;
}
