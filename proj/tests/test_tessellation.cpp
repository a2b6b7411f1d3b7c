#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "tessforest/stats.hpp"
#include "tessforest/tessellation.hpp"

using namespace tessforest;

namespace {

Window square01() { return make_box_window({0.0, 0.0}, {1.0, 1.0}); }
Window interval01() { return make_box_window({0.0}, {1.0}); }

} // namespace

TEST_CASE("no-cut probability at small lifetime") {
    // lambda * Lambda([W]) = 0.1, so P(single leaf) = exp(-0.1) ~ 0.905.
    auto phi = DirectionalDistribution::axis(2);
    RngStream rng(101);
    const int reps = 1500;
    int singles = 0;
    for (int r = 0; r < reps; ++r)
        if (sample_stit(square01(), phi, 0.1, rng.child(static_cast<std::uint64_t>(r))).cell_count() == 1)
            ++singles;
    double p0 = std::exp(-0.1);
    double se = std::sqrt(p0 * (1.0 - p0) / reps);
    CHECK(std::abs(singles / static_cast<double>(reps) - p0) <= 4.0 * se);
}

TEST_CASE("mondrian expected leaf count (1 + lambda/d)^d") {
    auto phi = DirectionalDistribution::axis(2);
    RngStream rng(102);
    const int reps = 900;
    std::vector<double> counts(reps);
    for (int r = 0; r < reps; ++r)
        counts[static_cast<std::size_t>(r)] = static_cast<double>(
            sample_stit(square01(), phi, 8.0, rng.child(static_cast<std::uint64_t>(r))).cell_count());
    MeanSe ms = mean_se(counts);
    CHECK(std::abs(ms.mean - 25.0) <= 4.0 * ms.std_error);
}

TEST_CASE("d=1 gives Poisson cuts: E[N] = 1 + lambda") {
    auto phi = DirectionalDistribution::axis(1);
    RngStream rng(103);
    const int reps = 1500;
    std::vector<double> counts(reps);
    for (int r = 0; r < reps; ++r)
        counts[static_cast<std::size_t>(r)] = static_cast<double>(
            sample_stit(interval01(), phi, 3.0, rng.child(static_cast<std::uint64_t>(r))).cell_count());
    MeanSe ms = mean_se(counts);
    CHECK(std::abs(ms.mean - 4.0) <= 4.0 * ms.std_error);
}

TEST_CASE("cut tree invariants") {
    auto phi = DirectionalDistribution::isotropic(2);
    StitPartition p = sample_stit(square01(), phi, 4.0, RngStream(104));
    // Times increase along every path and stay within the lifetime.
    struct Walk {
        const StitPartition& p;
        void check(int idx, double parent_time) {
            const StitNode& n = p.nodes()[static_cast<std::size_t>(idx)];
            if (n.below < 0) {
                CHECK(p.leaves()[static_cast<std::size_t>(n.leaf_index)].birth_time ==
                      doctest::Approx(parent_time));
                return;
            }
            CHECK(n.cut_time > parent_time);
            CHECK(n.cut_time <= 4.0);
            check(n.below, n.cut_time);
            check(n.above, n.cut_time);
        }
    };
    Walk{p}.check(0, 0.0);

    // Leaves tile the window.
    RngStream mc(105);
    double total = 0.0, var = 0.0;
    for (std::size_t i = 0; i < p.cell_count(); ++i) {
        McVolume v = mc_volume(p.cell(i), 4096, mc);
        total += v.estimate;
        var += v.std_error * v.std_error;
    }
    CHECK(std::abs(total - 1.0) <= 4.0 * std::sqrt(var) + 1e-12);
}

TEST_CASE("same seed reproduces the same partition") {
    auto phi = DirectionalDistribution::isotropic(2);
    StitPartition a = sample_stit(square01(), phi, 3.0, RngStream(106));
    StitPartition b = sample_stit(square01(), phi, 3.0, RngStream(106));
    REQUIRE(a.cell_count() == b.cell_count());
    for (std::size_t i = 0; i < a.cell_count(); ++i) {
        CHECK(a.cell(i).bbox_lower() == b.cell(i).bbox_lower());
        CHECK(a.cell(i).bbox_upper() == b.cell(i).bbox_upper());
    }
}

TEST_CASE("zero-cell fast path matches the full construction bit for bit") {
    Window w = make_box_window({-3.0, -3.0}, {3.0, 3.0});
    for (auto phi : {DirectionalDistribution::axis(2), DirectionalDistribution::isotropic(2)}) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
            StitPartition full = sample_stit(w, phi, 2.0, RngStream(seed));
            HPolytope fast = sample_stit_zero_cell(w, phi, 2.0, RngStream(seed));
            const HPolytope& slow = full.zero_cell();
            REQUIRE(fast.halfspaces().size() == slow.halfspaces().size());
            for (std::size_t i = 0; i < fast.halfspaces().size(); ++i) {
                CHECK(fast.halfspaces()[i].normal == slow.halfspaces()[i].normal);
                CHECK(fast.halfspaces()[i].bound == slow.halfspaces()[i].bound);
            }
        }
    }
}

TEST_CASE("zero cell requires the origin inside the window") {
    auto phi = DirectionalDistribution::axis(2);
    StitPartition p = sample_stit(square01(), phi, 1.0, RngStream(107));
    CHECK_THROWS_AS(p.zero_cell(), std::domain_error);
    CHECK_THROWS_AS(sample_stit_zero_cell(square01(), phi, 1.0, RngStream(1)), std::domain_error);
}

TEST_CASE("pht sampling") {
    auto phi = DirectionalDistribution::axis(2);
    SUBCASE("zero-intensity limit has one cell") {
        PhtPartition p = sample_pht(square01(), phi, 1e-12, RngStream(108));
        CHECK(p.hyperplanes().empty());
        CHECK(p.cell_count() == 1);
    }
    SUBCASE("hyperplane count is Poisson(lambda * Lambda)") {
        RngStream rng(109);
        const int reps = 1500;
        std::vector<double> counts(reps);
        for (int r = 0; r < reps; ++r)
            counts[static_cast<std::size_t>(r)] = static_cast<double>(
                sample_pht(square01(), phi, 4.0, rng.child(static_cast<std::uint64_t>(r))).hyperplanes().size());
        MeanSe ms = mean_se(counts);
        CHECK(std::abs(ms.mean - 4.0) <= 4.0 * ms.std_error);
    }
}

TEST_CASE("cell enumeration by sequential refinement") {
    auto phi = DirectionalDistribution::axis(2);
    SUBCASE("two crossing axis hyperplanes give four cells") {
        PhtPartition p(square01(), phi, 1.0,
                       {{{1.0, 0.0}, 0.4}, {{0.0, 1.0}, 0.6}});
        CHECK(p.cell_count() == 4);
    }
    SUBCASE("k parallel hyperplanes give k+1 cells") {
        PhtPartition p(square01(), phi, 1.0,
                       {{{1.0, 0.0}, 0.2}, {{1.0, 0.0}, 0.5}, {{1.0, 0.0}, 0.8}});
        CHECK(p.cell_count() == 4);
    }
}

TEST_CASE("cell lookup") {
    auto phi = DirectionalDistribution::axis(2);
    SUBCASE("single leaf claims every interior point") {
        StitPartition p = sample_stit(square01(), phi, 1e-9, RngStream(110));
        REQUIRE(p.cell_count() == 1);
        CHECK(p.cell_of({0.3, 0.9}) == p.cell_of({0.01, 0.02}));
        CHECK_THROWS_AS(p.cell_of({2.0, 0.5}), std::domain_error);
    }
    SUBCASE("tie goes below") {
        PhtPartition p(square01(), phi, 1.0, {{{1.0, 0.0}, 0.5}});
        CHECK(p.cell_of({0.25, 0.2}) == p.cell_of({0.5, 0.9})); // on the cut -> below
        CHECK(p.cell_of({0.25, 0.2}) != p.cell_of({0.75, 0.2}));
    }
    SUBCASE("sign keys agree with enumerated membership") {
        PhtPartition p = sample_pht(square01(), phi, 3.0, RngStream(111));
        RngStream pts(112);
        for (int k = 0; k < 200; ++k) {
            Vec x{pts.uniform(), pts.uniform()};
            CellKey key = p.cell_of(x);
            int claiming = 0;
            for (std::size_t i = 0; i < p.cell_count(); ++i)
                if (contains(p.cell(i), x)) ++claiming;
            CHECK(claiming >= 1);
            // Two points of one enumerated cell share the sign key.
            CHECK(key == p.cell_of(x)); // stable
        }
    }
}

TEST_CASE("pht zero cell") {
    auto phi1 = DirectionalDistribution::axis(1);
    Window w = make_box_window({-1.0}, {1.0});
    SUBCASE("no hyperplanes: the window") {
        PhtPartition p(w, phi1, 1.0, {});
        HPolytope z = p.zero_cell();
        CHECK(z.bbox_lower()[0] == doctest::Approx(-1.0));
        CHECK(z.bbox_upper()[0] == doctest::Approx(1.0));
    }
    SUBCASE("points at +-a trap the origin in [-a, a]") {
        PhtPartition p(w, phi1, 1.0, {{{1.0}, 0.35}, {{1.0}, -0.35}});
        HPolytope z = p.zero_cell();
        CHECK(z.bbox_lower()[0] == doctest::Approx(-0.35).epsilon(1e-9));
        CHECK(z.bbox_upper()[0] == doctest::Approx(0.35).epsilon(1e-9));
    }
}

TEST_CASE("iteration") {
    SUBCASE("mean cell count is additive in d=1") {
        auto phi = DirectionalDistribution::axis(1);
        RngStream rng(113);
        const int reps = 1200;
        std::vector<double> it_counts(reps);
        for (int r = 0; r < reps; ++r) {
            RngStream s = rng.child(static_cast<std::uint64_t>(r));
            StitPartition p1 = sample_stit(interval01(), phi, 2.0, s.child(0));
            it_counts[static_cast<std::size_t>(r)] =
                static_cast<double>(iterate(p1, 3.0, s.child(1)).cell_count());
        }
        MeanSe ms = mean_se(it_counts);
        CHECK(std::abs(ms.mean - 6.0) <= 4.0 * ms.std_error);
    }
    SUBCASE("vanishing second lifetime changes nothing w.h.p.") {
        auto phi = DirectionalDistribution::axis(2);
        RngStream rng(114);
        int changed = 0;
        const int reps = 300;
        for (int r = 0; r < reps; ++r) {
            RngStream s = rng.child(static_cast<std::uint64_t>(r));
            StitPartition p1 = sample_stit(square01(), phi, 1.5, s.child(0));
            StitPartition it = iterate(p1, 1e-7, s.child(1));
            if (it.cell_count() != p1.cell_count()) ++changed;
        }
        CHECK(changed <= 3);
    }
    SUBCASE("iterated lifetimes label as the sum") {
        auto phi = DirectionalDistribution::axis(2);
        StitPartition p1 = sample_stit(square01(), phi, 1.5, RngStream(115));
        StitPartition it = iterate(p1, 2.5, RngStream(116));
        CHECK(it.lifetime() == doctest::Approx(4.0));
    }
}

TEST_CASE("zero-cell diameter halves when the lifetime doubles") {
    Window w = make_box_window({-20.0, -20.0}, {20.0, 20.0});
    auto phi = DirectionalDistribution::axis(2);
    auto dirs = make_direction_set(2, 64);
    RngStream rng(117);
    const int reps = 700;
    std::vector<double> g1(reps), g2(reps);
    for (int r = 0; r < reps; ++r) {
        RngStream s = rng.child(static_cast<std::uint64_t>(r));
        g1[static_cast<std::size_t>(r)] =
            diameter_surrogate(sample_stit_zero_cell(w, phi, 1.0, s.child(0)), dirs);
        g2[static_cast<std::size_t>(r)] =
            diameter_surrogate(sample_stit_zero_cell(w, phi, 2.0, s.child(1)), dirs);
    }
    MeanSe m1 = mean_se(g1), m2 = mean_se(g2);
    double diff = std::abs(m1.mean - 2.0 * m2.mean);
    CHECK(diff <= 4.0 * std::sqrt(m1.std_error * m1.std_error + 4.0 * m2.std_error * m2.std_error));
}

TEST_CASE("resource cap raises") {
    auto phi = DirectionalDistribution::axis(2);
    SamplerOptions opt;
    opt.max_cells = 4;
    CHECK_THROWS_AS(sample_stit(square01(), phi, 20.0, RngStream(118), opt), resource_cap_error);
}

TEST_CASE("stit rejects ball windows") {
    auto phi = DirectionalDistribution::axis(2);
    Window ball = make_ball_window({0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(sample_stit(ball, phi, 1.0, RngStream(119)), std::invalid_argument);
}

TEST_CASE("pht on a ball window supports lookup but not enumeration") {
    auto phi = DirectionalDistribution::isotropic(2);
    Window ball = make_ball_window({0.0, 0.0}, 1.0);
    PhtPartition p = sample_pht(ball, phi, 3.0, RngStream(120));
    CellKey k = p.cell_of({0.1, 0.2});
    CHECK(!k.words.empty());
    CHECK_THROWS_AS(p.cell_count(), std::invalid_argument);
}
