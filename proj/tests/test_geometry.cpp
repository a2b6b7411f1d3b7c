#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "tessforest/geometry.hpp"

using namespace tessforest;

namespace {

const double kSqrt2 = std::sqrt(2.0);

HPolytope unit_square() { return HPolytope::from_box({0.0, 0.0}, {1.0, 1.0}); }

Vec unit2(double a) { return {std::cos(a), std::sin(a)}; }

} // namespace

TEST_CASE("support closed forms and LP route") {
    Window box = make_box_window({0.0, 0.0}, {1.0, 1.0});
    CHECK(support(box, {1.0, 0.0}) == doctest::Approx(1.0));
    Window ball = make_ball_window({0.0, 0.0}, 2.5);
    for (double a : {0.1, 1.3, 2.9}) CHECK(support(ball, unit2(a)) == doctest::Approx(2.5));

    // Simplex {x >= 0, x1 + x2 <= 1}: support at the diagonal is 1/sqrt(2),
    // the max of <u, v> over vertices (0,0), (1,0), (0,1).
    double s = 1.0 / kSqrt2;
    HPolytope simplex = HPolytope::from_halfspaces(
        2, {{{-1.0, 0.0}, 0.0}, {{0.0, -1.0}, 0.0}, {{s, s}, s}});
    CHECK(support(simplex, {s, s}) == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("width") {
    Window box = make_box_window({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
    CHECK(width(box, {0.0, 1.0, 0.0}) == doctest::Approx(1.0));
    Window ball = make_ball_window({1.0, -2.0}, 0.75);
    CHECK(width(ball, unit2(0.4)) == doctest::Approx(1.5));
    CHECK(width(unit_square(), {1.0 / kSqrt2, 1.0 / kSqrt2}) == doctest::Approx(kSqrt2));
}

TEST_CASE("hits uses the closed cell") {
    HPolytope sq = unit_square();
    CHECK(hits(sq, {{1.0, 0.0}, 0.5}));
    CHECK(!hits(sq, {{1.0, 0.0}, 1.5}));
    CHECK(hits(sq, {{1.0, 0.0}, 1.0})); // exactly touching
}

TEST_CASE("split") {
    HPolytope sq = unit_square();
    SUBCASE("through the middle") {
        SplitResult sr = split(sq, {{1.0, 0.0}, 0.5});
        REQUIRE(sr.below);
        REQUIRE(sr.above);
        CHECK(sr.below->bbox_upper()[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(sr.above->bbox_lower()[0] == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(sr.below->bbox_upper()[1] == doctest::Approx(1.0));
    }
    SUBCASE("missing the cell") {
        SplitResult sr = split(sq, {{1.0, 0.0}, 2.0});
        REQUIRE(sr.below);
        CHECK(!sr.above);
        CHECK(sr.below->halfspaces().size() == sq.halfspaces().size());
    }
    SUBCASE("diagonal cut halves the area") {
        double s = 1.0 / kSqrt2;
        SplitResult sr = split(sq, {{s, s}, s});
        REQUIRE(sr.below);
        REQUIRE(sr.above);
        RngStream rng(5);
        McVolume vb = mc_volume(*sr.below, 100000, rng);
        McVolume va = mc_volume(*sr.above, 100000, rng);
        CHECK(std::abs(vb.estimate - 0.5) <= 4.0 * vb.std_error);
        CHECK(std::abs(va.estimate - 0.5) <= 4.0 * va.std_error);
    }
}

TEST_CASE("contains and the boundary convention") {
    HPolytope sq = unit_square();
    CHECK(contains(sq, {0.5, 0.5}));
    CHECK(!contains(sq, {2.0, 0.0}));

    SplitResult sr = split(sq, {{1.0, 0.0}, 0.5});
    // A point exactly on the cut belongs to below, not above.
    CHECK(contains(*sr.below, {0.5, 0.2}));
    CHECK(!contains(*sr.above, {0.5, 0.2}));
    CHECK(contains(*sr.above, {0.7, 0.2}));
}

TEST_CASE("bounding ball") {
    BoundingBall b = unit_square().bounding_ball();
    CHECK(b.center[0] == doctest::Approx(0.5));
    CHECK(b.center[1] == doctest::Approx(0.5));
    CHECK(b.radius == doctest::Approx(kSqrt2 / 2.0).epsilon(1e-9));

    // Degenerate-thin cell {0 <= x1 <= 1e-8} in the unit square.
    HPolytope thin = HPolytope::from_halfspaces(2, {{{1.0, 0.0}, 1e-8},
                                                    {{-1.0, 0.0}, 0.0},
                                                    {{0.0, 1.0}, 1.0},
                                                    {{0.0, -1.0}, 0.0}});
    CHECK(std::abs(thin.bounding_ball().radius - 0.5) <= 1e-6);
}

TEST_CASE("mc volume") {
    RngStream rng(11);
    HPolytope sq = unit_square();
    McVolume v = mc_volume(sq, 5000, rng);
    CHECK(v.estimate == doctest::Approx(1.0)); // box equals cell, p = 1 exactly
    CHECK(v.std_error == doctest::Approx(0.0));

    double s = 1.0 / kSqrt2;
    HPolytope tri = HPolytope::from_halfspaces(
        2, {{{-1.0, 0.0}, 0.0}, {{0.0, -1.0}, 0.0}, {{s, s}, s}});
    McVolume vt = mc_volume(tri, 100000, rng);
    CHECK(std::abs(vt.estimate - 0.5) <= 4.0 * vt.std_error);

    HPolytope strip = HPolytope::from_halfspaces(2, {{{1.0, 0.0}, 1e-3},
                                                     {{-1.0, 0.0}, 0.0},
                                                     {{0.0, 1.0}, 1.0},
                                                     {{0.0, -1.0}, 0.0}});
    McVolume vs = mc_volume(strip, 100000, rng);
    CHECK(vs.estimate == doctest::Approx(1e-3)); // bbox equals the strip
    CHECK_THROWS_AS(mc_volume(sq, 50, rng), std::invalid_argument);
}

TEST_CASE("centroid estimate") {
    RngStream rng(13);
    HPolytope centered = HPolytope::from_box({-0.5, -0.5}, {0.5, 0.5});
    Vec c = centroid_estimate(centered, 20000, rng);
    CHECK(std::abs(c[0]) <= 0.02);
    CHECK(std::abs(c[1]) <= 0.02);

    double s = 1.0 / kSqrt2;
    HPolytope tri = HPolytope::from_halfspaces(
        2, {{{-1.0, 0.0}, 0.0}, {{0.0, -1.0}, 0.0}, {{s, s}, s}});
    Vec ct = centroid_estimate(tri, 200000, rng);
    CHECK(ct[0] == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(ct[1] == doctest::Approx(1.0 / 3.0).epsilon(0.02));

    // Translation equivariance in expectation.
    HPolytope shifted = HPolytope::from_box({2.0, -1.5}, {3.0, -0.5});
    Vec cs = centroid_estimate(shifted, 20000, rng);
    CHECK(cs[0] == doctest::Approx(2.5).epsilon(0.01));
    CHECK(cs[1] == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("diameter surrogate") {
    HPolytope sq = unit_square();
    std::vector<Vec> axes = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK(diameter_surrogate(sq, axes) == doctest::Approx(1.0));

    auto dirs = make_direction_set(2, 256);
    double d = diameter_surrogate(sq, dirs);
    CHECK(d >= 1.0);
    CHECK(d <= kSqrt2 + 1e-9);
    CHECK(d >= 1.41);

    // Exact homogeneity under power-of-two dilation, same direction set.
    CHECK(diameter_surrogate(dilated(sq, 2.0), dirs) == 2.0 * d);
}

TEST_CASE("2d polygon vertices") {
    HPolytope sq = unit_square();
    auto verts = polygon_vertices_2d(sq);
    REQUIRE(verts.size() == 4);
    // Counterclockwise cycle starting anywhere: signed area is +1.
    double area2 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const Vec& a = verts[i];
        const Vec& b = verts[(i + 1) % 4];
        area2 += a[0] * b[1] - b[0] * a[1];
    }
    CHECK(area2 == doctest::Approx(2.0).epsilon(1e-9));

    auto hs = sq.halfspaces();
    hs.push_back({{1.0, 0.0}, 5.0}); // redundant
    auto verts2 = polygon_vertices_2d(HPolytope::from_halfspaces(2, hs));
    CHECK(verts2.size() == 4);

    double s = 1.0 / kSqrt2;
    SplitResult sr = split(sq, {{s, s}, s});
    CHECK(polygon_vertices_2d(*sr.below).size() == 3);

    HPolytope seg = HPolytope::from_box({0.0}, {1.0});
    CHECK_THROWS_AS(polygon_vertices_2d(seg), std::invalid_argument);
}

TEST_CASE("redundant halfspaces get pruned in deep splits") {
    HPolytope cell = unit_square();
    RngStream rng(17);
    for (int k = 0; k < 12; ++k) {
        Vec u = unit2(rng.uniform() * 3.14159);
        double hi = support(cell, u);
        double lo = -support(cell, scaled(u, -1.0));
        SplitResult sr = split(cell, {u, lo + (0.3 + 0.4 * rng.uniform()) * (hi - lo)});
        REQUIRE(sr.below);
        cell = *sr.below;
    }
    // Once the count exceeds 4d, every remaining halfspace is non-redundant.
    if (cell.halfspaces().size() > 8) {
        for (std::size_t i = 0; i < cell.halfspaces().size(); ++i) {
            LpProblem p;
            p.objective = cell.halfspaces()[i].normal;
            for (std::size_t j = 0; j < cell.halfspaces().size(); ++j) {
                if (j != i) p.constraints.push_back({cell.halfspaces()[j].normal, cell.halfspaces()[j].bound});
            }
            LpResult r = solve_lp(p);
            bool nonredundant = r.status != LpStatus::Optimal ||
                                r.optimal_value > cell.halfspaces()[i].bound + kLpTol;
            CHECK(nonredundant);
        }
    }
}

TEST_CASE("window boundary contact") {
    BoxWindow box{{0.0, 0.0}, {1.0, 1.0}};
    CHECK(touches_window_boundary(unit_square(), box));
    HPolytope inner = HPolytope::from_box({0.3, 0.3}, {0.6, 0.6});
    CHECK(!touches_window_boundary(inner, box));
}

TEST_CASE("window validation") {
    CHECK_THROWS_AS(make_box_window({0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_ball_window({0.0}, 0.0), std::invalid_argument);
    CHECK(make_ball_window({0.0, 0.0}, 2.0).volume() == doctest::Approx(4.0 * 3.14159265358979));
    CHECK(make_box_window({0.0, 0.0}, {2.0, 3.0}).volume() == doctest::Approx(6.0));
}
