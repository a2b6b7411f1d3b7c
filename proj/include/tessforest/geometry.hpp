#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tessforest/linalg_lp.hpp"
#include "tessforest/rng.hpp"

namespace tessforest {

// H(u,t) = { x : <x,u> = t } with u a unit vector.
struct Hyperplane {
    Vec direction;
    double offset = 0.0;
};

struct BoxWindow {
    Vec lower;
    Vec upper;
};

struct BallWindow {
    Vec center;
    double radius = 1.0;
};

// Compact observation window with nonempty interior.
struct Window {
    std::variant<BoxWindow, BallWindow> shape;

    int dim() const;
    bool is_box() const { return std::holds_alternative<BoxWindow>(shape); }
    const BoxWindow& box() const { return std::get<BoxWindow>(shape); }
    const BallWindow& ball() const { return std::get<BallWindow>(shape); }
    double volume() const; // exact for boxes and balls
};

Window make_box_window(Vec lower, Vec upper);
Window make_ball_window(Vec center, double radius);

// One halfspace <normal, x> <= bound of a cell. `open` marks the upper side
// of a cut: a point exactly on the cut belongs to the "<=" (below) cell, so
// the above cell excludes its own cut boundary in membership tests.
struct Halfspace {
    Vec normal;
    double bound = 0.0;
    bool open = false;
};

struct BoundingBall {
    Vec center;
    double radius = 0.0;
};

// Convex cell as an intersection of halfspaces. Instances exposed by the
// public API are nonempty and bounded; the axis-aligned bounding box is
// computed at construction (2d LPs) so values are immutable and can be
// shared across threads freely.
class HPolytope {
public:
    static HPolytope from_box(const Vec& lower, const Vec& upper);
    // Requires a nonempty bounded intersection; throws otherwise.
    static HPolytope from_halfspaces(int dim, std::vector<Halfspace> halfspaces);

    int dim() const { return dim_; }
    const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
    const Vec& bbox_lower() const { return bbox_lower_; }
    const Vec& bbox_upper() const { return bbox_upper_; }
    BoundingBall bounding_ball() const;

    friend HPolytope dilated(const HPolytope& cell, double s);

private:
    HPolytope() = default;
    void compute_bbox();

    int dim_ = 0;
    std::vector<Halfspace> halfspaces_;
    Vec bbox_lower_, bbox_upper_;
};

// Support function h(body, u) = sup_{x in body} <u, x>.
double support(const Window& w, const Vec& u);
double support(const HPolytope& cell, const Vec& u);

// h(body,u) + h(body,-u).
double width(const Window& w, const Vec& u);
double width(const HPolytope& cell, const Vec& u);

// Whether the hyperplane meets the closed cell.
bool hits(const HPolytope& cell, const Hyperplane& h);

struct SplitResult {
    std::optional<HPolytope> below; // cell cut with <u,x> <= t
    std::optional<HPolytope> above; // cell cut with <u,x> >= t
};

// Cut a cell; a side is absent when its interior is empty. Grazing cuts
// return the whole cell on one side.
SplitResult split(const HPolytope& cell, const Hyperplane& h);

// Closed membership with kLpTol slack; open halfspaces test strictly so a
// point exactly on a cut is claimed only by the below cell.
bool contains(const HPolytope& cell, const Vec& x);

struct McVolume {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Hit-or-miss volume over the bounding box.
McVolume mc_volume(const HPolytope& cell, std::size_t n_points, RngStream& rng);

// Mean of hit-or-miss points inside the cell; throws when none land inside.
Vec centroid_estimate(const HPolytope& cell, std::size_t n_points, RngStream& rng);

// Fixed evaluation directions shared by every sample of one experiment.
// d=2 uses equally spaced angles over the half-circle; other dimensions use
// a seeded deterministic sequence of unit vectors.
std::vector<Vec> make_direction_set(int dim, std::size_t count, std::uint64_t seed = 0x9A0D1C3B5E7F2468ULL);

// max over the direction set of width(cell, u); a 1-homogeneous lower bound
// for the diameter.
double diameter_surrogate(const HPolytope& cell, const std::vector<Vec>& directions);

// Counterclockwise vertex cycle of a 2D cell.
std::vector<Vec> polygon_vertices_2d(const HPolytope& cell);

// The dilation s*cell (bounds scaled by s > 0).
HPolytope dilated(const HPolytope& cell, double s);

// True when the cell has a face lying on the window boundary (within tol).
bool touches_window_boundary(const HPolytope& cell, const BoxWindow& box, double tol = 1e-6);

} // namespace tessforest
