#include "tessforest/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tessforest {

namespace {

constexpr double kUnitTol = 1e-12;

void check_unit(const Vec& u) {
    if (std::abs(norm2(u) - 1.0) > 1e-10)
        throw std::invalid_argument("direction must be a unit vector");
}

std::vector<LinearConstraint> as_constraints(const std::vector<Halfspace>& hs) {
    std::vector<LinearConstraint> out;
    out.reserve(hs.size());
    for (const auto& h : hs) out.push_back({h.normal, h.bound});
    return out;
}

double support_lp(const std::vector<Halfspace>& hs, const Vec& u) {
    LpProblem p{u, as_constraints(hs)};
    LpResult r = solve_lp(p);
    if (r.status == LpStatus::Unbounded)
        throw std::runtime_error("support query on unbounded halfspace intersection");
    if (r.status == LpStatus::Infeasible)
        throw std::runtime_error("support query on empty halfspace intersection");
    return r.optimal_value;
}

// Drop halfspaces implied by the others. Run when cells accumulate cuts so
// LP sizes stay bounded in deep trees.
void prune_redundant(std::vector<Halfspace>& hs) {
    for (std::size_t i = 0; i < hs.size();) {
        if (hs.size() <= 2) break;
        std::vector<Halfspace> rest;
        rest.reserve(hs.size() - 1);
        for (std::size_t j = 0; j < hs.size(); ++j)
            if (j != i) rest.push_back(hs[j]);
        LpResult r = solve_lp({hs[i].normal, as_constraints(rest)});
        if (r.status == LpStatus::Optimal && r.optimal_value <= hs[i].bound + kLpTol) {
            hs.erase(hs.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
}

} // namespace

int Window::dim() const {
    if (is_box()) return static_cast<int>(box().lower.size());
    return static_cast<int>(ball().center.size());
}

double Window::volume() const {
    if (is_box()) {
        double v = 1.0;
        for (std::size_t i = 0; i < box().lower.size(); ++i)
            v *= box().upper[i] - box().lower[i];
        return v;
    }
    int d = dim();
    double kd = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    return kd * std::pow(ball().radius, d);
}

Window make_box_window(Vec lower, Vec upper) {
    if (lower.empty() || lower.size() != upper.size() || !all_finite(lower) || !all_finite(upper))
        throw std::invalid_argument("box window: bad bounds");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("box window: lower must be < upper componentwise");
    return Window{BoxWindow{std::move(lower), std::move(upper)}};
}

Window make_ball_window(Vec center, double radius) {
    if (center.empty() || !all_finite(center) || !(radius > 0.0))
        throw std::invalid_argument("ball window: bad parameters");
    return Window{BallWindow{std::move(center), radius}};
}

HPolytope HPolytope::from_box(const Vec& lower, const Vec& upper) {
    HPolytope p;
    p.dim_ = static_cast<int>(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
        Vec n(lower.size(), 0.0);
        n[i] = 1.0;
        p.halfspaces_.push_back({n, upper[i], false});
        n[i] = -1.0;
        p.halfspaces_.push_back({n, -lower[i], false});
    }
    p.bbox_lower_ = lower;
    p.bbox_upper_ = upper;
    return p;
}

HPolytope HPolytope::from_halfspaces(int dim, std::vector<Halfspace> halfspaces) {
    HPolytope p;
    p.dim_ = dim;
    p.halfspaces_ = std::move(halfspaces);
    for (auto& h : p.halfspaces_) {
        double n = norm2(h.normal);
        if (std::abs(n - 1.0) > kUnitTol && n > 0.0) {
            for (double& c : h.normal) c /= n;
            h.bound /= n;
        }
    }
    p.compute_bbox();
    return p;
}

void HPolytope::compute_bbox() {
    bbox_lower_.assign(dim_, 0.0);
    bbox_upper_.assign(dim_, 0.0);
    Vec axis(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
        axis[i] = 1.0;
        bbox_upper_[i] = support_lp(halfspaces_, axis);
        axis[i] = -1.0;
        bbox_lower_[i] = -support_lp(halfspaces_, axis);
        axis[i] = 0.0;
    }
}

BoundingBall HPolytope::bounding_ball() const {
    Vec center(dim_, 0.0);
    double diag2 = 0.0;
    for (int i = 0; i < dim_; ++i) {
        center[i] = 0.5 * (bbox_lower_[i] + bbox_upper_[i]);
        double e = bbox_upper_[i] - bbox_lower_[i];
        diag2 += e * e;
    }
    return {center, 0.5 * std::sqrt(diag2)};
}

double support(const Window& w, const Vec& u) {
    check_unit(u);
    if (w.is_box()) {
        const auto& b = w.box();
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            s += u[i] > 0.0 ? u[i] * b.upper[i] : u[i] * b.lower[i];
        return s;
    }
    return dot(u, w.ball().center) + w.ball().radius;
}

double support(const HPolytope& cell, const Vec& u) {
    return support_lp(cell.halfspaces(), u);
}

double width(const Window& w, const Vec& u) { return support(w, u) + support(w, scaled(u, -1.0)); }

double width(const HPolytope& cell, const Vec& u) {
    return support(cell, u) + support(cell, scaled(u, -1.0));
}

bool hits(const HPolytope& cell, const Hyperplane& h) {
    double hi = support(cell, h.direction);
    if (h.offset > hi + kLpTol) return false;
    double lo = -support(cell, scaled(h.direction, -1.0));
    return h.offset >= lo - kLpTol;
}

SplitResult split(const HPolytope& cell, const Hyperplane& h) {
    check_unit(h.direction);
    double hi = support(cell, h.direction);
    double lo = -support(cell, scaled(h.direction, -1.0));
    SplitResult out;
    if (h.offset >= hi - kLpTol) {
        out.below = cell;
        return out;
    }
    if (h.offset <= lo + kLpTol) {
        out.above = cell;
        return out;
    }
    std::size_t max_hs = static_cast<std::size_t>(4 * cell.dim());
    std::vector<Halfspace> below_hs = cell.halfspaces();
    below_hs.push_back({h.direction, h.offset, false});
    if (below_hs.size() > max_hs) prune_redundant(below_hs);
    std::vector<Halfspace> above_hs = cell.halfspaces();
    above_hs.push_back({scaled(h.direction, -1.0), -h.offset, true});
    if (above_hs.size() > max_hs) prune_redundant(above_hs);
    out.below = HPolytope::from_halfspaces(cell.dim(), std::move(below_hs));
    out.above = HPolytope::from_halfspaces(cell.dim(), std::move(above_hs));
    return out;
}

bool contains(const HPolytope& cell, const Vec& x) {
    for (const auto& hs : cell.halfspaces()) {
        double v = dot(hs.normal, x);
        if (hs.open ? !(v < hs.bound) : !(v <= hs.bound + kLpTol)) return false;
    }
    return true;
}

McVolume mc_volume(const HPolytope& cell, std::size_t n_points, RngStream& rng) {
    if (n_points < 100) throw std::invalid_argument("mc_volume: n_points must be >= 100");
    const Vec& lo = cell.bbox_lower();
    const Vec& hi = cell.bbox_upper();
    double box_vol = 1.0;
    for (int i = 0; i < cell.dim(); ++i) box_vol *= hi[i] - lo[i];
    std::size_t hit = 0;
    Vec x(cell.dim());
    for (std::size_t k = 0; k < n_points; ++k) {
        for (int i = 0; i < cell.dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
        if (contains(cell, x)) ++hit;
    }
    double p = static_cast<double>(hit) / static_cast<double>(n_points);
    return {box_vol * p, box_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n_points))};
}

Vec centroid_estimate(const HPolytope& cell, std::size_t n_points, RngStream& rng) {
    if (n_points < 100) throw std::invalid_argument("centroid_estimate: n_points must be >= 100");
    const Vec& lo = cell.bbox_lower();
    const Vec& hi = cell.bbox_upper();
    Vec mean(cell.dim(), 0.0);
    std::size_t hit = 0;
    Vec x(cell.dim());
    for (std::size_t k = 0; k < n_points; ++k) {
        for (int i = 0; i < cell.dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
        if (contains(cell, x)) {
            ++hit;
            for (int i = 0; i < cell.dim(); ++i) mean[i] += x[i];
        }
    }
    if (hit == 0)
        throw std::runtime_error("centroid_estimate: no points landed inside; raise n_points");
    for (double& c : mean) c /= static_cast<double>(hit);
    return mean;
}

std::vector<Vec> make_direction_set(int dim, std::size_t count, std::uint64_t seed) {
    if (dim < 1 || count == 0) throw std::invalid_argument("make_direction_set: bad arguments");
    std::vector<Vec> dirs;
    dirs.reserve(count);
    if (dim == 1) {
        dirs.push_back({1.0});
        return dirs;
    }
    if (dim == 2) {
        for (std::size_t k = 0; k < count; ++k) {
            double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
            dirs.push_back({std::cos(theta), std::sin(theta)});
        }
        return dirs;
    }
    RngStream rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
        Vec u(dim);
        double n = 0.0;
        do {
            for (int i = 0; i < dim; ++i) u[i] = rng.normal();
            n = norm2(u);
        } while (n < 1e-8);
        for (double& c : u) c /= n;
        dirs.push_back(u);
    }
    return dirs;
}

double diameter_surrogate(const HPolytope& cell, const std::vector<Vec>& directions) {
    if (directions.empty()) throw std::invalid_argument("diameter_surrogate: empty direction set");
    double best = 0.0;
    for (const auto& u : directions) best = std::max(best, width(cell, u));
    return best;
}

std::vector<Vec> polygon_vertices_2d(const HPolytope& cell) {
    if (cell.dim() != 2) throw std::invalid_argument("polygon_vertices_2d: requires d = 2");
    constexpr double tol = 1e-9;
    const auto& hs = cell.halfspaces();
    std::vector<Vec> verts;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
            double det = hs[i].normal[0] * hs[j].normal[1] - hs[i].normal[1] * hs[j].normal[0];
            if (std::abs(det) < 1e-12) continue;
            double x = (hs[i].bound * hs[j].normal[1] - hs[j].bound * hs[i].normal[1]) / det;
            double y = (hs[i].normal[0] * hs[j].bound - hs[j].normal[0] * hs[i].bound) / det;
            Vec v{x, y};
            bool ok = true;
            for (const auto& other : hs) {
                if (dot(other.normal, v) > other.bound + tol) { ok = false; break; }
            }
            if (!ok) continue;
            bool dup = false;
            for (const auto& w : verts) {
                if (std::abs(w[0] - x) <= tol && std::abs(w[1] - y) <= tol) { dup = true; break; }
            }
            if (!dup) verts.push_back(std::move(v));
        }
    }
    if (verts.empty()) return verts;
    Vec mean{0.0, 0.0};
    for (const auto& v : verts) {
        mean[0] += v[0];
        mean[1] += v[1];
    }
    mean[0] /= static_cast<double>(verts.size());
    mean[1] /= static_cast<double>(verts.size());
    std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2(a[1] - mean[1], a[0] - mean[0]) < std::atan2(b[1] - mean[1], b[0] - mean[0]);
    });
    return verts;
}

HPolytope dilated(const HPolytope& cell, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("dilated: scale must be positive");
    HPolytope out;
    out.dim_ = cell.dim_;
    out.halfspaces_ = cell.halfspaces_;
    for (auto& h : out.halfspaces_) h.bound *= s;
    out.bbox_lower_ = scaled(cell.bbox_lower_, s);
    out.bbox_upper_ = scaled(cell.bbox_upper_, s);
    return out;
}

bool touches_window_boundary(const HPolytope& cell, const BoxWindow& box, double tol) {
    for (std::size_t i = 0; i < box.lower.size(); ++i) {
        if (cell.bbox_upper()[i] >= box.upper[i] - tol) return true;
        if (cell.bbox_lower()[i] <= box.lower[i] + tol) return true;
    }
    return false;
}

} // namespace tessforest
