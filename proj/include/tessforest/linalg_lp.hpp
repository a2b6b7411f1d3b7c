#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tessforest {

// Points, directions and normals are dense small-dimension vectors.
using Vec = std::vector<double>;

// Absolute feasibility/optimality tolerance shared by all LP-backed
// geometric queries.
inline constexpr double kLpTol = 1e-9;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
Vec normalized(const Vec& a);
Vec scaled(const Vec& a, double s);
Vec sub(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

// One linear inequality <normal, x> <= bound.
struct LinearConstraint {
    Vec normal;
    double bound = 0.0;
};

// maximize <objective, x>  subject to  <normal_i, x> <= bound_i, x free.
struct LpProblem {
    Vec objective;
    std::vector<LinearConstraint> constraints;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double optimal_value = 0.0;
    Vec optimizer;
};

// Dense two-phase tableau simplex with Bland's pivoting rule.
LpResult solve_lp(const LpProblem& problem);

// Phase-one only: a point satisfying all constraints, or nullopt.
std::optional<Vec> feasible_point(const std::vector<LinearConstraint>& constraints);

const char* lp_status_name(LpStatus s);

} // namespace tessforest
