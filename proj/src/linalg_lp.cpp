#include "tessforest/linalg_lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tessforest {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized(const Vec& a) {
    double n = norm2(a);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    Vec out(a);
    for (double& c : out) c /= n;
    return out;
}

Vec scaled(const Vec& a, double s) {
    Vec out(a);
    for (double& c : out) c *= s;
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Vec add(const Vec& a, const Vec& b) {
    Vec out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

bool all_finite(const Vec& a) {
    for (double c : a)
        if (!std::isfinite(c)) return false;
    return true;
}

const char* lp_status_name(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-11;

// Dense tableau for a maximization problem in standard form.
// Free variables enter as x = plus - minus with plus, minus >= 0.
//
// Column layout: [2d structural | m slack | artificials | rhs].
// Row layout:    [m constraint rows | phase-II objective | phase-I objective].
class Simplex {
public:
    Simplex(const Vec& objective, const std::vector<LinearConstraint>& cons)
        : dim_(objective.size()), m_(cons.size()) {
        n_struct_ = 2 * dim_;
        // Count rows needing an artificial (negative rhs after slack insertion).
        for (const auto& c : cons)
            if (c.bound < 0.0) ++n_art_;
        cols_ = n_struct_ + m_ + n_art_ + 1;
        rows_.assign((m_ + 2) * cols_, 0.0);
        basis_.assign(m_, 0);
        active_.assign(m_, true);
        max_abs_bound_ = 1.0;

        std::size_t art = n_struct_ + m_;
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& c = cons[i];
            double sign = c.bound < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                at(i, j) = sign * c.normal[j];
                at(i, dim_ + j) = -sign * c.normal[j];
            }
            at(i, n_struct_ + i) = sign;
            rhs(i) = sign * c.bound;
            max_abs_bound_ = std::max(max_abs_bound_, std::abs(c.bound));
            if (sign < 0.0) {
                at(i, art) = 1.0;
                basis_[i] = art;
                ++art;
            } else {
                basis_[i] = n_struct_ + i;
            }
        }
        // Phase-II objective row: z - c.x = 0.
        for (std::size_t j = 0; j < dim_; ++j) {
            at(m_, j) = -objective[j];
            at(m_, dim_ + j) = objective[j];
        }
        // Phase-I objective row: maximize -(sum of artificials); reduce
        // against the artificial basic rows.
        if (n_art_ > 0) {
            for (std::size_t j = n_struct_ + m_; j + 1 < cols_; ++j) at(m_ + 1, j) = 1.0;
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] >= n_struct_ + m_)
                    for (std::size_t j = 0; j < cols_; ++j) at(m_ + 1, j) -= at(i, j);
        }
    }

    // Returns false when the constraint system is infeasible.
    bool phase_one() {
        if (n_art_ == 0) return true;
        run(m_ + 1, /*allow_artificial=*/true);
        if (rhs(m_ + 1) < -kLpTol * (1.0 + max_abs_bound_)) return false;
        // Pivot surviving artificials out of the basis; drop dependent rows.
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i] || basis_[i] < n_struct_ + m_) continue;
            std::size_t j = 0;
            bool found = false;
            for (; j < n_struct_ + m_; ++j) {
                if (std::abs(at(i, j)) > kPivotTol) { found = true; break; }
            }
            if (found) {
                pivot(i, j);
            } else {
                active_[i] = false;
            }
        }
        return true;
    }

    // Returns false on unboundedness.
    bool phase_two() { return run(m_, /*allow_artificial=*/false); }

    Vec solution() const {
        Vec x(dim_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i]) continue;
            std::size_t b = basis_[i];
            if (b < dim_) x[b] += rhs_const(i);
            else if (b < n_struct_) x[b - dim_] -= rhs_const(i);
        }
        return x;
    }

private:
    double& at(std::size_t r, std::size_t c) { return rows_[r * cols_ + c]; }
    double at_const(std::size_t r, std::size_t c) const { return rows_[r * cols_ + c]; }
    double& rhs(std::size_t r) { return rows_[r * cols_ + cols_ - 1]; }
    double rhs_const(std::size_t r) const { return rows_[r * cols_ + cols_ - 1]; }

    void pivot(std::size_t prow, std::size_t pcol) {
        double inv = 1.0 / at(prow, pcol);
        for (std::size_t j = 0; j < cols_; ++j) at(prow, j) *= inv;
        at(prow, pcol) = 1.0;
        for (std::size_t r = 0; r < m_ + 2; ++r) {
            if (r == prow) continue;
            double f = at(r, pcol);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) at(r, j) -= f * at(prow, j);
            at(r, pcol) = 0.0;
        }
        basis_[prow] = pcol;
    }

    // Bland's rule throughout: entering column is the smallest index with a
    // negative reduced cost; the leaving row breaks ratio ties by smallest
    // basic variable index. Guarantees termination and deterministic output.
    bool run(std::size_t objrow, bool allow_artificial) {
        std::size_t var_end = allow_artificial ? cols_ - 1 : n_struct_ + m_;
        std::size_t iter_cap = 2000 * (m_ + cols_);
        for (std::size_t iter = 0; iter < iter_cap; ++iter) {
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < var_end; ++j) {
                if (at(objrow, j) < -kLpTol) { enter = j; break; }
            }
            if (enter == cols_) return true;

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m_; ++r) {
                if (!active_[r]) continue;
                double a = at(r, enter);
                if (a <= kPivotTol) continue;
                double ratio = rhs(r) / a;
                if (ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol && (leave == m_ || basis_[r] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == m_) return false; // unbounded direction
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex iteration cap exceeded");
    }

    std::size_t dim_, m_, n_struct_ = 0, n_art_ = 0, cols_ = 0;
    std::vector<double> rows_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
    double max_abs_bound_;
};

void validate(const Vec& objective, const std::vector<LinearConstraint>& cons) {
    if (objective.empty() || !all_finite(objective))
        throw std::invalid_argument("lp: bad objective");
    if (cons.empty()) throw std::invalid_argument("lp: needs at least one constraint");
    for (const auto& c : cons) {
        if (c.normal.size() != objective.size() || !all_finite(c.normal) || !std::isfinite(c.bound))
            throw std::invalid_argument("lp: bad constraint");
    }
}

} // namespace

LpResult solve_lp(const LpProblem& problem) {
    validate(problem.objective, problem.constraints);
    Simplex s(problem.objective, problem.constraints);
    LpResult res;
    if (!s.phase_one()) {
        res.status = LpStatus::Infeasible;
        return res;
    }
    if (!s.phase_two()) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    res.status = LpStatus::Optimal;
    res.optimizer = s.solution();
    res.optimal_value = dot(problem.objective, res.optimizer);
    return res;
}

std::optional<Vec> feasible_point(const std::vector<LinearConstraint>& constraints) {
    if (constraints.empty()) throw std::invalid_argument("lp: needs at least one constraint");
    Vec zero(constraints.front().normal.size(), 0.0);
    validate(Vec(zero.size(), 1.0), constraints);
    Simplex s(zero, constraints);
    if (!s.phase_one()) return std::nullopt;
    return s.solution();
}

} // namespace tessforest
