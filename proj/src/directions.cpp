#include "tessforest/directions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tessforest {

namespace {

constexpr std::size_t kThinningCap = 1000000;

Vec canonical_hemisphere(Vec u) {
    for (double c : u) {
        if (c > 0.0) return u;
        if (c < 0.0) {
            for (double& x : u) x = -x;
            return u;
        }
    }
    throw std::invalid_argument("directional atom must be nonzero");
}

double ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// det by Gaussian elimination with partial pivoting; d <= 10 columns.
double det_dense(std::vector<Vec> cols) {
    std::size_t d = cols.size();
    double det = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < d; ++i)
            if (std::abs(cols[i][k]) > std::abs(cols[piv][k])) piv = i;
        if (std::abs(cols[piv][k]) < 1e-14) return 0.0;
        if (piv != k) {
            std::swap(cols[piv], cols[k]);
            det = -det;
        }
        det *= cols[k][k];
        for (std::size_t i = k + 1; i < d; ++i) {
            double f = cols[i][k] / cols[k][k];
            for (std::size_t j = k; j < d; ++j) cols[i][j] -= f * cols[k][j];
        }
    }
    return det;
}

double subset_det_sum(const DiscreteDirections& dd, int d) {
    // Sum of |det| over d-subsets of the zonotope segments w_j * u_j.
    std::size_t m = dd.atoms.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    double total = 0.0;
    // Iterative combination enumeration.
    for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    if (m < static_cast<std::size_t>(d)) return 0.0;
    while (true) {
        std::vector<Vec> cols;
        cols.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            cols.push_back(scaled(dd.atoms[idx[static_cast<std::size_t>(i)]],
                                  dd.weights[idx[static_cast<std::size_t>(i)]]));
        total += std::abs(det_dense(std::move(cols)));
        int k = d - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - static_cast<std::size_t>(d - k)) --k;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
        for (int i = k + 1; i < d; ++i)
            idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
    return total;
}

} // namespace

DirectionalDistribution DirectionalDistribution::axis(int dim) {
    std::vector<Vec> atoms;
    std::vector<double> weights;
    for (int i = 0; i < dim; ++i) {
        Vec e(dim, 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        atoms.push_back(std::move(e));
        weights.push_back(1.0 / static_cast<double>(dim));
    }
    return discrete(std::move(atoms), std::move(weights));
}

DirectionalDistribution DirectionalDistribution::isotropic(int dim) {
    if (dim < 1) throw std::invalid_argument("isotropic: dimension must be >= 1");
    DirectionalDistribution d;
    d.kind_ = IsotropicDirections{dim};
    return d;
}

DirectionalDistribution DirectionalDistribution::discrete(std::vector<Vec> atoms,
                                                          std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("discrete phi: atoms/weights mismatch");
    double sum = 0.0;
    DiscreteDirections dd;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (!(weights[j] > 0.0)) throw std::invalid_argument("discrete phi: weights must be positive");
        sum += weights[j];
        dd.atoms.push_back(canonical_hemisphere(normalized(atoms[j])));
        dd.weights.push_back(weights[j]);
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("discrete phi: weights must sum to 1");
    DirectionalDistribution d;
    d.kind_ = std::move(dd);
    return d;
}

int DirectionalDistribution::dim() const {
    if (is_discrete()) return static_cast<int>(discrete_atoms().atoms.front().size());
    return std::get<IsotropicDirections>(kind_).dim;
}

Vec DirectionalDistribution::sample_direction(RngStream& rng) const {
    if (is_discrete()) {
        const auto& dd = discrete_atoms();
        double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = dd.atoms.size() - 1;
        for (std::size_t j = 0; j < dd.atoms.size(); ++j) {
            acc += dd.weights[j];
            if (u < acc) { pick = j; break; }
        }
        Vec dir = dd.atoms[pick];
        // H(u,t) = H(-u,-t); the flip keeps the sampled law even.
        if (rng.uniform() < 0.5)
            for (double& c : dir) c = -c;
        return dir;
    }
    int d = std::get<IsotropicDirections>(kind_).dim;
    Vec u(static_cast<std::size_t>(d));
    double n = 0.0;
    do {
        for (auto& c : u) c = rng.normal();
        n = norm2(u);
    } while (n < 1e-8);
    for (double& c : u) c /= n;
    return u;
}

double isotropic_zonoid_radius(int dim) {
    return std::tgamma(dim / 2.0) /
           (2.0 * std::sqrt(std::numbers::pi) * std::tgamma((dim + 1) / 2.0));
}

double zonoid_support(const DirectionalDistribution& phi, const Vec& v) {
    if (phi.is_discrete()) {
        const auto& dd = phi.discrete_atoms();
        double s = 0.0;
        for (std::size_t j = 0; j < dd.atoms.size(); ++j)
            s += dd.weights[j] * std::abs(dot(dd.atoms[j], v));
        return 0.5 * s;
    }
    return isotropic_zonoid_radius(phi.dim()) * norm2(v);
}

double zonoid_volume(const DirectionalDistribution& phi) {
    int d = phi.dim();
    if (!phi.is_discrete()) {
        double c = isotropic_zonoid_radius(d);
        return ball_volume(d) * std::pow(c, d);
    }
    double v = subset_det_sum(phi.discrete_atoms(), d);
    if (v <= 0.0)
        throw std::invalid_argument("zonoid_volume: atoms span a proper subspace (flat zonoid)");
    return v;
}

namespace {

template <typename Body>
LambdaValue lambda_discrete(const DiscreteDirections& dd, const Body& body) {
    double s = 0.0;
    for (std::size_t j = 0; j < dd.atoms.size(); ++j) s += dd.weights[j] * width(body, dd.atoms[j]);
    return {s, false};
}

} // namespace

LambdaValue lambda_of(const DirectionalDistribution& phi, const Window& w) {
    if (phi.is_discrete()) return lambda_discrete(phi.discrete_atoms(), w);
    if (!w.is_box()) return {2.0 * w.ball().radius, false};
    double c = isotropic_zonoid_radius(phi.dim());
    double sum_sides = 0.0;
    for (std::size_t i = 0; i < w.box().lower.size(); ++i)
        sum_sides += w.box().upper[i] - w.box().lower[i];
    return {2.0 * c * sum_sides, false};
}

LambdaValue lambda_of(const DirectionalDistribution& phi, const HPolytope& cell) {
    if (phi.is_discrete()) return lambda_discrete(phi.discrete_atoms(), cell);
    // For isotropic phi the samplers rely on thinning instead; report the
    // bounding-ball upper bound and flag it.
    return {2.0 * cell.bounding_ball().radius, true};
}

HitSample sample_hit(const DirectionalDistribution& phi, const HPolytope& cell, RngStream& rng) {
    auto s = sample_hit_within(phi, cell, std::numeric_limits<double>::infinity(), rng);
    return *s;
}

std::optional<HitSample> sample_hit_within(const DirectionalDistribution& phi,
                                           const HPolytope& cell, double budget,
                                           RngStream& rng) {
    BoundingBall ball = cell.bounding_ball();
    double rate = 2.0 * ball.radius; // Lambda([B]) for any probability phi
    double elapsed = 0.0;
    for (std::size_t k = 0; k < kThinningCap; ++k) {
        elapsed += rng.exponential(rate);
        if (elapsed > budget) return std::nullopt;
        Vec u = phi.sample_direction(rng);
        double mid = dot(u, ball.center);
        Hyperplane h{std::move(u), rng.uniform(mid - ball.radius, mid + ball.radius)};
        if (hits(cell, h)) return HitSample{std::move(h), elapsed};
    }
    throw std::runtime_error("sample_hit: rejection cap reached; degenerate cell");
}

Vec sample_window_biased_direction(const DirectionalDistribution& phi, const Window& w,
                                   RngStream& rng) {
    if (phi.is_discrete()) {
        const auto& dd = phi.discrete_atoms();
        std::vector<double> cum(dd.atoms.size());
        double total = 0.0;
        for (std::size_t j = 0; j < dd.atoms.size(); ++j) {
            total += dd.weights[j] * width(w, dd.atoms[j]);
            cum[j] = total;
        }
        double u = rng.uniform() * total;
        std::size_t pick = dd.atoms.size() - 1;
        for (std::size_t j = 0; j < cum.size(); ++j)
            if (u < cum[j]) { pick = j; break; }
        Vec dir = dd.atoms[pick];
        if (rng.uniform() < 0.5)
            for (double& c : dir) c = -c;
        return dir;
    }
    if (!w.is_box()) return phi.sample_direction(rng); // constant width: no bias
    // Rejection against the maximal width (the box diagonal).
    Vec sides(w.box().lower.size());
    for (std::size_t i = 0; i < sides.size(); ++i) sides[i] = w.box().upper[i] - w.box().lower[i];
    double max_width = norm2(sides);
    for (std::size_t k = 0; k < kThinningCap; ++k) {
        Vec u = phi.sample_direction(rng);
        if (rng.uniform() * max_width <= width(w, u)) return u;
    }
    throw std::runtime_error("sample_window_biased_direction: rejection cap reached");
}

} // namespace tessforest
