#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tessforest/geometry.hpp"

namespace tessforest {

// Even measure on the sphere given by discrete atoms; each stored atom u
// stands for the symmetrized pair (u,-u) carrying its full weight. Atoms
// are canonicalized so the first nonzero coordinate is positive.
struct DiscreteDirections {
    std::vector<Vec> atoms;
    std::vector<double> weights; // positive, summing to 1
};

struct IsotropicDirections {
    int dim = 2;
};

// Directional distribution phi of cut-hyperplane normals.
class DirectionalDistribution {
public:
    static DirectionalDistribution axis(int dim);
    static DirectionalDistribution isotropic(int dim);
    static DirectionalDistribution discrete(std::vector<Vec> atoms, std::vector<double> weights);

    bool is_discrete() const { return std::holds_alternative<DiscreteDirections>(kind_); }
    const DiscreteDirections& discrete_atoms() const { return std::get<DiscreteDirections>(kind_); }
    int dim() const;

    // A phi-distributed direction (after the even sign flip for atoms).
    Vec sample_direction(RngStream& rng) const;

private:
    std::variant<DiscreteDirections, IsotropicDirections> kind_;
};

// c_d = Gamma(d/2) / (2 sqrt(pi) Gamma((d+1)/2)); the isotropic zonoid is
// the ball of this radius.
double isotropic_zonoid_radius(int dim);

// h(Pi, v) = (1/2) integral of |<u,v>| d phi(u).
double zonoid_support(const DirectionalDistribution& phi, const Vec& v);

// vol_d of the associated zonoid; throws when the atoms span a proper
// subspace (the tessellation would have unbounded cells).
double zonoid_volume(const DirectionalDistribution& phi);

struct LambdaValue {
    double value = 0.0;
    // Set when only an upper bound is available (isotropic phi over a
    // general polytope); samplers never need the exact value in that case.
    bool bound_only = false;
};

// Lambda([body]) = integral of width(body, u) d phi(u).
LambdaValue lambda_of(const DirectionalDistribution& phi, const Window& w);
LambdaValue lambda_of(const DirectionalDistribution& phi, const HPolytope& cell);

struct HitSample {
    Hyperplane h;
    double waiting_time = 0.0;
};

// First hyperplane of a unit-intensity Lambda-driven Poisson clock that hits
// the cell, with the total exponential waiting time elapsed. Candidates run
// at rate Lambda([B]) for the bounding ball B and are thinned by a hit test,
// which is distributionally exact: waiting_time ~ Exp(Lambda([cell])) and h
// follows Lambda conditioned on hitting the cell.
HitSample sample_hit(const DirectionalDistribution& phi, const HPolytope& cell, RngStream& rng);

// Same law, but gives up once the accumulated waiting time exceeds `budget`
// (the hit, if any, still falls within the budget). Used by the STIT
// recursion where only hits before the remaining lifetime matter.
std::optional<HitSample> sample_hit_within(const DirectionalDistribution& phi,
                                           const HPolytope& cell, double budget,
                                           RngStream& rng);

// A direction from the size-biased law dPhi(u) ~ width(w,u) dphi(u) used by
// the Poisson hyperplane sampler on a window.
Vec sample_window_biased_direction(const DirectionalDistribution& phi, const Window& w,
                                   RngStream& rng);

} // namespace tessforest
