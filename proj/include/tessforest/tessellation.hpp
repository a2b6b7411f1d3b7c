#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "tessforest/directions.hpp"

namespace tessforest {

// Raised when a sampler exceeds its configured cell cap.
struct resource_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SamplerOptions {
    std::size_t max_cells = 10000000;
};

// Hashable cell identifier: the leaf index for a STIT cut tree, the packed
// hyperplane sign vector for a Poisson hyperplane partition.
struct CellKey {
    std::vector<std::uint64_t> words;
    bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (std::uint64_t w : k.words) {
            h ^= w;
            h *= 0x100000001B3ULL;
            h = RngStream::mix64(h);
        }
        return static_cast<std::size_t>(h);
    }
};

// Node of a STIT cut tree; a node is a leaf iff below < 0.
struct StitNode {
    int below = -1;
    int above = -1;
    Hyperplane cut;
    double cut_time = 0.0;
    int leaf_index = -1;
};

struct StitLeaf {
    HPolytope cell;
    double birth_time = 0.0;
};

// STIT partition of a window: recursive hyperplane cuts at exponential
// times up to the lifetime.
class StitPartition {
public:
    const Window& window() const { return window_; }
    const DirectionalDistribution& phi() const { return phi_; }
    double lifetime() const { return lifetime_; }
    const std::vector<StitNode>& nodes() const { return nodes_; }
    const std::vector<StitLeaf>& leaves() const { return leaves_; }

    std::size_t cell_count() const { return leaves_.size(); }
    const HPolytope& cell(std::size_t i) const { return leaves_[i].cell; }

    // Descends the cut tree by the sign of <u,x> - t; ties go below.
    CellKey cell_of(const Vec& x) const;
    std::size_t leaf_of(const Vec& x) const;

    const HPolytope& zero_cell() const;

    friend StitPartition sample_stit(const Window&, const DirectionalDistribution&, double,
                                     RngStream, const SamplerOptions&);
    friend StitPartition iterate(const StitPartition&, double, RngStream, const SamplerOptions&);
    friend StitPartition rebuild_stit(const Window&, const DirectionalDistribution&, double,
                                      const std::vector<StitNode>& topology);

private:
    Window window_{BoxWindow{{0.0}, {1.0}}};
    DirectionalDistribution phi_ = DirectionalDistribution::axis(1);
    double lifetime_ = 0.0;
    std::vector<StitNode> nodes_;
    std::vector<StitLeaf> leaves_;
};

StitPartition sample_stit(const Window& window, const DirectionalDistribution& phi,
                          double lifetime, RngStream stream, const SamplerOptions& opt = {});

// Subdivides every leaf of p1 by a fresh STIT construction with lifetime
// lambda2; the result carries lifetime label p1.lifetime() + lambda2 and is
// equal in law to a direct STIT at the summed lifetime.
StitPartition iterate(const StitPartition& p1, double lambda2, RngStream stream,
                      const SamplerOptions& opt = {});

// Zero cell without materializing the rest of the tree: follows only the
// origin branch of the recursion and reproduces zero_cell(sample_stit(...))
// bit-exactly for the same stream.
HPolytope sample_stit_zero_cell(const Window& window, const DirectionalDistribution& phi,
                                double lifetime, RngStream stream);

// Reconstructs cells from a stored cut-tree topology (deserialization).
StitPartition rebuild_stit(const Window& window, const DirectionalDistribution& phi,
                           double lifetime, const std::vector<StitNode>& topology);

// Poisson hyperplane partition of a window: the restriction of a Poisson
// hyperplane process with the given intensity to the window.
class PhtPartition {
public:
    PhtPartition(Window window, DirectionalDistribution phi, double intensity,
                 std::vector<Hyperplane> hyperplanes, SamplerOptions opt = {});

    const Window& window() const { return window_; }
    const DirectionalDistribution& phi() const { return phi_; }
    double intensity() const { return intensity_; }
    const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }

    // Packed sign vector over all hyperplanes; no polytopes materialized.
    CellKey cell_of(const Vec& x) const;

    // Exact arrangement restricted to the window via sequential refinement;
    // materialized once and cached (box windows only).
    const std::vector<HPolytope>& cells() const;
    std::size_t cell_count() const { return cells().size(); }
    const HPolytope& cell(std::size_t i) const { return cells()[i]; }

    HPolytope zero_cell() const;

private:
    Window window_;
    DirectionalDistribution phi_;
    double intensity_ = 0.0;
    std::vector<Hyperplane> hyperplanes_;
    SamplerOptions opt_;

    struct LazyCells {
        std::once_flag flag;
        std::vector<HPolytope> cells;
    };
    std::shared_ptr<LazyCells> lazy_;
};

PhtPartition sample_pht(const Window& window, const DirectionalDistribution& phi,
                        double intensity, RngStream stream, const SamplerOptions& opt = {});

// A sampled partition with uniform cell lookup/enumeration.
class Partition {
public:
    enum class Kind { Stit, Pht };

    explicit Partition(StitPartition p) : kind_(Kind::Stit), stit_(std::make_shared<StitPartition>(std::move(p))) {}
    explicit Partition(PhtPartition p) : kind_(Kind::Pht), pht_(std::make_shared<PhtPartition>(std::move(p))) {}

    Kind kind() const { return kind_; }
    const StitPartition& stit() const { return *stit_; }
    const PhtPartition& pht() const { return *pht_; }

    const Window& window() const { return kind_ == Kind::Stit ? stit_->window() : pht_->window(); }
    const DirectionalDistribution& phi() const { return kind_ == Kind::Stit ? stit_->phi() : pht_->phi(); }
    double lambda() const { return kind_ == Kind::Stit ? stit_->lifetime() : pht_->intensity(); }

    CellKey cell_of(const Vec& x) const;
    std::size_t cell_count() const { return kind_ == Kind::Stit ? stit_->cell_count() : pht_->cell_count(); }
    const HPolytope& cell(std::size_t i) const { return kind_ == Kind::Stit ? stit_->cell(i) : pht_->cell(i); }
    HPolytope zero_cell() const { return kind_ == Kind::Stit ? stit_->zero_cell() : pht_->zero_cell(); }

private:
    Kind kind_;
    std::shared_ptr<const StitPartition> stit_;
    std::shared_ptr<const PhtPartition> pht_;
};

enum class SamplerKind { Stit, Pht };

Partition sample_partition(SamplerKind kind, const Window& window,
                           const DirectionalDistribution& phi, double lambda, RngStream stream,
                           const SamplerOptions& opt = {});

// Whether x lies in the window (closed, with kLpTol slack).
bool window_contains(const Window& w, const Vec& x);

// Strict interior test for the origin; zero-cell queries require it.
bool window_interior_contains_origin(const Window& w);

} // namespace tessforest
