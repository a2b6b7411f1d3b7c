#include "tessforest/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tessforest {

namespace {

HPolytope window_polytope(const Window& w) {
    if (!w.is_box())
        throw std::invalid_argument("cell operations require a box window");
    return HPolytope::from_box(w.box().lower, w.box().upper);
}

// Side of a cut the point belongs to; ties go below.
bool point_below(const Hyperplane& h, const Vec& x) { return dot(h.direction, x) <= h.offset; }

struct StitBuilder {
    const DirectionalDistribution& phi;
    const SamplerOptions& opt;
    std::vector<StitNode> nodes;
    std::vector<StitLeaf> leaves;

    int make_leaf(HPolytope cell, double birth) {
        if (leaves.size() >= opt.max_cells)
            throw resource_cap_error("sample_stit: cell cap exceeded");
        StitNode n;
        n.leaf_index = static_cast<int>(leaves.size());
        leaves.push_back({std::move(cell), birth});
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    }

    // Runs the cell's exponential clock; cuts while the accumulated waiting
    // time stays within the remaining lifetime.
    int build(HPolytope cell, double birth, double remaining, RngStream stream) {
        double used = 0.0;
        while (true) {
            auto hit = sample_hit_within(phi, cell, remaining - used, stream);
            if (!hit) return make_leaf(std::move(cell), birth);
            used += hit->waiting_time;
            SplitResult sr = split(cell, hit->h);
            if (sr.below && sr.above) {
                double cut_time = birth + used;
                int idx = static_cast<int>(nodes.size());
                nodes.emplace_back();
                nodes[idx].cut = hit->h;
                nodes[idx].cut_time = cut_time;
                int b = build(std::move(*sr.below), cut_time, remaining - used, stream.child(0));
                int a = build(std::move(*sr.above), cut_time, remaining - used, stream.child(1));
                nodes[idx].below = b;
                nodes[idx].above = a;
                return idx;
            }
            // Grazing hit (measure zero): treat as a thinning rejection and
            // keep the clock running.
        }
    }
};

} // namespace

CellKey StitPartition::cell_of(const Vec& x) const { return CellKey{{static_cast<std::uint64_t>(leaf_of(x))}}; }

std::size_t StitPartition::leaf_of(const Vec& x) const {
    if (!window_contains(window_, x))
        throw std::domain_error("cell_of: point outside window");
    int idx = 0;
    while (nodes_[static_cast<std::size_t>(idx)].below >= 0) {
        const StitNode& n = nodes_[static_cast<std::size_t>(idx)];
        idx = point_below(n.cut, x) ? n.below : n.above;
    }
    return static_cast<std::size_t>(nodes_[static_cast<std::size_t>(idx)].leaf_index);
}

const HPolytope& StitPartition::zero_cell() const {
    Vec origin(static_cast<std::size_t>(window_.dim()), 0.0);
    if (!window_interior_contains_origin(window_))
        throw std::domain_error("zero_cell: origin not in the window interior");
    return leaves_[leaf_of(origin)].cell;
}

StitPartition sample_stit(const Window& window, const DirectionalDistribution& phi,
                          double lifetime, RngStream stream, const SamplerOptions& opt) {
    if (!(lifetime > 0.0)) throw std::invalid_argument("sample_stit: lifetime must be positive");
    StitBuilder b{phi, opt, {}, {}};
    b.build(window_polytope(window), 0.0, lifetime, stream);
    StitPartition p;
    p.window_ = window;
    p.phi_ = phi;
    p.lifetime_ = lifetime;
    p.nodes_ = std::move(b.nodes);
    p.leaves_ = std::move(b.leaves);
    return p;
}

namespace {

struct IterateCopier {
    const StitPartition& src;
    StitBuilder& builder;
    double lambda2;
    RngStream leaf_streams;

    int copy(int idx) {
        const StitNode& n = src.nodes()[static_cast<std::size_t>(idx)];
        if (n.below < 0) {
            const StitLeaf& leaf = src.leaves()[static_cast<std::size_t>(n.leaf_index)];
            // Fresh construction inside the leaf, started at the old lifetime.
            return builder.build(leaf.cell, src.lifetime(), lambda2,
                                 leaf_streams.child(static_cast<std::uint64_t>(n.leaf_index)));
        }
        int out = static_cast<int>(builder.nodes.size());
        builder.nodes.emplace_back();
        builder.nodes[out].cut = n.cut;
        builder.nodes[out].cut_time = n.cut_time;
        int b = copy(n.below);
        int a = copy(n.above);
        builder.nodes[out].below = b;
        builder.nodes[out].above = a;
        return out;
    }
};

} // namespace

StitPartition iterate(const StitPartition& p1, double lambda2, RngStream stream,
                      const SamplerOptions& opt) {
    if (!(lambda2 > 0.0)) throw std::invalid_argument("iterate: lambda2 must be positive");
    StitBuilder b{p1.phi(), opt, {}, {}};
    IterateCopier c{p1, b, lambda2, stream};
    c.copy(0);
    StitPartition out;
    out.window_ = p1.window();
    out.phi_ = p1.phi();
    out.lifetime_ = p1.lifetime() + lambda2;
    out.nodes_ = std::move(b.nodes);
    out.leaves_ = std::move(b.leaves);
    return out;
}

HPolytope sample_stit_zero_cell(const Window& window, const DirectionalDistribution& phi,
                                double lifetime, RngStream stream) {
    if (!window_interior_contains_origin(window))
        throw std::domain_error("sample_stit_zero_cell: origin not in the window interior");
    HPolytope cell = window_polytope(window);
    Vec origin(static_cast<std::size_t>(window.dim()), 0.0);
    double remaining = lifetime;
    while (true) {
        double used = 0.0;
        auto hit = sample_hit_within(phi, cell, remaining, stream);
        if (!hit) return cell;
        used = hit->waiting_time;
        SplitResult sr = split(cell, hit->h);
        if (sr.below && sr.above) {
            bool below = point_below(hit->h, origin);
            cell = below ? std::move(*sr.below) : std::move(*sr.above);
            stream = stream.child(below ? 0 : 1);
            remaining -= used;
        } else {
            remaining -= used;
        }
    }
}

StitPartition rebuild_stit(const Window& window, const DirectionalDistribution& phi,
                           double lifetime, const std::vector<StitNode>& topology) {
    StitPartition p;
    p.window_ = window;
    p.phi_ = phi;
    p.lifetime_ = lifetime;
    p.nodes_ = topology;
    // Replay the splits to recover leaf cells; split() is deterministic so
    // the rebuilt cells match the originals bit-exactly.
    struct Walker {
        StitPartition& p;
        void walk(int idx, HPolytope cell, double birth) {
            StitNode& n = p.nodes_[static_cast<std::size_t>(idx)];
            if (n.below < 0) {
                n.leaf_index = static_cast<int>(p.leaves_.size());
                p.leaves_.push_back({std::move(cell), birth});
                return;
            }
            SplitResult sr = split(cell, n.cut);
            if (!sr.below || !sr.above)
                throw std::runtime_error("rebuild_stit: stored cut does not split its cell");
            walk(n.below, std::move(*sr.below), n.cut_time);
            walk(n.above, std::move(*sr.above), n.cut_time);
        }
    };
    Walker w{p};
    if (!p.nodes_.empty()) w.walk(0, window_polytope(window), 0.0);
    return p;
}

PhtPartition::PhtPartition(Window window, DirectionalDistribution phi, double intensity,
                           std::vector<Hyperplane> hyperplanes, SamplerOptions opt)
    : window_(std::move(window)),
      phi_(std::move(phi)),
      intensity_(intensity),
      hyperplanes_(std::move(hyperplanes)),
      opt_(opt),
      lazy_(std::make_shared<LazyCells>()) {}

CellKey PhtPartition::cell_of(const Vec& x) const {
    if (!window_contains(window_, x))
        throw std::domain_error("cell_of: point outside window");
    CellKey key;
    key.words.assign(hyperplanes_.size() / 64 + 1, 0);
    for (std::size_t i = 0; i < hyperplanes_.size(); ++i) {
        if (point_below(hyperplanes_[i], x))
            key.words[i / 64] |= (1ULL << (i % 64));
    }
    return key;
}

const std::vector<HPolytope>& PhtPartition::cells() const {
    std::call_once(lazy_->flag, [this] {
        std::vector<HPolytope> pieces;
        pieces.push_back(window_polytope(window_));
        for (const auto& h : hyperplanes_) {
            std::vector<HPolytope> next;
            next.reserve(pieces.size() + 8);
            for (const auto& piece : pieces) {
                SplitResult sr = split(piece, h);
                if (sr.below) next.push_back(std::move(*sr.below));
                if (sr.above) next.push_back(std::move(*sr.above));
                if (next.size() > opt_.max_cells)
                    throw resource_cap_error("enumerate_cells: cell cap exceeded");
            }
            pieces = std::move(next);
        }
        lazy_->cells = std::move(pieces);
    });
    return lazy_->cells;
}

HPolytope PhtPartition::zero_cell() const {
    if (!window_interior_contains_origin(window_))
        throw std::domain_error("zero_cell: origin not in the window interior");
    HPolytope cell = window_polytope(window_);
    for (const auto& h : hyperplanes_) {
        // Keep the side containing the origin; skip halfspaces that do not
        // tighten the current intersection.
        Halfspace side;
        if (h.offset >= 0.0)
            side = {h.direction, h.offset, false};
        else
            side = {scaled(h.direction, -1.0), -h.offset, true};
        if (support(cell, side.normal) <= side.bound + kLpTol) continue;
        auto hs = cell.halfspaces();
        hs.push_back(side);
        cell = HPolytope::from_halfspaces(cell.dim(), std::move(hs));
    }
    return cell;
}

PhtPartition sample_pht(const Window& window, const DirectionalDistribution& phi,
                        double intensity, RngStream stream, const SamplerOptions& opt) {
    if (!(intensity > 0.0)) throw std::invalid_argument("sample_pht: intensity must be positive");
    LambdaValue lam = lambda_of(phi, window);
    std::uint64_t n = stream.poisson(intensity * lam.value);
    if (n > opt.max_cells)
        throw resource_cap_error("sample_pht: hyperplane count exceeds cell cap");
    std::vector<Hyperplane> hps;
    hps.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Vec u = sample_window_biased_direction(phi, window, stream);
        double hi = support(window, u);
        double lo = -support(window, scaled(u, -1.0));
        double t = stream.uniform(lo, hi);
        hps.push_back({std::move(u), t});
    }
    return PhtPartition(window, phi, intensity, std::move(hps), opt);
}

CellKey Partition::cell_of(const Vec& x) const {
    return kind_ == Kind::Stit ? stit_->cell_of(x) : pht_->cell_of(x);
}

Partition sample_partition(SamplerKind kind, const Window& window,
                           const DirectionalDistribution& phi, double lambda, RngStream stream,
                           const SamplerOptions& opt) {
    if (kind == SamplerKind::Stit)
        return Partition(sample_stit(window, phi, lambda, stream, opt));
    return Partition(sample_pht(window, phi, lambda, stream, opt));
}

bool window_contains(const Window& w, const Vec& x) {
    if (w.is_box()) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < w.box().lower[i] - kLpTol || x[i] > w.box().upper[i] + kLpTol) return false;
        return true;
    }
    return norm2(sub(x, w.ball().center)) <= w.ball().radius + kLpTol;
}

bool window_interior_contains_origin(const Window& w) {
    if (w.is_box()) {
        for (std::size_t i = 0; i < w.box().lower.size(); ++i)
            if (!(w.box().lower[i] < 0.0 && 0.0 < w.box().upper[i])) return false;
        return true;
    }
    return norm2(w.ball().center) < w.ball().radius;
}

} // namespace tessforest
