#pragma once

#include <functional>
#include <memory>
#include <unordered_map>

#include "tessforest/tessellation.hpp"

namespace tessforest {

// Regression sample (x_i, y_i) with all x inside the window.
struct Dataset {
    int dim = 0;
    Window window{BoxWindow{{0.0}, {1.0}}};
    std::vector<Vec> xs;
    std::vector<double> ys;

    std::size_t size() const { return xs.size(); }
};

// Throws std::invalid_argument naming the offending row index when a point
// falls outside the window or a value is not finite.
void validate_dataset(const Dataset& data);

struct CellAggregate {
    std::uint64_t count = 0;
    double sum_y = 0.0;
};

using AggregateMap = std::unordered_map<CellKey, CellAggregate, CellKeyHash>;

// Per-cell response averages over one partition.
class TreeModel {
public:
    TreeModel(std::shared_ptr<const Partition> partition, AggregateMap aggregates)
        : partition_(std::move(partition)), aggregates_(std::move(aggregates)) {}

    const Partition& partition() const { return *partition_; }
    const AggregateMap& aggregates() const { return aggregates_; }

    // Mean response of x's cell; 0 when the cell holds no training points.
    double predict(const Vec& x) const;

private:
    std::shared_ptr<const Partition> partition_;
    AggregateMap aggregates_;
};

TreeModel fit_tree(std::shared_ptr<const Partition> partition, const Dataset& data);

// M i.i.d. partitions sharing window, phi and lambda.
class ForestModel {
public:
    explicit ForestModel(std::vector<TreeModel> trees) : trees_(std::move(trees)) {}

    const std::vector<TreeModel>& trees() const { return trees_; }
    std::size_t size() const { return trees_.size(); }
    const Window& window() const { return trees_.front().partition().window(); }
    double lambda() const { return trees_.front().partition().lambda(); }

    // Arithmetic mean of the tree predictions.
    double predict(const Vec& x) const;

private:
    std::vector<TreeModel> trees_;
};

// Samples M partitions with streams derived per tree index and fits each.
ForestModel fit_forest(SamplerKind sampler, const Window& window,
                       const DirectionalDistribution& phi, double lambda, int m_trees,
                       const Dataset& data, RngStream stream, const SamplerOptions& opt = {});

// Distribution of the covariate X.
class MuSampler {
public:
    // Uniform on the window.
    static MuSampler uniform(Window w);
    // Density on a box given by values on a regular per-axis grid
    // (piecewise constant); sampled by rejection against the max value.
    static MuSampler grid_density(BoxWindow box, std::vector<std::size_t> cells_per_axis,
                                  std::vector<double> values);

    Vec sample(RngStream& rng) const;
    const Window& window() const { return window_; }

private:
    Window window_{BoxWindow{{0.0}, {1.0}}};
    bool is_uniform_ = true;
    std::vector<std::size_t> grid_dims_;
    std::vector<double> grid_values_;
    double grid_max_ = 1.0;
};

using TargetFn = std::function<double(const Vec&)>;

struct RiskEstimate {
    double risk = 0.0;
    double std_error = 0.0;
};

// Monte Carlo quadratic risk over fresh X ~ mu.
RiskEstimate estimate_risk(const ForestModel& model, const TargetFn& f_true,
                           const MuSampler& mu, std::size_t n_test, RngStream& rng);

// Draws a dataset X ~ mu, y = f(X) + sigma * N(0,1).
Dataset sample_dataset(const MuSampler& mu, const TargetFn& f, double sigma, std::size_t n,
                       int dim, RngStream& rng);

} // namespace tessforest
