#include "tessforest/forest.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tessforest {

void validate_dataset(const Dataset& data) {
    if (data.xs.size() != data.ys.size())
        throw std::invalid_argument("dataset: x/y length mismatch");
    for (std::size_t i = 0; i < data.xs.size(); ++i) {
        if (static_cast<int>(data.xs[i].size()) != data.dim || !all_finite(data.xs[i]))
            throw std::invalid_argument("dataset row " + std::to_string(i) + ": bad point");
        if (!std::isfinite(data.ys[i]))
            throw std::invalid_argument("dataset row " + std::to_string(i) + ": bad response");
        if (!window_contains(data.window, data.xs[i]))
            throw std::invalid_argument("dataset row " + std::to_string(i) + ": point outside window");
    }
}

double TreeModel::predict(const Vec& x) const {
    auto it = aggregates_.find(partition_->cell_of(x));
    if (it == aggregates_.end() || it->second.count == 0) return 0.0;
    return it->second.sum_y / static_cast<double>(it->second.count);
}

TreeModel fit_tree(std::shared_ptr<const Partition> partition, const Dataset& data) {
    if (partition->window().dim() != data.dim)
        throw std::invalid_argument("fit_tree: dimension mismatch");
    AggregateMap agg;
    for (std::size_t i = 0; i < data.size(); ++i) {
        CellAggregate& a = agg[partition->cell_of(data.xs[i])];
        a.count += 1;
        a.sum_y += data.ys[i];
    }
    return TreeModel(std::move(partition), std::move(agg));
}

double ForestModel::predict(const Vec& x) const {
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(x);
    return s / static_cast<double>(trees_.size());
}

ForestModel fit_forest(SamplerKind sampler, const Window& window,
                       const DirectionalDistribution& phi, double lambda, int m_trees,
                       const Dataset& data, RngStream stream, const SamplerOptions& opt) {
    if (m_trees < 1) throw std::invalid_argument("fit_forest: M must be >= 1");
    std::vector<TreeModel> trees;
    trees.reserve(static_cast<std::size_t>(m_trees));
    for (int m = 0; m < m_trees; ++m) {
        auto part = std::make_shared<Partition>(sample_partition(
            sampler, window, phi, lambda, stream.child(static_cast<std::uint64_t>(m)), opt));
        trees.push_back(fit_tree(std::move(part), data));
    }
    return ForestModel(std::move(trees));
}

MuSampler MuSampler::uniform(Window w) {
    MuSampler mu;
    mu.window_ = std::move(w);
    mu.is_uniform_ = true;
    return mu;
}

MuSampler MuSampler::grid_density(BoxWindow box, std::vector<std::size_t> cells_per_axis,
                                  std::vector<double> values) {
    std::size_t total = 1;
    for (std::size_t c : cells_per_axis) total *= c;
    if (total != values.size() || values.empty())
        throw std::invalid_argument("grid_density: grid size mismatch");
    MuSampler mu;
    mu.window_ = Window{std::move(box)};
    mu.is_uniform_ = false;
    mu.grid_dims_ = std::move(cells_per_axis);
    mu.grid_values_ = std::move(values);
    mu.grid_max_ = 0.0;
    for (double v : mu.grid_values_) {
        if (!(v > 0.0)) throw std::invalid_argument("grid_density: density must be positive");
        mu.grid_max_ = std::max(mu.grid_max_, v);
    }
    return mu;
}

Vec MuSampler::sample(RngStream& rng) const {
    if (is_uniform_ && window_.is_box()) {
        const auto& b = window_.box();
        Vec x(b.lower.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(b.lower[i], b.upper[i]);
        return x;
    }
    if (is_uniform_) {
        // Uniform on a ball: rejection from the bounding box.
        const auto& b = window_.ball();
        Vec x(b.center.size());
        while (true) {
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = rng.uniform(b.center[i] - b.radius, b.center[i] + b.radius);
            if (norm2(sub(x, b.center)) <= b.radius) return x;
        }
    }
    const auto& b = window_.box();
    Vec x(b.lower.size());
    while (true) {
        std::size_t cell = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.uniform(b.lower[i], b.upper[i]);
            double frac = (x[i] - b.lower[i]) / (b.upper[i] - b.lower[i]);
            auto k = static_cast<std::size_t>(frac * static_cast<double>(grid_dims_[i]));
            if (k >= grid_dims_[i]) k = grid_dims_[i] - 1;
            cell = cell * grid_dims_[i] + k;
        }
        if (rng.uniform() * grid_max_ <= grid_values_[cell]) return x;
    }
}

RiskEstimate estimate_risk(const ForestModel& model, const TargetFn& f_true,
                           const MuSampler& mu, std::size_t n_test, RngStream& rng) {
    if (n_test < 1000) throw std::invalid_argument("estimate_risk: n_test must be >= 1000");
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_test; ++i) {
        Vec x = mu.sample(rng);
        double e = model.predict(x) - f_true(x);
        sum += e * e;
        sum2 += e * e * e * e;
    }
    double n = static_cast<double>(n_test);
    double mean = sum / n;
    double var = std::max(0.0, sum2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

Dataset sample_dataset(const MuSampler& mu, const TargetFn& f, double sigma, std::size_t n,
                       int dim, RngStream& rng) {
    Dataset d;
    d.dim = dim;
    d.window = mu.window();
    d.xs.reserve(n);
    d.ys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec x = mu.sample(rng);
        double y = f(x) + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
        d.xs.push_back(std::move(x));
        d.ys.push_back(y);
    }
    return d;
}

} // namespace tessforest
