#include "mmheat/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmheat {

namespace {

void require_finite(const Eigen::MatrixXd& g, const char* what) {
    if (!g.allFinite()) throw std::invalid_argument(std::string(what) + ": input must be finite");
}

void require_nonnegative(const GridFunction& g, const char* what) {
    if ((g.array() < 0.0).any()) throw std::invalid_argument(std::string(what) + ": input must be nonnegative");
}

}  // namespace

HeatSemigroup::HeatSemigroup(HeatKernel kernel, const MetricMeasureGrid& space, std::size_t cache_bytes)
    : kernel_(std::move(kernel)), space_(space), cache_bytes_(cache_bytes) {}

void HeatSemigroup::ensure_geometry() const {
    std::call_once(geometry_once_, [this] {
        const int n = space_.size();
        const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        if (space_.lattice_info()) {
            // Compact index into the sorted list of squared offsets that occur.
            const auto& lat = *space_.lattice_info();
            const std::int64_t span = lat.points_per_axis - 1;
            const std::int64_t max_sq = static_cast<std::int64_t>(lat.dim) * span * span;
            std::vector<std::int32_t> slot(static_cast<std::size_t>(max_sq) + 1, -1);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) slot[static_cast<std::size_t>(space_.squared_offset(i, j))] = 0;
            std::vector<std::int64_t> uniq;
            for (std::int64_t m = 0; m <= max_sq; ++m)
                if (slot[static_cast<std::size_t>(m)] == 0) {
                    slot[static_cast<std::size_t>(m)] = static_cast<std::int32_t>(uniq.size());
                    uniq.push_back(m);
                }
            offsets_.resize(nn);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    offsets_[static_cast<std::size_t>(j) * n + i] = slot[static_cast<std::size_t>(space_.squared_offset(i, j))];
            // Distances of the distinct offsets, one per row.
            distances_.resize(static_cast<Eigen::Index>(uniq.size()), 1);
            for (std::size_t k = 0; k < uniq.size(); ++k)
                distances_(static_cast<Eigen::Index>(k), 0) = lat.spacing * std::sqrt(static_cast<double>(uniq[k]));
            max_offset_ = max_sq;
        } else {
            distances_.resize(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) distances_(i, j) = space_.dist(i, j);
        }
    });
}

Eigen::MatrixXd HeatSemigroup::build(double t) const {
    const int n = space_.size();
    if (t == 0.0) return Eigen::MatrixXd::Identity(n, n);
    ensure_geometry();
    Eigen::MatrixXd m(n, n);
    if (space_.lattice_info()) {
        const double w = space_.weight(0);
        std::vector<double> table(static_cast<std::size_t>(distances_.rows()));
        for (std::size_t k = 0; k < table.size(); ++k) table[k] = kernel_.eval(t, distances_(static_cast<Eigen::Index>(k), 0)) * w;
        double* out = m.data();
        const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
#pragma omp parallel for schedule(static)
        for (std::size_t k = 0; k < nn; ++k) out[k] = table[static_cast<std::size_t>(offsets_[k])];
    } else {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
            const double w = space_.weight(j);
            for (int i = 0; i < n; ++i) m(i, j) = kernel_.eval(t, distances_(i, j)) * w;
        }
    }
    return m;
}

std::shared_ptr<const Eigen::MatrixXd> HeatSemigroup::matrix(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("semigroup: t must be nonnegative");
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
    }
    auto m = std::make_shared<const Eigen::MatrixXd>(build(t));
    const std::size_t bytes = static_cast<std::size_t>(m->size()) * sizeof(double);
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(t, nullptr);
    if (!inserted && it->second) return it->second;
    if (cached_bytes_ + bytes <= cache_bytes_) {
        it->second = m;
        cached_bytes_ += bytes;
    } else {
        cache_.erase(it);
    }
    return m;
}

GridFunction HeatSemigroup::apply(double t, const GridFunction& g) const {
    if (g.size() != size()) throw std::invalid_argument("semigroup: size mismatch");
    if (t == 0.0) return g;
    return *matrix(t) * g;
}

Eigen::MatrixXd HeatSemigroup::apply(double t, const Eigen::MatrixXd& g) const {
    if (g.rows() != size()) throw std::invalid_argument("semigroup: size mismatch");
    if (t == 0.0) return g;
    return *matrix(t) * g;
}

GridFunction HeatSemigroup::mass(double t) const { return matrix(t)->rowwise().sum(); }

std::size_t HeatSemigroup::cached_matrices() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

void HeatSemigroup::clear_cache() const {
    std::lock_guard lock(mutex_);
    cache_.clear();
    cached_bytes_ = 0;
}

GridFunction apply_semigroup(const HeatKernel& kernel, const MetricMeasureGrid& space, const GridFunction& g,
                             double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("apply_semigroup: t must be positive");
    if (g.size() != space.size()) throw std::invalid_argument("apply_semigroup: size mismatch");
    require_finite(g, "apply_semigroup");
    HeatSemigroup sg(kernel, space, 0);
    return sg.apply(t, g);
}

GridFunction source_integral(const HeatSemigroup& semigroup, const GridFunction& f, double t, int steps) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("source_integral: t must be positive");
    if (steps < 2) throw std::invalid_argument("source_integral: need at least 2 steps");
    if (f.size() != semigroup.size()) throw std::invalid_argument("source_integral: size mismatch");
    require_finite(f, "source_integral");
    require_nonnegative(f, "source_integral");
    const auto grid = TimeGrid::uniform(t, static_cast<std::size_t>(steps) + 1);
    const auto w = grid.trapezoid_weights(grid.size() - 1);
    GridFunction acc = w[0] * f;
    for (std::size_t k = 1; k < grid.size(); ++k) acc += w[k] * semigroup.apply(grid[k], f);
    return acc;
}

GridFunction source_integral(const HeatKernel& kernel, const MetricMeasureGrid& space, const GridFunction& f,
                             double t, int steps) {
    HeatSemigroup sg(kernel, space, 0);
    return source_integral(sg, f, t, steps);
}

GridFunction duhamel_step(const HeatSemigroup& semigroup, const Trajectory& trajectory, double p,
                          const TimeGrid& t_grid, std::size_t i) {
    if (!(p > 1.0)) throw std::invalid_argument("duhamel_step: p must exceed 1");
    if (i >= t_grid.size()) throw std::out_of_range("duhamel_step: node index out of range");
    if (trajectory.values.size() <= i) throw std::out_of_range("duhamel_step: trajectory shorter than node index");
    for (std::size_t j = 0; j <= i; ++j) {
        const auto& u = trajectory.values[j];
        if (u.size() != semigroup.size()) throw std::invalid_argument("duhamel_step: size mismatch");
        require_finite(u, "duhamel_step");
        require_nonnegative(u, "duhamel_step");
    }
    GridFunction acc = GridFunction::Zero(semigroup.size());
    if (i == 0) return acc;
    const auto w = t_grid.trapezoid_weights(i);
    for (std::size_t j = 0; j <= i; ++j) {
        const GridFunction up = trajectory.values[j].array().pow(p).matrix();
        acc += w[j] * semigroup.apply(t_grid.gap(i, j), up);
    }
    return acc;
}

GridFunction duhamel_step(const HeatKernel& kernel, const MetricMeasureGrid& space, const Trajectory& trajectory,
                          double p, const TimeGrid& t_grid, std::size_t i) {
    HeatSemigroup sg(kernel, space, 0);
    return duhamel_step(sg, trajectory, p, t_grid, i);
}

}  // namespace mmheat
