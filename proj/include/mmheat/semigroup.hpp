#pragma once

#include "mmheat/kernel.hpp"
#include "mmheat/space.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace mmheat {

class TimeGrid {
public:
    // nodes k * (t_end / (count - 1)), k = 0..count-1
    static TimeGrid uniform(double t_end, std::size_t count);
    static TimeGrid from_nodes(std::vector<double> nodes);

    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }
    double t_end() const { return nodes_.back(); }
    bool is_uniform() const { return uniform_; }
    double step() const { return step_; }
    std::string scheme() const { return "trapezoid"; }

    // t_i - t_j; on uniform grids equal lags give bit-identical values.
    double gap(std::size_t i, std::size_t j) const;
    // Trapezoid weights for the integral over [0, t_i] with nodes 0..i.
    std::vector<double> trapezoid_weights(std::size_t i) const;

private:
    std::vector<double> nodes_;
    bool uniform_ = false;
    double step_ = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> values;
};

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

// K_t on a fixed grid as weighted matrices M(t)_ij = k(t, x_i, x_j) w_j,
// cached up to a byte budget. K_0 is the identity.
class HeatSemigroup {
public:
    static constexpr std::size_t kDefaultCacheBytes = std::size_t{1} << 30;

    HeatSemigroup(HeatKernel kernel, const MetricMeasureGrid& space,
                  std::size_t cache_bytes = kDefaultCacheBytes);

    const HeatKernel& kernel() const { return kernel_; }
    const MetricMeasureGrid& space() const { return space_; }
    int size() const { return space_.size(); }

    std::shared_ptr<const Eigen::MatrixXd> matrix(double t) const;
    GridFunction apply(double t, const GridFunction& g) const;
    Eigen::MatrixXd apply(double t, const Eigen::MatrixXd& g) const;
    // Row sums of M(t): the discrete kernel mass at each point.
    GridFunction mass(double t) const;

    std::size_t cached_matrices() const;
    void clear_cache() const;

private:
    Eigen::MatrixXd build(double t) const;
    void ensure_geometry() const;

    HeatKernel kernel_;
    const MetricMeasureGrid& space_;
    std::size_t cache_bytes_;

    mutable std::mutex mutex_;
    mutable std::map<double, std::shared_ptr<const Eigen::MatrixXd>> cache_;
    mutable std::size_t cached_bytes_ = 0;
    // Lattice: integer squared offsets; otherwise: dense distances.
    mutable std::once_flag geometry_once_;
    mutable std::vector<std::int32_t> offsets_;
    mutable std::int64_t max_offset_ = 0;
    mutable Eigen::MatrixXd distances_;
};

GridFunction apply_semigroup(const HeatKernel& kernel, const MetricMeasureGrid& space, const GridFunction& g,
                             double t);

// Trapezoid in tau over [0, t] with `steps` intervals; the tau = 0 integrand is f.
GridFunction source_integral(const HeatKernel& kernel, const MetricMeasureGrid& space, const GridFunction& f,
                             double t, int steps);
GridFunction source_integral(const HeatSemigroup& semigroup, const GridFunction& f, double t, int steps);

// Trapezoid over the nodes 0..i of K_{t_i - tau} u(tau)^p; the tau = t_i
// integrand is u(t_i)^p.
GridFunction duhamel_step(const HeatKernel& kernel, const MetricMeasureGrid& space, const Trajectory& trajectory,
                          double p, const TimeGrid& t_grid, std::size_t i);
GridFunction duhamel_step(const HeatSemigroup& semigroup, const Trajectory& trajectory, double p,
                          const TimeGrid& t_grid, std::size_t i);

}  // namespace mmheat
