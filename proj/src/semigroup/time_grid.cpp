#include "mmheat/csv.hpp"
#include "mmheat/semigroup.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace mmheat {

TimeGrid TimeGrid::uniform(double t_end, std::size_t count) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("TimeGrid: t_end must be positive");
    if (count < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
    TimeGrid g;
    g.uniform_ = true;
    g.step_ = t_end / static_cast<double>(count - 1);
    g.nodes_.resize(count);
    for (std::size_t k = 0; k < count; ++k) g.nodes_[k] = static_cast<double>(k) * g.step_;
    return g;
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
    if (nodes.front() != 0.0) throw std::invalid_argument("TimeGrid: first node must be 0");
    for (std::size_t k = 1; k < nodes.size(); ++k)
        if (!(nodes[k] > nodes[k - 1]) || !std::isfinite(nodes[k]))
            throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
    TimeGrid g;
    g.nodes_ = std::move(nodes);
    return g;
}

double TimeGrid::gap(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw std::out_of_range("TimeGrid: node index out of range");
    if (uniform_) return (static_cast<double>(i) - static_cast<double>(j)) * step_;
    return nodes_[i] - nodes_[j];
}

std::vector<double> TimeGrid::trapezoid_weights(std::size_t i) const {
    if (i >= size()) throw std::out_of_range("TimeGrid: node index out of range");
    std::vector<double> w(i + 1, 0.0);
    for (std::size_t k = 0; k < i; ++k) {
        const double h = uniform_ ? step_ : nodes_[k + 1] - nodes_[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    return w;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    if (trajectory.times.size() != trajectory.values.size())
        throw std::invalid_argument("trajectory: times and values differ in length");
    out << "t,point_id,value\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const auto t = csv::fmt(trajectory.times[k]);
        const auto& v = trajectory.values[k];
        for (Eigen::Index i = 0; i < v.size(); ++i) out << t << ',' << i << ',' << csv::fmt(v[i]) << '\n';
    }
}

}  // namespace mmheat
