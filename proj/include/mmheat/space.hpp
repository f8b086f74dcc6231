#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mmheat {

// Values of a scalar field, one per grid point.
using GridFunction = Eigen::VectorXd;

struct LatticeInfo {
    int dim = 1;
    double radius = 0.0;
    int points_per_axis = 0;
    double spacing = 0.0;
};

// A finite metric measure space: points with (optional) coordinates, a
// symmetric distance, positive quadrature weights playing the role of the
// measure, a declared growth exponent and a reference point.
//
// Distances come from one of three sources, in order of preference:
// the lattice structure (h * sqrt(integer offset)), an explicit dense matrix,
// or Euclidean distance between coordinates.
class MetricMeasureGrid {
public:
    // Point cloud with Euclidean coordinates (rows are points, 1 to 3 columns).
    MetricMeasureGrid(Eigen::MatrixXd coords, Eigen::VectorXd weights, double alpha_hint, int x0);
    // Point cloud with an explicit distance matrix; coords may have 0 columns.
    MetricMeasureGrid(Eigen::MatrixXd coords, Eigen::VectorXd weights, Eigen::MatrixXd distances,
                      double alpha_hint, int x0);

    static MetricMeasureGrid lattice(int dim, double radius, int points_per_axis);

    int size() const { return static_cast<int>(weights_.size()); }
    int dim() const { return static_cast<int>(coords_.cols()); }
    const Eigen::MatrixXd& coords() const { return coords_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double weight(int i) const { return weights_[i]; }
    double alpha_hint() const { return alpha_hint_; }
    int x0() const { return x0_; }
    const std::optional<LatticeInfo>& lattice_info() const { return lattice_; }
    bool has_distance_matrix() const { return static_cast<bool>(dmat_); }

    double dist(int i, int j) const;
    // Integer squared lattice offset between i and j; lattice grids only.
    std::int64_t squared_offset(int i, int j) const;
    // Per-axis integer index of a lattice point.
    std::vector<int> lattice_index(int i) const;
    int lattice_point(const std::vector<int>& index) const;

    double total_mass() const { return weights_.sum(); }
    // Distance from point i to the edge of the truncated domain.
    double boundary_distance(int i) const;
    // Radius of the truncation measured from x0.
    double truncation_radius() const { return truncation_radius_; }
    double min_spacing() const { return min_spacing_; }
    // Index of the grid point nearest to the given coordinates.
    int nearest_point(const std::vector<double>& x) const;

    MetricMeasureGrid with_x0(int x0) const;
    MetricMeasureGrid with_alpha_hint(double alpha) const;

private:
    MetricMeasureGrid() = default;
    void validate() const;
    void finalize();

    Eigen::MatrixXd coords_;
    Eigen::VectorXd weights_;
    std::shared_ptr<const Eigen::MatrixXd> dmat_;
    std::optional<LatticeInfo> lattice_;
    double alpha_hint_ = 1.0;
    int x0_ = 0;
    double truncation_radius_ = 0.0;
    double min_spacing_ = 0.0;
};

MetricMeasureGrid build_lattice_space(int dim, double radius, int points_per_axis);

// Measure of the closed ball B(center, r).
double ball_measure(const MetricMeasureGrid& space, int center, double r);

struct RegularityReport {
    double C_lower = 0.0;
    double C_upper = 0.0;
    bool regular = false;
    // C_upper / C_lower
    double spread = 0.0;
    std::size_t samples = 0;
};

RegularityReport check_alpha_regularity(const MetricMeasureGrid& space, double alpha,
                                        const std::vector<double>& radii,
                                        const std::vector<int>& centers);

struct MetricAxiomReport {
    double max_symmetry_defect = 0.0;
    double max_diagonal = 0.0;
    double min_offdiagonal = 0.0;
    double max_triangle_violation = 0.0;
    std::size_t triples = 0;
    bool ok = false;
};

MetricAxiomReport check_metric_axioms(const MetricMeasureGrid& space, std::size_t triples,
                                      std::uint64_t seed);

// CSV with header id,x1[,x2[,x3]],weight.
void write_grid_csv(std::ostream& out, const MetricMeasureGrid& space);
// Distances are recomputed as Euclidean from the coordinates.
MetricMeasureGrid read_grid_csv(std::istream& in, double alpha_hint, int x0);
// Point cloud: the grid CSV supplies ids and weights (coordinates optional),
// the distance file is a dense row-major CSV matrix without header.
MetricMeasureGrid read_point_cloud(std::istream& grid_csv, std::istream& distance_csv,
                                   double alpha_hint, int x0);

}  // namespace mmheat
