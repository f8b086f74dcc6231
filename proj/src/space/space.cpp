#include "mmheat/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mmheat {

namespace {

constexpr double kBallSlack = 1e-12;
// Largest C_upper / C_lower accepted as alpha-regular on a finite sample.
constexpr double kRegularSpread = 4.0;

}  // namespace

MetricMeasureGrid::MetricMeasureGrid(Eigen::MatrixXd coords, Eigen::VectorXd weights,
                                     double alpha_hint, int x0)
    : coords_(std::move(coords)), weights_(std::move(weights)), alpha_hint_(alpha_hint), x0_(x0) {
    if (coords_.cols() < 1 || coords_.cols() > 3)
        throw std::invalid_argument("grid: coordinates need 1 to 3 columns");
    validate();
    finalize();
}

MetricMeasureGrid::MetricMeasureGrid(Eigen::MatrixXd coords, Eigen::VectorXd weights,
                                     Eigen::MatrixXd distances, double alpha_hint, int x0)
    : coords_(std::move(coords)), weights_(std::move(weights)), alpha_hint_(alpha_hint), x0_(x0) {
    const auto n = weights_.size();
    if (distances.rows() != n || distances.cols() != n)
        throw std::invalid_argument("grid: distance matrix must be N x N");
    if (coords_.cols() > 0 && coords_.rows() != n)
        throw std::invalid_argument("grid: coordinate rows must match weights");
    if (coords_.cols() == 0) coords_.resize(n, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (distances(i, i) != 0.0) throw std::invalid_argument("grid: distance matrix diagonal must be 0");
        for (Eigen::Index j = 0; j < n; ++j) {
            const double d = distances(i, j);
            if (!std::isfinite(d) || d < 0.0)
                throw std::invalid_argument("grid: distances must be finite and nonnegative");
            if (d != distances(j, i)) throw std::invalid_argument("grid: distance matrix must be symmetric");
            if (i != j && d == 0.0) throw std::invalid_argument("grid: distinct points at zero distance");
        }
    }
    dmat_ = std::make_shared<const Eigen::MatrixXd>(std::move(distances));
    validate();
    finalize();
}

MetricMeasureGrid MetricMeasureGrid::lattice(int dim, double radius, int points_per_axis) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("lattice: dim must be 1, 2 or 3");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("lattice: radius must be positive");
    if (points_per_axis < 3) throw std::invalid_argument("lattice: points_per_axis must be >= 3");
    if (points_per_axis % 2 == 0) throw std::invalid_argument("lattice: points_per_axis must be odd");

    MetricMeasureGrid g;
    const int n = points_per_axis;
    const int c = (n - 1) / 2;
    const double h = 2.0 * radius / static_cast<double>(n - 1);
    std::int64_t total = 1;
    for (int d = 0; d < dim; ++d) total *= n;
    if (total > 5'000'000) throw std::invalid_argument("lattice: too many points");

    g.coords_.resize(total, dim);
    for (std::int64_t i = 0; i < total; ++i) {
        std::int64_t rem = i;
        for (int d = dim - 1; d >= 0; --d) {
            const int k = static_cast<int>(rem % n);
            rem /= n;
            g.coords_(i, d) = static_cast<double>(k - c) * h;
        }
    }
    g.weights_ = Eigen::VectorXd::Constant(total, std::pow(h, dim));
    g.lattice_ = LatticeInfo{dim, radius, n, h};
    g.alpha_hint_ = dim;
    std::int64_t origin = 0;
    for (int d = 0; d < dim; ++d) origin = origin * n + c;
    g.x0_ = static_cast<int>(origin);
    g.finalize();
    return g;
}

void MetricMeasureGrid::validate() const {
    const auto n = weights_.size();
    if (n < 1) throw std::invalid_argument("grid: no points");
    if (coords_.rows() != n) throw std::invalid_argument("grid: coordinate rows must match weights");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            throw std::invalid_argument("grid: weights must be positive and finite");
    if (!coords_.allFinite()) throw std::invalid_argument("grid: coordinates must be finite");
    if (!(alpha_hint_ > 0.0)) throw std::invalid_argument("grid: alpha_hint must be positive");
    if (x0_ < 0 || x0_ >= n) throw std::out_of_range("grid: x0 out of range");
}

void MetricMeasureGrid::finalize() {
    const int n = size();
    if (lattice_) {
        truncation_radius_ = lattice_->radius;
        min_spacing_ = lattice_->spacing;
        return;
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr = std::max(tr, dist(i, x0_));
    truncation_radius_ = tr;
    double ms = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) ms = std::min(ms, dist(i, j));
    min_spacing_ = std::isfinite(ms) ? ms : 0.0;
}

double MetricMeasureGrid::dist(int i, int j) const {
    if (lattice_) return lattice_->spacing * std::sqrt(static_cast<double>(squared_offset(i, j)));
    if (dmat_) return (*dmat_)(i, j);
    double s = 0.0;
    for (Eigen::Index d = 0; d < coords_.cols(); ++d) {
        const double diff = coords_(i, d) - coords_(j, d);
        s += diff * diff;
    }
    return std::sqrt(s);
}

std::int64_t MetricMeasureGrid::squared_offset(int i, int j) const {
    if (!lattice_) throw std::logic_error("grid: squared_offset requires a lattice");
    const int n = lattice_->points_per_axis;
    std::int64_t a = i, b = j, s = 0;
    for (int d = 0; d < lattice_->dim; ++d) {
        const std::int64_t diff = (a % n) - (b % n);
        s += diff * diff;
        a /= n;
        b /= n;
    }
    return s;
}

std::vector<int> MetricMeasureGrid::lattice_index(int i) const {
    if (!lattice_) throw std::logic_error("grid: lattice_index requires a lattice");
    const int n = lattice_->points_per_axis;
    std::vector<int> idx(lattice_->dim);
    int rem = i;
    for (int d = lattice_->dim - 1; d >= 0; --d) {
        idx[d] = rem % n;
        rem /= n;
    }
    return idx;
}

int MetricMeasureGrid::lattice_point(const std::vector<int>& index) const {
    if (!lattice_) throw std::logic_error("grid: lattice_point requires a lattice");
    if (static_cast<int>(index.size()) != lattice_->dim) throw std::invalid_argument("grid: index rank mismatch");
    const int n = lattice_->points_per_axis;
    int i = 0;
    for (int k : index) {
        if (k < 0 || k >= n) throw std::out_of_range("grid: lattice index out of range");
        i = i * n + k;
    }
    return i;
}

double MetricMeasureGrid::boundary_distance(int i) const {
    if (i < 0 || i >= size()) throw std::out_of_range("grid: point index out of range");
    if (lattice_) {
        double m = 0.0;
        for (int d = 0; d < lattice_->dim; ++d) m = std::max(m, std::abs(coords_(i, d)));
        return std::max(0.0, lattice_->radius - m);
    }
    return std::max(0.0, truncation_radius_ - dist(i, x0_));
}

int MetricMeasureGrid::nearest_point(const std::vector<double>& x) const {
    if (static_cast<Eigen::Index>(x.size()) != coords_.cols() || coords_.cols() == 0)
        throw std::invalid_argument("grid: nearest_point dimension mismatch");
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
        double s = 0.0;
        for (Eigen::Index d = 0; d < coords_.cols(); ++d) s += (coords_(i, d) - x[d]) * (coords_(i, d) - x[d]);
        if (s < best_d) {
            best_d = s;
            best = i;
        }
    }
    return best;
}

MetricMeasureGrid MetricMeasureGrid::with_x0(int x0) const {
    if (x0 < 0 || x0 >= size()) throw std::out_of_range("grid: x0 out of range");
    MetricMeasureGrid g = *this;
    g.x0_ = x0;
    g.finalize();
    return g;
}

MetricMeasureGrid MetricMeasureGrid::with_alpha_hint(double alpha) const {
    if (!(alpha > 0.0)) throw std::invalid_argument("grid: alpha_hint must be positive");
    MetricMeasureGrid g = *this;
    g.alpha_hint_ = alpha;
    return g;
}

MetricMeasureGrid build_lattice_space(int dim, double radius, int points_per_axis) {
    return MetricMeasureGrid::lattice(dim, radius, points_per_axis);
}

double ball_measure(const MetricMeasureGrid& space, int center, double r) {
    if (center < 0 || center >= space.size()) throw std::out_of_range("ball_measure: invalid center");
    if (!(r > 0.0)) throw std::invalid_argument("ball_measure: radius must be positive");
    const double lim = r * (1.0 + kBallSlack);
    double m = 0.0;
    for (int j = 0; j < space.size(); ++j)
        if (space.dist(center, j) <= lim) m += space.weight(j);
    return m;
}

RegularityReport check_alpha_regularity(const MetricMeasureGrid& space, double alpha,
                                        const std::vector<double>& radii,
                                        const std::vector<int>& centers) {
    if (radii.empty()) throw std::invalid_argument("check_alpha_regularity: empty radii list");
    if (centers.empty()) throw std::invalid_argument("check_alpha_regularity: empty centers list");
    if (!(alpha > 0.0)) throw std::invalid_argument("check_alpha_regularity: alpha must be positive");
    RegularityReport rep;
    rep.C_lower = std::numeric_limits<double>::infinity();
    rep.C_upper = 0.0;
    for (int c : centers) {
        for (double r : radii) {
            const double ratio = ball_measure(space, c, r) / std::pow(r, alpha);
            rep.C_lower = std::min(rep.C_lower, ratio);
            rep.C_upper = std::max(rep.C_upper, ratio);
            ++rep.samples;
        }
    }
    rep.spread = rep.C_upper / rep.C_lower;
    rep.regular = std::isfinite(rep.C_upper) && rep.C_lower > 0.0 && rep.spread <= kRegularSpread;
    return rep;
}

MetricAxiomReport check_metric_axioms(const MetricMeasureGrid& space, std::size_t triples,
                                      std::uint64_t seed) {
    MetricAxiomReport rep;
    rep.min_offdiagonal = std::numeric_limits<double>::infinity();
    const int n = space.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (std::size_t s = 0; s < triples; ++s) {
        const int i = pick(rng), j = pick(rng), k = pick(rng);
        const double dij = space.dist(i, j), dji = space.dist(j, i);
        const double dik = space.dist(i, k), dkj = space.dist(k, j);
        rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, std::abs(dij - dji));
        rep.max_diagonal = std::max(rep.max_diagonal, space.dist(i, i));
        if (i != j) rep.min_offdiagonal = std::min(rep.min_offdiagonal, dij);
        const double scale = std::max(1.0, dik + dkj);
        rep.max_triangle_violation = std::max(rep.max_triangle_violation, (dij - dik - dkj) / scale);
        ++rep.triples;
    }
    const bool separated = !(rep.min_offdiagonal <= 0.0);
    if (!std::isfinite(rep.min_offdiagonal)) rep.min_offdiagonal = 0.0;
    rep.ok = rep.max_symmetry_defect == 0.0 && rep.max_diagonal == 0.0 && rep.max_triangle_violation <= 1e-12 &&
             separated;
    return rep;
}

}  // namespace mmheat
