#include "mmheat/csv.hpp"
#include "mmheat/space.hpp"

#include <ostream>
#include <stdexcept>

namespace mmheat {

namespace {

struct ParsedGrid {
    Eigen::MatrixXd coords;
    Eigen::VectorXd weights;
};

ParsedGrid parse_grid(std::istream& in) {
    const auto rows = csv::read_rows(in);
    if (rows.size() < 2) throw std::invalid_argument("grid csv: need a header and at least one point");
    const auto& header = rows.front();
    if (header.size() < 2 || header.front() != "id" || header.back() != "weight")
        throw std::invalid_argument("grid csv: header must be id,x1[,x2[,x3]],weight");
    const int dim = static_cast<int>(header.size()) - 2;
    if (dim > 3) throw std::invalid_argument("grid csv: at most 3 coordinates");
    for (int d = 0; d < dim; ++d)
        if (header[1 + d] != "x" + std::to_string(d + 1))
            throw std::invalid_argument("grid csv: unexpected column '" + header[1 + d] + "'");

    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    ParsedGrid g{Eigen::MatrixXd(n, dim), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[i + 1];
        if (r.size() != header.size()) throw std::invalid_argument("grid csv: ragged row " + std::to_string(i + 2));
        if (csv::to_double(r[0]) != static_cast<double>(i))
            throw std::invalid_argument("grid csv: ids must be 0..N-1 in order");
        for (int d = 0; d < dim; ++d) g.coords(i, d) = csv::to_double(r[1 + d]);
        g.weights[i] = csv::to_double(r.back());
    }
    return g;
}

}  // namespace

void write_grid_csv(std::ostream& out, const MetricMeasureGrid& space) {
    out << "id";
    for (int d = 0; d < space.dim(); ++d) out << ",x" << d + 1;
    out << ",weight\n";
    for (int i = 0; i < space.size(); ++i) {
        out << i;
        for (int d = 0; d < space.dim(); ++d) out << ',' << csv::fmt_exact(space.coords()(i, d));
        out << ',' << csv::fmt_exact(space.weight(i)) << '\n';
    }
}

MetricMeasureGrid read_grid_csv(std::istream& in, double alpha_hint, int x0) {
    auto g = parse_grid(in);
    if (g.coords.cols() == 0) throw std::invalid_argument("grid csv: coordinates required without a distance matrix");
    return MetricMeasureGrid(std::move(g.coords), std::move(g.weights), alpha_hint, x0);
}

MetricMeasureGrid read_point_cloud(std::istream& grid_csv, std::istream& distance_csv, double alpha_hint,
                                   int x0) {
    auto g = parse_grid(grid_csv);
    const auto rows = csv::read_rows(distance_csv);
    const auto n = g.weights.size();
    if (static_cast<Eigen::Index>(rows.size()) != n)
        throw std::invalid_argument("distance csv: expected " + std::to_string(n) + " rows");
    Eigen::MatrixXd dm(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw std::invalid_argument("distance csv: row " + std::to_string(i + 1) + " has wrong length");
        for (Eigen::Index j = 0; j < n; ++j) dm(i, j) = csv::to_double(rows[i][j]);
    }
    return MetricMeasureGrid(std::move(g.coords), std::move(g.weights), std::move(dm), alpha_hint, x0);
}

}  // namespace mmheat
