#pragma once

#include <Eigen/SparseCore>

#include <string>
#include <utility>
#include <vector>

#include "confham/model.hpp"

namespace confham {
namespace quantum {

/// Rectangular Dirichlet grid, 1 or 2 dimensions, interior points only.
struct GridSpec {
    int n = 1;
    std::vector<std::pair<double, double>> box;  // per-axis [a, b]
    std::vector<int> points;                     // per-axis interior count, >= 8

    double spacing(int axis) const {
        return (box[axis].second - box[axis].first) / (points[axis] + 1);
    }
    double node(int axis, int index) const {  // index in [0, points[axis])
        return box[axis].first + spacing(axis) * (index + 1);
    }
    long size() const {
        long m = 1;
        for (int mi : points) m *= mi;
        return m;
    }

    /// Checks grid invariants against the model (boxes must avoid barrier
    /// hyperplanes and, when the conformal factor is nontrivial at gamma = 0,
    /// the origin). Throws std::invalid_argument naming the axis.
    void validate(const ModelParams& qparams) const;
};

/// Second-order discretization of the written operator F(x) (-1/2 Lap + W)
/// made symmetric in the weighted space with measure F^{-1} dx:
/// returns M = B^{-1/2} A B^{-1/2} with A = -1/2 Lap + W (Dirichlet) and
/// B = diag(F^{-1}); eigenvalues of M solve the generalized pair (A, B).
Eigen::SparseMatrix<double> build_weighted_operator(const ModelParams& qparams,
                                                    const GridSpec& grid);

/// The count smallest eigenvalues with residual |Mv - lambda v| <=
/// 1e-8 |lambda| |v|. Dense solve for small matrices, shift-invert Lanczos
/// (full reorthogonalization) for large ones. Throws std::runtime_error with
/// the achieved residual on non-convergence.
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& m, int count);

/// Greedy clustering of an ascending sequence: consecutive values within
/// tol * max(1, |value|) join one cluster; returns (mean, multiplicity).
std::vector<std::pair<double, int>> degeneracy_report(const std::vector<double>& values,
                                                      double tol);

struct SpectrumResult {
    std::vector<double> eigenvalues;
    std::vector<std::pair<double, int>> clusters;
    GridSpec grid;
    ModelParams qparams;
};

SpectrumResult compute_spectrum(const ModelParams& qparams, const GridSpec& grid, int count,
                                double cluster_tol);

/// CSV "index,eigenvalue,cluster_id".
std::string spectrum_to_csv(const SpectrumResult& result);
/// JSON header carrying qparams and the grid.
std::string spectrum_header_json(const SpectrumResult& result);

}  // namespace quantum
}  // namespace confham
