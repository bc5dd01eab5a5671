#include "confham/quantum.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "confham/hamiltonian.hpp"
#include "confham/jsonl.hpp"
#include "confham/rng.hpp"

namespace confham {
namespace quantum {

namespace {

// Potential W and conformal factor F at one grid node.
struct NodeTerms {
    double w;
    double f;
};

NodeTerms node_terms(const ModelParams& params, const std::vector<double>& x) {
    std::span<const double> xs(x);
    return {potential_terms<double>(params, xs), conformal_factor<double>(params, xs)};
}

std::vector<double> node_coords(const GridSpec& grid, long idx) {
    std::vector<double> x(grid.n);
    if (grid.n == 1) {
        x[0] = grid.node(0, static_cast<int>(idx));
    } else {
        int my = grid.points[1];
        x[0] = grid.node(0, static_cast<int>(idx / my));
        x[1] = grid.node(1, static_cast<int>(idx % my));
    }
    return x;
}

// Shift-invert block subspace iteration with Rayleigh-Ritz extraction.
// A block wider than any low-lying multiplicity resolves degenerate
// clusters that single-vector Krylov sweeps can miss.
std::vector<double> block_shift_invert_smallest(const Eigen::SparseMatrix<double>& m, int count) {
    using Mat = Eigen::MatrixXd;
    using Vec = Eigen::VectorXd;
    const long n = m.rows();

    // Gershgorin lower bound keeps the shifted matrix positive definite.
    Vec diag = m.diagonal();
    double lower = std::numeric_limits<double>::infinity();
    std::vector<double> offdiag_row_sum(n, 0.0);
    for (int kcol = 0; kcol < m.outerSize(); ++kcol)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, kcol); it; ++it)
            if (it.row() != it.col()) offdiag_row_sum[it.row()] += std::abs(it.value());
    for (long i = 0; i < n; ++i) lower = std::min(lower, diag(i) - offdiag_row_sum[i]);
    const double shift = lower - 1.0;

    Eigen::SparseMatrix<double> shifted = m;
    for (long i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("lowest_eigenvalues: sparse factorization failed");

    const int block = static_cast<int>(std::min<long>(n, count + 6));
    Rng rng(0x5eed5eedULL);
    Mat y(n, block);
    for (long i = 0; i < n; ++i)
        for (int j = 0; j < block; ++j) y(i, j) = rng.uniform() - 0.5;

    auto orthonormalize = [](Mat& q) {
        Eigen::HouseholderQR<Mat> qr(q);
        q = qr.householderQ() * Mat::Identity(q.rows(), q.cols());
    };
    orthonormalize(y);

    double achieved = std::numeric_limits<double>::infinity();
    std::vector<double> lambdas(count);
    for (int iter = 1; iter <= 320; ++iter) {
        y = solver.solve(y);
        orthonormalize(y);
        if (iter % 4 != 0 && iter < 320) continue;

        Mat my = m * y;
        Mat small = y.transpose() * my;
        small = 0.5 * (small + small.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(small);
        Mat ritz_vecs = y * es.eigenvectors();
        Mat ritz_m = my * es.eigenvectors();

        achieved = 0.0;
        bool ok = true;
        for (int c = 0; c < count; ++c) {
            lambdas[c] = es.eigenvalues()(c);
            double res = (ritz_m.col(c) - lambdas[c] * ritz_vecs.col(c)).norm() /
                         std::max(std::abs(lambdas[c]), 1e-300);
            achieved = std::max(achieved, res);
            if (res > 1e-8) ok = false;
        }
        if (ok) {
            // Inertia gate: no eigenvalue below the returned top may be missing.
            double top = lambdas[count - 1];
            double delta = std::max(1e-9, 1e-8 * std::abs(top));
            Eigen::SparseMatrix<double> probe = m;
            for (long i = 0; i < n; ++i) probe.coeffRef(i, i) -= top - delta;
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> inertia(probe);
            long below = 0;
            if (inertia.info() == Eigen::Success) {
                const auto d = inertia.vectorD();
                for (long i = 0; i < d.size(); ++i)
                    if (d(i) < 0.0) ++below;
            }
            if (inertia.info() == Eigen::Success && below > count - 1)
                throw std::runtime_error(
                    "lowest_eigenvalues: converged set is not minimal (inertia count " +
                    std::to_string(below) + ")");
            return lambdas;
        }
    }
    throw std::runtime_error(
        "lowest_eigenvalues: block iteration did not converge (achieved residual " +
        std::to_string(achieved) + ")");
}

}  // namespace

void GridSpec::validate(const ModelParams& qparams) const {
    if (n != 1 && n != 2)
        throw std::invalid_argument("GridSpec: only 1 or 2 dimensions supported");
    if (static_cast<int>(box.size()) != n || static_cast<int>(points.size()) != n)
        throw std::invalid_argument("GridSpec: box and points must match the dimension");
    if (qparams.n != n)
        throw std::invalid_argument("GridSpec: dimension differs from the model's n");
    for (int i = 0; i < n; ++i) {
        if (!(box[i].first < box[i].second))
            throw std::invalid_argument("GridSpec: box[" + std::to_string(i) + "] must have a < b");
        if (points[i] < 8)
            throw std::invalid_argument("GridSpec: points[" + std::to_string(i) + "] must be >= 8");
        bool needs_positive = qparams.alphas[i] != 0.0;
        if (needs_positive && !(box[i].first >= 0.0 && node(i, 0) > 0.0))
            throw std::invalid_argument("GridSpec: axis " + std::to_string(i) +
                                        " must avoid the barrier hyperplane x = 0");
    }
    if (qparams.gamma == 0.0 && qparams.k != 1.0) {
        // Every node must sit away from the origin; in 1D that forces a > 0.
        if (n == 1 && !(node(0, 0) > 0.0 || box[0].second < 0.0))
            throw std::invalid_argument("GridSpec: axis 0 must avoid the origin (gamma = 0, k != 1)");
    }
}

Eigen::SparseMatrix<double> build_weighted_operator(const ModelParams& qparams,
                                                    const GridSpec& grid) {
    qparams.validate();
    grid.validate(qparams);
    const long size = grid.size();

    std::vector<double> w(size), sqrt_f(size);
    for (long idx = 0; idx < size; ++idx) {
        std::vector<double> x = node_coords(grid, idx);
        NodeTerms terms;
        try {
            terms = node_terms(qparams, x);
        } catch (const std::domain_error& err) {
            throw std::invalid_argument("build_weighted_operator: inadmissible node at index " +
                                        std::to_string(idx) + " (" + err.what() + ")");
        }
        w[idx] = terms.w;
        sqrt_f[idx] = std::sqrt(terms.f);
    }

    std::vector<Eigen::Triplet<double>> trip;
    auto push_diag = [&](long i, double a_ii) {
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i),
                          sqrt_f[i] * a_ii * sqrt_f[i]);
    };
    // Mirrored entries share one computed value, so M is symmetric exactly.
    auto push_pair = [&](long i, long j, double a_ij) {
        double v = sqrt_f[i] * a_ij * sqrt_f[j];
        trip.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
        trip.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
    };

    if (grid.n == 1) {
        double h = grid.spacing(0);
        double d = 1.0 / (h * h);
        for (long i = 0; i < size; ++i) {
            push_diag(i, d + w[i]);
            if (i + 1 < size) push_pair(i, i + 1, -0.5 * d);
        }
    } else {
        int mx = grid.points[0], my = grid.points[1];
        double hx = grid.spacing(0), hy = grid.spacing(1);
        double dx = 1.0 / (hx * hx), dy = 1.0 / (hy * hy);
        trip.reserve(5 * static_cast<std::size_t>(size));
        for (int ix = 0; ix < mx; ++ix) {
            for (int iy = 0; iy < my; ++iy) {
                long i = static_cast<long>(ix) * my + iy;
                push_diag(i, dx + dy + w[i]);
                if (ix + 1 < mx) push_pair(i, i + my, -0.5 * dx);
                if (iy + 1 < my) push_pair(i, i + 1, -0.5 * dy);
            }
        }
    }

    Eigen::SparseMatrix<double> m(size, size);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

namespace {

// Tridiagonal structure (every 1D discretization) admits an O(n^2) solve.
bool extract_tridiagonal(const Eigen::SparseMatrix<double>& m, Eigen::VectorXd& diag,
                         Eigen::VectorXd& sub) {
    const long n = m.rows();
    diag = Eigen::VectorXd::Zero(n);
    sub = Eigen::VectorXd::Zero(std::max<long>(n - 1, 0));
    for (int kcol = 0; kcol < m.outerSize(); ++kcol) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, kcol); it; ++it) {
            long d = it.row() - it.col();
            if (d == 0)
                diag(it.row()) = it.value();
            else if (d == 1)
                sub(it.col()) = it.value();
            else if (d != -1 && it.value() != 0.0)
                return false;
        }
    }
    return true;
}

}  // namespace

std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& m, int count) {
    if (count < 1) throw std::invalid_argument("lowest_eigenvalues: count must be positive");
    if (count > m.rows())
        throw std::invalid_argument("lowest_eigenvalues: count exceeds the matrix size");

    Eigen::VectorXd diag, sub;
    if (m.rows() <= 20000 && extract_tridiagonal(m, diag, sub)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("lowest_eigenvalues: tridiagonal solver failed");
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = es.eigenvalues()(i);
        return out;
    }
    if (m.rows() <= 2500) {
        Eigen::MatrixXd dense(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("lowest_eigenvalues: dense solver failed");
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) out[i] = es.eigenvalues()(i);
        return out;
    }
    return block_shift_invert_smallest(m, count);
}

std::vector<std::pair<double, int>> degeneracy_report(const std::vector<double>& values,
                                                      double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("degeneracy_report: tol must be positive");
    std::vector<std::pair<double, int>> clusters;
    if (values.empty()) return clusters;
    double sum = values[0];
    int count = 1;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1])
            throw std::invalid_argument("degeneracy_report: values must ascend");
        if (values[i] - values[i - 1] <= tol * std::max(1.0, std::abs(values[i]))) {
            sum += values[i];
            ++count;
        } else {
            clusters.emplace_back(sum / count, count);
            sum = values[i];
            count = 1;
        }
    }
    clusters.emplace_back(sum / count, count);
    return clusters;
}

SpectrumResult compute_spectrum(const ModelParams& qparams, const GridSpec& grid, int count,
                                double cluster_tol) {
    SpectrumResult out;
    out.qparams = qparams;
    out.grid = grid;
    out.eigenvalues = lowest_eigenvalues(build_weighted_operator(qparams, grid), count);
    out.clusters = degeneracy_report(out.eigenvalues, cluster_tol);
    return out;
}

std::string spectrum_to_csv(const SpectrumResult& result) {
    std::string out = "index,eigenvalue,cluster_id\n";
    std::size_t cluster = 0;
    int used = 0;
    for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
        while (cluster < result.clusters.size() && used >= result.clusters[cluster].second) {
            ++cluster;
            used = 0;
        }
        out += std::to_string(i) + "," + io::fmt_double(result.eigenvalues[i]) + "," +
               std::to_string(cluster) + "\n";
        ++used;
    }
    return out;
}

std::string spectrum_header_json(const SpectrumResult& result) {
    std::string out = "{\"qparams\":" + io::model_to_json(result.qparams) + ",\"grid\":{";
    out += "\"n\":" + std::to_string(result.grid.n) + ",\"box\":[";
    for (int i = 0; i < result.grid.n; ++i) {
        if (i) out += ",";
        out += "[" + io::fmt_double(result.grid.box[i].first) + "," +
               io::fmt_double(result.grid.box[i].second) + "]";
    }
    out += "],\"points\":[";
    for (int i = 0; i < result.grid.n; ++i) {
        if (i) out += ",";
        out += std::to_string(result.grid.points[i]);
    }
    out += "],\"boundary\":\"dirichlet\"}";
    out += ",\"count\":" + std::to_string(result.eigenvalues.size());
    out += ",\"clusters\":[";
    for (std::size_t i = 0; i < result.clusters.size(); ++i) {
        if (i) out += ",";
        out += "{\"value\":" + io::fmt_double(result.clusters[i].first) +
               ",\"multiplicity\":" + std::to_string(result.clusters[i].second) + "}";
    }
    out += "]}";
    return out;
}

}  // namespace quantum
}  // namespace confham
