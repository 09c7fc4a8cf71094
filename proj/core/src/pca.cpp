#include "gaitkit/pca.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace gaitkit {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Descending eigenpairs of a symmetric PSD matrix; eigenvalues clamped at 0.
void symmetric_eigen_descending(const Eigen::MatrixXd& M, Eigen::VectorXd& values,
                                Eigen::MatrixXd& vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success) throw Error("fit_pca: eigendecomposition failed");
    const auto& ev = solver.eigenvalues();
    const auto& evec = solver.eigenvectors();
    const Eigen::Index m = ev.size();
    values.resize(m);
    vectors.resize(evec.rows(), m);
    for (Eigen::Index i = 0; i < m; ++i) {
        values[i] = std::max(0.0, ev[m - 1 - i]);
        vectors.col(i) = evec.col(m - 1 - i);
    }
}

// Modified Gram-Schmidt over the rows of C (descending-eigenvalue order).
void reorthonormalize_rows(RowMajorMatrix& C) {
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j) C.row(i) -= C.row(i).dot(C.row(j)) * C.row(j);
        const double norm = C.row(i).norm();
        if (norm > 0) C.row(i) /= norm;
    }
}

void apply_sign_convention(RowMajorMatrix& C) {
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        Eigen::Index arg = 0;
        double best = 0.0;
        for (Eigen::Index j = 0; j < C.cols(); ++j)
            if (std::abs(C(i, j)) > best) {
                best = std::abs(C(i, j));
                arg = j;
            }
        if (C(i, arg) < 0) C.row(i) = -C.row(i);
    }
}

}  // namespace

PcaModel fit_pca(const Matrix& X, const PcaTarget& target, std::string fitted_on) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (n < 2) throw Error("fit_pca: need at least 2 rows, got " + std::to_string(n));
    const std::size_t max_k = std::min(n - 1, d);
    if (target.kind == PcaTarget::Kind::Components) {
        if (target.components < 1 || target.components > max_k)
            throw Error("fit_pca: component count " + std::to_string(target.components) +
                        " outside [1, min(n-1, d)] = [1, " + std::to_string(max_k) + "]");
    } else {
        if (!(target.fraction > 0.0) || target.fraction > 1.0)
            throw Error("fit_pca: variance fraction must lie in (0, 1]");
    }

    Eigen::Map<const RowMajorMatrix> Xm(X.data().data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(d));
    const Eigen::RowVectorXd mean = Xm.colwise().mean();
    const RowMajorMatrix centered = Xm.rowwise() - mean;

    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd axes;  // d x m, columns = principal axes
    if (n >= d) {
        const Eigen::MatrixXd cov =
            (centered.transpose() * centered) / static_cast<double>(n);
        symmetric_eigen_descending(cov, eigenvalues, axes);
    } else {
        // Gram route for wide data: eigenvectors of (1/n) Xc Xc^T map to
        // covariance eigenvectors as Xc^T u / sqrt(n * lambda), same spectrum.
        const Eigen::MatrixXd gram = (centered * centered.transpose()) / static_cast<double>(n);
        Eigen::VectorXd gvals;
        Eigen::MatrixXd gvecs;
        symmetric_eigen_descending(gram, gvals, gvecs);
        const double floor = gvals.size() > 0 ? gvals[0] * 1e-12 : 0.0;
        Eigen::Index rank = 0;
        while (rank < gvals.size() && gvals[rank] > floor) ++rank;
        eigenvalues = gvals.head(rank);
        axes.resize(static_cast<Eigen::Index>(d), rank);
        for (Eigen::Index i = 0; i < rank; ++i)
            axes.col(i) = (centered.transpose() * gvecs.col(i)) /
                          std::sqrt(static_cast<double>(n) * gvals[i]);
    }

    const double total_variance = centered.squaredNorm() / static_cast<double>(n);

    std::size_t k;
    const auto available = static_cast<std::size_t>(eigenvalues.size());
    if (target.kind == PcaTarget::Kind::Components) {
        if (target.components > available)
            throw Error("fit_pca: requested " + std::to_string(target.components) +
                        " components but data has numerical rank " + std::to_string(available));
        k = target.components;
    } else {
        k = available;  // fall back to everything if roundoff keeps cum < f
        double cumulative = 0.0;
        for (std::size_t i = 0; i < available; ++i) {
            cumulative += eigenvalues[static_cast<Eigen::Index>(i)];
            if (total_variance == 0.0 || cumulative / total_variance >= target.fraction) {
                k = i + 1;
                break;
            }
        }
        k = std::min(k, max_k);
        if (k == 0) k = 1;
    }

    RowMajorMatrix comp = axes.leftCols(static_cast<Eigen::Index>(k)).transpose();
    reorthonormalize_rows(comp);
    apply_sign_convention(comp);

    PcaModel model;
    model.fitted_on = std::move(fitted_on);
    model.mean.assign(mean.data(), mean.data() + d);
    model.total_variance = total_variance;
    model.explained_variance.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        model.explained_variance[i] = eigenvalues[static_cast<Eigen::Index>(i)];
    model.components = Matrix(k, d, std::vector<double>(comp.data(), comp.data() + k * d));
    return model;
}

Matrix pca_project(const Matrix& X, const PcaModel& model) {
    if (X.cols() != model.input_dim())
        throw Error("pca_project: matrix has " + std::to_string(X.cols()) +
                    " columns but model expects " + std::to_string(model.input_dim()));
    const std::size_t n = X.rows();
    const std::size_t d = model.input_dim();
    const std::size_t k = model.n_components();
    Eigen::Map<const RowMajorMatrix> Xm(X.data().data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(d));
    Eigen::Map<const RowMajorMatrix> C(model.components.data().data(),
                                       static_cast<Eigen::Index>(k),
                                       static_cast<Eigen::Index>(d));
    Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(), static_cast<Eigen::Index>(d));
    RowMajorMatrix Z = (Xm.rowwise() - mean) * C.transpose();
    return Matrix(n, k, std::vector<double>(Z.data(), Z.data() + n * k));
}

Matrix pca_reconstruct(const Matrix& Z, const PcaModel& model) {
    if (Z.cols() != model.n_components())
        throw Error("pca_reconstruct: matrix has " + std::to_string(Z.cols()) +
                    " columns but model has " + std::to_string(model.n_components()) +
                    " components");
    const std::size_t n = Z.rows();
    const std::size_t d = model.input_dim();
    const std::size_t k = model.n_components();
    Eigen::Map<const RowMajorMatrix> Zm(Z.data().data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(k));
    Eigen::Map<const RowMajorMatrix> C(model.components.data().data(),
                                       static_cast<Eigen::Index>(k),
                                       static_cast<Eigen::Index>(d));
    Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(), static_cast<Eigen::Index>(d));
    RowMajorMatrix X = (Zm * C).rowwise() + mean;
    return Matrix(n, d, std::vector<double>(X.data(), X.data() + n * d));
}

}  // namespace gaitkit
