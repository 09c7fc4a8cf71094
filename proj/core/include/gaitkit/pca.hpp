#pragma once

#include <string>
#include <vector>

#include "gaitkit/matrix.hpp"

namespace gaitkit {

// How many principal components to keep: an explicit count, or the smallest
// count whose cumulative explained-variance ratio reaches a fraction.
struct PcaTarget {
    enum class Kind { Components, VarianceFraction };
    Kind kind = Kind::VarianceFraction;
    std::size_t components = 0;
    double fraction = 0.95;

    static PcaTarget component_count(std::size_t k) {
        return {Kind::Components, k, 0.0};
    }
    static PcaTarget variance_fraction(double f) {
        return {Kind::VarianceFraction, 0, f};
    }
};

// Principal axes of mean-centered data, descending eigenvalue order.
// Component rows are orthonormal; each row's largest-magnitude entry is
// positive (deterministic sign). Eigenvalues use the population covariance
// (divide by n), so total_variance equals the summed per-column variance.
struct PcaModel {
    std::vector<double> mean;       // d
    Matrix components;              // k x d, rows = principal axes
    std::vector<double> explained_variance;  // k, non-increasing
    double total_variance = 0.0;
    std::string fitted_on;

    std::size_t input_dim() const { return mean.size(); }
    std::size_t n_components() const { return components.rows(); }

    std::vector<double> explained_variance_ratio() const {
        std::vector<double> ratio(explained_variance.size());
        for (std::size_t i = 0; i < ratio.size(); ++i)
            ratio[i] = total_variance > 0 ? explained_variance[i] / total_variance : 0.0;
        return ratio;
    }
};

// Requires n >= 2. Explicit component counts must satisfy
// 1 <= k <= min(n-1, d); fractions must lie in (0, 1].
PcaModel fit_pca(const Matrix& X, const PcaTarget& target, std::string fitted_on = {});

// project: (X - mean) * components^T, n x k.
Matrix pca_project(const Matrix& X, const PcaModel& model);

// reconstruct: Z * components + mean, n x d.
Matrix pca_reconstruct(const Matrix& Z, const PcaModel& model);

}  // namespace gaitkit
