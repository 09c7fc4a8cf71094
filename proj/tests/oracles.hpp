#pragma once

// Independent oracles used by the test suites. Everything here is coded from
// first principles, separate from the library implementation paths it
// checks: direct transfer-function evaluation, a cyclic Jacobi eigensolver,
// exhaustive-scan kNN, projected-gradient dual ascent for the SVM, and
// central finite differences.

#include <cstddef>
#include <functional>
#include <vector>

#include "gaitkit/classifiers.hpp"
#include "gaitkit/matrix.hpp"

namespace oracles {

// |H(e^{j omega})| evaluated directly from transfer-function coefficients.
double magnitude_response(const std::vector<double>& b, const std::vector<double>& a,
                          double omega);

// Closed-form magnitude of the bilinear-transformed analog Butterworth
// low-pass: 1/sqrt(1 + (W/Wc)^(2n)) at W = 2*fs*tan(omega/2).
double butterworth_reference_magnitude(int order, double cutoff_hz, double sample_rate_hz,
                                       double omega);

struct EigenResult {
    std::vector<double> values;           // descending
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};

// Cyclic Jacobi rotations on a symmetric matrix (row-major d x d).
EigenResult jacobi_eigen(const std::vector<double>& sym, std::size_t d);

// Exhaustive distance sort with (distance, index) tie-breaking, majority vote.
std::vector<int> brute_knn(const gaitkit::Matrix& X, const std::vector<int>& y,
                           const gaitkit::Matrix& Q, std::size_t k);

struct DualAscentResult {
    std::vector<double> alpha;
    double bias = 0.0;
    double objective = 0.0;  // sum(alpha) - 0.5 alpha^T Q alpha
};

// Projected gradient ascent on the SVM dual with exact projection onto the
// box-and-hyperplane feasible set (bisection on the projection multiplier).
DualAscentResult dual_ascent_svm(const gaitkit::Matrix& X, const std::vector<double>& y_pm,
                                 gaitkit::SvmKernel kernel, double gamma, double C,
                                 std::size_t iterations = 200000);

double svm_dual_objective(const gaitkit::Matrix& X, const std::vector<double>& y_pm,
                          gaitkit::SvmKernel kernel, double gamma,
                          const std::vector<double>& alpha);

// Central finite difference of `loss` w.r.t. each entry of `params`.
std::vector<double> central_difference(std::vector<double>& params,
                                       const std::function<double()>& loss, double step);

// Gaussian Naive Bayes posteriors by plain density products (no log-space).
std::vector<double> gnb_direct_posterior(const std::array<double, 2>& prior,
                                         const gaitkit::Matrix& mean,
                                         const gaitkit::Matrix& variance,
                                         const double* query, std::size_t d);

}  // namespace oracles
