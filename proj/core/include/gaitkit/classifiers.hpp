#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gaitkit/matrix.hpp"

namespace gaitkit {

// All four classical models share the contract: fit(X, y) with y in {0, 1}
// (1 = Abnormal, the positive class), predict(model, Q) -> labels. Fitting is
// single-threaded and deterministic for a fixed seed; models are immutable
// after fit.

// ---------------------------------------------------------------------------
// k-nearest neighbours (Euclidean, majority vote)

struct KnnModel {
    std::size_t k = 5;
    Matrix train;
    std::vector<int> labels;
};

// k must be odd (binary majority never ties) and <= n. Equidistant
// neighbours at the k-boundary are broken by lower training-row index.
KnnModel knn_fit(const Matrix& X, const std::vector<int>& y, std::size_t k);
std::vector<int> knn_predict(const KnnModel& model, const Matrix& Q);

// ---------------------------------------------------------------------------
// Logistic regression (full-batch gradient descent, L2 on weights)

struct LogRegConfig {
    double learning_rate = 0.1;  // halved whenever a step would increase the loss
    double l2_lambda = 1e-4;
    std::size_t max_epochs = 5000;
    double tolerance = 1e-6;  // stop when gradient inf-norm drops below
};

struct LogRegModel {
    std::vector<double> weights;
    double bias = 0.0;
    LogRegConfig config;
    bool converged = false;
    std::size_t epochs_run = 0;
    std::vector<double> loss_history;
};

// L2-regularized mean negative log-likelihood and its analytic gradient.
// The bias is not regularized.
double logreg_loss(const Matrix& X, const std::vector<int>& y, const std::vector<double>& weights,
                   double bias, double l2_lambda);
void logreg_gradient(const Matrix& X, const std::vector<int>& y,
                     const std::vector<double>& weights, double bias, double l2_lambda,
                     std::vector<double>& grad_w, double& grad_b);

LogRegModel logreg_fit(const Matrix& X, const std::vector<int>& y, const LogRegConfig& config = {});
std::vector<double> logreg_predict_proba(const LogRegModel& model, const Matrix& Q);
std::vector<int> logreg_predict(const LogRegModel& model, const Matrix& Q);

// ---------------------------------------------------------------------------
// Gaussian Naive Bayes

struct GaussianNbModel {
    std::array<double, 2> prior{};        // class frequencies, sum to 1
    Matrix mean;                          // 2 x d
    Matrix variance;                      // 2 x d, floored at variance_floor
    double variance_floor = 0.0;
};

// variance_floor = var_smoothing * max per-feature variance of X (population).
GaussianNbModel gnb_fit(const Matrix& X, const std::vector<int>& y, double var_smoothing = 1e-9);
// Posteriors computed in log space, normalized per row (n x 2).
Matrix gnb_predict_proba(const GaussianNbModel& model, const Matrix& Q);
std::vector<int> gnb_predict(const GaussianNbModel& model, const Matrix& Q);

// ---------------------------------------------------------------------------
// Support vector machine (soft-margin dual via simplified SMO)

enum class SvmKernel { Linear, Rbf };

std::string_view svm_kernel_name(SvmKernel kernel);
SvmKernel parse_svm_kernel(std::string_view name);

struct SvmConfig {
    SvmKernel kernel = SvmKernel::Rbf;
    double C = 1.0;
    double gamma = 0.0;  // 0 = auto: 1 / (d * mean feature variance)
    double tolerance = 1e-3;
    std::size_t max_passes = 10;    // consecutive violation-free sweeps to stop
    std::size_t max_sweeps = 2000;  // hard cap; exceeding it is an error
    std::uint64_t seed = 0;
};

struct SvmModel {
    SvmConfig config;
    double gamma = 0.0;  // resolved value actually used
    Matrix support_vectors;
    std::vector<double> dual_coef;        // alpha_i * y_i per support vector
    std::vector<double> alpha;            // alpha_i per support vector (in (0, C])
    std::vector<std::size_t> sv_indices;  // training-row index of each support vector
    double bias = 0.0;
};

// Labels are mapped internally to +/-1 (1 = Abnormal = +1). Terminates when
// no KKT violation beyond tolerance survives for max_passes consecutive
// sweeps; exceeding max_sweeps raises an error reporting the residual
// violation. The second index of each working pair is drawn from a seeded
// RNG, so training is deterministic.
SvmModel svm_fit(const Matrix& X, const std::vector<int>& y, const SvmConfig& config = {});
std::vector<double> svm_decision(const SvmModel& model, const Matrix& Q);
// f >= 0 maps to Abnormal (1).
std::vector<int> svm_predict(const SvmModel& model, const Matrix& Q);

double svm_kernel_value(SvmKernel kernel, double gamma, const double* a, const double* b,
                        std::size_t d);

}  // namespace gaitkit
