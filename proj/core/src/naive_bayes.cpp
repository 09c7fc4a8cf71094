#include <algorithm>
#include <cmath>

#include "gaitkit/classifiers.hpp"
#include "validate.hpp"

namespace gaitkit {

GaussianNbModel gnb_fit(const Matrix& X, const std::vector<int>& y, double var_smoothing) {
    detail::check_training_data(X, y, "gnb_fit");
    if (!detail::both_classes_present(y))
        throw Error("gnb_fit: training set contains a single class");

    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    GaussianNbModel model;
    model.mean = Matrix(2, d);
    model.variance = Matrix(2, d);

    std::array<std::size_t, 2> counts{};
    for (int label : y) ++counts[static_cast<std::size_t>(label)];
    for (int cls = 0; cls < 2; ++cls)
        model.prior[cls] = static_cast<double>(counts[cls]) / static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) model.mean(y[i], j) += row[j];
    }
    for (int cls = 0; cls < 2; ++cls)
        for (std::size_t j = 0; j < d; ++j) model.mean(cls, j) /= static_cast<double>(counts[cls]);

    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - model.mean(y[i], j);
            model.variance(y[i], j) += dev * dev;
        }
    }
    for (int cls = 0; cls < 2; ++cls)
        for (std::size_t j = 0; j < d; ++j)
            model.variance(cls, j) /= static_cast<double>(counts[cls]);

    // Floor at var_smoothing times the largest overall feature variance.
    double max_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = X(i, j) - mean;
            var += dev * dev;
        }
        max_var = std::max(max_var, var / static_cast<double>(n));
    }
    model.variance_floor = std::max(var_smoothing * max_var, 1e-300);
    for (int cls = 0; cls < 2; ++cls)
        for (std::size_t j = 0; j < d; ++j)
            model.variance(cls, j) = std::max(model.variance(cls, j), model.variance_floor);
    return model;
}

Matrix gnb_predict_proba(const GaussianNbModel& model, const Matrix& Q) {
    detail::check_query_dim(Q, model.mean.cols(), "gnb_predict_proba");
    constexpr double kLog2Pi = 1.8378770664093453;
    const std::size_t d = model.mean.cols();
    Matrix proba(Q.rows(), 2);
    for (std::size_t i = 0; i < Q.rows(); ++i) {
        const double* row = Q.row_ptr(i);
        std::array<double, 2> log_post{};
        for (int cls = 0; cls < 2; ++cls) {
            double acc = std::log(model.prior[cls]);
            for (std::size_t j = 0; j < d; ++j) {
                const double var = model.variance(cls, j);
                const double dev = row[j] - model.mean(cls, j);
                acc -= 0.5 * (kLog2Pi + std::log(var) + dev * dev / var);
            }
            log_post[cls] = acc;
        }
        const double shift = std::max(log_post[0], log_post[1]);
        const double e0 = std::exp(log_post[0] - shift);
        const double e1 = std::exp(log_post[1] - shift);
        proba(i, 0) = e0 / (e0 + e1);
        proba(i, 1) = e1 / (e0 + e1);
    }
    return proba;
}

std::vector<int> gnb_predict(const GaussianNbModel& model, const Matrix& Q) {
    const Matrix proba = gnb_predict_proba(model, Q);
    std::vector<int> labels(Q.rows());
    for (std::size_t i = 0; i < Q.rows(); ++i) labels[i] = proba(i, 1) >= proba(i, 0) ? 1 : 0;
    return labels;
}

}  // namespace gaitkit
