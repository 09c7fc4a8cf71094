#include <cmath>

#include "gaitkit/classifiers.hpp"
#include "validate.hpp"

namespace gaitkit {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot_row(const double* row, const std::vector<double>& w) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += row[j] * w[j];
    return acc;
}

}  // namespace

double logreg_loss(const Matrix& X, const std::vector<int>& y, const std::vector<double>& weights,
                   double bias, double l2_lambda) {
    const std::size_t n = X.rows();
    double nll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = dot_row(X.row_ptr(i), weights) + bias;
        nll += softplus(z) - static_cast<double>(y[i]) * z;
    }
    nll /= static_cast<double>(n);
    double reg = 0.0;
    for (double w : weights) reg += w * w;
    return nll + 0.5 * l2_lambda * reg;
}

void logreg_gradient(const Matrix& X, const std::vector<int>& y,
                     const std::vector<double>& weights, double bias, double l2_lambda,
                     std::vector<double>& grad_w, double& grad_b) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    grad_w.assign(d, 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X.row_ptr(i);
        const double residual = sigmoid(dot_row(row, weights) + bias) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < d; ++j) grad_w[j] += residual * row[j];
        grad_b += residual;
    }
    for (std::size_t j = 0; j < d; ++j)
        grad_w[j] = grad_w[j] / static_cast<double>(n) + l2_lambda * weights[j];
    grad_b /= static_cast<double>(n);
}

LogRegModel logreg_fit(const Matrix& X, const std::vector<int>& y, const LogRegConfig& config) {
    detail::check_training_data(X, y, "logreg_fit");
    if (config.learning_rate <= 0) throw Error("logreg_fit: learning rate must be positive");

    LogRegModel model;
    model.config = config;
    model.weights.assign(X.cols(), 0.0);
    model.bias = 0.0;

    double lr = config.learning_rate;
    double loss = logreg_loss(X, y, model.weights, model.bias, config.l2_lambda);
    std::vector<double> grad_w;
    double grad_b = 0.0;
    std::vector<double> trial_w(X.cols());

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        logreg_gradient(X, y, model.weights, model.bias, config.l2_lambda, grad_w, grad_b);
        double inf_norm = std::abs(grad_b);
        for (double g : grad_w) inf_norm = std::max(inf_norm, std::abs(g));
        if (inf_norm < config.tolerance) {
            model.converged = true;
            break;
        }
        // Halve the step until the full-batch loss stops increasing; the
        // reduced rate carries over to later epochs.
        double trial_b = 0.0;
        double trial_loss = 0.0;
        int halvings = 0;
        for (;; ++halvings) {
            if (halvings > 60)
                throw Error("logreg_fit: loss diverged (non-finite after step halving); "
                            "lower the learning rate");
            for (std::size_t j = 0; j < trial_w.size(); ++j)
                trial_w[j] = model.weights[j] - lr * grad_w[j];
            trial_b = model.bias - lr * grad_b;
            trial_loss = logreg_loss(X, y, trial_w, trial_b, config.l2_lambda);
            if (std::isfinite(trial_loss) && trial_loss <= loss) break;
            lr *= 0.5;
        }
        model.weights = trial_w;
        model.bias = trial_b;
        loss = trial_loss;
        model.loss_history.push_back(loss);
        model.epochs_run = epoch + 1;
    }
    return model;
}

std::vector<double> logreg_predict_proba(const LogRegModel& model, const Matrix& Q) {
    detail::check_query_dim(Q, model.weights.size(), "logreg_predict_proba");
    std::vector<double> proba(Q.rows());
    for (std::size_t i = 0; i < Q.rows(); ++i)
        proba[i] = sigmoid(dot_row(Q.row_ptr(i), model.weights) + model.bias);
    return proba;
}

std::vector<int> logreg_predict(const LogRegModel& model, const Matrix& Q) {
    const auto proba = logreg_predict_proba(model, Q);
    std::vector<int> labels(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) labels[i] = proba[i] >= 0.5 ? 1 : 0;
    return labels;
}

}  // namespace gaitkit
