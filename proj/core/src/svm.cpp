#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaitkit/classifiers.hpp"
#include "gaitkit/rng.hpp"
#include "validate.hpp"

namespace gaitkit {

std::string_view svm_kernel_name(SvmKernel kernel) {
    return kernel == SvmKernel::Linear ? "linear" : "rbf";
}

SvmKernel parse_svm_kernel(std::string_view name) {
    if (name == "linear") return SvmKernel::Linear;
    if (name == "rbf") return SvmKernel::Rbf;
    throw Error("unknown SVM kernel '" + std::string(name) + "' (expected linear|rbf)");
}

double svm_kernel_value(SvmKernel kernel, double gamma, const double* a, const double* b,
                        std::size_t d) {
    if (kernel == SvmKernel::Linear) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += a[j] * b[j];
        return acc;
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        sq += diff * diff;
    }
    return std::exp(-gamma * sq);
}

namespace {

double resolve_gamma(const SvmConfig& config, const Matrix& X) {
    if (config.gamma > 0) return config.gamma;
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    double total_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += X(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = X(i, j) - mean;
            var += dev * dev;
        }
        total_var += var / static_cast<double>(n);
    }
    const double mean_var = total_var / static_cast<double>(d);
    return mean_var > 0 ? 1.0 / (static_cast<double>(d) * mean_var) : 1.0 / static_cast<double>(d);
}

struct SmoState {
    const std::vector<double>& y;  // +/-1
    std::vector<double> K;         // n x n Gram cache
    std::vector<double> alpha;
    std::vector<double> G;  // sum_j alpha_j y_j K(j, i), kept incrementally
    double C;
    double tol;
    double aeps;  // alphas within aeps of a bound are treated as bound

    bool at_zero(std::size_t i) const { return alpha[i] <= aeps; }
    bool at_cap(std::size_t i) const { return alpha[i] >= C - aeps; }

    SmoState(const Matrix& X, const std::vector<double>& y_, SvmKernel kernel, double gamma,
             double C_, double tol_)
        : y(y_), alpha(X.rows(), 0.0), G(X.rows(), 0.0), C(C_), tol(tol_), aeps(1e-12 * C_) {
        const std::size_t n = X.rows();
        K.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v =
                    svm_kernel_value(kernel, gamma, X.row_ptr(i), X.row_ptr(j), X.cols());
                K[i * n + j] = v;
                K[j * n + i] = v;
            }
    }

    // Bias derived from the KKT interval of the current alphas: mean over
    // free support vectors when any exist, otherwise the midpoint of the
    // feasible band. More stable than the running-b update of textbook
    // simplified SMO, which can stall short of the tolerance.
    double derived_bias() const {
        double free_sum = 0.0;
        std::size_t free_count = 0;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const double v = y[i] - G[i];  // bias putting i exactly on the margin
            if (!at_zero(i) && !at_cap(i)) {
                free_sum += v;
                ++free_count;
            } else if ((at_zero(i) && y[i] > 0) || (at_cap(i) && y[i] < 0)) {
                lo = std::max(lo, v);  // needs b >= v
            } else {
                hi = std::min(hi, v);  // needs b <= v
            }
        }
        if (free_count > 0) return free_sum / static_cast<double>(free_count);
        if (std::isinf(lo)) return hi;
        if (std::isinf(hi)) return lo;
        return 0.5 * (lo + hi);
    }

    bool violates(std::size_t i, double err) const {
        const double r = y[i] * err;  // y_i f(x_i) - 1
        return (r < -tol && !at_cap(i)) || (r > tol && !at_zero(i));
    }

    // KKT residual under the derived bias: how far the worst point sits
    // outside its allowed band.
    double max_violation() const {
        const double b = derived_bias();
        double worst = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const double r = y[i] * (G[i] + b - y[i]);
            if (!at_cap(i)) worst = std::max(worst, -r);
            if (!at_zero(i)) worst = std::max(worst, r);
        }
        return worst;
    }

    // Joint optimization of the (i, j) pair; returns false when no progress
    // is possible (degenerate eta, clipped range, or negligible change).
    bool update_pair(std::size_t i, std::size_t j, double bias) {
        if (i == j) return false;
        const std::size_t n = alpha.size();
        const double ei = G[i] + bias - y[i];
        const double ej = G[j] + bias - y[j];
        const double ai_old = alpha[i];
        const double aj_old = alpha[j];
        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, aj_old - ai_old);
            hi = std::min(C, C + aj_old - ai_old);
        } else {
            lo = std::max(0.0, ai_old + aj_old - C);
            hi = std::min(C, ai_old + aj_old);
        }
        if (lo >= hi) return false;
        const double eta = 2.0 * K[i * n + j] - K[i * n + i] - K[j * n + j];
        if (eta >= 0) return false;
        double aj = aj_old - y[j] * (ei - ej) / eta;
        aj = std::clamp(aj, lo, hi);
        if (std::abs(aj - aj_old) < 1e-7) return false;
        double ai = ai_old + y[i] * y[j] * (aj_old - aj);
        // Snap to the exact bound so roundoff residue never masquerades as a
        // support vector.
        if (ai < aeps) ai = 0.0;
        if (ai > C - aeps) ai = C;
        if (aj < aeps) aj = 0.0;
        if (aj > C - aeps) aj = C;
        alpha[i] = ai;
        alpha[j] = aj;
        const double di = (ai - ai_old) * y[i];
        const double dj = (aj - aj_old) * y[j];
        for (std::size_t k = 0; k < n; ++k) G[k] += di * K[i * n + k] + dj * K[j * n + k];
        return true;
    }
};

}  // namespace

SvmModel svm_fit(const Matrix& X, const std::vector<int>& y, const SvmConfig& config) {
    detail::check_training_data(X, y, "svm_fit");
    if (!detail::both_classes_present(y))
        throw Error("svm_fit: training set contains a single class");
    if (config.C <= 0) throw Error("svm_fit: C must be positive");

    const std::size_t n = X.rows();
    std::vector<double> ypm(n);
    for (std::size_t i = 0; i < n; ++i) ypm[i] = y[i] == 1 ? 1.0 : -1.0;

    const double gamma = resolve_gamma(config, X);
    SmoState state(X, ypm, config.kernel, gamma, config.C, config.tolerance);
    Rng rng(config.seed);

    std::size_t calm_sweeps = 0;
    std::size_t sweeps = 0;
    std::vector<std::size_t> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    std::vector<std::size_t> violators;
    while (calm_sweeps < config.max_passes) {
        if (sweeps++ >= config.max_sweeps)
            throw Error("svm_fit: no convergence after " + std::to_string(config.max_sweeps) +
                        " sweeps; residual KKT violation " +
                        std::to_string(state.max_violation()));
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double bias = state.derived_bias();
            if (!state.violates(i, state.G[i] + bias - ypm[i])) continue;
            // Second index drawn at random from the current violators (an
            // up-side violator pairs productively with a down-side one);
            // falls back to the remaining indices if none of them works.
            violators.clear();
            for (std::size_t k = 0; k < n; ++k)
                if (k != i && state.violates(k, state.G[k] + bias - ypm[k]))
                    violators.push_back(k);
            rng.shuffle(violators);
            bool updated = false;
            for (std::size_t j : violators) {
                if (state.update_pair(i, j, bias)) {
                    updated = true;
                    break;
                }
            }
            if (!updated) {
                rng.shuffle(everyone);
                for (std::size_t j : everyone) {
                    if (state.update_pair(i, j, bias)) {
                        updated = true;
                        break;
                    }
                }
            }
            if (updated) ++changed;
        }
        if (changed == 0 && state.max_violation() <= config.tolerance)
            ++calm_sweeps;
        else
            calm_sweeps = 0;
    }

    SvmModel model;
    model.config = config;
    model.gamma = gamma;
    model.bias = state.derived_bias();
    model.support_vectors = Matrix(0, X.cols());
    for (std::size_t i = 0; i < n; ++i) {
        if (state.alpha[i] > 0) {
            model.support_vectors.append_row(X.row_ptr(i));
            model.alpha.push_back(state.alpha[i]);
            model.dual_coef.push_back(state.alpha[i] * ypm[i]);
            model.sv_indices.push_back(i);
        }
    }
    return model;
}

std::vector<double> svm_decision(const SvmModel& model, const Matrix& Q) {
    detail::check_query_dim(Q, model.support_vectors.cols(), "svm_decision");
    const std::size_t d = model.support_vectors.cols();
    std::vector<double> f(Q.rows(), model.bias);
    for (std::size_t q = 0; q < Q.rows(); ++q)
        for (std::size_t s = 0; s < model.support_vectors.rows(); ++s)
            f[q] += model.dual_coef[s] * svm_kernel_value(model.config.kernel, model.gamma,
                                                          model.support_vectors.row_ptr(s),
                                                          Q.row_ptr(q), d);
    return f;
}

std::vector<int> svm_predict(const SvmModel& model, const Matrix& Q) {
    const auto f = svm_decision(model, Q);
    std::vector<int> labels(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) labels[i] = f[i] >= 0 ? 1 : 0;
    return labels;
}

}  // namespace gaitkit
