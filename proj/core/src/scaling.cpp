#include "gaitkit/scaling.hpp"

#include <algorithm>
#include <cmath>

namespace gaitkit {

std::string_view scaler_kind_name(ScalerKind kind) {
    return kind == ScalerKind::Standard ? "standard" : "robust";
}

ScalerKind parse_scaler_kind(std::string_view name) {
    if (name == "standard") return ScalerKind::Standard;
    if (name == "robust") return ScalerKind::Robust;
    throw Error("unknown scaler kind '" + std::string(name) + "' (expected standard|robust)");
}

double interpolated_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw Error("interpolated_quantile: empty input");
    const double rank = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    if (lo == hi) return sorted[lo];
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ScalerParams fit_scaler(ScalerKind kind, const Matrix& X, std::string fitted_on) {
    if (X.rows() < 1) throw Error("fit_scaler: empty matrix");
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    ScalerParams params;
    params.kind = kind;
    params.fitted_on = std::move(fitted_on);
    params.center.resize(d);
    params.scale.resize(d);
    params.zero_scale.resize(d);

    if (kind == ScalerKind::Standard) {
        for (std::size_t j = 0; j < d; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += X(i, j);
            mean /= static_cast<double>(n);
            double var = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dev = X(i, j) - mean;
                var += dev * dev;
            }
            var /= static_cast<double>(n);  // population variance
            params.center[j] = mean;
            params.scale[j] = std::sqrt(var);
        }
    } else {
        std::vector<double> column(n);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < n; ++i) column[i] = X(i, j);
            std::sort(column.begin(), column.end());
            params.center[j] = interpolated_quantile(column, 0.5);
            params.scale[j] =
                interpolated_quantile(column, 0.75) - interpolated_quantile(column, 0.25);
        }
    }
    for (std::size_t j = 0; j < d; ++j) params.zero_scale[j] = (params.scale[j] == 0.0);
    return params;
}

namespace {

void check_dims(const Matrix& X, const ScalerParams& params, const char* op) {
    if (X.cols() != params.dim())
        throw Error(std::string(op) + ": matrix has " + std::to_string(X.cols()) +
                    " columns but scaler was fitted on " + std::to_string(params.dim()));
}

}  // namespace

Matrix transform(const Matrix& X, const ScalerParams& params) {
    check_dims(X, params, "transform");
    Matrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) {
            const double centered = X(i, j) - params.center[j];
            out(i, j) = params.zero_scale[j] ? centered : centered / params.scale[j];
        }
    return out;
}

Matrix inverse_transform(const Matrix& X, const ScalerParams& params) {
    check_dims(X, params, "inverse_transform");
    Matrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) {
            const double unscaled = params.zero_scale[j] ? X(i, j) : X(i, j) * params.scale[j];
            out(i, j) = unscaled + params.center[j];
        }
    return out;
}

}  // namespace gaitkit
