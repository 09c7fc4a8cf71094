#pragma once

#include <string>
#include <vector>

#include "gaitkit/matrix.hpp"

namespace gaitkit {

enum class ScalerKind { Standard, Robust };

std::string_view scaler_kind_name(ScalerKind kind);
ScalerKind parse_scaler_kind(std::string_view name);

// Fitted per-feature centering/scaling. Standard: mean and population
// standard deviation (divide by n). Robust: median and IQR with
// linear-interpolation quantiles (quantile q at rank q*(n-1)). Zero-scale
// features are flagged and pass through centered at transform time.
struct ScalerParams {
    ScalerKind kind = ScalerKind::Standard;
    std::vector<double> center;
    std::vector<double> scale;
    std::vector<bool> zero_scale;
    std::string fitted_on;

    std::size_t dim() const { return center.size(); }
};

ScalerParams fit_scaler(ScalerKind kind, const Matrix& X, std::string fitted_on = {});

// (x - center) / scale per feature; zero-scale features map to x - center.
Matrix transform(const Matrix& X, const ScalerParams& params);

// Exact inverse of transform under the same zero-scale rule.
Matrix inverse_transform(const Matrix& X, const ScalerParams& params);

// Linear-interpolation quantile at rank q*(n-1) of a sorted vector.
double interpolated_quantile(const std::vector<double>& sorted, double q);

}  // namespace gaitkit
