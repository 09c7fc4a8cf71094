#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gaitkit/matrix.hpp"
#include "gaitkit/types.hpp"

namespace gaitkit {

// Fixed-size segment of a recording: window_len rows (time) x 6 channels,
// stored row-major. The classification unit.
struct Window {
    std::vector<double> values;  // row-major, length() * kNumChannels
    std::size_t window_len = 0;
    GaitLabel label = GaitLabel::Normal;
    std::string subject_id;
    std::size_t start_index = 0;

    double at(std::size_t row, std::size_t channel) const {
        return values[row * kNumChannels + channel];
    }
};

struct WindowPlan {
    std::size_t window_len = 200;
    std::size_t hop = 200;

    void validate() const {
        if (window_len < 1) throw Error("WindowPlan: window_len must be >= 1");
        if (hop < 1) throw Error("WindowPlan: hop must be >= 1");
    }
};

// Windows at start indices 0, hop, 2*hop, ...; the trailing partial window
// is discarded, so count = floor((len - window_len)/hop) + 1. Each window
// inherits the recording's label and subject id. Values must be finite
// (impute before windowing). Errors if the recording is shorter than one
// window.
std::vector<Window> slide(const Recording& rec, const WindowPlan& plan);

inline std::size_t window_count(std::size_t len, const WindowPlan& plan) {
    return len < plan.window_len ? 0 : (len - plan.window_len) / plan.hop + 1;
}

// Row-major flattening: sample 0's six channels, then sample 1's, ...
// A 200x6 window becomes a 1200-vector.
std::vector<double> flatten(const Window& w);

// Inverse of flatten; vector length must be a multiple of 6.
Window unflatten(const std::vector<double>& flat, GaitLabel label = GaitLabel::Normal,
                 std::string subject_id = {}, std::size_t start_index = 0);

// Flattens a batch of windows into an n x (window_len*6) feature matrix.
Matrix flatten_windows(const std::vector<Window>& windows);

}  // namespace gaitkit
