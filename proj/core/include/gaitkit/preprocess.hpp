#pragma once

#include <array>
#include <string>
#include <vector>

#include "gaitkit/types.hpp"

namespace gaitkit {

// Digital low-pass Butterworth specification. cutoff_hz must sit strictly
// below the Nyquist frequency.
struct FilterSpec {
    int order = 4;
    double cutoff_hz = 10.0;
    double sample_rate_hz = 50.0;
    bool zero_phase = true;

    void validate() const;
};

// Transfer-function coefficients, a[0] normalized to 1.
struct FilterCoefficients {
    std::vector<double> b;  // feedforward, length order+1
    std::vector<double> a;  // feedback, length order+1
};

// Low-pass Butterworth via the analog prototype (poles equally spaced on the
// left-half s-plane circle) and the bilinear transform with frequency
// pre-warping. DC gain is normalized to exactly 1.
FilterCoefficients design_butterworth(const FilterSpec& spec);

// Per-channel medians of the non-missing values, fitted on one partition.
struct ImputationParams {
    std::array<double, kNumChannels> medians{};
    std::string fitted_on;
};

// Fails if any channel has no non-missing value, naming the channel.
// Even-count medians are the mean of the two middle order statistics.
ImputationParams fit_median(const std::vector<Sample>& data, std::string fitted_on = {});

// Replaces every missing slot with its channel median; other values untouched.
std::vector<Sample> impute(const std::vector<Sample>& data, const ImputationParams& params);

// Filters one channel. The signal is extended on both ends by a reflective
// pad of 3*order samples and the filter state starts at its steady-state
// response to the first padded value, so constants pass through exactly.
// zero_phase runs the filter forward then backward (squared magnitude, zero
// net phase). Requires signal length > 3*order.
std::vector<double> filter_signal(const std::vector<double>& signal, const FilterSpec& spec);

// Applies filter_signal to each channel independently; label and metadata
// are preserved. Samples must not contain missing values (impute first).
Recording filter_recording(const Recording& rec, const FilterSpec& spec);

}  // namespace gaitkit
