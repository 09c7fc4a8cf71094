#pragma once

#include <array>
#include <cstdint>

#include "gaitkit/types.hpp"

namespace gaitkit {

// Parameters of the synthetic gait signal model: per channel, a DC baseline
// (gravity/posture component) plus the cadence fundamental and two harmonics
// with per-axis phase offsets, amplitude-modulated on alternating steps by
// the asymmetry factor, plus Gaussian noise. Everything derives from `seed`.
struct GaitProfile {
    GaitLabel label = GaitLabel::Normal;
    double cadence_hz = 1.9;         // steps per second
    double step_amplitude = 1.0;     // overall scale of the harmonic stack
    std::array<double, kNumChannels> baseline{};      // DC per channel
    std::array<std::array<double, 3>, kNumChannels> harmonic_weights{};  // h = 1..3
    double asymmetry = 0.0;          // [0,1): alternating-step attenuation
    double noise_sigma = 0.05;       // in amplitude units
    std::uint64_t seed = 0;

    static GaitProfile normal(std::uint64_t seed);
    static GaitProfile abnormal(std::uint64_t seed);

    void validate() const;
};

// Deterministic per seed. Requires rate_hz > 2x the highest harmonic
// (3 * cadence_hz). With zero noise and zero asymmetry the output is exactly
// periodic with period rate_hz / cadence_hz samples.
Recording generate_recording(const GaitProfile& profile, double duration_s, int rate_hz,
                             std::string subject_id = {});

// n_normal + n_abnormal recordings with per-recording seeds derived from the
// master seed; subject ids are synthesized (normal-01.., abnormal-01..) and
// per-subject cadence jitter keeps subjects distinct.
Dataset generate_benchmark(std::size_t n_normal, std::size_t n_abnormal, std::uint64_t seed,
                           double duration_s = 60.0, int rate_hz = 50);

}  // namespace gaitkit
