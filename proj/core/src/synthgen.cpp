#include "gaitkit/synthgen.hpp"

#include <cmath>
#include <cstdio>

#include "gaitkit/ingest.hpp"
#include "gaitkit/rng.hpp"

namespace gaitkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

}  // namespace

GaitProfile GaitProfile::normal(std::uint64_t seed) {
    GaitProfile p;
    p.label = GaitLabel::Normal;
    p.cadence_hz = 1.9;
    p.step_amplitude = 1.0;
    // Upright posture: gravity mostly on ac_z; small gyro bias.
    p.baseline = {0.0, 0.3, 9.81, 0.0, 0.0, 0.05};
    p.harmonic_weights = {{
        {1.00, 0.40, 0.15},  // ac_x
        {0.80, 0.35, 0.10},  // ac_y
        {1.20, 0.50, 0.20},  // ac_z
        {0.60, 0.25, 0.10},  // gy_x
        {0.70, 0.30, 0.12},  // gy_y
        {0.50, 0.20, 0.08},  // gy_z
    }};
    p.asymmetry = 0.0;
    p.noise_sigma = 0.05;
    p.seed = seed;
    return p;
}

GaitProfile GaitProfile::abnormal(std::uint64_t seed) {
    GaitProfile p = normal(seed);
    p.label = GaitLabel::Abnormal;
    p.cadence_hz = 1.1;
    p.step_amplitude = 0.7;
    // Stooped posture tilts the gravity vector toward ac_y.
    p.baseline = {0.4, 2.2, 9.55, 0.02, 0.0, 0.12};
    p.asymmetry = 0.35;
    p.noise_sigma = 0.15;
    return p;
}

void GaitProfile::validate() const {
    if (!(cadence_hz > 0.5 && cadence_hz < 4.0))
        throw Error("GaitProfile: cadence_hz must lie in (0.5, 4), got " +
                    std::to_string(cadence_hz));
    if (noise_sigma < 0) throw Error("GaitProfile: noise_sigma must be >= 0");
    if (!(asymmetry >= 0.0 && asymmetry < 1.0))
        throw Error("GaitProfile: asymmetry must lie in [0, 1)");
}

Recording generate_recording(const GaitProfile& profile, double duration_s, int rate_hz,
                             std::string subject_id) {
    profile.validate();
    if (duration_s <= 0) throw Error("generate_recording: duration must be positive");
    if (rate_hz <= 0) throw Error("generate_recording: rate must be positive");
    const double highest = 3.0 * profile.cadence_hz;
    if (static_cast<double>(rate_hz) <= 2.0 * highest)
        throw Error("generate_recording: rate " + std::to_string(rate_hz) +
                    " Hz violates Nyquist for the " + std::to_string(highest) +
                    " Hz third harmonic");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
    Rng rng(profile.seed);
    // Per-axis phase offsets for the fundamental; harmonics lock to h*phase
    // so the waveform stays periodic in the cadence.
    std::array<double, kNumChannels> phase{};
    for (double& ph : phase) ph = rng.uniform(0.0, 1.0);

    Recording rec;
    rec.subject_id = std::move(subject_id);
    rec.label = profile.label;
    rec.sample_rate_hz = rate_hz;
    rec.samples.resize(n);

    const double dt = 1.0 / static_cast<double>(rate_hz);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        // Alternating steps: even steps full amplitude, odd steps attenuated.
        const auto step = static_cast<long long>(std::floor(t * profile.cadence_hz));
        const double modulation = 1.0 - profile.asymmetry * static_cast<double>(step % 2);
        Sample& s = rec.samples[k];
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            double value = profile.baseline[c];
            for (std::size_t h = 0; h < 3; ++h) {
                const double cycles =
                    std::fmod((h + 1) * (profile.cadence_hz * t + phase[c]), 1.0);
                value += profile.step_amplitude * modulation * profile.harmonic_weights[c][h] *
                         std::sin(kTwoPi * cycles);
            }
            if (profile.noise_sigma > 0) value += profile.noise_sigma * rng.normal();
            s.values[c] = value;
        }
    }
    return rec;
}

Dataset generate_benchmark(std::size_t n_normal, std::size_t n_abnormal, std::uint64_t seed,
                           double duration_s, int rate_hz) {
    if (n_normal < 1 || n_abnormal < 1)
        throw Error("generate_benchmark: need at least one recording per class");
    std::vector<Recording> recordings;
    recordings.reserve(n_normal + n_abnormal);
    char name[32];
    for (std::size_t i = 0; i < n_normal + n_abnormal; ++i) {
        const bool is_normal = i < n_normal;
        const std::uint64_t sub_seed = Rng::derive_seed(seed, i);
        GaitProfile profile =
            is_normal ? GaitProfile::normal(sub_seed) : GaitProfile::abnormal(sub_seed);
        // Subject-to-subject variation: +/-4% cadence, +/-10% amplitude.
        Rng jitter(Rng::derive_seed(seed, 1000 + i));
        profile.cadence_hz *= 1.0 + 0.04 * jitter.uniform(-1.0, 1.0);
        profile.step_amplitude *= 1.0 + 0.10 * jitter.uniform(-1.0, 1.0);
        const std::size_t ordinal = is_normal ? i + 1 : i - n_normal + 1;
        std::snprintf(name, sizeof(name), "%s-%02zu", is_normal ? "normal" : "abnormal",
                      ordinal);
        recordings.push_back(generate_recording(profile, duration_s, rate_hz, name));
    }
    Dataset ds = assemble_dataset(std::move(recordings));
    ds.provenance.push_back("synthetic:seed=" + std::to_string(seed));
    return ds;
}

}  // namespace gaitkit
