#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gaitkit {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (bad CSV row, wrong field count, non-numeric token).
class ParseError : public Error {
public:
    using Error::Error;
};

// A fitted transform was applied outside the partition it was fitted on.
class LeakageError : public Error {
public:
    using Error::Error;
};

inline constexpr std::size_t kNumChannels = 6;

inline constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "ac_x", "ac_y", "ac_z", "gy_x", "gy_y", "gy_z"};

// One 6-channel sensor reading: accelerometer (m/s^2) then gyroscope (rad/s),
// always in the order ac_x, ac_y, ac_z, gy_x, gy_y, gy_z. A missing field is
// stored as NaN; any non-missing value is finite.
struct Sample {
    std::array<double, kNumChannels> values{};

    static Sample all_missing() {
        Sample s;
        s.values.fill(std::numeric_limits<double>::quiet_NaN());
        return s;
    }

    bool is_missing(std::size_t channel) const { return std::isnan(values[channel]); }

    bool any_missing() const {
        for (double v : values)
            if (std::isnan(v)) return true;
        return false;
    }
};

enum class GaitLabel : int { Normal = 0, Abnormal = 1 };

// Fixed encoding: Normal = 0, Abnormal = 1 (Abnormal is the positive class).
inline int encode_label(GaitLabel label) { return static_cast<int>(label); }

inline GaitLabel decode_label(int code) {
    if (code == 0) return GaitLabel::Normal;
    if (code == 1) return GaitLabel::Abnormal;
    throw Error("decode_label: code must be 0 or 1, got " + std::to_string(code));
}

inline std::string_view label_name(GaitLabel label) {
    return label == GaitLabel::Normal ? "normal" : "abnormal";
}

inline GaitLabel parse_label(std::string_view text) {
    if (text == "normal") return GaitLabel::Normal;
    if (text == "abnormal") return GaitLabel::Abnormal;
    throw ParseError("unknown label '" + std::string(text) + "' (expected 'normal' or 'abnormal')");
}

// One subject's labeled fixed-rate recording.
struct Recording {
    std::string subject_id;
    GaitLabel label = GaitLabel::Normal;
    int sample_rate_hz = 50;
    std::vector<Sample> samples;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

// A set of recordings sharing one sample rate, with unique subject ids.
struct Dataset {
    std::vector<Recording> recordings;
    std::vector<std::string> provenance;  // source file list

    int sample_rate_hz() const {
        return recordings.empty() ? 0 : recordings.front().sample_rate_hz;
    }
    std::size_t total_rows() const {
        std::size_t n = 0;
        for (const auto& r : recordings) n += r.size();
        return n;
    }
    std::size_t rows_with_label(GaitLabel label) const {
        std::size_t n = 0;
        for (const auto& r : recordings)
            if (r.label == label) n += r.size();
        return n;
    }
};

}  // namespace gaitkit
