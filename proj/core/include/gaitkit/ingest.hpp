#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaitkit/types.hpp"

namespace gaitkit {

// Parses a raw per-subject sensor log: one row per sample, 6 comma-separated
// fields in channel order. Blank or `nan` (case-insensitive) fields become
// missing values; any other non-numeric token is a ParseError naming the
// line. A leading header row equal to the channel names is skipped.
Recording parse_recording(const std::filesystem::path& path, const std::string& subject_id,
                          GaitLabel label, int sample_rate_hz);

// Same grammar, reading from an already-open stream (`source` names it in errors).
Recording parse_recording_stream(std::istream& in, const std::string& source,
                                 const std::string& subject_id, GaitLabel label,
                                 int sample_rate_hz);

// Drops head_s seconds from the front and tail_s from the back (start/stop
// transitions). The recording must be strictly longer than the trimmed span.
Recording trim_transitions(const Recording& rec, double head_s, double tail_s);

// Combines recordings into a Dataset; rejects mixed sample rates and
// duplicate subject ids.
Dataset assemble_dataset(std::vector<Recording> recordings);

inline constexpr std::string_view kCanonicalCsvHeader =
    "subject_id,label,ac_x,ac_y,ac_z,gy_x,gy_y,gy_z";

// Canonical CSV: UTF-8, LF endings, exact header above, label in
// {normal,abnormal}, rows in temporal order grouped by subject, floats in
// shortest round-trip form, missing values as empty fields.
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);
std::string dataset_to_csv(const Dataset& dataset);

// Re-parses a canonical CSV. The sample rate is not stored in the file and
// must be supplied by the caller (50 Hz in the reference setup).
Dataset read_dataset_csv(const std::filesystem::path& path, int sample_rate_hz);
Dataset parse_dataset_csv(std::istream& in, const std::string& source, int sample_rate_hz);

// Shortest decimal form that round-trips to the same double (std::to_chars).
std::string format_double(double value);

}  // namespace gaitkit
