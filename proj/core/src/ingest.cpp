#include "gaitkit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gaitkit {

namespace {

void trim_inplace(std::string& s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

// Parses one numeric field; empty or `nan` yields NaN (missing).
double parse_field(std::string token, const std::string& source, std::size_t lineno,
                   std::string_view channel) {
    trim_inplace(token);
    if (token.empty() || lowercase(token) == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    std::string_view text = token;
    if (text.front() == '+') text.remove_prefix(1);  // from_chars rejects leading '+'
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ParseError(source + ":" + std::to_string(lineno) + ": non-numeric value '" + token +
                         "' in column " + std::string(channel));
    if (!std::isfinite(value))
        throw ParseError(source + ":" + std::to_string(lineno) + ": non-finite value '" + token +
                         "' in column " + std::string(channel));
    return value;
}

bool is_channel_header(const std::string& line) {
    auto fields = split_fields(lowercase(line));
    if (fields.size() != kNumChannels) return false;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        trim_inplace(fields[c]);
        if (fields[c] != kChannelNames[c]) return false;
    }
    return true;
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

Recording parse_recording_stream(std::istream& in, const std::string& source,
                                 const std::string& subject_id, GaitLabel label,
                                 int sample_rate_hz) {
    if (sample_rate_hz <= 0)
        throw Error("parse_recording: sample rate must be positive, got " +
                    std::to_string(sample_rate_hz));
    Recording rec;
    rec.subject_id = subject_id;
    rec.label = label;
    rec.sample_rate_hz = sample_rate_hz;

    std::string line;
    std::size_t lineno = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = line;
        trim_inplace(stripped);
        if (stripped.empty()) continue;
        if (first_content_line) {
            first_content_line = false;
            if (is_channel_header(stripped)) continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != kNumChannels)
            throw ParseError(source + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(kNumChannels) + " comma-separated fields, got " +
                             std::to_string(fields.size()));
        Sample sample;
        for (std::size_t c = 0; c < kNumChannels; ++c)
            sample.values[c] = parse_field(fields[c], source, lineno, kChannelNames[c]);
        rec.samples.push_back(sample);
    }
    if (rec.samples.empty()) throw ParseError(source + ": no samples found");
    return rec;
}

Recording parse_recording(const std::filesystem::path& path, const std::string& subject_id,
                          GaitLabel label, int sample_rate_hz) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path.string());
    return parse_recording_stream(in, path.string(), subject_id, label, sample_rate_hz);
}

Recording trim_transitions(const Recording& rec, double head_s, double tail_s) {
    if (head_s < 0 || tail_s < 0) throw Error("trim_transitions: trim durations must be >= 0");
    const auto head = static_cast<std::size_t>(std::llround(head_s * rec.sample_rate_hz));
    const auto tail = static_cast<std::size_t>(std::llround(tail_s * rec.sample_rate_hz));
    if (rec.size() <= head + tail)
        throw Error("trim_transitions: recording '" + rec.subject_id + "' has " +
                    std::to_string(rec.size()) + " samples; trimming " + std::to_string(head) +
                    "+" + std::to_string(tail) + " requires at least " +
                    std::to_string(head + tail + 1));
    Recording out;
    out.subject_id = rec.subject_id;
    out.label = rec.label;
    out.sample_rate_hz = rec.sample_rate_hz;
    out.samples.assign(rec.samples.begin() + static_cast<std::ptrdiff_t>(head),
                       rec.samples.end() - static_cast<std::ptrdiff_t>(tail));
    return out;
}

Dataset assemble_dataset(std::vector<Recording> recordings) {
    if (recordings.empty()) throw Error("assemble_dataset: no recordings");
    const int rate = recordings.front().sample_rate_hz;
    std::set<std::string> ids;
    for (const auto& rec : recordings) {
        if (rec.sample_rate_hz != rate)
            throw Error("assemble_dataset: mixed sample rates (" + std::to_string(rate) +
                        " Hz vs " + std::to_string(rec.sample_rate_hz) + " Hz in '" +
                        rec.subject_id + "')");
        if (!ids.insert(rec.subject_id).second)
            throw Error("assemble_dataset: duplicate subject id '" + rec.subject_id + "'");
    }
    Dataset ds;
    ds.recordings = std::move(recordings);
    return ds;
}

std::string dataset_to_csv(const Dataset& dataset) {
    std::string out;
    out += kCanonicalCsvHeader;
    out += '\n';
    for (const auto& rec : dataset.recordings) {
        const std::string prefix = rec.subject_id + "," + std::string(label_name(rec.label));
        for (const auto& sample : rec.samples) {
            out += prefix;
            for (std::size_t c = 0; c < kNumChannels; ++c) {
                out += ',';
                if (!sample.is_missing(c)) out += format_double(sample.values[c]);
            }
            out += '\n';
        }
    }
    return out;
}

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw Error("cannot open file for writing: " + path.string());
    out << dataset_to_csv(dataset);
    if (!out) throw Error("write failed: " + path.string());
}

Dataset parse_dataset_csv(std::istream& in, const std::string& source, int sample_rate_hz) {
    if (sample_rate_hz <= 0)
        throw Error("parse_dataset_csv: sample rate must be positive, got " +
                    std::to_string(sample_rate_hz));
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(source + ": empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCanonicalCsvHeader)
        throw ParseError(source + ":1: expected header '" + std::string(kCanonicalCsvHeader) +
                         "', got '" + line + "'");

    Dataset ds;
    ds.provenance.push_back(source);
    Recording* current = nullptr;
    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = line;
        trim_inplace(stripped);
        if (stripped.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != kNumChannels + 2)
            throw ParseError(source + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(kNumChannels + 2) + " fields, got " +
                             std::to_string(fields.size()));
        std::string subject = fields[0];
        trim_inplace(subject);
        if (subject.empty())
            throw ParseError(source + ":" + std::to_string(lineno) + ": empty subject_id");
        std::string label_text = fields[1];
        trim_inplace(label_text);
        GaitLabel label;
        try {
            label = parse_label(label_text);
        } catch (const ParseError& e) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }

        if (current == nullptr || current->subject_id != subject) {
            if (!seen_ids.insert(subject).second)
                throw ParseError(source + ":" + std::to_string(lineno) + ": subject '" + subject +
                                 "' appears in non-contiguous row groups");
            Recording rec;
            rec.subject_id = subject;
            rec.label = label;
            rec.sample_rate_hz = sample_rate_hz;
            ds.recordings.push_back(std::move(rec));
            current = &ds.recordings.back();
        } else if (current->label != label) {
            throw ParseError(source + ":" + std::to_string(lineno) + ": subject '" + subject +
                             "' changes label mid-recording");
        }
        Sample sample;
        for (std::size_t c = 0; c < kNumChannels; ++c)
            sample.values[c] = parse_field(fields[c + 2], source, lineno, kChannelNames[c]);
        current->samples.push_back(sample);
    }
    if (ds.recordings.empty()) throw ParseError(source + ": no data rows");
    return ds;
}

Dataset read_dataset_csv(const std::filesystem::path& path, int sample_rate_hz) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    return parse_dataset_csv(in, path.string(), sample_rate_hz);
}

}  // namespace gaitkit
