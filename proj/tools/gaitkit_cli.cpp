// gaitkit command-line tool: data ingestion, synthetic benchmark generation,
// training, evaluation, and single-recording prediction.
//
// Exit codes: 0 success, 1 data/validation error, 2 usage error.
// Diagnostics go to stderr; data goes to --out or stdout.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaitkit/ingest.hpp"
#include "gaitkit/pipeline.hpp"
#include "gaitkit/synthgen.hpp"

namespace fs = std::filesystem;
using namespace gaitkit;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
};

void write_output(const GlobalOptions& global, const std::string& content) {
    if (global.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(global.out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + global.out_path);
    out << content;
    if (!out) throw Error("write failed: " + global.out_path);
}

PipelineConfig resolve_config(const GlobalOptions& global) {
    PipelineConfig config;
    if (!global.config_path.empty()) config = load_config(global.config_path);
    if (global.seed) config.seed = *global.seed;
    return config.normalized();
}

// <subject>_<label>.<ext>: the token after the last underscore is the label.
std::pair<std::string, GaitLabel> subject_and_label(const fs::path& path) {
    const std::string stem = path.stem().string();
    const auto pos = stem.rfind('_');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= stem.size())
        throw Error("cannot derive subject and label from '" + path.string() +
                    "'; expected <subject>_<label>.<ext> with label normal|abnormal");
    try {
        return {stem.substr(0, pos), parse_label(stem.substr(pos + 1))};
    } catch (const ParseError&) {
        throw Error("cannot derive label from '" + path.string() +
                    "'; expected <subject>_<label>.<ext> with label normal|abnormal");
    }
}

struct IngestOptions {
    std::vector<std::string> inputs;
    int rate_hz = 50;
    double head_s = 3.0;
    double tail_s = 3.0;
    double duration_s = 60.0;
    bool allow_variable = false;
};

int run_ingest(const GlobalOptions& global, const IngestOptions& opt) {
    std::vector<Recording> recordings;
    std::vector<std::string> sources;
    for (const auto& input : opt.inputs) {
        const fs::path path(input);
        const auto [subject, label] = subject_and_label(path);
        Recording rec = parse_recording(path, subject, label, opt.rate_hz);
        rec = trim_transitions(rec, opt.head_s, opt.tail_s);
        if (!opt.allow_variable) {
            const auto expected =
                static_cast<std::size_t>(std::llround(opt.duration_s * opt.rate_hz));
            if (rec.size() != expected)
                throw Error(path.string() + ": trimmed recording has " +
                            std::to_string(rec.size()) + " samples, expected " +
                            std::to_string(expected) + " (" + std::to_string(opt.duration_s) +
                            " s at " + std::to_string(opt.rate_hz) +
                            " Hz); pass --allow-variable-length to accept");
        }
        recordings.push_back(std::move(rec));
        sources.push_back(path.string());
    }
    Dataset dataset = assemble_dataset(std::move(recordings));
    dataset.provenance = std::move(sources);
    write_output(global, dataset_to_csv(dataset));
    std::cerr << "ingested " << dataset.recordings.size() << " recordings, "
              << dataset.total_rows() << " rows (" << dataset.rows_with_label(GaitLabel::Normal)
              << " normal, " << dataset.rows_with_label(GaitLabel::Abnormal) << " abnormal)\n";
    return 0;
}

struct SynthOptions {
    std::size_t n_normal = 14;
    std::size_t n_abnormal = 9;
    double duration_s = 60.0;
    int rate_hz = 50;
};

int run_synth(const GlobalOptions& global, const SynthOptions& opt) {
    const std::uint64_t seed = global.seed.value_or(42);
    const Dataset dataset =
        generate_benchmark(opt.n_normal, opt.n_abnormal, seed, opt.duration_s, opt.rate_hz);
    write_output(global, dataset_to_csv(dataset));
    std::cerr << "generated " << dataset.recordings.size() << " recordings ("
              << dataset.total_rows() << " rows) with seed " << seed << "\n";
    return 0;
}

int run_train(const GlobalOptions& global, const std::string& data_path) {
    const PipelineConfig config = resolve_config(global);
    const Dataset dataset = read_dataset_csv(data_path, config.sample_rate_hz);
    const auto slots = window_slots(dataset, config.window);
    FittedPipeline fitted = fit_pipeline(dataset, slots, config, "train");
    fitted.data_fingerprint = fingerprint_file(data_path);
    write_output(global, bundle_to_json(fitted));
    std::cerr << "trained " << config.model.kind << " on " << slots.size() << " windows ("
              << config.feature_dim() << " features per window)\n";
    return 0;
}

int run_evaluate(const GlobalOptions& global, const std::string& data_path,
                 const std::string& report_path) {
    const PipelineConfig config = resolve_config(global);
    const Dataset dataset = read_dataset_csv(data_path, config.sample_rate_hz);
    const EvaluationReport report = cross_validate(dataset, config);
    if (report.window_level_leakage_warning)
        std::cerr << "warning: window-level splits can leak subject identity between train and "
                     "test; use split mode 'subject' for subject-independent estimates\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw Error("cannot open report file: " + report_path);
        out << report_to_json(report);
    }
    write_output(global, report_table(report));
    return 0;
}

int run_predict(const GlobalOptions& global, const std::string& bundle_path,
                const std::string& input_path) {
    const FittedPipeline fitted = load_bundle(bundle_path);

    std::ifstream probe(input_path, std::ios::binary);
    if (!probe) throw Error("cannot open file: " + input_path);
    std::string first_line;
    std::getline(probe, first_line);
    if (!first_line.empty() && first_line.back() == '\r') first_line.pop_back();
    probe.clear();
    probe.seekg(0);

    Recording rec;
    if (first_line == kCanonicalCsvHeader) {
        Dataset ds = parse_dataset_csv(probe, input_path, fitted.config.sample_rate_hz);
        if (ds.recordings.size() != 1)
            throw Error(input_path + ": expected a single-subject recording, found " +
                        std::to_string(ds.recordings.size()) + " subjects");
        rec = std::move(ds.recordings.front());
    } else {
        rec = parse_recording_stream(probe, input_path, "input", GaitLabel::Normal,
                                     fitted.config.sample_rate_hz);
    }

    const PredictionResult result = predict_recording(fitted, rec);
    std::string out = "window_id,start_index,label\n";
    for (std::size_t i = 0; i < result.window_labels.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(result.window_starts[i]) + "," +
               std::string(label_name(decode_label(result.window_labels[i]))) + "\n";
    }
    out += "verdict," + std::string(label_name(result.verdict)) + "\n";
    write_output(global, out);
    if (result.tie_broken_to_abnormal)
        std::cerr << "note: window votes tied; verdict resolved to abnormal\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smartphone-sensor gait classification pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the pipeline seed");
    app.add_option("--config", global.config_path, "pipeline config JSON");
    app.add_option("--out", global.out_path, "output file (default: stdout)");

    IngestOptions ingest_opt;
    auto* ingest = app.add_subcommand(
        "ingest", "convert raw <subject>_<label>.<ext> sensor logs to canonical CSV");
    ingest->add_option("files", ingest_opt.inputs, "raw 6-column sensor logs")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--rate", ingest_opt.rate_hz, "sample rate in Hz (default 50)");
    ingest->add_option("--head-s", ingest_opt.head_s, "leading transition trim in s (default 3)");
    ingest->add_option("--tail-s", ingest_opt.tail_s, "trailing transition trim in s (default 3)");
    ingest->add_option("--duration-s", ingest_opt.duration_s,
                       "expected post-trim duration in s (default 60)");
    ingest->add_flag("--allow-variable-length", ingest_opt.allow_variable,
                     "accept recordings of any post-trim length");

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "generate the seeded synthetic benchmark CSV");
    synth->add_option("--normal", synth_opt.n_normal, "normal-gait recordings (default 14)");
    synth->add_option("--abnormal", synth_opt.n_abnormal,
                      "abnormal-gait recordings (default 9)");
    synth->add_option("--duration-s", synth_opt.duration_s, "recording length in s (default 60)");
    synth->add_option("--rate", synth_opt.rate_hz, "sample rate in Hz (default 50)");

    std::string train_data;
    auto* train = app.add_subcommand("train", "fit the configured pipeline, emit a model bundle");
    train->add_option("--data", train_data, "canonical CSV dataset")->required();

    std::string eval_data;
    std::string eval_report;
    auto* evaluate = app.add_subcommand("evaluate", "cross-validate and print the metrics table");
    evaluate->add_option("--data", eval_data, "canonical CSV dataset")->required();
    evaluate->add_option("--report", eval_report, "also write the full report JSON here");

    std::string predict_bundle;
    std::string predict_input;
    auto* predict = app.add_subcommand("predict", "classify one recording with a trained bundle");
    predict->add_option("--bundle", predict_bundle, "model bundle JSON")->required();
    predict->add_option("--input", predict_input, "recording CSV (canonical or raw 6-column)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (seed_opt->count() > 0) global.seed = seed_value;

    try {
        if (ingest->parsed()) return run_ingest(global, ingest_opt);
        if (synth->parsed()) return run_synth(global, synth_opt);
        if (train->parsed()) return run_train(global, train_data);
        if (evaluate->parsed()) return run_evaluate(global, eval_data, eval_report);
        if (predict->parsed()) return run_predict(global, predict_bundle, predict_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
