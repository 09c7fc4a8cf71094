#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gaitkit/classifiers.hpp"
#include "gaitkit/cnn.hpp"
#include "gaitkit/evaluation.hpp"
#include "gaitkit/pca.hpp"
#include "gaitkit/preprocess.hpp"
#include "gaitkit/scaling.hpp"
#include "gaitkit/types.hpp"
#include "gaitkit/windowing.hpp"

namespace gaitkit {

inline constexpr std::array<std::string_view, 5> kModelKinds = {"knn", "logreg", "naive_bayes",
                                                               "svm", "cnn"};

// Model choice plus hyperparameters; only the block for `kind` is used.
struct ModelConfig {
    std::string kind = "svm";
    std::size_t knn_k = 5;
    LogRegConfig logreg;
    double nb_var_smoothing = 1e-9;
    SvmConfig svm;
    TrainConfig cnn;

    void validate() const;
};

// Everything the pipeline needs, mirrored 1:1 by the JSON config file
// (lower_snake_case keys, unknown keys rejected).
struct PipelineConfig {
    std::uint64_t seed = 42;
    int sample_rate_hz = 50;
    bool filter_enabled = true;
    FilterSpec filter;  // sample_rate_hz is kept in sync with the field above
    WindowPlan window;
    ScalerKind scaler = ScalerKind::Standard;
    bool pca_enabled = true;  // classical models only; the CNN consumes scaled windows
    PcaTarget pca = PcaTarget::variance_fraction(0.95);
    ModelConfig model;
    SplitPlan split;

    void validate() const;
    std::size_t feature_dim() const { return window.window_len * kNumChannels; }

    // Copy with the filter rate synced to sample_rate_hz and the global seed
    // pushed into the split/SVM/CNN stages.
    PipelineConfig normalized() const;
};

PipelineConfig config_from_json(const std::string& json_text);
std::string config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

using AnyModel = std::variant<KnnModel, LogRegModel, GaussianNbModel, SvmModel, CnnModel>;

// Identifies one window by recording index and start offset; values are
// materialized later, after fold-specific preprocessing.
struct WindowSlot {
    std::size_t recording = 0;
    std::size_t start = 0;
};

// Window geometry for every recording in the dataset (labels/subjects come
// from the recordings). Errors if any recording is shorter than one window.
std::vector<WindowSlot> window_slots(const Dataset& dataset, const WindowPlan& plan);

// Metadata-only windows for split planning (values left empty).
std::vector<Window> slot_windows(const Dataset& dataset, const std::vector<WindowSlot>& slots,
                                 const WindowPlan& plan);

// Medians over the raw samples covered by the given (training) slots.
ImputationParams fit_slot_medians(const Dataset& dataset, const std::vector<WindowSlot>& slots,
                                  const WindowPlan& plan, std::string fitted_on);

// Imputation followed by the configured low-pass filter, per recording.
std::vector<Recording> preprocess_recordings(const Dataset& dataset,
                                             const ImputationParams& medians,
                                             const PipelineConfig& config);

// Flattened feature rows (and labels) for the given slots of preprocessed
// recordings.
Matrix features_at(const std::vector<Recording>& processed, const std::vector<WindowSlot>& slots,
                   const WindowPlan& plan, std::vector<int>* labels_out = nullptr);

// One trained pipeline: fold- or run-scoped transforms plus the model.
struct FittedPipeline {
    PipelineConfig config;
    std::string fitted_on;  // provenance tag shared by every fitted stage
    ImputationParams imputation;
    ScalerParams scaler;
    std::optional<PcaModel> pca;
    AnyModel model;
    std::string data_fingerprint;  // content hash of the training CSV (CLI)

    std::string_view model_kind() const { return kModelKinds[model.index()]; }
};

// Fits imputation, scaler, PCA (classical path), and the configured model on
// the training slots only, tagging every stage with `fitted_on`. When
// `processed_out` is given it receives the imputed+filtered recordings so
// callers can extract held-out windows without re-running preprocessing.
FittedPipeline fit_pipeline(const Dataset& dataset, const std::vector<WindowSlot>& train_slots,
                            const PipelineConfig& config, std::string fitted_on,
                            std::vector<Recording>* processed_out = nullptr);

// Applies scaler/PCA/model to preprocessed feature rows. `expected_tag` is
// checked against every fitted stage first; a mismatch is a LeakageError.
std::vector<int> pipeline_predict(const FittedPipeline& fitted, const Matrix& features,
                                  const std::string& expected_tag);

struct PredictionResult {
    std::vector<int> window_labels;
    std::vector<std::size_t> window_starts;
    GaitLabel verdict = GaitLabel::Normal;
    bool tie_broken_to_abnormal = false;
};

// Classifies every window of a recording with a trained bundle; the verdict
// is the majority label, ties resolved to Abnormal.
PredictionResult predict_recording(const FittedPipeline& fitted, const Recording& rec);

// --- model bundle (JSON) ---------------------------------------------------

// The bundle embeds a config snapshot, all fitted parameters, and the data
// fingerprint; `created_at` is the only field that varies between identical
// runs.
std::string bundle_to_json(const FittedPipeline& fitted);
FittedPipeline bundle_from_json(const std::string& json_text);
void save_bundle(const FittedPipeline& fitted, const std::filesystem::path& path);
FittedPipeline load_bundle(const std::filesystem::path& path);

// FNV-1a over the file bytes, hex-encoded.
std::string fingerprint_file(const std::filesystem::path& path);
std::string fingerprint_bytes(std::string_view bytes);

// --- evaluation report rendering -------------------------------------------

std::string report_to_json(const EvaluationReport& report);
// `algorithm,f1_normal,f1_abnormal,accuracy` with values at 6 decimals.
std::string report_table(const EvaluationReport& report);

}  // namespace gaitkit
