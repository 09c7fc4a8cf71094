#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitkit/types.hpp"
#include "gaitkit/windowing.hpp"

namespace gaitkit {

struct PipelineConfig;  // pipeline.hpp
struct FittedPipeline;

enum class SplitMode { WindowLevel, SubjectLevel };
enum class SplitMethod { KFold, Holdout };

std::string_view split_mode_name(SplitMode mode);
SplitMode parse_split_mode(std::string_view name);

struct SplitPlan {
    SplitMode mode = SplitMode::WindowLevel;
    SplitMethod method = SplitMethod::KFold;
    double train_fraction = 0.8;  // Holdout only
    std::size_t k_folds = 5;
    bool stratified = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0))
            throw Error("SplitPlan: train_fraction must lie in (0, 1)");
        if (k_folds < 2) throw Error("SplitPlan: k_folds must be >= 2");
    }
};

// Fold id per window (0..k-1). Stratified folds preserve the class ratio
// within +/-1 window; SubjectLevel keeps all windows of a subject in one
// fold. Deterministic for a fixed seed.
std::vector<std::size_t> kfold_assign(const std::vector<Window>& windows, const SplitPlan& plan);

// Single stratified split: true = training row. Per-class training counts
// use largest-remainder rounding of train_fraction.
std::vector<bool> holdout_assign(const std::vector<Window>& windows, const SplitPlan& plan);

// Positive class = Abnormal.
struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    void add(int truth, int predicted) {
        if (truth == 1)
            predicted == 1 ? ++tp : ++fn;
        else
            predicted == 1 ? ++fp : ++tn;
    }
    ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
        tp += other.tp;
        fp += other.fp;
        fn += other.fn;
        tn += other.tn;
        return *this;
    }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false;  // some denominator was zero; affected metric is 0
};

struct MetricSet {
    double accuracy = 0.0;
    ClassMetrics abnormal;  // positive class
    ClassMetrics normal;    // roles of tp/fp/fn/tn swapped
};

// accuracy = (tp+tn)/total; per class precision = tp/(tp+fp),
// recall = tp/(tp+fn), F1 = 2PR/(P+R); zero denominators flag the class and
// yield 0. Errors on an empty matrix.
MetricSet compute_metrics(const ConfusionMatrix& cm);

struct FoldResult {
    std::size_t fold = 0;
    std::size_t train_windows = 0;
    std::size_t test_windows = 0;
    ConfusionMatrix confusion;
    MetricSet metrics;
    std::string fitted_on;  // provenance tag shared by the fold's transforms
};

struct EvaluationReport {
    std::string model_kind;
    std::string config_json;  // full config snapshot
    SplitMode mode = SplitMode::WindowLevel;
    SplitMethod method = SplitMethod::KFold;
    std::size_t k_folds = 0;
    std::uint64_t seed = 0;
    bool window_level_leakage_warning = false;
    std::vector<FoldResult> folds;
    ConfusionMatrix pooled;
    MetricSet aggregate;  // from the pooled confusion matrix
};

// Verifies a fitted transform's provenance tag before it touches held-out
// data; a mismatch is a LeakageError.
void guard_provenance(const std::string& fitted_on, const std::string& expected,
                      const char* what);

// K-fold cross-validation (or a single holdout split when the plan says so)
// of the full pipeline: per fold, imputation medians, scaler, PCA, and model
// are fitted on training windows only, then applied to the held-out windows.
// Pooled confusion counts every window exactly once under KFold.
EvaluationReport cross_validate(const Dataset& dataset, const PipelineConfig& config);

}  // namespace gaitkit
