#include "gaitkit/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace gaitkit {

void ModelConfig::validate() const {
    if (std::find(kModelKinds.begin(), kModelKinds.end(), kind) == kModelKinds.end())
        throw Error("model kind '" + kind + "' is not one of knn|logreg|naive_bayes|svm|cnn");
    if (kind == "knn") {
        if (knn_k == 0 || knn_k % 2 == 0)
            throw Error("knn k must be a positive odd integer, got " + std::to_string(knn_k));
    } else if (kind == "logreg") {
        if (logreg.learning_rate <= 0) throw Error("logreg learning_rate must be positive");
        if (logreg.l2_lambda < 0) throw Error("logreg l2_lambda must be >= 0");
        if (logreg.max_epochs == 0) throw Error("logreg max_epochs must be positive");
    } else if (kind == "naive_bayes") {
        if (nb_var_smoothing < 0) throw Error("naive_bayes var_smoothing must be >= 0");
    } else if (kind == "svm") {
        if (svm.C <= 0) throw Error("svm c must be positive");
        if (svm.gamma < 0) throw Error("svm gamma must be >= 0 (0 = auto)");
        if (svm.max_passes == 0) throw Error("svm max_passes must be positive");
    } else if (kind == "cnn") {
        if (cnn.learning_rate < 0) throw Error("cnn learning_rate must be >= 0");
        if (cnn.batch_size == 0) throw Error("cnn batch_size must be positive");
        if (cnn.epochs == 0) throw Error("cnn epochs must be positive");
    }
}

void PipelineConfig::validate() const {
    if (sample_rate_hz <= 0) throw Error("sample_rate_hz must be positive");
    if (filter_enabled) {
        FilterSpec checked = filter;
        checked.sample_rate_hz = static_cast<double>(sample_rate_hz);
        checked.validate();
    }
    window.validate();
    if (pca_enabled && pca.kind == PcaTarget::Kind::VarianceFraction &&
        (!(pca.fraction > 0.0) || pca.fraction > 1.0))
        throw Error("pca variance_fraction must lie in (0, 1]");
    if (pca_enabled && pca.kind == PcaTarget::Kind::Components && pca.components == 0)
        throw Error("pca components must be positive");
    model.validate();
    split.validate();
}

PipelineConfig PipelineConfig::normalized() const {
    PipelineConfig c = *this;
    c.filter.sample_rate_hz = static_cast<double>(c.sample_rate_hz);
    c.split.seed = c.seed;
    c.model.svm.seed = c.seed;
    c.model.cnn.seed = c.seed;
    return c;
}

std::vector<WindowSlot> window_slots(const Dataset& dataset, const WindowPlan& plan) {
    plan.validate();
    std::vector<WindowSlot> slots;
    for (std::size_t r = 0; r < dataset.recordings.size(); ++r) {
        const auto& rec = dataset.recordings[r];
        if (rec.size() < plan.window_len)
            throw Error("window_slots: recording '" + rec.subject_id + "' has " +
                        std::to_string(rec.size()) + " samples, shorter than one window (" +
                        std::to_string(plan.window_len) + ")");
        const std::size_t count = window_count(rec.size(), plan);
        for (std::size_t w = 0; w < count; ++w) slots.push_back({r, w * plan.hop});
    }
    return slots;
}

std::vector<Window> slot_windows(const Dataset& dataset, const std::vector<WindowSlot>& slots,
                                 const WindowPlan& plan) {
    std::vector<Window> meta;
    meta.reserve(slots.size());
    for (const auto& slot : slots) {
        const auto& rec = dataset.recordings[slot.recording];
        Window w;
        w.window_len = plan.window_len;
        w.label = rec.label;
        w.subject_id = rec.subject_id;
        w.start_index = slot.start;
        meta.push_back(std::move(w));
    }
    return meta;
}

ImputationParams fit_slot_medians(const Dataset& dataset, const std::vector<WindowSlot>& slots,
                                  const WindowPlan& plan, std::string fitted_on) {
    std::vector<Sample> pool;
    pool.reserve(slots.size() * plan.window_len);
    for (const auto& slot : slots) {
        const auto& samples = dataset.recordings[slot.recording].samples;
        pool.insert(pool.end(), samples.begin() + static_cast<std::ptrdiff_t>(slot.start),
                    samples.begin() + static_cast<std::ptrdiff_t>(slot.start + plan.window_len));
    }
    return fit_median(pool, std::move(fitted_on));
}

std::vector<Recording> preprocess_recordings(const Dataset& dataset,
                                             const ImputationParams& medians,
                                             const PipelineConfig& config) {
    FilterSpec spec = config.filter;
    spec.sample_rate_hz = static_cast<double>(config.sample_rate_hz);
    std::vector<Recording> out;
    out.reserve(dataset.recordings.size());
    for (const auto& rec : dataset.recordings) {
        Recording processed = rec;
        processed.samples = impute(rec.samples, medians);
        if (config.filter_enabled) processed = filter_recording(processed, spec);
        out.push_back(std::move(processed));
    }
    return out;
}

Matrix features_at(const std::vector<Recording>& processed, const std::vector<WindowSlot>& slots,
                   const WindowPlan& plan, std::vector<int>* labels_out) {
    const std::size_t dim = plan.window_len * kNumChannels;
    Matrix X(slots.size(), dim);
    if (labels_out) labels_out->resize(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& rec = processed[slots[i].recording];
        double* dst = X.row_ptr(i);
        for (std::size_t s = 0; s < plan.window_len; ++s) {
            const auto& sample = rec.samples[slots[i].start + s];
            for (std::size_t c = 0; c < kNumChannels; ++c) *dst++ = sample.values[c];
        }
        if (labels_out) (*labels_out)[i] = encode_label(rec.label);
    }
    return X;
}

namespace {

AnyModel fit_model(const PipelineConfig& config, const Matrix& features,
                   const std::vector<int>& labels) {
    const auto& m = config.model;
    if (m.kind == "knn") return knn_fit(features, labels, m.knn_k);
    if (m.kind == "logreg") return logreg_fit(features, labels, m.logreg);
    if (m.kind == "naive_bayes") return gnb_fit(features, labels, m.nb_var_smoothing);
    if (m.kind == "svm") return svm_fit(features, labels, m.svm);
    // cnn: scaled windows reshaped to (window_len, 6, 1)
    CnnModel net = build_cnn(
        CnnArchitecture::reference(config.window.window_len, kNumChannels), m.cnn.seed);
    const Tensor4 batch = rows_to_tensor(features, config.window.window_len, kNumChannels);
    cnn_train(net, batch, labels, m.cnn);
    return net;
}

std::vector<int> model_predict(const PipelineConfig& config, const AnyModel& model,
                               const Matrix& features) {
    return std::visit(
        [&](const auto& m) -> std::vector<int> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(m, features);
            if constexpr (std::is_same_v<T, LogRegModel>) return logreg_predict(m, features);
            if constexpr (std::is_same_v<T, GaussianNbModel>) return gnb_predict(m, features);
            if constexpr (std::is_same_v<T, SvmModel>) return svm_predict(m, features);
            if constexpr (std::is_same_v<T, CnnModel>)
                return cnn_predict(
                    m, rows_to_tensor(features, config.window.window_len, kNumChannels));
        },
        model);
}

}  // namespace

FittedPipeline fit_pipeline(const Dataset& dataset, const std::vector<WindowSlot>& train_slots,
                            const PipelineConfig& raw_config, std::string fitted_on,
                            std::vector<Recording>* processed_out) {
    const PipelineConfig config = raw_config.normalized();
    config.validate();
    if (train_slots.empty()) throw Error("fit_pipeline: no training windows");

    FittedPipeline fitted;
    fitted.config = config;
    fitted.fitted_on = fitted_on;
    fitted.imputation = fit_slot_medians(dataset, train_slots, config.window, fitted_on);

    std::vector<Recording> processed = preprocess_recordings(dataset, fitted.imputation, config);
    std::vector<int> labels;
    Matrix X = features_at(processed, train_slots, config.window, &labels);

    fitted.scaler = fit_scaler(config.scaler, X, fitted_on);
    Matrix scaled = transform(X, fitted.scaler);

    const bool classical = config.model.kind != "cnn";
    if (classical && config.pca_enabled) {
        fitted.pca = fit_pca(scaled, config.pca, fitted_on);
        scaled = pca_project(scaled, *fitted.pca);
    }
    fitted.model = fit_model(config, scaled, labels);
    if (processed_out) *processed_out = std::move(processed);
    return fitted;
}

std::vector<int> pipeline_predict(const FittedPipeline& fitted, const Matrix& features,
                                  const std::string& expected_tag) {
    guard_provenance(fitted.fitted_on, expected_tag, "pipeline");
    guard_provenance(fitted.scaler.fitted_on, expected_tag, "scaler");
    if (fitted.pca) guard_provenance(fitted.pca->fitted_on, expected_tag, "pca");
    guard_provenance(fitted.imputation.fitted_on, expected_tag, "imputation");

    Matrix transformed = transform(features, fitted.scaler);
    if (fitted.pca) transformed = pca_project(transformed, *fitted.pca);
    return model_predict(fitted.config, fitted.model, transformed);
}

PredictionResult predict_recording(const FittedPipeline& fitted, const Recording& rec) {
    const PipelineConfig& config = fitted.config;
    if (rec.sample_rate_hz != config.sample_rate_hz)
        throw Error("predict_recording: recording is sampled at " +
                    std::to_string(rec.sample_rate_hz) + " Hz but the model was trained at " +
                    std::to_string(config.sample_rate_hz) + " Hz");
    Recording processed = rec;
    processed.samples = impute(rec.samples, fitted.imputation);
    if (config.filter_enabled) {
        FilterSpec spec = config.filter;
        spec.sample_rate_hz = static_cast<double>(config.sample_rate_hz);
        processed = filter_recording(processed, spec);
    }
    const std::vector<Window> windows = slide(processed, config.window);
    const Matrix X = flatten_windows(windows);

    PredictionResult result;
    result.window_labels = pipeline_predict(fitted, X, fitted.fitted_on);
    result.window_starts.reserve(windows.size());
    for (const auto& w : windows) result.window_starts.push_back(w.start_index);

    const std::size_t abnormal =
        static_cast<std::size_t>(std::count(result.window_labels.begin(),
                                            result.window_labels.end(), 1));
    const std::size_t total = result.window_labels.size();
    if (abnormal * 2 == total) {
        result.verdict = GaitLabel::Abnormal;
        result.tie_broken_to_abnormal = true;
    } else {
        result.verdict = abnormal * 2 > total ? GaitLabel::Abnormal : GaitLabel::Normal;
    }
    return result;
}

}  // namespace gaitkit
