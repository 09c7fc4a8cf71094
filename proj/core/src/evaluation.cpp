#include "gaitkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gaitkit/pipeline.hpp"
#include "gaitkit/rng.hpp"

namespace gaitkit {

std::string_view split_mode_name(SplitMode mode) {
    return mode == SplitMode::WindowLevel ? "window" : "subject";
}

SplitMode parse_split_mode(std::string_view name) {
    if (name == "window") return SplitMode::WindowLevel;
    if (name == "subject") return SplitMode::SubjectLevel;
    throw Error("unknown split mode '" + std::string(name) + "' (expected window|subject)");
}

namespace {

// Groups item indices by class; group order (0, 1) is fixed so dealing is
// deterministic.
std::array<std::vector<std::size_t>, 2> by_class(const std::vector<int>& labels) {
    std::array<std::vector<std::size_t>, 2> groups;
    for (std::size_t i = 0; i < labels.size(); ++i)
        groups[static_cast<std::size_t>(labels[i])].push_back(i);
    return groups;
}

// Continuous round-robin dealing: the fold cursor carries across classes so
// fold sizes stay within one item of each other overall and per class.
std::vector<std::size_t> deal_stratified(const std::vector<int>& labels, std::size_t k,
                                         Rng& rng) {
    auto groups = by_class(labels);
    std::vector<std::size_t> fold(labels.size(), 0);
    std::size_t cursor = 0;
    for (auto& group : groups) {
        rng.shuffle(group);
        for (std::size_t idx : group) fold[idx] = cursor++ % k;
    }
    return fold;
}

std::vector<std::size_t> deal_plain(std::size_t count, std::size_t k, Rng& rng) {
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<std::size_t> fold(count, 0);
    for (std::size_t pos = 0; pos < count; ++pos) fold[order[pos]] = pos % k;
    return fold;
}

// Subjects in first-appearance order with their class labels.
struct SubjectIndex {
    std::vector<std::string> names;
    std::vector<int> labels;
    std::vector<std::size_t> window_subject;  // subject index per window
};

SubjectIndex index_subjects(const std::vector<Window>& windows) {
    SubjectIndex idx;
    std::map<std::string, std::size_t> seen;
    idx.window_subject.resize(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        auto [it, inserted] = seen.try_emplace(windows[i].subject_id, idx.names.size());
        if (inserted) {
            idx.names.push_back(windows[i].subject_id);
            idx.labels.push_back(encode_label(windows[i].label));
        }
        idx.window_subject[i] = it->second;
    }
    return idx;
}

// Largest-remainder training counts per class for a holdout split.
std::array<std::size_t, 2> train_counts(const std::array<std::vector<std::size_t>, 2>& groups,
                                        double fraction) {
    const std::size_t n = groups[0].size() + groups[1].size();
    const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::array<std::size_t, 2> base{};
    std::array<double, 2> remainder{};
    for (int c = 0; c < 2; ++c) {
        const double exact = fraction * static_cast<double>(groups[c].size());
        base[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - std::floor(exact);
    }
    std::size_t leftover = target - std::min(target, base[0] + base[1]);
    while (leftover-- > 0) {
        const int c = remainder[1] > remainder[0] ? 1 : 0;
        ++base[c];
        remainder[c] = -1.0;
    }
    // Keep both partitions usable when a class has at least 2 members.
    for (int c = 0; c < 2; ++c) {
        if (groups[c].size() >= 2) {
            base[c] = std::max<std::size_t>(base[c], 1);
            base[c] = std::min(base[c], groups[c].size() - 1);
        } else {
            base[c] = std::min(base[c], groups[c].size());
        }
    }
    return base;
}

}  // namespace

std::vector<std::size_t> kfold_assign(const std::vector<Window>& windows, const SplitPlan& plan) {
    plan.validate();
    if (windows.empty()) throw Error("kfold_assign: no windows");
    Rng rng(plan.seed);
    const std::size_t k = plan.k_folds;

    if (plan.mode == SplitMode::WindowLevel) {
        std::vector<int> labels(windows.size());
        for (std::size_t i = 0; i < windows.size(); ++i) labels[i] = encode_label(windows[i].label);
        if (plan.stratified) {
            const auto groups = by_class(labels);
            for (int c = 0; c < 2; ++c)
                if (groups[c].size() < k)
                    throw Error("kfold_assign: class '" +
                                std::string(label_name(decode_label(c))) + "' has " +
                                std::to_string(groups[c].size()) + " windows, fewer than k=" +
                                std::to_string(k));
            return deal_stratified(labels, k, rng);
        }
        if (windows.size() < k) throw Error("kfold_assign: fewer windows than folds");
        return deal_plain(windows.size(), k, rng);
    }

    const SubjectIndex subjects = index_subjects(windows);
    if (subjects.names.size() < k)
        throw Error("kfold_assign: " + std::to_string(subjects.names.size()) +
                    " subjects, fewer than k=" + std::to_string(k));
    const std::vector<std::size_t> subject_fold =
        plan.stratified ? deal_stratified(subjects.labels, k, rng)
                        : deal_plain(subjects.names.size(), k, rng);
    std::vector<std::size_t> fold(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        fold[i] = subject_fold[subjects.window_subject[i]];
    return fold;
}

std::vector<bool> holdout_assign(const std::vector<Window>& windows, const SplitPlan& plan) {
    plan.validate();
    if (windows.empty()) throw Error("holdout_assign: no windows");
    Rng rng(plan.seed);

    auto assign_items = [&](const std::vector<int>& labels) {
        auto groups = by_class(labels);
        const auto counts = train_counts(groups, plan.train_fraction);
        std::vector<bool> train(labels.size(), false);
        for (int c = 0; c < 2; ++c) {
            rng.shuffle(groups[c]);
            for (std::size_t pos = 0; pos < counts[c]; ++pos) train[groups[c][pos]] = true;
        }
        return train;
    };

    if (plan.mode == SplitMode::WindowLevel) {
        std::vector<int> labels(windows.size());
        for (std::size_t i = 0; i < windows.size(); ++i) labels[i] = encode_label(windows[i].label);
        if (!plan.stratified) {
            // Unstratified: one pooled group.
            std::vector<std::size_t> order(windows.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            const auto count = static_cast<std::size_t>(
                std::llround(plan.train_fraction * static_cast<double>(windows.size())));
            std::vector<bool> train(windows.size(), false);
            for (std::size_t pos = 0; pos < count && pos < order.size(); ++pos)
                train[order[pos]] = true;
            return train;
        }
        return assign_items(labels);
    }

    const SubjectIndex subjects = index_subjects(windows);
    const std::vector<bool> subject_train = assign_items(subjects.labels);
    std::vector<bool> train(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        train[i] = subject_train[subjects.window_subject[i]];
    return train;
}

MetricSet compute_metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw Error("compute_metrics: empty confusion matrix");

    auto one_class = [](std::size_t tp, std::size_t fp, std::size_t fn) {
        ClassMetrics m;
        if (tp + fp == 0) {
            m.degenerate = true;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn == 0) {
            m.degenerate = true;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        if (m.precision + m.recall == 0) {
            m.degenerate = true;
        } else {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        }
        return m;
    };

    MetricSet out;
    out.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    out.abnormal = one_class(cm.tp, cm.fp, cm.fn);
    out.normal = one_class(cm.tn, cm.fn, cm.fp);  // swapped roles
    return out;
}

void guard_provenance(const std::string& fitted_on, const std::string& expected,
                      const char* what) {
    if (fitted_on != expected)
        throw LeakageError(std::string(what) + " was fitted on '" + fitted_on +
                           "' but is being applied in a context expecting '" + expected +
                           "'; transforms must be fitted on the training partition only");
}

EvaluationReport cross_validate(const Dataset& dataset, const PipelineConfig& raw_config) {
    const PipelineConfig config = raw_config.normalized();
    config.validate();
    if (dataset.recordings.empty()) throw Error("cross_validate: empty dataset");

    const auto slots = window_slots(dataset, config.window);
    const auto meta = slot_windows(dataset, slots, config.window);

    EvaluationReport report;
    report.model_kind = config.model.kind;
    report.config_json = config_to_json(config);
    report.mode = config.split.mode;
    report.method = config.split.method;
    report.k_folds = config.split.method == SplitMethod::KFold ? config.split.k_folds : 1;
    report.seed = config.seed;
    report.window_level_leakage_warning = config.split.mode == SplitMode::WindowLevel;

    // fold id per window; holdout is a single pseudo-fold of the test rows
    std::vector<std::size_t> fold_of(slots.size(), 0);
    std::size_t n_folds = 1;
    if (config.split.method == SplitMethod::KFold) {
        fold_of = kfold_assign(meta, config.split);
        n_folds = config.split.k_folds;
    } else {
        const auto train = holdout_assign(meta, config.split);
        for (std::size_t i = 0; i < slots.size(); ++i) fold_of[i] = train[i] ? 1 : 0;
    }

    for (std::size_t fold = 0; fold < n_folds; ++fold) {
        std::vector<WindowSlot> train_slots;
        std::vector<WindowSlot> test_slots;
        for (std::size_t i = 0; i < slots.size(); ++i)
            (fold_of[i] == fold ? test_slots : train_slots).push_back(slots[i]);
        if (train_slots.empty() || test_slots.empty())
            throw Error("cross_validate: fold " + std::to_string(fold) +
                        " has an empty partition (train " + std::to_string(train_slots.size()) +
                        ", test " + std::to_string(test_slots.size()) + ")");

        const std::string tag = (config.split.method == SplitMethod::KFold
                                     ? "fold" + std::to_string(fold)
                                     : std::string("holdout")) +
                                ":train";
        std::vector<Recording> processed;
        const FittedPipeline fitted =
            fit_pipeline(dataset, train_slots, config, tag, &processed);

        std::vector<int> truth;
        const Matrix test_X = features_at(processed, test_slots, config.window, &truth);
        const std::vector<int> predicted = pipeline_predict(fitted, test_X, tag);

        FoldResult result;
        result.fold = fold;
        result.train_windows = train_slots.size();
        result.test_windows = test_slots.size();
        result.fitted_on = tag;
        for (std::size_t i = 0; i < truth.size(); ++i)
            result.confusion.add(truth[i], predicted[i]);
        result.metrics = compute_metrics(result.confusion);
        report.pooled += result.confusion;
        report.folds.push_back(std::move(result));
    }
    report.aggregate = compute_metrics(report.pooled);
    return report;
}

}  // namespace gaitkit
