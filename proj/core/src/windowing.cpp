#include "gaitkit/windowing.hpp"

#include <cmath>

namespace gaitkit {

std::vector<Window> slide(const Recording& rec, const WindowPlan& plan) {
    plan.validate();
    if (rec.size() < plan.window_len)
        throw Error("slide: recording '" + rec.subject_id + "' has " +
                    std::to_string(rec.size()) + " samples, shorter than one window (" +
                    std::to_string(plan.window_len) + ")");
    const std::size_t count = window_count(rec.size(), plan);
    std::vector<Window> windows;
    windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        Window win;
        win.window_len = plan.window_len;
        win.label = rec.label;
        win.subject_id = rec.subject_id;
        win.start_index = w * plan.hop;
        win.values.reserve(plan.window_len * kNumChannels);
        for (std::size_t i = 0; i < plan.window_len; ++i) {
            const Sample& s = rec.samples[win.start_index + i];
            for (std::size_t c = 0; c < kNumChannels; ++c) {
                if (!std::isfinite(s.values[c]))
                    throw Error("slide: non-finite value in recording '" + rec.subject_id +
                                "' at sample " + std::to_string(win.start_index + i) +
                                "; impute before windowing");
                win.values.push_back(s.values[c]);
            }
        }
        windows.push_back(std::move(win));
    }
    return windows;
}

std::vector<double> flatten(const Window& w) { return w.values; }

Window unflatten(const std::vector<double>& flat, GaitLabel label, std::string subject_id,
                 std::size_t start_index) {
    if (flat.empty() || flat.size() % kNumChannels != 0)
        throw Error("unflatten: vector length " + std::to_string(flat.size()) +
                    " is not a positive multiple of " + std::to_string(kNumChannels));
    Window w;
    w.values = flat;
    w.window_len = flat.size() / kNumChannels;
    w.label = label;
    w.subject_id = std::move(subject_id);
    w.start_index = start_index;
    return w;
}

Matrix flatten_windows(const std::vector<Window>& windows) {
    if (windows.empty()) return {};
    const std::size_t dim = windows.front().window_len * kNumChannels;
    Matrix X(windows.size(), dim);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].values.size() != dim)
            throw Error("flatten_windows: inconsistent window lengths");
        std::copy(windows[i].values.begin(), windows[i].values.end(), X.row_ptr(i));
    }
    return X;
}

}  // namespace gaitkit
