#include "gaitkit/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace gaitkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Polynomial with the given roots, leading coefficient 1 (complex
// convolution; imaginary parts cancel for conjugate-paired roots).
std::vector<std::complex<double>> poly_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (const auto& root : roots) {
        std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * root;
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

// Gaussian elimination with partial pivoting; A is n x n row-major.
std::vector<double> solve_linear(std::vector<double> A, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[pivot * n + col])) pivot = r;
        if (A[pivot * n + col] == 0.0) throw Error("filter setup: singular state equation");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[pivot * n + c], A[col * n + c]);
            std::swap(rhs[pivot], rhs[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= A[i * n + c] * x[c];
        x[i] = acc / A[i * n + i];
    }
    return x;
}

// Steady-state filter state for a unit-step input (direct form II
// transposed), so that lfilter(b, a, ones, zi) == ones from sample 0.
std::vector<double> steady_state_zi(const FilterCoefficients& coef) {
    const std::size_t m = coef.a.size() - 1;
    // (I - C^T) zi = b[1:] - a[1:] * b[0], C the companion matrix of a.
    std::vector<double> A(m * m, 0.0);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        A[i * m + 0] += coef.a[i + 1];  // -C^T first column
        A[i * m + i] += 1.0;            // identity
        if (i + 1 < m) A[i * m + (i + 1)] -= 1.0;
        rhs[i] = coef.b[i + 1] - coef.a[i + 1] * coef.b[0];
    }
    return solve_linear(std::move(A), std::move(rhs));
}

// Direct form II transposed with initial state scaled to the first sample.
std::vector<double> lfilter_steady(const std::vector<double>& x, const FilterCoefficients& coef,
                                   const std::vector<double>& zi_unit) {
    const std::size_t m = zi_unit.size();
    std::vector<double> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = zi_unit[i] * x.front();
    std::vector<double> y(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double yn = coef.b[0] * x[n] + z[0];
        for (std::size_t i = 0; i + 1 < m; ++i)
            z[i] = coef.b[i + 1] * x[n] + z[i + 1] - coef.a[i + 1] * yn;
        z[m - 1] = coef.b[m] * x[n] - coef.a[m] * yn;
        y[n] = yn;
    }
    return y;
}

// Mirror extension excluding the edge sample: [x_P..x_1] + x + [x_{N-2}..x_{N-1-P}].
std::vector<double> reflect_pad(const std::vector<double>& x, std::size_t pad) {
    std::vector<double> out;
    out.reserve(x.size() + 2 * pad);
    for (std::size_t k = 0; k < pad; ++k) out.push_back(x[pad - k]);
    out.insert(out.end(), x.begin(), x.end());
    for (std::size_t k = 0; k < pad; ++k) out.push_back(x[x.size() - 2 - k]);
    return out;
}

}  // namespace

void FilterSpec::validate() const {
    if (order < 1) throw Error("FilterSpec: order must be >= 1, got " + std::to_string(order));
    if (sample_rate_hz <= 0) throw Error("FilterSpec: sample rate must be positive");
    if (!(cutoff_hz > 0)) throw Error("FilterSpec: cutoff must be positive");
    if (cutoff_hz >= sample_rate_hz / 2)
        throw Error("FilterSpec: cutoff " + std::to_string(cutoff_hz) +
                    " Hz must lie strictly below Nyquist (" +
                    std::to_string(sample_rate_hz / 2) + " Hz)");
}

FilterCoefficients design_butterworth(const FilterSpec& spec) {
    spec.validate();
    const int n = spec.order;
    const double fs = spec.sample_rate_hz;
    // Pre-warped analog cutoff so the digital response hits -3 dB at cutoff_hz.
    const double warped = 2.0 * fs * std::tan(kPi * spec.cutoff_hz / fs);

    std::vector<std::complex<double>> zpoles;
    zpoles.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double angle = kPi * (2.0 * k + n + 1.0) / (2.0 * n);
        const std::complex<double> s = warped * std::complex<double>(std::cos(angle), std::sin(angle));
        zpoles.push_back((2.0 * fs + s) / (2.0 * fs - s));  // bilinear transform
    }
    const auto a_complex = poly_from_roots(zpoles);

    FilterCoefficients coef;
    coef.a.resize(a_complex.size());
    for (std::size_t i = 0; i < a_complex.size(); ++i) coef.a[i] = a_complex[i].real();

    // n zeros at z = -1: binomial coefficients of (z + 1)^n.
    coef.b.assign(static_cast<std::size_t>(n) + 1, 0.0);
    coef.b[0] = 1.0;
    for (int i = 1; i <= n; ++i) coef.b[i] = coef.b[i - 1] * (n - i + 1) / i;

    // Normalize to unit DC gain: H(1) = sum(b)/sum(a) = 1.
    const double a_sum = std::accumulate(coef.a.begin(), coef.a.end(), 0.0);
    const double b_sum = std::accumulate(coef.b.begin(), coef.b.end(), 0.0);
    for (double& b : coef.b) b *= a_sum / b_sum;
    return coef;
}

ImputationParams fit_median(const std::vector<Sample>& data, std::string fitted_on) {
    ImputationParams params;
    params.fitted_on = std::move(fitted_on);
    std::vector<double> column;
    column.reserve(data.size());
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        column.clear();
        for (const auto& s : data)
            if (!s.is_missing(c)) column.push_back(s.values[c]);
        if (column.empty())
            throw Error("fit_median: channel " + std::string(kChannelNames[c]) +
                        " has no non-missing values");
        std::sort(column.begin(), column.end());
        const std::size_t m = column.size();
        params.medians[c] =
            (m % 2 == 1) ? column[m / 2] : 0.5 * (column[m / 2 - 1] + column[m / 2]);
    }
    return params;
}

std::vector<Sample> impute(const std::vector<Sample>& data, const ImputationParams& params) {
    std::vector<Sample> out = data;
    for (auto& s : out)
        for (std::size_t c = 0; c < kNumChannels; ++c)
            if (s.is_missing(c)) s.values[c] = params.medians[c];
    return out;
}

std::vector<double> filter_signal(const std::vector<double>& signal, const FilterSpec& spec) {
    spec.validate();
    const std::size_t pad = 3 * static_cast<std::size_t>(spec.order);
    if (signal.size() <= pad)
        throw Error("filter_signal: signal of length " + std::to_string(signal.size()) +
                    " is too short; need more than 3*order = " + std::to_string(pad) +
                    " samples");
    const auto coef = design_butterworth(spec);
    const auto zi = steady_state_zi(coef);

    std::vector<double> work = reflect_pad(signal, pad);
    work = lfilter_steady(work, coef, zi);
    if (spec.zero_phase) {
        std::reverse(work.begin(), work.end());
        work = lfilter_steady(work, coef, zi);
        std::reverse(work.begin(), work.end());
    }
    return {work.begin() + static_cast<std::ptrdiff_t>(pad),
            work.end() - static_cast<std::ptrdiff_t>(pad)};
}

Recording filter_recording(const Recording& rec, const FilterSpec& spec) {
    for (const auto& s : rec.samples)
        if (s.any_missing())
            throw Error("filter_recording: recording '" + rec.subject_id +
                        "' contains missing values; impute before filtering");
    Recording out = rec;
    std::vector<double> channel(rec.size());
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        for (std::size_t i = 0; i < rec.size(); ++i) channel[i] = rec.samples[i].values[c];
        const auto filtered = filter_signal(channel, spec);
        for (std::size_t i = 0; i < rec.size(); ++i) out.samples[i].values[c] = filtered[i];
    }
    return out;
}

}  // namespace gaitkit
