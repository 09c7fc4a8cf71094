#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace oracles {

double magnitude_response(const std::vector<double>& b, const std::vector<double>& a,
                          double omega) {
    const std::complex<double> z = std::polar(1.0, -omega);  // e^{-j omega}
    std::complex<double> num = 0.0, den = 0.0, zk = 1.0;
    for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
        if (k < b.size()) num += b[k] * zk;
        if (k < a.size()) den += a[k] * zk;
        zk *= z;
    }
    return std::abs(num / den);
}

double butterworth_reference_magnitude(int order, double cutoff_hz, double sample_rate_hz,
                                       double omega) {
    const double warped_cutoff = 2.0 * sample_rate_hz *
                                 std::tan(M_PI * cutoff_hz / sample_rate_hz);
    const double warped = 2.0 * sample_rate_hz * std::tan(omega / 2.0);
    const double ratio = warped / warped_cutoff;
    return 1.0 / std::sqrt(1.0 + std::pow(ratio, 2.0 * order));
}

EigenResult jacobi_eigen(const std::vector<double>& sym, std::size_t d) {
    std::vector<double> A = sym;
    std::vector<double> V(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) V[i * d + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) s += A[p * d + q] * A[p * d + q];
        return std::sqrt(s);
    };

    double scale = 0.0;
    for (double v : A) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 200 && off_norm() > 1e-15 * scale * d; ++sweep) {
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = A[p * d + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (A[q * d + q] - A[p * d + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = A[k * d + p];
                    const double akq = A[k * d + q];
                    A[k * d + p] = c * akp - s * akq;
                    A[k * d + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = A[p * d + k];
                    const double aqk = A[q * d + k];
                    A[p * d + k] = c * apk - s * aqk;
                    A[q * d + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = V[k * d + p];
                    const double vkq = V[k * d + q];
                    V[k * d + p] = c * vkp - s * vkq;
                    V[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return A[i * d + i] > A[j * d + j]; });

    EigenResult result;
    result.values.resize(d);
    result.vectors.assign(d, std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i) {
        result.values[i] = A[order[i] * d + order[i]];
        for (std::size_t k = 0; k < d; ++k) result.vectors[i][k] = V[k * d + order[i]];
    }
    return result;
}

std::vector<int> brute_knn(const gaitkit::Matrix& X, const std::vector<int>& y,
                           const gaitkit::Matrix& Q, std::size_t k) {
    std::vector<int> out(Q.rows());
    for (std::size_t q = 0; q < Q.rows(); ++q) {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < X.cols(); ++j) {
                const double diff = X(i, j) - Q(q, j);
                acc += diff * diff;
            }
            dist.emplace_back(acc, i);
        }
        std::sort(dist.begin(), dist.end());
        std::size_t votes = 0;
        for (std::size_t i = 0; i < k; ++i) votes += y[dist[i].second] == 1;
        out[q] = votes * 2 > k ? 1 : 0;
    }
    return out;
}

namespace {

std::vector<double> gram_q(const gaitkit::Matrix& X, const std::vector<double>& y_pm,
                           gaitkit::SvmKernel kernel, double gamma) {
    const std::size_t n = X.rows();
    std::vector<double> Q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            Q[i * n + j] = y_pm[i] * y_pm[j] *
                           gaitkit::svm_kernel_value(kernel, gamma, X.row_ptr(i), X.row_ptr(j),
                                                     X.cols());
    return Q;
}

// Exact projection of v onto {0 <= a <= C, sum_i y_i a_i = 0}: the KKT
// multiplier theta solves sum_i y_i clip(v_i - theta y_i, 0, C) = 0, a
// non-increasing function of theta; bisection pins it down.
std::vector<double> project_feasible(const std::vector<double>& v, const std::vector<double>& y,
                                     double C) {
    const std::size_t n = v.size();
    auto constraint = [&](double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += y[i] * std::clamp(v[i] - theta * y[i], 0.0, C);
        return s;
    };
    double lo = -1.0, hi = 1.0;
    for (double m : v) {
        lo = std::min(lo, -std::abs(m) - C - 1.0);
        hi = std::max(hi, std::abs(m) + C + 1.0);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (constraint(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    const double theta = 0.5 * (lo + hi);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(v[i] - theta * y[i], 0.0, C);
    return out;
}

}  // namespace

double svm_dual_objective(const gaitkit::Matrix& X, const std::vector<double>& y_pm,
                          gaitkit::SvmKernel kernel, double gamma,
                          const std::vector<double>& alpha) {
    const std::size_t n = alpha.size();
    const auto Q = gram_q(X, y_pm, kernel, gamma);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        obj += alpha[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += Q[i * n + j] * alpha[j];
        obj -= 0.5 * alpha[i] * acc;
    }
    return obj;
}

DualAscentResult dual_ascent_svm(const gaitkit::Matrix& X, const std::vector<double>& y_pm,
                                 gaitkit::SvmKernel kernel, double gamma, double C,
                                 std::size_t iterations) {
    const std::size_t n = X.rows();
    const auto Q = gram_q(X, y_pm, kernel, gamma);

    // Gershgorin bound on the largest eigenvalue sets the step size.
    double lmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(Q[i * n + j]);
        lmax = std::max(lmax, row);
    }
    const double step = 1.0 / std::max(lmax, 1e-12);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n);
    std::vector<double> trial(n);
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += Q[i * n + j] * alpha[j];
            grad[i] = 1.0 - acc;
        }
        for (std::size_t i = 0; i < n; ++i) trial[i] = alpha[i] + step * grad[i];
        trial = project_feasible(trial, y_pm, C);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(trial[i] - alpha[i]));
        alpha.swap(trial);
        if (delta < 1e-14) break;
    }

    DualAscentResult result;
    result.alpha = alpha;
    result.objective = svm_dual_objective(X, y_pm, kernel, gamma, alpha);

    // Bias from the margin values, free-vector mean or feasible midpoint.
    std::vector<double> margin(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += alpha[j] * y_pm[j] *
                 gaitkit::svm_kernel_value(kernel, gamma, X.row_ptr(j), X.row_ptr(i), X.cols());
        margin[i] = y_pm[i] - s;
    }
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    const double eps = 1e-9 * C;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > eps && alpha[i] < C - eps) {
            free_sum += margin[i];
            ++free_count;
        } else if ((alpha[i] <= eps && y_pm[i] > 0) || (alpha[i] >= C - eps && y_pm[i] < 0)) {
            lo = std::max(lo, margin[i]);
        } else {
            hi = std::min(hi, margin[i]);
        }
    }
    if (free_count > 0)
        result.bias = free_sum / static_cast<double>(free_count);
    else if (std::isinf(lo))
        result.bias = hi;
    else if (std::isinf(hi))
        result.bias = lo;
    else
        result.bias = 0.5 * (lo + hi);
    return result;
}

std::vector<double> central_difference(std::vector<double>& params,
                                       const std::function<double()>& loss, double step) {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + step;
        const double up = loss();
        params[i] = saved - step;
        const double down = loss();
        params[i] = saved;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

std::vector<double> gnb_direct_posterior(const std::array<double, 2>& prior,
                                         const gaitkit::Matrix& mean,
                                         const gaitkit::Matrix& variance,
                                         const double* query, std::size_t d) {
    std::array<double, 2> joint{};
    for (int cls = 0; cls < 2; ++cls) {
        double density = prior[cls];
        for (std::size_t j = 0; j < d; ++j) {
            const double var = variance(cls, j);
            const double dev = query[j] - mean(cls, j);
            density *= std::exp(-dev * dev / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
        }
        joint[cls] = density;
    }
    const double total = joint[0] + joint[1];
    return {joint[0] / total, joint[1] / total};
}

}  // namespace oracles
