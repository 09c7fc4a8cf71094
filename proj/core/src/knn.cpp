#include <algorithm>
#include <numeric>

#include "gaitkit/classifiers.hpp"
#include "validate.hpp"

namespace gaitkit {

KnnModel knn_fit(const Matrix& X, const std::vector<int>& y, std::size_t k) {
    detail::check_training_data(X, y, "knn_fit");
    if (k % 2 == 0) throw Error("knn_fit: k must be odd, got " + std::to_string(k));
    if (k > X.rows())
        throw Error("knn_fit: k=" + std::to_string(k) + " exceeds training size " +
                    std::to_string(X.rows()));
    return KnnModel{k, X, y};
}

std::vector<int> knn_predict(const KnnModel& model, const Matrix& Q) {
    detail::check_query_dim(Q, model.train.cols(), "knn_predict");
    const std::size_t n = model.train.rows();
    const std::size_t d = model.train.cols();
    std::vector<int> out(Q.rows());
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t q = 0; q < Q.rows(); ++q) {
        const double* query = Q.row_ptr(q);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = model.train.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = row[j] - query[j];
                acc += diff * diff;
            }
            dist[i] = {acc, i};
        }
        // (distance, index) lexicographic order: equidistant neighbours at
        // the k-boundary resolve to the lower training-row index.
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(model.k - 1),
                         dist.end());
        std::size_t votes = 0;
        for (std::size_t i = 0; i < model.k; ++i) votes += model.labels[dist[i].second] == 1;
        out[q] = votes * 2 > model.k ? 1 : 0;
    }
    return out;
}

}  // namespace gaitkit
