#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gaitkit/matrix.hpp"

namespace gaitkit::detail {

inline void check_binary_labels(const std::vector<int>& y, const char* who) {
    for (int v : y)
        if (v != 0 && v != 1)
            throw Error(std::string(who) + ": labels must be 0 or 1, got " + std::to_string(v));
}

inline void check_training_data(const Matrix& X, const std::vector<int>& y, const char* who) {
    if (X.rows() == 0) throw Error(std::string(who) + ": empty training matrix");
    if (X.rows() != y.size())
        throw Error(std::string(who) + ": " + std::to_string(X.rows()) + " rows vs " +
                    std::to_string(y.size()) + " labels");
    check_binary_labels(y, who);
    for (double v : X.data())
        if (!std::isfinite(v)) throw Error(std::string(who) + ": training data must be finite");
}

inline void check_query_dim(const Matrix& Q, std::size_t d, const char* who) {
    if (Q.cols() != d)
        throw Error(std::string(who) + ": query has " + std::to_string(Q.cols()) +
                    " features, model expects " + std::to_string(d));
}

inline bool both_classes_present(const std::vector<int>& y) {
    bool has0 = false, has1 = false;
    for (int v : y) (v == 0 ? has0 : has1) = true;
    return has0 && has1;
}

}  // namespace gaitkit::detail
