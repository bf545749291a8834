#include "solvembed/util.hpp"

#include <cmath>
#include <cstdio>

namespace solvembed {

void require_spd(const Mat& M, const std::string& context, double tol) {
    if (M.rows() != M.cols()) {
        throw NotPositiveDefinite(context + ": matrix is not square");
    }
    if (M.rows() == 0) return;
    const double scale = 1.0 + M.cwiseAbs().maxCoeff();
    if (!is_symmetric(M, tol)) {
        throw NotPositiveDefinite(context + ": matrix is not symmetric");
    }
    const double min_eig = min_eigenvalue_sym(M);
    if (min_eig <= tol * scale) {
        throw NotPositiveDefinite(context + ": smallest eigenvalue " +
                                  format_double(min_eig) + " is not positive");
    }
}

Mat gram_orthonormalize(const Mat& vectors, const Mat& gram) {
    const auto n = vectors.cols();
    Mat out = vectors;
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index prev = 0; prev < c; ++prev) {
            const double proj = out.col(prev).dot(gram * out.col(c));
            out.col(c) -= proj * out.col(prev);
        }
        // Re-orthogonalize once for numerical stability.
        for (Eigen::Index prev = 0; prev < c; ++prev) {
            const double proj = out.col(prev).dot(gram * out.col(c));
            out.col(c) -= proj * out.col(prev);
        }
        const double norm_sq = out.col(c).dot(gram * out.col(c));
        if (norm_sq <= 1e-24) {
            throw DimensionMismatch("gram_orthonormalize: columns are linearly dependent");
        }
        out.col(c) /= std::sqrt(norm_sq);
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace solvembed
