#include "solvembed/triangular.hpp"

namespace solvembed {

std::string to_string(MetricKind kind) {
    return kind == MetricKind::Einstein ? "einstein" : "frobenius";
}

MetricKind metric_kind_from_string(const std::string& s) {
    if (s == "einstein") return MetricKind::Einstein;
    if (s == "frobenius") return MetricKind::Frobenius;
    throw SchemaError("unknown metric kind '" + s + "' (expected einstein or frobenius)");
}

double frobenius_ip(const Mat& X, const Mat& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.rows() != X.cols()) {
        throw DimensionMismatch("frobenius_ip: arguments must be square matrices of equal size");
    }
    return X.cwiseProduct(Y).sum();
}

namespace {

double upper_excess(const Mat& X, bool include_diagonal) {
    double worst = 0.0;
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        const Eigen::Index first = include_diagonal ? r : r + 1;
        for (Eigen::Index c = first; c < X.cols(); ++c) {
            worst = std::max(worst, std::abs(X(r, c)));
        }
    }
    return worst;
}

}  // namespace

bool is_lower(const Mat& X, double tol) {
    if (X.rows() != X.cols()) return false;
    return upper_excess(X, /*include_diagonal=*/false) <= tol;
}

bool is_strictly_lower(const Mat& X, double tol) {
    if (X.rows() != X.cols()) return false;
    return upper_excess(X, /*include_diagonal=*/true) <= tol;
}

double einstein_ip(const Mat& X, const Mat& Y, double tol) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.rows() != X.cols()) {
        throw DimensionMismatch("einstein_ip: arguments must be square matrices of equal size");
    }
    const double scale = 1.0 + std::max(X.cwiseAbs().maxCoeff(), Y.cwiseAbs().maxCoeff());
    if (!is_lower(X, tol * scale) || !is_lower(Y, tol * scale)) {
        throw NotLowerTriangular("einstein_ip: arguments must be lower triangular");
    }
    double diag = X.diagonal().dot(Y.diagonal());
    double strict = 0.0;
    for (Eigen::Index r = 1; r < X.rows(); ++r) {
        for (Eigen::Index c = 0; c < r; ++c) {
            strict += X(r, c) * Y(r, c);
        }
    }
    return 2.0 * diag + strict;
}

double target_ip(MetricKind kind, const Mat& X, const Mat& Y, double tol) {
    return kind == MetricKind::Einstein ? einstein_ip(X, Y, tol) : frobenius_ip(X, Y);
}

}  // namespace solvembed
