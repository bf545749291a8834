#pragma once

#include <string>

#include "solvembed/util.hpp"

namespace solvembed {

/// Inner products available on the target algebra t(n, R) of lower
/// triangular matrices.
enum class MetricKind { Frobenius, Einstein };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& s);

/// Trace pairing B(X, Y) = tr(X Y^T) on gl(n, R).
double frobenius_ip(const Mat& X, const Mat& Y);

/// True when every entry strictly above the diagonal is within tol of zero.
bool is_lower(const Mat& X, double tol = 0.0);

/// True when every entry on or above the diagonal is within tol of zero.
bool is_strictly_lower(const Mat& X, double tol = 0.0);

/// The fixed inner product on t(n, R): twice the trace pairing on diagonal
/// parts, the trace pairing on strictly lower parts, and the two parts
/// orthogonal.  Both arguments must be lower triangular (up to tol round-off
/// above the diagonal); otherwise NotLowerTriangular is thrown.
double einstein_ip(const Mat& X, const Mat& Y, double tol = kDefaultTol);

/// Dispatches to frobenius_ip or einstein_ip.
double target_ip(MetricKind kind, const Mat& X, const Mat& Y, double tol = kDefaultTol);

}  // namespace solvembed
