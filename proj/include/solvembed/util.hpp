#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "solvembed/errors.hpp"

namespace solvembed {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Default tolerance used when callers do not supply one.
inline constexpr double kDefaultTol = 1e-9;

/// |a - b| <= tol * (1 + max(|a|, |b|)).
inline bool approx_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline bool is_symmetric(const Mat& M, double tol) {
    if (M.rows() != M.cols()) return false;
    return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + M.cwiseAbs().maxCoeff());
}

/// Smallest eigenvalue of a symmetric matrix.
inline double min_eigenvalue_sym(const Mat& M) {
    if (M.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    return es.eigenvalues().minCoeff();
}

/// Largest eigenvalue of a symmetric matrix.
inline double max_eigenvalue_sym(const Mat& M) {
    if (M.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    return es.eigenvalues().maxCoeff();
}

/// Throws NotPositiveDefinite unless M is symmetric with eigenvalues > tol-scaled zero.
void require_spd(const Mat& M, const std::string& context, double tol = 1e-12);

/// Gram–Schmidt of the columns of `vectors` with respect to the inner product
/// x' * gram * y.  Returns a matrix with orthonormal columns spanning the same
/// space; throws DimensionMismatch when the columns are linearly dependent.
Mat gram_orthonormalize(const Mat& vectors, const Mat& gram);

/// Deterministic counter-based PRNG (SplitMix64).  Used wherever reproducible
/// pseudo-random data is needed so that frozen test vectors remain stable
/// across platforms and standard-library versions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi] inclusive.
    int next_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next() % span);
    }

private:
    std::uint64_t state_;
};

/// Formats a double with enough digits to round-trip.
std::string format_double(double v);

}  // namespace solvembed
