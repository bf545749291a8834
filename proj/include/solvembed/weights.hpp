#pragma once

#include <vector>

#include "solvembed/lie_algebra.hpp"

namespace solvembed {

/// Simultaneous eigendecomposition of the commuting symmetric family
/// { ad A | A in a } acting on n.
///
/// a_basis columns are a gram-orthonormal basis of a; weight_spaces[m]
/// columns are a gram-orthonormal basis of the m-th weight space (original
/// coordinates); weights[m](j) is the eigenvalue of ad(a_basis.col(j)) there.
/// Weight spaces are sorted lexicographically by weight vector.
struct WeightDecomposition {
    Mat a_basis;
    std::vector<Vec> weights;
    std::vector<Mat> weight_spaces;

    int dim_a() const { return static_cast<int>(a_basis.cols()); }
    int dim_n() const;
    int count() const { return static_cast<int>(weights.size()); }
};

/// Relative tolerance under which two weight values are identified.
inline bool weights_coincide(double u, double v, double tol = kDefaultTol) {
    return std::abs(u - v) <= tol * (1.0 + std::max(std::abs(u), std::abs(v)));
}

/// Computes the weight decomposition.  Throws NotSymmetric when some ad A
/// fails <[A,x], y> = <x, [A,y]> beyond tol and NotCommuting when the family
/// does not commute.
WeightDecomposition weight_decomposition(const MetricLieAlgebra& alg,
                                         const SolvableSplit& split,
                                         double tol = kDefaultTol);

/// Returns coefficients (over wd.a_basis) of an element A with alpha(A) > 0
/// for every weight alpha; the element is the Chebyshev center of the
/// normalized weight cone sliced by the unit box.  Throws
/// NoPositiveDerivation when the open cone is empty.
Vec positive_derivation(const WeightDecomposition& wd, double tol = kDefaultTol);

/// The grading of n induced by D = ad A for a fixed A in a with positive
/// weight values: eigenvalues ascending, eigenspaces = unions of weight
/// spaces with equal value.
struct Grading {
    WeightDecomposition wd;
    Vec derivation_element;           ///< coefficients of A over wd.a_basis
    std::vector<double> eigenvalues;  ///< 0 < lambda_1 < ... < lambda_k
    std::vector<int> ws_level;        ///< weight-space index -> eigenvalue index
    std::vector<Mat> eigenspaces;     ///< orthonormal columns, original coordinates

    int levels() const { return static_cast<int>(eigenvalues.size()); }
    int eigenspace_dim(int level) const { return static_cast<int>(eigenspaces[level].cols()); }
};

/// Builds and verifies the grading for the given A (coefficients over the
/// orthonormal a-basis of the weight decomposition).  Throws NotPositive when
/// some weight value is not strictly positive and GradingIncompatible when
/// bracket closure [n_i, n_j] within n_{i+j} or centrality of the top
/// eigenspace fails.
Grading grading(const MetricLieAlgebra& alg,
                const SolvableSplit& split,
                const Vec& A_coeffs,
                double tol = kDefaultTol);

/// Convenience overload: uses positive_derivation to pick A.
Grading grading(const MetricLieAlgebra& alg,
                const SolvableSplit& split,
                double tol = kDefaultTol);

/// Builds a grading of a nilpotent algebra from an explicit symmetric
/// derivation matrix D (given in the algebra's own coordinates).  Used for
/// rank-one extensions, where the grading operator is prescribed rather than
/// realized as ad A.  Throws NotDerivation / NotSymmetric / NotPositive.
Grading grading_from_derivation(const MetricLieAlgebra& nilalg,
                                const Mat& D,
                                double tol = kDefaultTol);

/// Result of forming the quotient s^(i) = a + n / (top eigenspaces).
struct QuotientResult {
    MetricLieAlgebra alg;   ///< quotient in its own orthonormal basis (gram = identity)
    SolvableSplit split;
    Mat projection;         ///< (quotient dim) x (source dim): kills the top eigenspaces
};

/// The i-th quotient of the grading, 2 <= i <= levels: keeps a and the
/// eigenspaces with the first (levels + 1 - i) eigenvalues, endowed with the
/// restricted inner product.  i = 1 is permitted and returns the algebra
/// itself expressed in the same basis convention.
QuotientResult quotient(const MetricLieAlgebra& alg,
                        const SolvableSplit& split,
                        const Grading& g,
                        int i,
                        double tol = kDefaultTol);

}  // namespace solvembed
