#pragma once

#include <string>
#include <vector>

#include "solvembed/triangular.hpp"
#include "solvembed/weights.hpp"

namespace solvembed {

/// One direct-sum block of the target space, with a provenance tag such as
/// "stage 1" or "abelian".
struct TargetBlock {
    int offset = 0;
    int size = 0;
    std::string tag;
};

/// The ordered orthonormal basis used throughout the construction: the
/// abelian part first, then the weight spaces grouped by grading eigenvalue
/// in ascending order.  In these coordinates the Gram matrix is the identity
/// and every quotient of the grading is a basis prefix.
struct OrderedBasis {
    /// One contiguous run of basis vectors lying in a single weight space.
    struct Segment {
        int offset = 0;   ///< position within the ordered basis
        int size = 0;
        int level = 0;    ///< grading eigenvalue index (0-based)
        Vec weight;       ///< weight values on the orthonormal a-basis
    };

    Mat B;                           ///< dim x dim, columns = ordered basis (original coords)
    int dim_a = 0;
    std::vector<Segment> segments;   ///< nilpotent segments in basis order
    std::vector<double> eigenvalues; ///< grading eigenvalues, ascending

    int dim() const { return static_cast<int>(B.cols()); }
    int levels() const { return static_cast<int>(eigenvalues.size()); }

    /// Prefix length of the i-th quotient stage (1-based): the abelian part
    /// plus all eigenspaces of level index < levels() - (i - 1).
    int prefix_dim(int stage) const;

    /// Eigenvalue index of ordered position p; -1 on the abelian part.
    int level_of(int p) const;

    /// Grading eigenvalue at ordered position p; 0 on the abelian part.
    double lambda_of(int p) const;

    /// Offset/size of the eigenspace with the given level index.
    std::pair<int, int> eigenspace_range(int level) const;
};

/// Builds the ordered basis from a validated grading.
OrderedBasis ordered_basis(const MetricLieAlgebra& alg,
                           const SolvableSplit& split,
                           const Grading& g);

/// A linear map from the source algebra into N x N matrices, given per
/// ordered-basis vector and extended linearly.
struct Representation {
    MetricLieAlgebra source;          ///< the original algebra
    OrderedBasis basis;               ///< ordered basis the mats are indexed by
    int N = 0;
    std::vector<Mat> mats;            ///< one N x N matrix per ordered basis vector
    std::vector<TargetBlock> blocks;  ///< direct-sum layout of the target

    /// Coordinates of an original-basis vector over the ordered basis.
    Vec ordered_coords(const Vec& x_original) const;

    /// Image of an original-coordinates vector.
    Mat map(const Vec& x_original) const;

    /// Pullback of the target inner product on a pair of ordered indices.
    double pullback(MetricKind kind, int p, int q, double tol = kDefaultTol) const;

    /// Full pullback Gram matrix over the ordered basis.
    Mat pullback_gram(MetricKind kind, double tol = kDefaultTol) const;
};

/// The adjoint representation expressed in the ordered basis, with the
/// structural triangularity made exact: entries above the diagonal (and the
/// diagonal of nilpotent images) are verified to vanish within tol and then
/// zeroed.  Throws NotFaithful when the algebra has a center and
/// NotLowerTriangular when a forbidden entry survives.
Representation adjoint_rep(const MetricLieAlgebra& alg,
                           const OrderedBasis& ob,
                           double tol = kDefaultTol);

/// Block-diagonal sum.  Both representations must share the same source and
/// ordered basis; pullback forms add.
Representation direct_sum(const Representation& r1, const Representation& r2);

/// Conjugates the representation inside one designated target block.  L is a
/// lower-triangular matrix of the block's size and must be block-diagonal
/// with respect to the weight-space partition `ws_sizes` of the block; it
/// acts on the block's coordinates through its transpose, so the images of
/// central vectors z in the block transform as phi(z) -> phi(L^T z) and their
/// pullback Gram becomes c * (L L^T).  Throws NotBlockRespecting when L is
/// not lower triangular or mixes weight spaces.
Representation conjugate(const Representation& rep,
                         const Mat& L,
                         const TargetBlock& block,
                         const std::vector<int>& ws_sizes,
                         double tol = kDefaultTol);

/// Lower-triangular L with L * L^T = form (Cholesky).  Throws
/// NotPositiveDefinite when form is not symmetric positive definite.
Mat spd_lower_factor(const Mat& form, double tol = 1e-12);

/// The grading automorphism a(t): identity on a, scalar e^{t*lambda} on each
/// eigenspace n_lambda, as a matrix in original coordinates.  Verified to
/// preserve brackets.
Mat scale_automorphism(const MetricLieAlgebra& alg,
                       const SolvableSplit& split,
                       const Grading& g,
                       double t,
                       double tol = kDefaultTol);

}  // namespace solvembed
