#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solvembed/util.hpp"

namespace solvembed {

/// One structure-constant entry: the coefficient of e_k in [e_i, e_j].
struct BracketEntry {
    int i = 0;
    int j = 0;
    int k = 0;
    double value = 0.0;
};

/// A finite-dimensional real Lie algebra together with an inner product,
/// stored as the family of adjoint matrices plus a Gram matrix.
///
/// Conventions: ad(i) is the matrix of ad(e_i), so ad(i)(k, j) is the
/// coefficient of e_k in [e_i, e_j]; gram(i, j) = <e_i, e_j>.
class MetricLieAlgebra {
public:
    /// Builds from bracket entries given for i < j only (the antisymmetric
    /// completion is automatic).  Throws SchemaError on malformed entries and
    /// NotPositiveDefinite when gram is not symmetric positive definite.
    static MetricLieAlgebra from_brackets(int dim,
                                          const std::vector<BracketEntry>& entries,
                                          Mat gram,
                                          std::vector<std::string> labels = {});

    /// Builds from explicit adjoint matrices.  Verifies antisymmetry of the
    /// induced structure tensor.
    static MetricLieAlgebra from_ad(std::vector<Mat> ad,
                                    Mat gram,
                                    std::vector<std::string> labels = {});

    int dim() const { return dim_; }
    const Mat& gram() const { return gram_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Mat& ad(int i) const { return ad_[i]; }

    /// Structure constant c[i][j][k]: coefficient of e_k in [e_i, e_j].
    double structure(int i, int j, int k) const { return ad_[i](k, j); }

    /// Bracket of two coordinate vectors.
    Vec bracket(const Vec& x, const Vec& y) const;

    /// ad(x) = sum_i x_i ad(e_i) as a matrix.
    Mat ad_of(const Vec& x) const;

    /// Inner product of coordinate vectors.
    double ip(const Vec& x, const Vec& y) const { return x.dot(gram_ * y); }

    /// Largest absolute structure constant (used for tolerance scaling).
    double structure_scale() const { return structure_scale_; }

    /// Returns a copy with a different Gram matrix (brackets unchanged).
    MetricLieAlgebra with_gram(Mat gram) const;

private:
    MetricLieAlgebra() = default;

    int dim_ = 0;
    std::vector<Mat> ad_;
    Mat gram_;
    std::vector<std::string> labels_;
    double structure_scale_ = 0.0;
};

/// Output of validate_algebra.
struct ValidationReport {
    double jacobi_residual = 0.0;     ///< scaled max cyclic-sum norm
    int derived_series_length = 0;    ///< steps until the derived series dies
    bool solvable = false;
    bool completely_solvable = false; ///< all sampled ad x have real spectrum
    bool nilpotent = false;           ///< lower central series dies
};

/// Checks the Jacobi identity and solvability.  Throws JacobiViolation when
/// the scaled Jacobi residual exceeds tol and NotSolvable when the derived
/// series does not terminate.  Complete solvability and nilpotency are
/// reported as flags, not errors.
ValidationReport validate_algebra(const MetricLieAlgebra& alg, double tol = kDefaultTol);

/// Designated orthogonal decomposition s = a + n into an abelian part and the
/// nilradical, given as index sets into the basis.
struct SolvableSplit {
    std::vector<int> a_indices;
    std::vector<int> n_indices;
};

struct ConditionCheck {
    std::string name;
    bool passed = false;
    std::string witness;  ///< human-readable evidence, filled on failure (and some passes)
};

struct ConditionsReport {
    std::vector<ConditionCheck> checks;

    bool all_passed() const;
    const ConditionCheck* find(const std::string& name) const;
    std::string summary() const;
};

/// Verifies the split structurally and then each of the five admissibility
/// conditions: (i) complete solvability, (ii) n is a nilpotent ideal
/// containing [s, s], (iii) a is abelian and acts injectively, (iv) ad A is
/// symmetric for the inner product for all A in a, (v) some A in a acts with
/// positive eigenvalues on n.  Failures are report entries, not exceptions.
ConditionsReport validate_split(const MetricLieAlgebra& alg,
                                const SolvableSplit& split,
                                double tol = kDefaultTol);

}  // namespace solvembed
