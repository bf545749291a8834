#pragma once

#include <optional>

#include "solvembed/representation.hpp"
#include "solvembed/verify.hpp"

namespace solvembed {

/// Bookkeeping for how the scale was achieved.
struct ScalePlan {
    double target_c = 0.0;
    std::vector<double> stage_scales;  ///< t_i per stage, outermost quotient last
    Mat stage_constants;               ///< (stage i, eigenspace j): mean raw pullback constant
    double min_feasible_c = 0.0;       ///< smallest admissible scale on the abelian part
    double min_feasible_t = 0.0;       ///< feasibility boundary of the stage recursion
};

/// Builds the direct sum over quotient stages whose pullback equals
/// target_c * <.,.> on every grading eigenspace of n, absorbing each stage's
/// residual by a per-weight-space Cholesky conjugation on the stage's top
/// (central) eigenspace.  Throws ScaleTooSmall when some residual fails to be
/// positive definite; the exception carries the certified minimum.
std::pair<Representation, ScalePlan> special_rep(const MetricLieAlgebra& alg,
                                                 const SolvableSplit& split,
                                                 const Grading& g,
                                                 double target_c,
                                                 double tol = kDefaultTol);

/// Raw stage representations: for stage i, the adjoint representation of the
/// i-th quotient as a prefix truncation of the full ordered adjoint (the
/// source stays the full algebra; killed eigenspaces map to zero).
std::vector<Representation> stage_adjoint_reps(const MetricLieAlgebra& alg,
                                               const OrderedBasis& ob,
                                               double tol = kDefaultTol);

/// The scaling pass: assigns a parameter t_i to each stage (descending
/// triangular solve from the top eigenvalue, using trace means) and a
/// per-weight-space conjugation absorbing the remaining residual, so that the
/// summed pullback equals t * <.,.> on all of n while the pullback on a stays
/// independent of t.  Throws ScaleTooSmall with the certified minimum.
std::pair<Representation, ScalePlan> equalize(const MetricLieAlgebra& alg,
                                              const SolvableSplit& split,
                                              const Grading& g,
                                              const std::vector<Representation>& stage_reps,
                                              double t,
                                              double tol = kDefaultTol);

/// Appends a diagonal block carrying a linear map g of the abelian part so
/// that the total pullback on a x a equals c * <.,.>; with the Einstein
/// metric the block satisfies 2 g^T g = c * gram|_a - (current pullback).
/// Zero rows of g are pruned.  Throws ScaleTooSmall when the residual form is
/// not positive semidefinite.
Representation extend_abelian(const Representation& phi,
                              const MetricLieAlgebra& alg,
                              const SolvableSplit& split,
                              double c,
                              MetricKind kind,
                              double tol = kDefaultTol);

struct EmbedOptions {
    std::optional<double> scale;            ///< forced c = t; auto when absent
    MetricKind metric = MetricKind::Einstein;
    Tolerances tolerances;
};

struct EmbedResult {
    Representation rep;
    EmbeddingCertificate certificate;
    ScalePlan plan;
};

/// Full pipeline: validate conditions, grade, order the basis, build the
/// stage representations, equalize at c = t (auto: the smallest comfortably
/// feasible value), extend on the abelian part, and certify.  Throws
/// ConditionsFailed when validate_split rejects and ScaleTooSmall only when
/// the scale was forced by the caller.
EmbedResult embed(const MetricLieAlgebra& alg,
                  const SolvableSplit& split,
                  const EmbedOptions& options = {});

/// The rank-one extension s = R A + n with ad A = D, <A, A> = 1, A
/// orthogonal to n.  D must be a derivation of nilalg, symmetric for its
/// inner product, with positive eigenvalues (throws NotDerivation /
/// NotSymmetric / NotPositive).  With normalize set, D is rescaled so its
/// smallest eigenvalue is 1.
std::pair<MetricLieAlgebra, SolvableSplit> rank_one_extension(const MetricLieAlgebra& nilalg,
                                                              const Mat& D,
                                                              bool normalize = false,
                                                              double tol = kDefaultTol);

/// The canonical two-step derivation: identity on the orthogonal complement
/// of the center, twice the identity on the center.
Mat two_step_canonical_derivation(const MetricLieAlgebra& nilalg, double tol = kDefaultTol);

}  // namespace solvembed
