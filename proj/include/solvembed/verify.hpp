#pragma once

#include <string>
#include <vector>

#include "solvembed/representation.hpp"

namespace solvembed {

/// Acceptance thresholds for certification.  The environment variable
/// SOLVEMBED_TOL, when set, overrides the homomorphism and pullback defaults.
struct Tolerances {
    double homomorphism = 1e-9;   ///< scaled bracket residual
    double pullback = 1e-8;       ///< relative pullback residual
    double faithfulness = 1e-10;  ///< required singular-value margin

    static Tolerances defaults();  ///< honors SOLVEMBED_TOL
};

struct EmbeddingCertificate {
    int N = 0;
    double achieved_c = 0.0;
    double bracket_residual = 0.0;
    double pullback_residual = 0.0;
    double faithfulness_margin = 0.0;
    MetricKind metric_kind = MetricKind::Einstein;
    bool accepted = false;
    std::vector<std::string> failures;

    std::string summary() const;
};

/// Max over ordered-basis pairs of
/// || mats([u_p, u_q]) - [mats(u_p), mats(u_q)] ||_max / (1 + max ||mats||).
/// Brackets are recomputed from the source algebra, independent of how the
/// representation was produced.
double check_homomorphism(const MetricLieAlgebra& alg, const Representation& rep);

/// Smallest singular value of the (N^2 x dim) matrix whose columns are the
/// flattened images of the ordered basis.
double check_faithful(const Representation& rep);

/// Least-squares scale fit of the pullback Gram against c * gram, returning
/// (c_hat, max entry deviation relative to c_hat).  Throws NotLowerTriangular
/// for the Einstein metric when an image is not lower triangular.
std::pair<double, double> check_isometry(const MetricLieAlgebra& alg,
                                         const Representation& rep,
                                         MetricKind kind);

/// Aggregates the three checks plus structural triangularity into a
/// certificate.  Never throws on numeric failure: rejections are recorded in
/// the certificate's failure list.
EmbeddingCertificate certify(const MetricLieAlgebra& alg,
                             const Representation& rep,
                             MetricKind kind,
                             const Tolerances& tols = Tolerances::defaults());

}  // namespace solvembed
