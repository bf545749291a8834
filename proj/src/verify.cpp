#include "solvembed/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "solvembed/errors.hpp"

namespace solvembed {

Tolerances Tolerances::defaults() {
    Tolerances t;
    if (const char* env = std::getenv("SOLVEMBED_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) {
            t.homomorphism = v;
            t.pullback = v;
        }
    }
    return t;
}

std::string EmbeddingCertificate::summary() const {
    std::ostringstream out;
    out << "target size N = " << N << ", metric = " << to_string(metric_kind)
        << ", achieved c = " << format_double(achieved_c) << "\n"
        << "bracket residual     = " << format_double(bracket_residual) << "\n"
        << "pullback residual    = " << format_double(pullback_residual) << "\n"
        << "faithfulness margin  = " << format_double(faithfulness_margin) << "\n"
        << "verdict: " << (accepted ? "ACCEPTED" : "REJECTED");
    for (const std::string& f : failures) out << "\n  - " << f;
    return out.str();
}

double check_homomorphism(const MetricLieAlgebra& alg, const Representation& rep) {
    const int dim = alg.dim();
    double matscale = 0.0;
    for (const Mat& M : rep.mats) {
        if (M.size() > 0) matscale = std::max(matscale, M.cwiseAbs().maxCoeff());
    }
    double worst = 0.0;
    for (int p = 0; p < dim; ++p) {
        for (int q = p + 1; q < dim; ++q) {
            const Vec bracket =
                alg.bracket(Vec(rep.basis.B.col(p)), Vec(rep.basis.B.col(q)));
            const Vec coords = rep.ordered_coords(bracket);
            Mat expected = Mat::Zero(rep.N, rep.N);
            for (int r = 0; r < dim; ++r) {
                if (coords(r) != 0.0) expected += coords(r) * rep.mats[r];
            }
            const Mat diff = rep.mats[p] * rep.mats[q] - rep.mats[q] * rep.mats[p] - expected;
            worst = std::max(worst, diff.cwiseAbs().maxCoeff());
        }
    }
    return worst / (1.0 + matscale);
}

double check_faithful(const Representation& rep) {
    const int dim = static_cast<int>(rep.mats.size());
    Mat stacked(rep.N * rep.N, dim);
    for (int p = 0; p < dim; ++p) {
        stacked.col(p) = Eigen::Map<const Vec>(rep.mats[p].data(), rep.N * rep.N);
    }
    Eigen::JacobiSVD<Mat> svd(stacked);
    const Vec sing = svd.singularValues();
    if (sing.size() < dim) return 0.0;
    return sing(sing.size() - 1);
}

std::pair<double, double> check_isometry(const MetricLieAlgebra& alg,
                                         const Representation& rep,
                                         MetricKind kind) {
    const Mat Gt = rep.basis.B.transpose() * alg.gram() * rep.basis.B;
    const Mat P = rep.pullback_gram(kind);
    const double denom = Gt.cwiseProduct(Gt).sum();
    const double c_hat = P.cwiseProduct(Gt).sum() / denom;
    const double residual =
        (P - c_hat * Gt).cwiseAbs().maxCoeff() / (1.0 + std::abs(c_hat));
    return {c_hat, residual};
}

EmbeddingCertificate certify(const MetricLieAlgebra& alg,
                             const Representation& rep,
                             MetricKind kind,
                             const Tolerances& tols) {
    EmbeddingCertificate cert;
    cert.N = rep.N;
    cert.metric_kind = kind;

    double matscale = 0.0;
    for (const Mat& M : rep.mats) {
        if (M.size() > 0) matscale = std::max(matscale, M.cwiseAbs().maxCoeff());
    }
    for (const Mat& M : rep.mats) {
        if (!is_lower(M, tols.homomorphism * (1.0 + matscale))) {
            cert.failures.push_back("triangularity: an image leaves the lower-triangular algebra");
            break;
        }
    }

    cert.bracket_residual = check_homomorphism(alg, rep);
    if (!(cert.bracket_residual <= tols.homomorphism)) {
        cert.failures.push_back("homomorphism: bracket residual " +
                                format_double(cert.bracket_residual) + " exceeds " +
                                format_double(tols.homomorphism));
    }

    cert.faithfulness_margin = check_faithful(rep);
    if (!(cert.faithfulness_margin > tols.faithfulness)) {
        cert.failures.push_back("faithfulness: singular-value margin " +
                                format_double(cert.faithfulness_margin) +
                                " is not above " + format_double(tols.faithfulness));
    }

    try {
        const auto [c_hat, residual] = check_isometry(alg, rep, kind);
        cert.achieved_c = c_hat;
        cert.pullback_residual = residual;
        if (!(residual <= tols.pullback)) {
            cert.failures.push_back("isometry: pullback residual " + format_double(residual) +
                                    " exceeds " + format_double(tols.pullback));
        }
    } catch (const NotLowerTriangular&) {
        cert.pullback_residual = std::numeric_limits<double>::infinity();
        cert.failures.push_back("isometry: pullback undefined on non-triangular images");
    }

    cert.accepted = cert.failures.empty();
    return cert;
}

}  // namespace solvembed
