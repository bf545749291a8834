#include "solvembed/embed.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "solvembed/errors.hpp"

namespace solvembed {

namespace {

// Core of special_rep / equalize.  Walks the quotient stages from the deepest
// (stage 1 = the full algebra) upward, fixing for each stage a scaling
// parameter t_i and a per-weight-space lower-triangular conjugation of its top
// (central) eigenspace so that the accumulated pullback on every eigenspace of
// n ends up equal to scale * identity (in the ordered orthonormal basis).
//
// In equalize mode, t_i is chosen so the *mean* of the residual matches the
// mean central constant and the conjugation absorbs the rest; in special mode
// t_i = 0 and the conjugation does all the work.
std::pair<Representation, ScalePlan> run_stages(
    const MetricLieAlgebra& alg,
    const OrderedBasis& ob,
    const std::vector<Representation>& stage_reps,
    bool equalize_mode,
    double scale,
    double tol) {
    const int dim = alg.dim();
    const int k = ob.levels();
    if (k == 0) {
        throw GradingIncompatible("the nilpotent part is empty; nothing to equalize");
    }
    if (static_cast<int>(stage_reps.size()) != k) {
        throw DimensionMismatch("expected one stage representation per grading level");
    }

    std::vector<Mat> acc(k);  // accumulated pullback per eigenspace
    for (int j = 0; j < k; ++j) {
        const int dj = ob.eigenspace_range(j).second;
        acc[j] = Mat::Zero(dj, dj);
    }

    std::vector<Representation> summands;
    ScalePlan plan;
    plan.target_c = scale;
    plan.stage_constants = Mat::Zero(k, k);
    double stage_bound = 0.0;  // largest eigenvalue of acc seen at a stage top

    for (int s = 1; s <= k; ++s) {
        const int jstar = k - s;  // top level of this stage
        const auto [off, dj] = ob.eigenspace_range(jstar);
        const double lam = ob.eigenvalues[jstar];
        Representation rep = stage_reps[s - 1];
        if (rep.N != ob.prefix_dim(s)) {
            throw DimensionMismatch("stage representation has the wrong prefix size");
        }

        // Raw per-eigenspace constants of this stage (diagnostics and the
        // trace means used by the equalize solve).
        for (int j = 0; j <= jstar; ++j) {
            const auto [oj, djj] = ob.eigenspace_range(j);
            double tr = 0.0;
            for (int p = 0; p < djj; ++p) {
                tr += frobenius_ip(rep.mats[oj + p], rep.mats[oj + p]);
            }
            plan.stage_constants(s - 1, j) = tr / djj;
        }

        // Residual the stage must realize on its top eigenspace.
        Mat R = scale * Mat::Identity(dj, dj) - acc[jstar];
        R = 0.5 * (R + R.transpose()).eval();
        stage_bound = std::max(stage_bound, max_eigenvalue_sym(acc[jstar]));
        if (min_eigenvalue_sym(R) <= tol * (1.0 + std::abs(scale))) {
            throw ScaleTooSmall(
                "stage " + std::to_string(s) + " residual is not positive definite at scale " +
                    format_double(scale) + "; the scale must exceed at least " +
                    format_double(stage_bound),
                stage_bound);
        }

        // Weight-space partition of the top eigenspace, with the exact central
        // pullback constant ||alpha||^2 per weight space alpha.
        std::vector<int> ws_sizes;
        std::vector<double> central(0);
        for (const auto& seg : ob.segments) {
            if (seg.level != jstar) continue;
            ws_sizes.push_back(seg.size);
            central.push_back(seg.weight.squaredNorm());
        }

        // Off-block entries of the residual must vanish: contributions from
        // different weight spaces are orthogonal in the target.
        {
            int ro = 0;
            for (size_t a = 0; a < ws_sizes.size(); ++a) {
                int co = 0;
                for (size_t b = 0; b < ws_sizes.size(); ++b) {
                    if (a != b) {
                        const double worst =
                            R.block(ro, co, ws_sizes[a], ws_sizes[b]).cwiseAbs().maxCoeff();
                        if (worst > 1e3 * tol * (1.0 + std::abs(scale))) {
                            throw NotBlockRespecting(
                                "accumulated pullback mixes distinct weight spaces "
                                "(entry of size " + format_double(worst) + ")");
                        }
                    }
                    co += ws_sizes[b];
                }
                ro += ws_sizes[a];
            }
        }

        double t_s = 0.0;
        if (equalize_mode) {
            double cbar = 0.0;
            for (size_t w = 0; w < ws_sizes.size(); ++w) cbar += central[w] * ws_sizes[w];
            cbar /= dj;
            const double rbar = R.trace() / dj;
            t_s = std::log(rbar / cbar) / (2.0 * lam);
        }
        plan.stage_scales.push_back(t_s);

        // Precompose with the grading automorphism a(t_s): each ordered
        // generator's image scales by e^{t_s * lambda_p}.
        if (t_s != 0.0) {
            for (int p = 0; p < dim; ++p) {
                const int lp = ob.level_of(p);
                if (lp >= 0) rep.mats[p] *= std::exp(t_s * ob.eigenvalues[lp]);
            }
        }

        // Per-weight-space Cholesky conjugators absorbing the residual.
        const double boost = std::exp(2.0 * t_s * lam);
        Mat Lfull = Mat::Zero(dj, dj);
        {
            int rel = 0;
            for (size_t w = 0; w < ws_sizes.size(); ++w) {
                const int m = ws_sizes[w];
                const Mat target = R.block(rel, rel, m, m) / (central[w] * boost);
                try {
                    Lfull.block(rel, rel, m, m) = spd_lower_factor(target, 1e-14);
                } catch (const NotPositiveDefinite&) {
                    throw ScaleTooSmall(
                        "stage " + std::to_string(s) +
                            " residual is not positive definite on a weight space at scale " +
                            format_double(scale),
                        stage_bound);
                }
                rel += m;
            }
        }
        rep = conjugate(rep, Lfull, TargetBlock{off, dj, "stage top"}, ws_sizes, 1e-9);

        // Accumulate this summand's actual pullback on the lower eigenspaces.
        for (int j = 0; j < jstar; ++j) {
            const auto [oj, djj] = ob.eigenspace_range(j);
            for (int p = 0; p < djj; ++p) {
                for (int q = p; q < djj; ++q) {
                    const double v = frobenius_ip(rep.mats[oj + p], rep.mats[oj + q]);
                    acc[j](p, q) += v;
                    if (q > p) acc[j](q, p) += v;
                }
            }
        }
        summands.push_back(std::move(rep));
    }

    Representation total = std::move(summands[0]);
    for (size_t i = 1; i < summands.size(); ++i) {
        total = direct_sum(total, summands[i]);
    }
    plan.min_feasible_t = stage_bound;
    plan.min_feasible_c = stage_bound;
    return {std::move(total), plan};
}

}  // namespace

std::vector<Representation> stage_adjoint_reps(const MetricLieAlgebra& alg,
                                               const OrderedBasis& ob,
                                               double tol) {
    const Representation full = adjoint_rep(alg, ob, tol);
    const int dim = alg.dim();
    const int k = ob.levels();
    std::vector<Representation> out;
    out.reserve(k);
    for (int s = 1; s <= k; ++s) {
        const int P = ob.prefix_dim(s);
        Representation r{alg, ob, P, {}, {TargetBlock{0, P, "stage " + std::to_string(s)}}};
        r.mats.reserve(dim);
        for (int p = 0; p < dim; ++p) {
            if (p < P) {
                r.mats.push_back(full.mats[p].topLeftCorner(P, P));
            } else {
                r.mats.push_back(Mat::Zero(P, P));
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::pair<Representation, ScalePlan> special_rep(const MetricLieAlgebra& alg,
                                                 const SolvableSplit& split,
                                                 const Grading& g,
                                                 double target_c,
                                                 double tol) {
    const OrderedBasis ob = ordered_basis(alg, split, g);
    const std::vector<Representation> reps = stage_adjoint_reps(alg, ob, tol);
    return run_stages(alg, ob, reps, /*equalize_mode=*/false, target_c, tol);
}

std::pair<Representation, ScalePlan> equalize(const MetricLieAlgebra& alg,
                                              const SolvableSplit& split,
                                              const Grading& g,
                                              const std::vector<Representation>& stage_reps,
                                              double t,
                                              double tol) {
    const OrderedBasis ob = ordered_basis(alg, split, g);
    return run_stages(alg, ob, stage_reps, /*equalize_mode=*/true, t, tol);
}

Representation extend_abelian(const Representation& phi,
                              const MetricLieAlgebra& alg,
                              const SolvableSplit& split,
                              double c,
                              MetricKind kind,
                              double tol) {
    (void)alg;
    (void)split;
    const int da = phi.basis.dim_a;
    if (da == 0) return phi;

    Mat Pa(da, da);
    for (int p = 0; p < da; ++p) {
        for (int q = p; q < da; ++q) {
            const double v = phi.pullback(kind, p, q, tol);
            Pa(p, q) = v;
            Pa(q, p) = v;
        }
    }

    // In the ordered basis the inner product on a is the identity, so the
    // appended block must contribute M = c * I - Pa; with the Einstein metric
    // a diagonal block contributes twice the usual Frobenius amount.
    Mat M = c * Mat::Identity(da, da) - Pa;
    M = 0.5 * (M + M.transpose()).eval();
    const double factor = (kind == MetricKind::Einstein) ? 2.0 : 1.0;

    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    if (es.info() != Eigen::Success) {
        throw NotPositiveDefinite("eigendecomposition of the abelian residual failed");
    }
    const Vec nu = es.eigenvalues();
    const double thresh = tol * (1.0 + std::abs(c));
    if (nu(0) < -thresh) {
        throw ScaleTooSmall(
            "abelian residual is not positive semidefinite at scale " + format_double(c) +
                "; the scale must be at least " + format_double(max_eigenvalue_sym(Pa)),
            max_eigenvalue_sym(Pa));
    }

    std::vector<int> keep;
    for (int i = 0; i < da; ++i) {
        if (nu(i) > thresh) keep.push_back(i);
    }
    const int rows = static_cast<int>(keep.size());
    if (rows == 0) return phi;

    Mat gmap(rows, da);
    for (int idx = 0; idx < rows; ++idx) {
        gmap.row(idx) =
            std::sqrt(nu(keep[idx]) / factor) * es.eigenvectors().col(keep[idx]).transpose();
    }

    Representation out{phi.source, phi.basis, phi.N + rows, {}, phi.blocks};
    out.mats.reserve(phi.mats.size());
    for (int p = 0; p < static_cast<int>(phi.mats.size()); ++p) {
        Mat Mp = Mat::Zero(out.N, out.N);
        Mp.topLeftCorner(phi.N, phi.N) = phi.mats[p];
        if (p < da) {
            Mp.bottomRightCorner(rows, rows) = Mat(gmap.col(p).asDiagonal());
        }
        out.mats.push_back(std::move(Mp));
    }
    out.blocks.push_back(TargetBlock{phi.N, rows, "abelian"});
    return out;
}

EmbedResult embed(const MetricLieAlgebra& alg,
                  const SolvableSplit& split,
                  const EmbedOptions& options) {
    const double tol = kDefaultTol;
    const ConditionsReport report = validate_split(alg, split, tol);
    if (!report.all_passed()) {
        throw ConditionsFailed("structure conditions rejected:\n" + report.summary());
    }

    const Grading g = grading(alg, split, tol);
    const OrderedBasis ob = ordered_basis(alg, split, g);
    const std::vector<Representation> stage_reps = stage_adjoint_reps(alg, ob, tol);
    const int da = ob.dim_a;
    const int k = ob.levels();
    const MetricKind kind = options.metric;

    // Pullback on the abelian part: diagonal images are fixed by the grading
    // automorphism and by the conjugations, so this Gram matrix is independent
    // of the scale.
    Mat Pa = Mat::Zero(da, da);
    for (const Representation& r : stage_reps) {
        for (int p = 0; p < da; ++p) {
            for (int q = p; q < da; ++q) {
                const double v = target_ip(kind, r.mats[p], r.mats[q], tol);
                Pa(p, q) += v;
                if (q > p) Pa(q, p) += v;
            }
        }
    }
    const double c_min = da > 0 ? max_eigenvalue_sym(Pa) : 0.0;

    // Feasibility boundary of the stage recursion (k = 1 has none).
    double t_min = 0.0;
    if (k >= 2) {
        auto feasible = [&](double t) {
            if (t <= 0.0) return false;
            try {
                equalize(alg, split, g, stage_reps, t, tol);
                return true;
            } catch (const ScaleTooSmall&) {
                return false;
            }
        };
        double hi = std::max(1.0, c_min);
        int guard = 0;
        while (!feasible(hi) && ++guard < 200) hi *= 2.0;
        if (guard >= 200) {
            throw ScaleTooSmall("no feasible equalization scale found", hi);
        }
        double lo = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (feasible(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        t_min = hi;
    }

    const bool forced = options.scale.has_value();
    double scale = forced ? *options.scale : std::max(1.1 * t_min, c_min);
    if (!forced && scale <= 0.0) scale = 1.0;

    for (int attempt = 0;; ++attempt) {
        try {
            auto [rep_n, plan] = equalize(alg, split, g, stage_reps, scale, tol);
            Representation rep = extend_abelian(rep_n, alg, split, scale, kind, tol);
            plan.target_c = scale;
            plan.min_feasible_c = c_min;
            // The accumulated-pullback bound recorded by the stage walk is
            // evaluated at the working scale and overshoots the true boundary;
            // report the bisected infimum instead.
            plan.min_feasible_t = t_min;
            EmbeddingCertificate cert = certify(alg, rep, kind, options.tolerances);
            return EmbedResult{std::move(rep), std::move(cert), std::move(plan)};
        } catch (const ScaleTooSmall&) {
            if (forced || attempt >= 60) throw;
            scale *= 2.0;
        }
    }
}

namespace {

MetricLieAlgebra append_derivation_generator(const MetricLieAlgebra& nilalg, const Mat& D) {
    const int n = nilalg.dim();
    std::vector<Mat> ad_ext(n + 1, Mat::Zero(n + 1, n + 1));
    for (int i = 0; i < n; ++i) {
        ad_ext[i].topLeftCorner(n, n) = nilalg.ad(i);
        ad_ext[i].col(n).head(n) = -D.col(i);
    }
    ad_ext[n].topLeftCorner(n, n) = D;

    Mat gram = Mat::Identity(n + 1, n + 1);
    gram.topLeftCorner(n, n) = nilalg.gram();

    std::vector<std::string> labels = nilalg.labels();
    if (static_cast<int>(labels.size()) == n) {
        labels.push_back("A");
    } else {
        labels.clear();
    }
    return MetricLieAlgebra::from_ad(ad_ext, gram, labels);
}

}  // namespace

std::pair<MetricLieAlgebra, SolvableSplit> rank_one_extension(const MetricLieAlgebra& nilalg,
                                                              const Mat& D,
                                                              bool normalize,
                                                              double tol) {
    const Grading g0 = grading_from_derivation(nilalg, D, tol);
    Mat Duse = D;
    if (normalize) {
        const double lmin = g0.eigenvalues.front();
        Duse = D / lmin;
    }
    const int n = nilalg.dim();
    SolvableSplit split;
    split.a_indices = {n};
    split.n_indices.resize(n);
    for (int i = 0; i < n; ++i) split.n_indices[i] = i;
    return {append_derivation_generator(nilalg, Duse), split};
}

Mat two_step_canonical_derivation(const MetricLieAlgebra& nilalg, double tol) {
    const int n = nilalg.dim();
    Mat stacked(n * n, n);
    for (int i = 0; i < n; ++i) {
        stacked.col(i) = Eigen::Map<const Vec>(nilalg.ad(i).data(), n * n);
    }
    Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
    const Vec sing = svd.singularValues();
    const double smax = sing.size() > 0 ? sing(0) : 0.0;
    std::vector<int> kernel_cols;
    for (int i = 0; i < n; ++i) {
        const double sv = i < sing.size() ? sing(i) : 0.0;
        if (sv <= tol * (1.0 + smax)) kernel_cols.push_back(i);
    }
    if (kernel_cols.empty()) {
        throw NotDerivation("nilpotent algebra has a trivial center");
    }
    Mat Z0(n, static_cast<int>(kernel_cols.size()));
    for (size_t i = 0; i < kernel_cols.size(); ++i) {
        Z0.col(static_cast<int>(i)) = svd.matrixV().col(kernel_cols[i]);
    }
    const Mat Z = gram_orthonormalize(Z0, nilalg.gram());
    const Mat Pc = Z * Z.transpose() * nilalg.gram();

    // Two-step check: every bracket must lie in the center.
    const double scale = 1.0 + nilalg.structure_scale();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec b = nilalg.bracket(Vec(Vec::Unit(n, i)), Vec(Vec::Unit(n, j)));
            if ((b - Pc * b).cwiseAbs().maxCoeff() > tol * scale) {
                throw NotDerivation(
                    "canonical two-step derivation requires a two-step algebra");
            }
        }
    }
    return Mat::Identity(n, n) + Pc;
}

}  // namespace solvembed
