#include "solvembed/representation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "solvembed/errors.hpp"

namespace solvembed {

int OrderedBasis::prefix_dim(int stage) const {
    if (stage < 1 || stage > levels()) {
        throw DimensionMismatch("stage index out of range");
    }
    const int keep = levels() - (stage - 1);  // levels with index < keep survive
    int d = dim_a;
    for (const Segment& s : segments) {
        if (s.level < keep) d += s.size;
    }
    return d;
}

int OrderedBasis::level_of(int p) const {
    if (p < 0 || p >= dim()) throw DimensionMismatch("ordered index out of range");
    if (p < dim_a) return -1;
    for (const Segment& s : segments) {
        if (p >= s.offset && p < s.offset + s.size) return s.level;
    }
    throw DimensionMismatch("ordered index not covered by any segment");
}

double OrderedBasis::lambda_of(int p) const {
    const int l = level_of(p);
    return l < 0 ? 0.0 : eigenvalues[l];
}

std::pair<int, int> OrderedBasis::eigenspace_range(int level) const {
    int off = -1;
    int size = 0;
    for (const Segment& s : segments) {
        if (s.level != level) continue;
        if (off < 0) off = s.offset;
        size += s.size;
    }
    if (off < 0) throw DimensionMismatch("no eigenspace with the requested level");
    return {off, size};
}

OrderedBasis ordered_basis(const MetricLieAlgebra& alg,
                           const SolvableSplit& split,
                           const Grading& g) {
    (void)split;
    const int dim = alg.dim();
    const int da = g.wd.dim_a();

    OrderedBasis ob;
    ob.dim_a = da;
    ob.eigenvalues = g.eigenvalues;
    ob.B = Mat::Zero(dim, dim);
    ob.B.leftCols(da) = g.wd.a_basis;

    int col = da;
    for (int level = 0; level < g.levels(); ++level) {
        for (int m = 0; m < g.wd.count(); ++m) {
            if (g.ws_level[m] != level) continue;
            const Mat& W = g.wd.weight_spaces[m];
            OrderedBasis::Segment seg;
            seg.offset = col;
            seg.size = static_cast<int>(W.cols());
            seg.level = level;
            seg.weight = g.wd.weights[m];
            ob.B.middleCols(col, seg.size) = W;
            ob.segments.push_back(std::move(seg));
            col += seg.size;
        }
    }
    if (col != dim) throw DimensionMismatch("ordered basis does not span the algebra");
    return ob;
}

Vec Representation::ordered_coords(const Vec& x_original) const {
    if (x_original.size() != basis.dim()) {
        throw DimensionMismatch("vector has wrong dimension");
    }
    return basis.B.transpose() * source.gram() * x_original;
}

Mat Representation::map(const Vec& x_original) const {
    const Vec c = ordered_coords(x_original);
    Mat M = Mat::Zero(N, N);
    for (int p = 0; p < static_cast<int>(mats.size()); ++p) {
        if (c(p) != 0.0) M += c(p) * mats[p];
    }
    return M;
}

double Representation::pullback(MetricKind kind, int p, int q, double tol) const {
    return target_ip(kind, mats[p], mats[q], tol);
}

Mat Representation::pullback_gram(MetricKind kind, double tol) const {
    const int n = static_cast<int>(mats.size());
    Mat P(n, n);
    for (int p = 0; p < n; ++p) {
        for (int q = p; q < n; ++q) {
            const double v = pullback(kind, p, q, tol);
            P(p, q) = v;
            P(q, p) = v;
        }
    }
    return P;
}

namespace {

// True when `w` coincides with `u + v` componentwise.
bool weight_matches(const Vec& w, const Vec& u, const Vec& v, double tol) {
    for (int i = 0; i < w.size(); ++i) {
        if (!weights_coincide(w(i), u(i) + v(i), tol)) return false;
    }
    return true;
}

}  // namespace

Representation adjoint_rep(const MetricLieAlgebra& alg,
                           const OrderedBasis& ob,
                           double tol) {
    const int dim = alg.dim();
    const int da = ob.dim_a;
    const Mat proj = ob.B.transpose() * alg.gram();

    std::vector<Mat> mats(dim);
    for (int p = 0; p < dim; ++p) {
        mats[p] = proj * alg.ad_of(ob.B.col(p)) * ob.B;
    }

    // Faithfulness: the map x -> ad(x) must have trivial kernel.
    Mat stacked(dim * dim, dim);
    for (int p = 0; p < dim; ++p) {
        stacked.col(p) = Eigen::Map<const Vec>(mats[p].data(), dim * dim);
    }
    Eigen::JacobiSVD<Mat> svd(stacked);
    const Vec sing = svd.singularValues();
    const double smax = sing.size() > 0 ? sing(0) : 0.0;
    if (sing.size() == 0 || sing(sing.size() - 1) <= tol * (1.0 + smax)) {
        throw NotFaithful("the adjoint representation has a kernel; "
                          "the algebra has a nontrivial center");
    }

    // Structural zeroing driven by the weight bookkeeping.  segment_of[r] is
    // the index of the weight-space segment containing ordered position r.
    std::vector<int> segment_of(dim, -1);
    for (int s = 0; s < static_cast<int>(ob.segments.size()); ++s) {
        const auto& seg = ob.segments[s];
        for (int r = seg.offset; r < seg.offset + seg.size; ++r) segment_of[r] = s;
    }

    double scale = 0.0;
    for (const Mat& M : mats) scale = std::max(scale, M.cwiseAbs().maxCoeff());
    const double thresh = tol * (1.0 + scale);

    for (int p = 0; p < dim; ++p) {
        Mat& M = mats[p];
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                bool allowed;
                if (p < da) {
                    // Images of the abelian part act diagonally on each weight
                    // space and kill the abelian part.
                    allowed = (r == c && c >= da);
                } else if (c < da) {
                    // [e_p, a] is a multiple of e_p, up to the weight space.
                    allowed = (segment_of[r] == segment_of[p] && r >= da);
                } else {
                    // [e_p, e_c] lives in the weight space of weight(p)+weight(c).
                    allowed = (r >= da &&
                               weight_matches(ob.segments[segment_of[r]].weight,
                                              ob.segments[segment_of[p]].weight,
                                              ob.segments[segment_of[c]].weight, tol));
                }
                if (allowed) continue;
                if (std::abs(M(r, c)) > thresh) {
                    throw NotLowerTriangular(
                        "adjoint image has a forbidden entry of size " +
                        format_double(std::abs(M(r, c))) + " at (" + std::to_string(r) +
                        ", " + std::to_string(c) + ") for generator " + std::to_string(p));
                }
                M(r, c) = 0.0;
            }
        }
    }

    // The allowed pattern is lower triangular by construction; double-check.
    for (int p = da; p < dim; ++p) {
        if (!is_strictly_lower(mats[p], 0.0)) {
            throw NotLowerTriangular("nilpotent adjoint image is not strictly lower");
        }
    }

    Representation rep{alg, ob, dim, std::move(mats),
                       {TargetBlock{0, dim, "adjoint"}}};
    return rep;
}

Representation direct_sum(const Representation& r1, const Representation& r2) {
    const int dim = static_cast<int>(r1.mats.size());
    if (dim != static_cast<int>(r2.mats.size()) ||
        r1.basis.dim() != r2.basis.dim()) {
        throw DimensionMismatch("direct sum requires representations of the same source");
    }
    if ((r1.basis.B - r2.basis.B).cwiseAbs().maxCoeff() > 1e-12) {
        throw DimensionMismatch("direct sum requires matching ordered bases");
    }

    Representation out{r1.source, r1.basis, r1.N + r2.N, {}, {}};
    out.mats.reserve(dim);
    for (int p = 0; p < dim; ++p) {
        Mat M = Mat::Zero(out.N, out.N);
        M.topLeftCorner(r1.N, r1.N) = r1.mats[p];
        M.bottomRightCorner(r2.N, r2.N) = r2.mats[p];
        out.mats.push_back(std::move(M));
    }
    out.blocks = r1.blocks;
    for (TargetBlock b : r2.blocks) {
        b.offset += r1.N;
        out.blocks.push_back(std::move(b));
    }
    return out;
}

Representation conjugate(const Representation& rep,
                         const Mat& L,
                         const TargetBlock& block,
                         const std::vector<int>& ws_sizes,
                         double tol) {
    const int s = block.size;
    if (L.rows() != s || L.cols() != s) {
        throw DimensionMismatch("conjugator has the wrong size for the block");
    }
    if (block.offset < 0 || block.offset + s > rep.N) {
        throw DimensionMismatch("block does not fit inside the target");
    }
    int covered = 0;
    for (int w : ws_sizes) {
        if (w <= 0) throw DimensionMismatch("weight-space sizes must be positive");
        covered += w;
    }
    if (covered != s) {
        throw DimensionMismatch("weight-space partition does not cover the block");
    }

    const double scale = 1.0 + L.cwiseAbs().maxCoeff();
    for (int r = 0; r < s; ++r) {
        for (int c = r + 1; c < s; ++c) {
            if (std::abs(L(r, c)) > tol * scale) {
                throw NotBlockRespecting("conjugator is not lower triangular");
            }
        }
    }
    // Block-diagonal with respect to the weight-space partition.
    {
        std::vector<int> part_of(s);
        int off = 0;
        for (int w = 0; w < static_cast<int>(ws_sizes.size()); ++w) {
            for (int i = 0; i < ws_sizes[w]; ++i) part_of[off + i] = w;
            off += ws_sizes[w];
        }
        for (int r = 0; r < s; ++r) {
            for (int c = 0; c < s; ++c) {
                if (part_of[r] != part_of[c] && std::abs(L(r, c)) > tol * scale) {
                    throw NotBlockRespecting("conjugator mixes weight spaces");
                }
            }
        }
    }
    for (int r = 0; r < s; ++r) {
        if (std::abs(L(r, r)) <= tol) {
            throw NotBlockRespecting("conjugator is singular");
        }
    }

    // The change of basis acts on the block's coordinates through L^T.
    const Mat Q = L.transpose();
    const Mat Qinv = Q.inverse();
    Representation out = rep;
    for (Mat& M : out.mats) {
        M.middleRows(block.offset, s) = Q * M.middleRows(block.offset, s);
        M.middleCols(block.offset, s) = M.middleCols(block.offset, s) * Qinv;
    }
    return out;
}

Mat spd_lower_factor(const Mat& form, double tol) {
    require_spd(form, "spd_lower_factor", tol);
    Eigen::LLT<Mat> llt(Mat(0.5 * (form + form.transpose())));
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("Cholesky factorization failed");
    }
    return llt.matrixL();
}

Mat scale_automorphism(const MetricLieAlgebra& alg,
                       const SolvableSplit& split,
                       const Grading& g,
                       double t,
                       double tol) {
    (void)split;
    const int dim = alg.dim();
    const int da = g.wd.dim_a();

    Mat P(dim, dim);
    Vec d(dim);
    P.leftCols(da) = g.wd.a_basis;
    d.head(da).setOnes();
    int col = da;
    for (int l = 0; l < g.levels(); ++l) {
        const Mat& E = g.eigenspaces[l];
        P.middleCols(col, E.cols()) = E;
        d.segment(col, E.cols()).setConstant(std::exp(t * g.eigenvalues[l]));
        col += static_cast<int>(E.cols());
    }
    if (col != dim) throw DimensionMismatch("grading eigenspaces do not span");

    const Mat a_t = P * d.asDiagonal() * P.transpose() * alg.gram();

    // Verify a(t) preserves brackets.
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const Vec lhs = a_t * alg.bracket(Vec(Vec::Unit(dim, i)), Vec(Vec::Unit(dim, j)));
            const Vec rhs = alg.bracket(Vec(a_t.col(i)), Vec(a_t.col(j)));
            const double denom = 1.0 + std::max(lhs.cwiseAbs().maxCoeff(),
                                                rhs.cwiseAbs().maxCoeff());
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / denom);
        }
    }
    if (worst > tol * 100.0) {
        throw GradingIncompatible("scaling map fails to be an automorphism (residual " +
                                  format_double(worst) + ")");
    }
    return a_t;
}

}  // namespace solvembed
