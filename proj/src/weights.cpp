#include "solvembed/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace solvembed {

int WeightDecomposition::dim_n() const {
    int total = 0;
    for (const auto& ws : weight_spaces) total += static_cast<int>(ws.cols());
    return total;
}

namespace {

/// Groups sorted eigenvalues into clusters identified by weights_coincide.
std::vector<std::pair<int, int>> cluster_ranges(const Vec& sorted_values, double tol) {
    std::vector<std::pair<int, int>> ranges;
    int start = 0;
    for (int i = 1; i <= sorted_values.size(); ++i) {
        if (i == sorted_values.size() ||
            !weights_coincide(sorted_values(i - 1), sorted_values(i), tol)) {
            ranges.emplace_back(start, i - start);
            start = i;
        }
    }
    return ranges;
}

/// Lexicographic tolerance-aware comparison of weight vectors.
bool weight_less(const Vec& u, const Vec& v, double tol) {
    for (int i = 0; i < u.size(); ++i) {
        if (weights_coincide(u(i), v(i), tol)) continue;
        return u(i) < v(i);
    }
    return false;
}

struct Group {
    Mat basis;   ///< columns in n-orthonormal coordinates
    Vec weight;  ///< filled progressively
};

}  // namespace

WeightDecomposition weight_decomposition(const MetricLieAlgebra& alg,
                                         const SolvableSplit& split,
                                         double tol) {
    const int dim = alg.dim();
    const int da = static_cast<int>(split.a_indices.size());
    const int dn = static_cast<int>(split.n_indices.size());
    const double scale = 1.0 + alg.structure_scale();

    Mat a_cols = Mat::Zero(dim, da);
    for (int c = 0; c < da; ++c) a_cols(split.a_indices[c], c) = 1.0;
    Mat n_cols = Mat::Zero(dim, dn);
    for (int c = 0; c < dn; ++c) n_cols(split.n_indices[c], c) = 1.0;

    const Mat a_basis = da > 0 ? gram_orthonormalize(a_cols, alg.gram()) : Mat(dim, 0);
    const Mat n_basis = dn > 0 ? gram_orthonormalize(n_cols, alg.gram()) : Mat(dim, 0);

    // The action of each orthonormal a-basis vector on n, in n coordinates.
    std::vector<Mat> actions(da);
    for (int j = 0; j < da; ++j) {
        actions[j] = n_basis.transpose() * alg.gram() * alg.ad_of(a_basis.col(j)) * n_basis;
        if ((actions[j] - actions[j].transpose()).cwiseAbs().maxCoeff() > tol * scale) {
            throw NotSymmetric("ad of a-basis vector " + std::to_string(j) +
                               " is not symmetric for the inner product");
        }
        actions[j] = 0.5 * (actions[j] + actions[j].transpose());
    }
    for (int i = 0; i < da; ++i) {
        for (int j = i + 1; j < da; ++j) {
            const Mat comm = actions[i] * actions[j] - actions[j] * actions[i];
            if (comm.cwiseAbs().maxCoeff() > tol * scale * scale * 10.0) {
                throw NotCommuting("a-actions " + std::to_string(i) + " and " +
                                   std::to_string(j) + " do not commute");
            }
        }
    }

    // Start from the eigenspaces of a fixed generic combination, then refine
    // by every individual action so coincidental collisions are split.
    std::vector<Group> groups;
    if (dn > 0) {
        groups.push_back({Mat::Identity(dn, dn), Vec(0)});
        static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        Mat combo = Mat::Zero(dn, dn);
        for (int j = 0; j < da; ++j) {
            combo += actions[j] / primes[j % 12] / (1.0 + j / 12);
        }
        std::vector<Mat> passes;
        if (da > 1) passes.push_back(combo);
        for (int j = 0; j < da; ++j) passes.push_back(actions[j]);

        for (const Mat& action : passes) {
            std::vector<Group> refined;
            for (const Group& grp : groups) {
                Mat sub = grp.basis.transpose() * action * grp.basis;
                sub = 0.5 * (sub + sub.transpose());
                Eigen::SelfAdjointEigenSolver<Mat> es(sub);
                for (const auto& [start, len] : cluster_ranges(es.eigenvalues(), tol)) {
                    refined.push_back(
                        {grp.basis * es.eigenvectors().middleCols(start, len), Vec(0)});
                }
            }
            groups = std::move(refined);
        }
    }

    // Weight values and the verification that each group is a joint eigenspace.
    for (auto& grp : groups) {
        grp.weight = Vec(da);
        for (int j = 0; j < da; ++j) {
            const Mat sub = grp.basis.transpose() * actions[j] * grp.basis;
            grp.weight(j) = sub.trace() / static_cast<double>(grp.basis.cols());
            const Mat dev =
                actions[j] * grp.basis - grp.weight(j) * grp.basis;
            if (dev.cwiseAbs().maxCoeff() > tol * scale * 100.0) {
                throw NotCommuting("joint diagonalization failed to isolate a weight space");
            }
        }
    }

    std::sort(groups.begin(), groups.end(), [tol](const Group& x, const Group& y) {
        return weight_less(x.weight, y.weight, tol);
    });

    WeightDecomposition wd;
    wd.a_basis = a_basis;
    for (const auto& grp : groups) {
        wd.weights.push_back(grp.weight);
        wd.weight_spaces.push_back(n_basis * grp.basis);
    }
    return wd;
}

namespace {

/// Exact LP by vertex enumeration: maximize r subject to
/// w_m . A - r >= 0 for all normalized weights and -1 <= A_i <= 1.
struct VertexLP {
    std::vector<Vec> rows;  ///< constraint normals over (A, r)
    std::vector<double> rhs;
    int dim = 0;  ///< number of variables = dim_a + 1

    bool feasible(const Vec& x) const {
        for (std::size_t m = 0; m < rows.size(); ++m) {
            if (rows[m].dot(x) < rhs[m] - 1e-9) return false;
        }
        return true;
    }
};

std::optional<Vec> best_vertex(const VertexLP& lp) {
    const int d = lp.dim;
    const int n = static_cast<int>(lp.rows.size());
    std::vector<int> pick(d);
    std::optional<Vec> best;
    double best_r = -std::numeric_limits<double>::infinity();
    std::vector<Vec> optimal;

    std::vector<int> indices(d);
    // Iterative enumeration of all d-subsets of the n constraints.
    for (int i = 0; i < d; ++i) indices[i] = i;
    if (n < d) return std::nullopt;
    while (true) {
        Mat A(d, d);
        Vec b(d);
        for (int i = 0; i < d; ++i) {
            A.row(i) = lp.rows[indices[i]].transpose();
            b(i) = lp.rhs[indices[i]];
        }
        Eigen::FullPivLU<Mat> lu(A);
        if (lu.isInvertible()) {
            const Vec x = lu.solve(b);
            if (lp.feasible(x)) {
                const double r = x(d - 1);
                if (r > best_r + 1e-12) {
                    best_r = r;
                    optimal.clear();
                    optimal.push_back(x);
                } else if (r > best_r - 1e-12) {
                    optimal.push_back(x);
                }
            }
        }
        // Advance the combination.
        int pos = d - 1;
        while (pos >= 0 && indices[pos] == n - d + pos) --pos;
        if (pos < 0) break;
        ++indices[pos];
        for (int i = pos + 1; i < d; ++i) indices[i] = indices[i - 1] + 1;
    }
    (void)pick;
    if (optimal.empty()) return std::nullopt;
    Vec avg = Vec::Zero(d);
    for (const Vec& v : optimal) avg += v;
    avg /= static_cast<double>(optimal.size());
    avg(d - 1) = best_r;
    return avg;
}

/// Fallback for large instances: projected subgradient ascent on
/// f(A) = min_m w_m . A over the unit box.
Vec subgradient_center(const std::vector<Vec>& weights, int da) {
    Vec A = Vec::Zero(da);
    Vec best = A;
    double best_f = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200000; ++k) {
        int arg = 0;
        double f = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < weights.size(); ++m) {
            const double v = weights[m].dot(A);
            if (v < f) {
                f = v;
                arg = static_cast<int>(m);
            }
        }
        if (f > best_f) {
            best_f = f;
            best = A;
        }
        A += weights[arg] / std::sqrt(1.0 + k);
        A = A.cwiseMax(-1.0).cwiseMin(1.0);
    }
    return best;
}

}  // namespace

Vec positive_derivation(const WeightDecomposition& wd, double tol) {
    const int da = wd.dim_a();
    if (da == 0 || wd.weights.empty()) {
        throw NoPositiveDerivation("the abelian part or the weight list is empty");
    }

    std::vector<Vec> normalized;
    for (const Vec& w : wd.weights) {
        const double norm = w.norm();
        if (norm <= tol) {
            throw NoPositiveDerivation("a weight vanishes identically on a");
        }
        normalized.push_back(w / norm);
    }

    const int n_constraints = static_cast<int>(normalized.size()) + 2 * da;
    // Rough count of d-subsets; fall back to ascent when enumeration is big.
    double combos = 1.0;
    for (int i = 0; i < da + 1; ++i) combos *= double(n_constraints - i) / double(i + 1);

    Vec A;
    if (combos <= 2e5) {
        VertexLP lp;
        lp.dim = da + 1;
        for (const Vec& w : normalized) {
            Vec row(da + 1);
            row.head(da) = w;
            row(da) = -1.0;
            lp.rows.push_back(row);
            lp.rhs.push_back(0.0);
        }
        for (int i = 0; i < da; ++i) {
            Vec up = Vec::Zero(da + 1);
            up(i) = -1.0;
            lp.rows.push_back(up);
            lp.rhs.push_back(-1.0);  // A_i <= 1
            Vec down = Vec::Zero(da + 1);
            down(i) = 1.0;
            lp.rows.push_back(down);
            lp.rhs.push_back(-1.0);  // A_i >= -1
        }
        const auto vertex = best_vertex(lp);
        if (!vertex || (*vertex)(da) <= tol) {
            throw NoPositiveDerivation("the positive weight cone is empty");
        }
        A = vertex->head(da);
    } else {
        A = subgradient_center(normalized, da);
        double worst = std::numeric_limits<double>::infinity();
        for (const Vec& w : normalized) worst = std::min(worst, w.dot(A));
        if (worst <= tol) {
            throw NoPositiveDerivation("the positive weight cone is empty");
        }
    }
    return A;
}

namespace {

/// Shared tail of the two grading constructors: positivity, grouping, and
/// bracket-compatibility verification.
Grading finish_grading(const MetricLieAlgebra& alg,
                       WeightDecomposition wd,
                       Vec derivation_element,
                       const std::vector<double>& ws_values,
                       double tol) {
    const double scale = 1.0 + alg.structure_scale();
    const int count = static_cast<int>(wd.weights.size());

    for (double v : ws_values) {
        if (v <= tol * (1.0 + std::abs(v))) {
            throw NotPositive("grading value " + format_double(v) + " is not strictly positive");
        }
    }

    // Cluster the values ascending.
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&ws_values](int x, int y) { return ws_values[x] < ws_values[y]; });

    Grading g;
    g.wd = std::move(wd);
    g.derivation_element = std::move(derivation_element);
    g.ws_level.assign(count, -1);
    for (int rank = 0; rank < count; ++rank) {
        const int m = order[rank];
        if (g.eigenvalues.empty() ||
            !weights_coincide(g.eigenvalues.back(), ws_values[m], tol)) {
            g.eigenvalues.push_back(ws_values[m]);
        }
        g.ws_level[m] = static_cast<int>(g.eigenvalues.size()) - 1;
    }

    const int dim = alg.dim();
    for (int level = 0; level < static_cast<int>(g.eigenvalues.size()); ++level) {
        int cols = 0;
        for (int m = 0; m < count; ++m) {
            if (g.ws_level[m] == level) cols += static_cast<int>(g.wd.weight_spaces[m].cols());
        }
        Mat E(dim, cols);
        int at = 0;
        for (int m = 0; m < count; ++m) {
            if (g.ws_level[m] != level) continue;
            E.middleCols(at, g.wd.weight_spaces[m].cols()) = g.wd.weight_spaces[m];
            at += static_cast<int>(g.wd.weight_spaces[m].cols());
        }
        g.eigenspaces.push_back(std::move(E));
    }

    // Bracket compatibility [n_i, n_j] within n_{i+j} (empty target means the
    // bracket must vanish); the top eigenspace is automatically central.
    const int k = g.levels();
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const double target = g.eigenvalues[i] + g.eigenvalues[j];
            int match = -1;
            for (int l = 0; l < k; ++l) {
                if (weights_coincide(g.eigenvalues[l], target, tol)) match = l;
            }
            const Mat& U = g.eigenspaces[i];
            const Mat& V = g.eigenspaces[j];
            for (Eigen::Index p = 0; p < U.cols(); ++p) {
                for (Eigen::Index q = 0; q < V.cols(); ++q) {
                    Vec b = alg.bracket(U.col(p), V.col(q));
                    if (match >= 0) {
                        b -= g.eigenspaces[match] *
                             (g.eigenspaces[match].transpose() * (alg.gram() * b));
                    }
                    if (b.cwiseAbs().maxCoeff() > tol * scale * 10.0) {
                        throw GradingIncompatible(
                            "bracket of eigenspaces " + std::to_string(i) + ", " +
                            std::to_string(j) + " leaves the graded component (residual " +
                            format_double(b.cwiseAbs().maxCoeff()) + ")");
                    }
                }
            }
        }
    }

    return g;
}

}  // namespace

Grading grading(const MetricLieAlgebra& alg,
                const SolvableSplit& split,
                const Vec& A_coeffs,
                double tol) {
    WeightDecomposition wd = weight_decomposition(alg, split, tol);
    if (A_coeffs.size() != wd.dim_a()) {
        throw DimensionMismatch("grading: coefficient vector must match the a-basis size");
    }
    std::vector<double> values;
    values.reserve(wd.weights.size());
    for (const Vec& w : wd.weights) values.push_back(w.dot(A_coeffs));
    return finish_grading(alg, std::move(wd), A_coeffs, values, tol);
}

Grading grading(const MetricLieAlgebra& alg, const SolvableSplit& split, double tol) {
    WeightDecomposition wd = weight_decomposition(alg, split, tol);
    const Vec A = positive_derivation(wd, tol);
    std::vector<double> values;
    values.reserve(wd.weights.size());
    for (const Vec& w : wd.weights) values.push_back(w.dot(A));
    return finish_grading(alg, std::move(wd), A, values, tol);
}

Grading grading_from_derivation(const MetricLieAlgebra& alg, const Mat& D, double tol) {
    const int dim = alg.dim();
    if (D.rows() != dim || D.cols() != dim) {
        throw DimensionMismatch("grading_from_derivation: D must be dim x dim");
    }
    const double scale = 1.0 + alg.structure_scale() + D.cwiseAbs().maxCoeff();

    const Mat sym = alg.gram() * D;
    if ((sym - sym.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
        throw NotSymmetric("derivation is not symmetric for the inner product");
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const Vec lhs = D * alg.bracket(Vec::Unit(dim, i), Vec::Unit(dim, j));
            const Vec rhs = alg.bracket(D.col(i), Vec::Unit(dim, j)) +
                            alg.bracket(Vec::Unit(dim, i), D.col(j));
            if ((lhs - rhs).cwiseAbs().maxCoeff() > tol * scale) {
                throw NotDerivation("Leibniz rule fails on basis pair (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }

    // Eigenspaces of D, computed in gram-orthonormal coordinates.
    const Mat basis = gram_orthonormalize(Mat::Identity(dim, dim), alg.gram());
    Mat M = basis.transpose() * alg.gram() * D * basis;
    M = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(M);

    WeightDecomposition wd;
    wd.a_basis = Mat(dim, 0);
    std::vector<double> values;
    for (const auto& [start, len] : cluster_ranges(es.eigenvalues(), tol)) {
        wd.weights.push_back(Vec(0));
        wd.weight_spaces.push_back(basis * es.eigenvectors().middleCols(start, len));
        values.push_back(es.eigenvalues().segment(start, len).mean());
    }
    return finish_grading(alg, std::move(wd), Vec(0), values, tol);
}

QuotientResult quotient(const MetricLieAlgebra& alg,
                        const SolvableSplit& split,
                        const Grading& g,
                        int i,
                        double tol) {
    const int k = g.levels();
    if (i < 1 || i > k) {
        throw DimensionMismatch("quotient index must lie between 1 and the number of levels");
    }
    const int keep_levels = k - (i - 1);
    const int dim = alg.dim();
    const int da = g.wd.dim_a();

    int q = da;
    for (int m = 0; m < g.wd.count(); ++m) {
        if (g.ws_level[m] < keep_levels) q += static_cast<int>(g.wd.weight_spaces[m].cols());
    }

    Mat Q(dim, q);
    Q.leftCols(da) = g.wd.a_basis;
    int at = da;
    for (int level = 0; level < keep_levels; ++level) {
        for (int m = 0; m < g.wd.count(); ++m) {
            if (g.ws_level[m] != level) continue;
            Q.middleCols(at, g.wd.weight_spaces[m].cols()) = g.wd.weight_spaces[m];
            at += static_cast<int>(g.wd.weight_spaces[m].cols());
        }
    }

    const Mat projection = Q.transpose() * alg.gram();

    std::vector<Mat> ad_q(q);
    for (int c = 0; c < q; ++c) {
        ad_q[c] = projection * alg.ad_of(Q.col(c)) * Q;
    }

    QuotientResult result{
        MetricLieAlgebra::from_ad(std::move(ad_q), Mat::Identity(q, q)),
        SolvableSplit{},
        projection};
    for (int c = 0; c < da; ++c) result.split.a_indices.push_back(c);
    for (int c = da; c < q; ++c) result.split.n_indices.push_back(c);
    (void)tol;
    (void)split;
    return result;
}

}  // namespace solvembed
