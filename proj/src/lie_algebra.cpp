#include "solvembed/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "solvembed/weights.hpp"

namespace solvembed {

namespace {

/// Orthonormal basis of the column space (plain dot product; rank decisions
/// use a relative threshold).
Mat column_space_basis(const Mat& M, double tol) {
    if (M.cols() == 0 || M.cwiseAbs().maxCoeff() <= tol) {
        return Mat(M.rows(), 0);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(M);
    qr.setThreshold(tol);
    const Eigen::Index r = qr.rank();
    if (r == 0) return Mat(M.rows(), 0);
    return qr.householderQ() * Mat::Identity(M.rows(), r);
}

/// Columns: brackets of all pairs (U.col(p), V.col(q)).
Mat bracket_span(const MetricLieAlgebra& alg, const Mat& U, const Mat& V) {
    Mat out(alg.dim(), U.cols() * V.cols());
    Eigen::Index c = 0;
    for (Eigen::Index p = 0; p < U.cols(); ++p) {
        for (Eigen::Index q = 0; q < V.cols(); ++q) {
            out.col(c++) = alg.bracket(U.col(p), V.col(q));
        }
    }
    return out;
}

}  // namespace

MetricLieAlgebra MetricLieAlgebra::from_brackets(int dim,
                                                 const std::vector<BracketEntry>& entries,
                                                 Mat gram,
                                                 std::vector<std::string> labels) {
    if (dim <= 0) throw SchemaError("algebra dimension must be positive");
    if (gram.rows() != dim || gram.cols() != dim) {
        throw DimensionMismatch("gram matrix must be dim x dim");
    }
    if (!labels.empty() && static_cast<int>(labels.size()) != dim) {
        throw SchemaError("label count must match the dimension");
    }

    std::vector<Mat> ad(dim, Mat::Zero(dim, dim));
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : entries) {
        if (e.i < 0 || e.i >= dim || e.j < 0 || e.j >= dim || e.k < 0 || e.k >= dim) {
            throw SchemaError("bracket entry index out of range");
        }
        if (e.i >= e.j) {
            throw SchemaError("bracket entries must satisfy i < j");
        }
        if (!seen.insert({e.i, e.j, e.k}).second) {
            throw SchemaError("duplicate bracket entry for (i, j, k)");
        }
        ad[e.i](e.k, e.j) = e.value;
        ad[e.j](e.k, e.i) = -e.value;
    }

    require_spd(gram, "metric Lie algebra gram matrix");

    MetricLieAlgebra alg;
    alg.dim_ = dim;
    alg.ad_ = std::move(ad);
    alg.gram_ = std::move(gram);
    alg.labels_ = std::move(labels);
    alg.structure_scale_ = 0.0;
    for (const auto& m : alg.ad_) {
        alg.structure_scale_ = std::max(alg.structure_scale_, m.cwiseAbs().maxCoeff());
    }
    return alg;
}

MetricLieAlgebra MetricLieAlgebra::from_ad(std::vector<Mat> ad,
                                           Mat gram,
                                           std::vector<std::string> labels) {
    const int dim = static_cast<int>(ad.size());
    if (dim <= 0) throw SchemaError("algebra dimension must be positive");
    double scale = 0.0;
    for (const auto& m : ad) {
        if (m.rows() != dim || m.cols() != dim) {
            throw DimensionMismatch("adjoint matrices must be dim x dim");
        }
        scale = std::max(scale, m.cwiseAbs().maxCoeff());
    }
    // Antisymmetry of the induced structure tensor: ad[i](k, j) = -ad[j](k, i).
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            for (int k = 0; k < dim; ++k) {
                if (std::abs(ad[i](k, j) + ad[j](k, i)) > 1e-12 * (1.0 + scale)) {
                    throw SchemaError("adjoint matrices do not define an antisymmetric bracket");
                }
            }
        }
    }
    if (gram.rows() != dim || gram.cols() != dim) {
        throw DimensionMismatch("gram matrix must be dim x dim");
    }
    require_spd(gram, "metric Lie algebra gram matrix");

    MetricLieAlgebra alg;
    alg.dim_ = dim;
    alg.ad_ = std::move(ad);
    alg.gram_ = std::move(gram);
    alg.labels_ = std::move(labels);
    alg.structure_scale_ = scale;
    return alg;
}

Vec MetricLieAlgebra::bracket(const Vec& x, const Vec& y) const {
    if (x.size() != dim_ || y.size() != dim_) {
        throw DimensionMismatch("bracket: vectors must have the algebra's dimension");
    }
    Vec out = Vec::Zero(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (x(i) != 0.0) out.noalias() += x(i) * (ad_[i] * y);
    }
    return out;
}

Mat MetricLieAlgebra::ad_of(const Vec& x) const {
    if (x.size() != dim_) {
        throw DimensionMismatch("ad_of: vector must have the algebra's dimension");
    }
    Mat out = Mat::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        if (x(i) != 0.0) out.noalias() += x(i) * ad_[i];
    }
    return out;
}

MetricLieAlgebra MetricLieAlgebra::with_gram(Mat gram) const {
    return from_ad(ad_, std::move(gram), labels_);
}

ValidationReport validate_algebra(const MetricLieAlgebra& alg, double tol) {
    const int n = alg.dim();
    const double scale = 1.0 + alg.structure_scale() * alg.structure_scale();
    ValidationReport report;

    // Jacobi identity on basis triples.
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Vec bij = alg.ad(i).col(j);
            for (int k = j + 1; k < n; ++k) {
                Vec cyc = alg.bracket(bij, Vec::Unit(n, k));
                cyc += alg.bracket(alg.ad(j).col(k), Vec::Unit(n, i));
                cyc += alg.bracket(alg.ad(k).col(i), Vec::Unit(n, j));
                worst = std::max(worst, cyc.cwiseAbs().maxCoeff());
            }
        }
    }
    report.jacobi_residual = worst;
    if (worst > tol * scale) {
        throw JacobiViolation("Jacobi identity fails with residual " + format_double(worst));
    }

    const double rank_tol = 1e-10;

    // Derived series.
    Mat current = Mat::Identity(n, n);
    int steps = 0;
    while (current.cols() > 0) {
        Mat next = column_space_basis(bracket_span(alg, current, current), rank_tol);
        ++steps;
        if (next.cols() >= current.cols()) {
            throw NotSolvable("derived series stabilizes at dimension " +
                              std::to_string(current.cols()));
        }
        current = next;
    }
    report.derived_series_length = steps;
    report.solvable = true;

    // Lower central series (nilpotency flag).
    {
        Mat all = Mat::Identity(n, n);
        Mat c = column_space_basis(bracket_span(alg, all, all), rank_tol);
        bool nilpotent = true;
        int guard = 0;
        while (c.cols() > 0) {
            Mat next = column_space_basis(bracket_span(alg, all, c), rank_tol);
            if (next.cols() >= c.cols() || ++guard > n + 1) {
                nilpotent = false;
                break;
            }
            c = next;
        }
        report.nilpotent = nilpotent;
    }

    // Complete solvability: real spectrum of ad x, witnessed on the basis and
    // a fixed family of pseudo-random combinations.
    {
        bool all_real = true;
        std::vector<Vec> samples;
        for (int i = 0; i < n; ++i) samples.push_back(Vec::Unit(n, i));
        SplitMix64 rng(0x5EED5EED5EEDULL);
        for (int s = 0; s < 8; ++s) {
            Vec v(n);
            for (int i = 0; i < n; ++i) v(i) = 2.0 * rng.next_double() - 1.0;
            samples.push_back(v);
        }
        for (const Vec& v : samples) {
            const Mat advm = alg.ad_of(v);
            // Computed eigenvalues of a defective matrix scatter on a circle of
            // radius ~ (eps * ||M||)^(1/k) around the true value (k = Jordan
            // chain length), so nilpotent ad's routinely show imaginary parts
            // far above any fixed tolerance.  Inside that ambiguity radius
            // around zero realness cannot be refuted in floating point; only
            // eigenvalues outside it count as witnesses.  (Consequently a
            // rotation through an angle below the radius passes as real --
            // indistinguishable from a nilpotent at this precision.)
            const double cluster_radius =
                8.0 * (1.0 + advm.norm()) *
                std::pow(std::numeric_limits<double>::epsilon(),
                         1.0 / static_cast<double>(std::max(n, 2)));
            Eigen::EigenSolver<Mat> es(advm, /*computeEigenvectors=*/false);
            for (Eigen::Index e = 0; e < n; ++e) {
                const auto lambda = es.eigenvalues()(e);
                if (std::abs(lambda.imag()) > tol * (1.0 + std::abs(lambda)) &&
                    std::abs(lambda) > cluster_radius) {
                    all_real = false;
                    break;
                }
            }
            if (!all_real) break;
        }
        report.completely_solvable = all_real;
    }

    return report;
}

bool ConditionsReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ConditionCheck& c) { return c.passed; });
}

const ConditionCheck* ConditionsReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::string ConditionsReport::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.passed ? "pass" : "FAIL") << "  " << c.name;
        if (!c.witness.empty()) os << "  (" << c.witness << ")";
        os << "\n";
    }
    return os.str();
}

ConditionsReport validate_split(const MetricLieAlgebra& alg,
                                const SolvableSplit& split,
                                double tol) {
    const int n = alg.dim();
    const double scale = 1.0 + alg.structure_scale();
    ConditionsReport report;
    auto add = [&report](std::string name, bool passed, std::string witness = "") {
        report.checks.push_back({std::move(name), passed, std::move(witness)});
    };

    // Structural sanity of the index sets.
    {
        std::vector<int> seen(n, 0);
        bool ok = true;
        for (int idx : split.a_indices) {
            if (idx < 0 || idx >= n || seen[idx]++) ok = false;
        }
        for (int idx : split.n_indices) {
            if (idx < 0 || idx >= n || seen[idx]++) ok = false;
        }
        ok = ok && static_cast<int>(split.a_indices.size() + split.n_indices.size()) == n;
        add("split_complementary", ok, ok ? "" : "index sets must partition the basis");
        if (!ok) return report;  // everything below would be ill-posed
    }

    // a orthogonal to n under the inner product.
    {
        double worst = 0.0;
        for (int a : split.a_indices) {
            for (int m : split.n_indices) {
                worst = std::max(worst, std::abs(alg.gram()(a, m)));
            }
        }
        const double gscale = 1.0 + alg.gram().cwiseAbs().maxCoeff();
        add("split_orthogonal", worst <= tol * gscale,
            worst > tol * gscale ? "max <a, n> entry " + format_double(worst) : "");
    }

    // Base validation feeding condition (i).
    ValidationReport base;
    try {
        base = validate_algebra(alg, tol);
        add("i_completely_solvable", base.completely_solvable,
            base.completely_solvable ? "" : "some ad x has a non-real eigenvalue");
    } catch (const Error& e) {
        add("i_completely_solvable", false, e.what());
        return report;
    }

    // (ii) n is a nilpotent ideal containing [s, s].
    {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (int a : split.a_indices) {
                    worst = std::max(worst, std::abs(alg.structure(i, j, a)));
                }
            }
        }
        bool contains_derived = worst <= tol * scale;

        // Nilpotency of the bracket restricted to n.
        bool nilpotent = true;
        {
            Mat nbasis = Mat::Zero(n, split.n_indices.size());
            for (std::size_t c = 0; c < split.n_indices.size(); ++c) {
                nbasis(split.n_indices[c], static_cast<int>(c)) = 1.0;
            }
            Mat current = column_space_basis(bracket_span(alg, nbasis, nbasis), 1e-10);
            int guard = 0;
            while (current.cols() > 0) {
                Mat next = column_space_basis(bracket_span(alg, nbasis, current), 1e-10);
                if (next.cols() >= current.cols() || ++guard > n + 1) {
                    nilpotent = false;
                    break;
                }
                current = next;
            }
        }
        add("ii_nilradical", contains_derived && nilpotent,
            !contains_derived ? "[s, s] leaks outside n (max a-component " + format_double(worst) + ")"
                              : (!nilpotent ? "n is not nilpotent" : ""));
    }

    // (iii) a abelian and acting injectively on the algebra.
    {
        double worst = 0.0;
        for (std::size_t p = 0; p < split.a_indices.size(); ++p) {
            for (std::size_t q = p + 1; q < split.a_indices.size(); ++q) {
                worst = std::max(worst,
                                 alg.ad(split.a_indices[p])
                                     .col(split.a_indices[q])
                                     .cwiseAbs()
                                     .maxCoeff());
            }
        }
        const bool abelian = worst <= tol * scale;

        bool injective = !split.a_indices.empty();
        if (injective) {
            Mat stacked(n * n, split.a_indices.size());
            for (std::size_t c = 0; c < split.a_indices.size(); ++c) {
                const Mat& m = alg.ad(split.a_indices[c]);
                stacked.col(static_cast<int>(c)) =
                    Eigen::Map<const Vec>(m.data(), m.size());
            }
            Eigen::JacobiSVD<Mat> svd(stacked);
            injective = svd.singularValues().minCoeff() > tol * scale;
        }
        add("iii_abelian_injective", abelian && injective,
            !abelian ? "a is not abelian (residual " + format_double(worst) + ")"
                     : (!injective ? "some nonzero A in a has ad A = 0" : ""));
    }

    // (iv) ad A symmetric with respect to the inner product for all A in a.
    {
        double worst = 0.0;
        for (int a : split.a_indices) {
            const Mat M = alg.gram() * alg.ad(a);
            worst = std::max(worst, (M - M.transpose()).cwiseAbs().maxCoeff());
        }
        const double gscale = (1.0 + alg.gram().cwiseAbs().maxCoeff()) * scale;
        add("iv_symmetric_action", worst <= tol * gscale,
            worst > tol * gscale ? "max symmetry defect " + format_double(worst) : "");
    }

    // (v) existence of a positive derivation in a, delegated to the weight
    // decomposition machinery.
    {
        bool prerequisites = report.all_passed();
        if (!prerequisites) {
            add("v_positive_derivation", false, "prerequisite conditions failed");
        } else {
            try {
                const WeightDecomposition wd = weight_decomposition(alg, split, tol);
                const Vec A = positive_derivation(wd, tol);
                double min_value = std::numeric_limits<double>::infinity();
                for (const Vec& w : wd.weights) {
                    min_value = std::min(min_value, w.dot(A));
                }
                add("v_positive_derivation", true,
                    "min weight value " + format_double(min_value));
            } catch (const Error& e) {
                add("v_positive_derivation", false, e.what());
            }
        }
    }

    return report;
}

}  // namespace solvembed
