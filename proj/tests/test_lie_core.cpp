#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "solvembed/catalog.hpp"
#include "solvembed/errors.hpp"
#include "solvembed/lie_algebra.hpp"
#include "solvembed/weights.hpp"

using namespace solvembed;

namespace {

MetricLieAlgebra heisenberg3() {
    return MetricLieAlgebra::from_brackets(3, {{0, 1, 2, 1.0}}, Mat::Identity(3, 3),
                                           {"X", "Y", "Z"});
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("bracket construction and access") {
    const MetricLieAlgebra h3 = heisenberg3();
    CHECK(h3.dim() == 3);
    CHECK(h3.labels()[2] == "Z");

    // structure(i, j, k): coefficient of e_k in [e_i, e_j]
    CHECK(near(h3.structure(0, 1, 2), 1.0, 0.0));
    CHECK(near(h3.structure(1, 0, 2), -1.0, 0.0));
    CHECK(near(h3.structure(0, 2, 1), 0.0, 0.0));

    Vec x = Vec::Zero(3), y = Vec::Zero(3);
    x(0) = 2.0;
    y(1) = 3.0;
    const Vec z = h3.bracket(x, y);
    CHECK(near(z(2), 6.0, 1e-14));
    CHECK(near(h3.ip(x, x), 4.0, 1e-14));

    const Mat adx = h3.ad_of(x);
    CHECK(near(adx(2, 1), 2.0, 1e-14));
}

TEST_CASE("bracket table rejections") {
    const Mat I3 = Mat::Identity(3, 3);
    // i >= j
    CHECK_THROWS_AS((void)MetricLieAlgebra::from_brackets(3, {{1, 0, 2, 1.0}}, I3),
                    SchemaError);
    // duplicate coefficient
    CHECK_THROWS_AS((void)MetricLieAlgebra::from_brackets(
                        3, {{0, 1, 2, 1.0}, {0, 1, 2, 0.5}}, I3),
                    SchemaError);
    // index out of range
    CHECK_THROWS_AS((void)MetricLieAlgebra::from_brackets(3, {{0, 1, 5, 1.0}}, I3),
                    SchemaError);
    // gram must be symmetric positive definite
    Mat bad = I3;
    bad(2, 2) = -1.0;
    CHECK_THROWS_AS((void)MetricLieAlgebra::from_brackets(3, {{0, 1, 2, 1.0}}, bad),
                    NotPositiveDefinite);
}

TEST_CASE("structural validation") {
    const ValidationReport ok = validate_algebra(heisenberg3());
    CHECK(ok.solvable);
    CHECK(ok.nilpotent);
    CHECK(ok.completely_solvable);
    CHECK(ok.jacobi_residual <= 1e-14);

    // [e0,e1]=e2, [e0,e2]=e0 violates the Jacobi identity
    const MetricLieAlgebra broken = MetricLieAlgebra::from_brackets(
        3, {{0, 1, 2, 1.0}, {0, 2, 0, 1.0}}, Mat::Identity(3, 3));
    CHECK_THROWS_AS((void)validate_algebra(broken), JacobiViolation);

    // so(3) is not solvable
    const MetricLieAlgebra so3 = MetricLieAlgebra::from_brackets(
        3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {0, 2, 1, -1.0}}, Mat::Identity(3, 3));
    CHECK_THROWS_AS((void)validate_algebra(so3), NotSolvable);

    // rotation action: solvable but ad e0 has eigenvalues +-i
    const MetricLieAlgebra rot = MetricLieAlgebra::from_brackets(
        3, {{0, 1, 2, 1.0}, {0, 2, 1, -1.0}}, Mat::Identity(3, 3));
    const ValidationReport r = validate_algebra(rot);
    CHECK(r.solvable);
    CHECK_FALSE(r.completely_solvable);
    CHECK_FALSE(r.nilpotent);
}

TEST_CASE("split conditions on the extended Heisenberg algebra") {
    const CatalogEntry e = example("heisenberg_ext");
    REQUIRE(e.split.has_value());
    const ConditionsReport rep = validate_split(e.alg, *e.split);
    CHECK(rep.all_passed());
    CHECK(rep.checks.size() == 7);
    for (const char* name :
         {"split_complementary", "split_orthogonal", "i_completely_solvable",
          "ii_nilradical", "iii_abelian_injective", "iv_symmetric_action",
          "v_positive_derivation"}) {
        const ConditionCheck* c = rep.find(name);
        REQUIRE(c != nullptr);
        CHECK(c->passed);
    }

    // swapping a nilpotent generator into the abelian part breaks the split
    SolvableSplit wrong{{1}, {0, 2, 3}};
    const ConditionsReport bad = validate_split(e.alg, wrong);
    CHECK_FALSE(bad.all_passed());
    const ConditionCheck* nil = bad.find("ii_nilradical");
    REQUIRE(nil != nullptr);
    CHECK_FALSE(nil->passed);

    // overlapping parts short-circuit to the partition check alone
    SolvableSplit overlap{{0, 1}, {1, 2, 3}};
    const ConditionsReport part = validate_split(e.alg, overlap);
    CHECK(part.checks.size() == 1);
    CHECK_FALSE(part.all_passed());
    CHECK(part.summary().find("split_complementary") != std::string::npos);
}

TEST_CASE("weight decomposition of the extended Heisenberg algebra") {
    const CatalogEntry e = example("heisenberg_ext");
    const WeightDecomposition wd = weight_decomposition(e.alg, *e.split);
    CHECK(wd.dim_a() == 1);
    CHECK(wd.dim_n() == 3);
    REQUIRE(wd.count() == 2);

    std::vector<std::pair<double, int>> spaces;
    for (int m = 0; m < wd.count(); ++m) {
        REQUIRE(wd.weights[m].size() == 1);
        spaces.emplace_back(wd.weights[m](0), static_cast<int>(wd.weight_spaces[m].cols()));
    }
    std::sort(spaces.begin(), spaces.end());
    CHECK(near(spaces[0].first, 1.0, 1e-12));
    CHECK(spaces[0].second == 2);
    CHECK(near(spaces[1].first, 2.0, 1e-12));
    CHECK(spaces[1].second == 1);

    const Vec A = positive_derivation(wd);
    for (int m = 0; m < wd.count(); ++m) CHECK(wd.weights[m].dot(A) > 0.0);
}

TEST_CASE("empty positive weight cone is rejected") {
    // [A, X] = X, [A, Y] = -Y: weights +1 and -1 admit no positive element
    const MetricLieAlgebra alg = MetricLieAlgebra::from_brackets(
        3, {{0, 1, 1, 1.0}, {0, 2, 2, -1.0}}, Mat::Identity(3, 3));
    const SolvableSplit split{{0}, {1, 2}};
    const WeightDecomposition wd = weight_decomposition(alg, split);
    CHECK(wd.count() == 2);
    CHECK_THROWS_AS((void)positive_derivation(wd), NoPositiveDerivation);
}

TEST_CASE("grading levels and eigenvalues") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);
    REQUIRE(g.levels() == 2);
    CHECK(g.eigenvalues[0] < g.eigenvalues[1]);
    CHECK(near(g.eigenvalues[1] / g.eigenvalues[0], 2.0, 1e-9));
    CHECK(g.eigenspace_dim(0) == 2);
    CHECK(g.eigenspace_dim(1) == 1);
}

TEST_CASE("grading from an explicit derivation") {
    const MetricLieAlgebra h3 = heisenberg3();
    Mat D = Mat::Zero(3, 3);
    D.diagonal() << 1.0, 1.0, 2.0;
    const Grading g = grading_from_derivation(h3, D);
    REQUIRE(g.levels() == 2);
    CHECK(near(g.eigenvalues[0], 1.0, 1e-12));
    CHECK(near(g.eigenvalues[1], 2.0, 1e-12));
    CHECK(g.wd.dim_a() == 0);

    Mat notder = Mat::Zero(3, 3);
    notder.diagonal() << 1.0, 2.0, 2.0;  // Leibniz fails on (X, Y)
    CHECK_THROWS_AS((void)grading_from_derivation(h3, notder), NotDerivation);

    Mat notsym = D;
    notsym(0, 1) = 1.0;
    CHECK_THROWS_AS((void)grading_from_derivation(h3, notsym), NotSymmetric);

    CHECK_THROWS_AS((void)grading_from_derivation(h3, Mat(-D)), NotPositive);
}

TEST_CASE("quotient by the top of the grading") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);

    const QuotientResult q = quotient(e.alg, *e.split, g, 2);
    CHECK(q.alg.dim() == 3);
    CHECK(q.split.a_indices == std::vector<int>{0});
    // the derived generator Z is gone, so the nil part becomes abelian
    for (int k = 0; k < 3; ++k) CHECK(near(q.alg.structure(1, 2, k), 0.0, 1e-12));
    // the abelian generator still acts with weight one on both survivors
    CHECK(near(std::abs(q.alg.structure(0, 1, 1)), 1.0, 1e-9));
    CHECK(q.projection.rows() == 3);
    CHECK(q.projection.cols() == 4);

    // i = 1 keeps everything
    const QuotientResult full = quotient(e.alg, *e.split, g, 1);
    CHECK(full.alg.dim() == 4);
}
