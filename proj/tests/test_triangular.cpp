#include <doctest.h>

#include <cmath>

#include "solvembed/triangular.hpp"
#include "solvembed/errors.hpp"
#include "solvembed/representation.hpp"
#include "solvembed/util.hpp"

using namespace solvembed;

namespace {
bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("lower-triangular predicates") {
    Mat X(2, 2);
    X << 1.0, 0.0, 2.0, 3.0;
    CHECK(is_lower(X));
    CHECK_FALSE(is_strictly_lower(X));

    Mat S(2, 2);
    S << 0.0, 0.0, 5.0, 0.0;
    CHECK(is_strictly_lower(S));

    Mat U(2, 2);
    U << 0.0, 1.0, 0.0, 0.0;
    CHECK_FALSE(is_lower(U));
    CHECK(is_lower(U, 2.0));  // generous tolerance admits the entry
}

TEST_CASE("inner products on the triangular target") {
    Mat X(2, 2), Y(2, 2);
    X << 1.0, 0.0, 2.0, 3.0;
    Y << 0.0, 0.0, 5.0, 7.0;

    // diagonal part contributes twice, the strictly lower part once
    CHECK(near(einstein_ip(X, Y), 52.0, 1e-14));
    CHECK(near(frobenius_ip(X, Y), 31.0, 1e-14));
    CHECK(near(einstein_ip(X, X), 2.0 * (1.0 + 9.0) + 4.0, 1e-14));

    CHECK(near(target_ip(MetricKind::Einstein, X, Y), 52.0, 1e-14));
    CHECK(near(target_ip(MetricKind::Frobenius, X, Y), 31.0, 1e-14));

    Mat U(2, 2);
    U << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS((void)einstein_ip(U, Y), NotLowerTriangular);
    CHECK_THROWS_AS((void)target_ip(MetricKind::Einstein, Y, U), NotLowerTriangular);
    // the Frobenius form is defined for any matrix
    CHECK(near(frobenius_ip(U, U), 1.0, 1e-14));
}

TEST_CASE("metric kind names round-trip") {
    CHECK(to_string(MetricKind::Einstein) == "einstein");
    CHECK(to_string(MetricKind::Frobenius) == "frobenius");
    CHECK(metric_kind_from_string("einstein") == MetricKind::Einstein);
    CHECK(metric_kind_from_string("frobenius") == MetricKind::Frobenius);
    CHECK_THROWS_AS((void)metric_kind_from_string("euclidean"), SchemaError);
}

TEST_CASE("lower Cholesky factor of an SPD form") {
    Mat F(2, 2);
    F << 4.0, 2.0, 2.0, 2.0;
    const Mat L = spd_lower_factor(F);
    CHECK(near(L(0, 0), 2.0, 1e-12));
    CHECK(near(L(1, 0), 1.0, 1e-12));
    CHECK(near(L(1, 1), 1.0, 1e-12));
    CHECK(near(L(0, 1), 0.0, 0.0));
    CHECK(((L * L.transpose()) - F).cwiseAbs().maxCoeff() <= 1e-12);

    Mat bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS((void)spd_lower_factor(bad), NotPositiveDefinite);
}

TEST_CASE("symmetric eigenvalue helpers and SPD guard") {
    Mat M(2, 2);
    M << 2.0, 1.0, 1.0, 2.0;
    CHECK(near(min_eigenvalue_sym(M), 1.0, 1e-12));
    CHECK(near(max_eigenvalue_sym(M), 3.0, 1e-12));
    CHECK_NOTHROW(require_spd(M, "test form"));

    Mat Z = Mat::Zero(2, 2);
    CHECK_THROWS_AS(require_spd(Z, "test form"), NotPositiveDefinite);

    Mat NS(2, 2);
    NS << 1.0, 5.0, 0.0, 1.0;
    CHECK_THROWS_AS(require_spd(NS, "test form"), NotPositiveDefinite);
}

TEST_CASE("gram orthonormalization") {
    Mat G(2, 2);
    G << 4.0, 0.0, 0.0, 1.0;
    const Mat F = gram_orthonormalize(Mat::Identity(2, 2), G);
    const Mat should_be_id = F.transpose() * G * F;
    CHECK((should_be_id - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    Mat dep(2, 2);
    dep << 1.0, 2.0, 1.0, 2.0;  // second column dependent on the first
    CHECK_THROWS_AS((void)gram_orthonormalize(dep, Mat::Identity(2, 2)), DimensionMismatch);
}

TEST_CASE("deterministic splitmix stream") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());
    SplitMix64 c(42);
    for (int i = 0; i < 64; ++i) {
        const int v = c.next_int(-2, 2);
        CHECK(v >= -2);
        CHECK(v <= 2);
        const double d = SplitMix64(static_cast<std::uint64_t>(i)).next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}
