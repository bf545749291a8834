#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "solvembed/catalog.hpp"
#include "solvembed/embed.hpp"
#include "solvembed/errors.hpp"
#include "solvembed/verify.hpp"

using namespace solvembed;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool mentions(const std::vector<std::string>& failures, const std::string& needle) {
    for (const auto& f : failures)
        if (f.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("certificate accepts the constructed embedding") {
    const CatalogEntry e = example("heisenberg_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    const EmbeddingCertificate cert = certify(e.alg, r.rep, MetricKind::Einstein);
    CHECK(cert.accepted);
    CHECK(cert.failures.empty());
    CHECK(cert.N == 7);
    CHECK(near(cert.achieved_c, 16.0, 1e-9));
    CHECK(cert.summary().find("ACCEPTED") != std::string::npos);

    CHECK(check_homomorphism(e.alg, r.rep) <= 1e-12);
    CHECK(check_faithful(r.rep) > 1e-10);
    const auto [c_hat, residual] = check_isometry(e.alg, r.rep, MetricKind::Einstein);
    CHECK(near(c_hat, 16.0, 1e-9));
    CHECK(residual <= 1e-12);
}

TEST_CASE("faithfulness margin of the plane embedding") {
    const CatalogEntry e = example("rh(2)");
    const EmbedResult r = embed(e.alg, *e.split);
    CHECK(near(check_faithful(r.rep), 1.0, 1e-9));
}

TEST_CASE("tampered lower entry is rejected") {
    const CatalogEntry e = example("heisenberg_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    Representation bad = r.rep;
    bad.mats[1](3, 0) += 1e-3;
    const EmbeddingCertificate cert = certify(e.alg, bad, MetricKind::Einstein);
    CHECK_FALSE(cert.accepted);
    CHECK(!cert.failures.empty());
    CHECK(cert.summary().find("REJECTED") != std::string::npos);
}

TEST_CASE("tampered diagonal entry is rejected") {
    const CatalogEntry e = example("heisenberg_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    Representation bad = r.rep;
    bad.mats[0](0, 0) += 1e-3;
    const EmbeddingCertificate cert = certify(e.alg, bad, MetricKind::Einstein);
    CHECK_FALSE(cert.accepted);
}

TEST_CASE("image above the diagonal voids the pullback") {
    const CatalogEntry e = example("heisenberg_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    Representation bad = r.rep;
    bad.mats[0](0, bad.N - 1) += 1e-3;
    const EmbeddingCertificate cert = certify(e.alg, bad, MetricKind::Einstein);
    CHECK_FALSE(cert.accepted);
    CHECK(mentions(cert.failures, "triangular"));
    CHECK(std::isinf(cert.pullback_residual));
}

TEST_CASE("zero map fails faithfulness only") {
    const CatalogEntry e = example("heisenberg_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    Representation zero = r.rep;
    for (auto& m : zero.mats) m.setZero();
    const EmbeddingCertificate cert = certify(e.alg, zero, MetricKind::Einstein);
    CHECK_FALSE(cert.accepted);
    CHECK(cert.bracket_residual <= 1e-14);
    CHECK(near(cert.faithfulness_margin, 0.0, 1e-14));
    CHECK(mentions(cert.failures, "faithful"));
}

TEST_CASE("environment variable loosens the acceptance thresholds") {
    const CatalogEntry e = example("rh(2)");
    const EmbedResult r = embed(e.alg, *e.split);

    Representation bad = r.rep;
    bad.mats[1](1, 0) += 1e-4;

    const EmbeddingCertificate strict = certify(e.alg, bad, MetricKind::Einstein);
    CHECK_FALSE(strict.accepted);

    ::setenv("SOLVEMBED_TOL", "0.5", 1);
    const Tolerances loose = Tolerances::defaults();
    CHECK(near(loose.homomorphism, 0.5, 0.0));
    CHECK(near(loose.pullback, 0.5, 0.0));
    const EmbeddingCertificate lax = certify(e.alg, bad, MetricKind::Einstein, loose);
    CHECK(lax.accepted);
    ::unsetenv("SOLVEMBED_TOL");

    // malformed or non-positive values are ignored
    ::setenv("SOLVEMBED_TOL", "abc", 1);
    CHECK(near(Tolerances::defaults().homomorphism, 1e-9, 0.0));
    ::setenv("SOLVEMBED_TOL", "-1", 1);
    CHECK(near(Tolerances::defaults().pullback, 1e-8, 0.0));
    ::unsetenv("SOLVEMBED_TOL");
}
