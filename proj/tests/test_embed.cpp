#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "solvembed/catalog.hpp"
#include "solvembed/embed.hpp"
#include "solvembed/errors.hpp"
#include "solvembed/verify.hpp"

using namespace solvembed;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

MetricLieAlgebra heisenberg3() {
    return MetricLieAlgebra::from_brackets(3, {{0, 1, 2, 1.0}}, Mat::Identity(3, 3),
                                           {"X", "Y", "Z"});
}

}  // namespace

TEST_CASE("hyperbolic plane end-to-end") {
    const CatalogEntry e = example("rh(2)");
    const EmbedResult r = embed(e.alg, *e.split);

    CHECK(r.certificate.accepted);
    CHECK(r.rep.N == 2);
    CHECK(near(r.certificate.achieved_c, 2.0, 1e-12));
    CHECK(r.certificate.bracket_residual <= 1e-12);
    CHECK(r.certificate.pullback_residual <= 1e-12);
    CHECK(r.certificate.faithfulness_margin > 1e-10);

    // exact images: the abelian generator to diag(0, 1), the nilpotent one to
    // sqrt(2) times the elementary lower matrix (up to sign)
    const Mat& PA = r.rep.mats[0];
    CHECK(near(PA(0, 0), 0.0, 1e-12));
    CHECK(near(PA(1, 1), 1.0, 1e-12));
    CHECK(near(PA(1, 0), 0.0, 1e-12));
    const Mat& PX = r.rep.mats[1];
    CHECK(near(std::abs(PX(1, 0)), std::sqrt(2.0), 1e-12));
    CHECK(near(PX(0, 0), 0.0, 1e-12));
    CHECK(near(PX(1, 1), 0.0, 1e-12));
    CHECK(near(PX(0, 1), 0.0, 1e-12));

    REQUIRE(r.plan.stage_scales.size() == 1);
    CHECK(near(r.plan.stage_scales[0], std::log(2.0) / 2.0, 1e-12));
    CHECK(near(r.plan.min_feasible_t, 0.0, 1e-12));
    CHECK(near(r.plan.min_feasible_c, 2.0, 1e-12));
}

TEST_CASE("ordered basis of the extended Heisenberg algebra") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);
    const OrderedBasis ob = ordered_basis(e.alg, *e.split, g);

    CHECK(ob.dim() == 4);
    CHECK(ob.dim_a == 1);
    CHECK(ob.levels() == 2);
    CHECK(ob.prefix_dim(1) == 4);
    CHECK(ob.prefix_dim(2) == 3);
    CHECK(ob.level_of(0) == -1);
    CHECK(ob.level_of(1) == 0);
    CHECK(ob.level_of(3) == 1);
    CHECK(near(ob.lambda_of(3), 2.0, 1e-9));
    CHECK(near(ob.lambda_of(0), 0.0, 0.0));

    const auto [off, size] = ob.eigenspace_range(0);
    CHECK(off == 1);
    CHECK(size == 2);

    const Mat gramid = ob.B.transpose() * e.alg.gram() * ob.B;
    CHECK((gramid - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("extended Heisenberg embedding, automatic scale") {
    const CatalogEntry e = example("heisenberg_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    CHECK(r.certificate.accepted);
    CHECK(r.rep.N == 7);
    CHECK(near(r.certificate.achieved_c, 16.0, 1e-9));
    CHECK(near(r.plan.target_c, 16.0, 1e-9));
    CHECK(near(r.plan.min_feasible_c, 16.0, 1e-9));
    CHECK(near(r.plan.min_feasible_t, 1.0, 1e-6));

    REQUIRE(r.plan.stage_scales.size() == 2);
    CHECK(near(r.plan.stage_scales[0], std::log(2.0) / 2.0, 1e-9));
    CHECK(near(r.plan.stage_scales[1], std::log(12.0) / 2.0, 1e-9));

    REQUIRE(r.plan.stage_constants.rows() == 2);
    CHECK(near(r.plan.stage_constants(0, 0), 2.0, 1e-12));
    CHECK(near(r.plan.stage_constants(0, 1), 4.0, 1e-12));
    CHECK(near(r.plan.stage_constants(1, 0), 1.0, 1e-12));
    CHECK(near(r.plan.stage_constants(1, 1), 0.0, 0.0));

    const Mat P = r.rep.pullback_gram(MetricKind::Einstein);
    CHECK((P - 16.0 * Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("equalizing pass at a forced parameter") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);
    const OrderedBasis ob = ordered_basis(e.alg, *e.split, g);
    const auto reps = stage_adjoint_reps(e.alg, ob);
    REQUIRE(reps.size() == 2);

    const auto [rep, plan] = equalize(e.alg, *e.split, g, reps, 4.0);
    REQUIRE(plan.stage_scales.size() == 2);
    CHECK(near(plan.stage_scales[0], 0.0, 1e-12));
    CHECK(near(plan.stage_scales[1], std::log(2.0) / 2.0, 1e-12));

    const Mat P = rep.pullback_gram(MetricKind::Einstein);
    CHECK((P.bottomRightCorner(3, 3) - 4.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <=
          1e-12);
    // the abelian-part pullback does not depend on the parameter
    CHECK(near(P(0, 0), 16.0, 1e-12));
}

TEST_CASE("forced scales above and below the feasible range") {
    const CatalogEntry e = example("heisenberg_ext");

    EmbedOptions big;
    big.scale = 18.0;
    const EmbedResult r = embed(e.alg, *e.split, big);
    CHECK(r.certificate.accepted);
    CHECK(r.rep.N == 8);  // one extra diagonal row tops up the abelian pullback
    CHECK(near(r.certificate.achieved_c, 18.0, 1e-9));
    REQUIRE(!r.rep.blocks.empty());
    CHECK(r.rep.blocks.back().tag == "abelian");

    EmbedOptions small;
    small.scale = 0.5;
    bool threw = false;
    try {
        (void)embed(e.alg, *e.split, small);
    } catch (const ScaleTooSmall& exc) {
        threw = true;
        CHECK(near(exc.min_feasible(), std::sqrt(0.5), 1e-9));
    }
    CHECK(threw);
}

TEST_CASE("rank-three filiform embedding") {
    const CatalogEntry e = example("filiform4_ext");
    const EmbedResult r = embed(e.alg, *e.split);

    CHECK(r.certificate.accepted);
    CHECK(r.rep.N == 12);
    CHECK(near(r.certificate.achieved_c, 46.0, 1e-9));
    CHECK(near(r.plan.min_feasible_c, 46.0, 1e-9));
    CHECK(near(r.plan.min_feasible_t, 8.0 / 3.0, 1e-6));

    REQUIRE(r.plan.stage_constants.rows() == 3);
    CHECK(near(r.plan.stage_constants(0, 0), 2.5, 1e-12));
    CHECK(near(r.plan.stage_constants(0, 1), 5.0, 1e-12));
    CHECK(near(r.plan.stage_constants(0, 2), 9.0, 1e-12));
    CHECK(near(r.plan.stage_constants(1, 0), 2.0, 1e-12));
    CHECK(near(r.plan.stage_constants(1, 1), 4.0, 1e-12));
    CHECK(near(r.plan.stage_constants(2, 0), 1.0, 1e-12));
}

TEST_CASE("special representation avoids the scaling pass") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);

    const auto [rep, plan] = special_rep(e.alg, *e.split, g, 16.0);
    REQUIRE(plan.stage_scales.size() == 2);
    CHECK(near(plan.stage_scales[0], 0.0, 0.0));
    CHECK(near(plan.stage_scales[1], 0.0, 0.0));

    const Mat P = rep.pullback_gram(MetricKind::Einstein);
    CHECK((P.bottomRightCorner(3, 3) - 16.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <=
          1e-9);

    const Representation full =
        extend_abelian(rep, e.alg, *e.split, 16.0, MetricKind::Einstein);
    CHECK(full.N == 7);
    const EmbeddingCertificate cert = certify(e.alg, full, MetricKind::Einstein);
    CHECK(cert.accepted);
    CHECK(near(cert.achieved_c, 16.0, 1e-9));
}

TEST_CASE("Frobenius metric variant") {
    const CatalogEntry e = example("rh(2)");
    EmbedOptions opts;
    opts.metric = MetricKind::Frobenius;
    const EmbedResult r = embed(e.alg, *e.split, opts);
    CHECK(r.certificate.accepted);
    CHECK(r.rep.N == 2);
    CHECK(r.certificate.metric_kind == MetricKind::Frobenius);
    CHECK(near(r.certificate.achieved_c, 1.0, 1e-12));
}

TEST_CASE("abelian extension rejects an infeasible scale") {
    const CatalogEntry e = example("rh(2)");
    const Grading g = grading(e.alg, *e.split);
    const OrderedBasis ob = ordered_basis(e.alg, *e.split, g);
    const auto reps = stage_adjoint_reps(e.alg, ob);
    const auto [rep, plan] = equalize(e.alg, *e.split, g, reps, 1.5);

    bool threw = false;
    try {
        (void)extend_abelian(rep, e.alg, *e.split, 1.5, MetricKind::Einstein);
    } catch (const ScaleTooSmall& exc) {
        threw = true;
        CHECK(near(exc.min_feasible(), 2.0, 1e-9));
    }
    CHECK(threw);
}

TEST_CASE("rank-one extension from a derivation") {
    Mat D = Mat::Zero(3, 3);
    D.diagonal() << 2.0, 2.0, 4.0;
    const auto [ext, split] = rank_one_extension(heisenberg3(), D, /*normalize=*/true);

    CHECK(ext.dim() == 4);
    CHECK(split.a_indices == std::vector<int>{3});
    CHECK(split.n_indices == std::vector<int>{0, 1, 2});
    // normalization rescales the smallest eigenvalue to one
    CHECK(near(ext.ad(3)(0, 0), 1.0, 1e-12));
    CHECK(near(ext.ad(3)(2, 2), 2.0, 1e-12));
    CHECK(near(ext.gram()(3, 3), 1.0, 0.0));
    CHECK(near(ext.gram()(3, 0), 0.0, 0.0));
    CHECK(validate_algebra(ext).solvable);
    CHECK(validate_split(ext, split).all_passed());

    Mat notder = Mat::Zero(3, 3);
    notder.diagonal() << 1.0, 2.0, 2.0;
    CHECK_THROWS_AS((void)rank_one_extension(heisenberg3(), notder), NotDerivation);
    CHECK_THROWS_AS((void)rank_one_extension(heisenberg3(), Mat(-D)), NotPositive);
}

TEST_CASE("canonical two-step derivation") {
    const CatalogEntry h5 = example("heisenberg(5)");
    const Mat D = two_step_canonical_derivation(h5.alg);
    Mat expect = Mat::Identity(5, 5);
    expect(4, 4) = 2.0;
    CHECK((D - expect).cwiseAbs().maxCoeff() <= 1e-9);

    // a three-step algebra is rejected
    const CatalogEntry f4 = example("filiform4");
    CHECK_THROWS_AS((void)two_step_canonical_derivation(f4.alg), NotDerivation);
}

TEST_CASE("random two-step algebras embed and certify") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int dv = 2 + static_cast<int>(seed % 3);
        const int dz = 1 + static_cast<int>(seed % 2);
        const MetricLieAlgebra two = random_two_step(seed, dv, dz);
        const Mat D = two_step_canonical_derivation(two);
        const auto [ext, split] = rank_one_extension(two, D);
        const EmbedResult r = embed(ext, split);
        CHECK(r.certificate.accepted);
        CHECK(near(r.certificate.achieved_c, r.plan.target_c, 1e-7));
    }
}

TEST_CASE("direct sums add pullbacks") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);
    const OrderedBasis ob = ordered_basis(e.alg, *e.split, g);
    const auto reps = stage_adjoint_reps(e.alg, ob);
    REQUIRE(reps.size() == 2);

    const Representation sum = direct_sum(reps[0], reps[1]);
    CHECK(sum.N == reps[0].N + reps[1].N);
    const Mat P = sum.pullback_gram(MetricKind::Einstein);
    const Mat P0 = reps[0].pullback_gram(MetricKind::Einstein);
    const Mat P1 = reps[1].pullback_gram(MetricKind::Einstein);
    CHECK((P - (P0 + P1)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("conjugation inside a target block") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);
    const OrderedBasis ob = ordered_basis(e.alg, *e.split, g);
    const Representation full = stage_adjoint_reps(e.alg, ob)[0];

    Mat L(1, 1);
    L << 2.0;
    const TargetBlock center{3, 1, "center"};
    const Representation conj = conjugate(full, L, center, {1});

    const Mat P = conj.pullback_gram(MetricKind::Einstein);
    const Mat P0 = full.pullback_gram(MetricKind::Einstein);
    // the central image scales linearly, its pullback quadratically
    CHECK(near(P(3, 3), 4.0 * P0(3, 3), 1e-12));
    // diagonal images are untouched on the block diagonal
    CHECK(near(conj.mats[0](3, 3), full.mats[0](3, 3), 1e-12));

    // malformed conjugators are rejected
    Mat upper(2, 2);
    upper << 1.0, 1.0, 0.0, 1.0;
    const TargetBlock level0{1, 2, "level 0"};
    CHECK_THROWS_AS((void)conjugate(full, upper, level0, {2}), NotBlockRespecting);

    Mat mixing(2, 2);
    mixing << 1.0, 0.0, 1.0, 1.0;
    CHECK_THROWS_AS((void)conjugate(full, mixing, level0, {1, 1}), NotBlockRespecting);

    Mat singular = Mat::Zero(1, 1);
    CHECK_THROWS_AS((void)conjugate(full, singular, center, {1}), NotBlockRespecting);
}

TEST_CASE("grading automorphisms compose additively") {
    const CatalogEntry e = example("heisenberg_ext");
    const Grading g = grading(e.alg, *e.split);

    const Mat a1 = scale_automorphism(e.alg, *e.split, g, 0.3);
    const Mat a2 = scale_automorphism(e.alg, *e.split, g, 0.5);
    const Mat a3 = scale_automorphism(e.alg, *e.split, g, 0.8);
    CHECK((a1 * a2 - a3).cwiseAbs().maxCoeff() <= 1e-12);

    // identity on the abelian part
    Vec eA = Vec::Zero(4);
    eA(0) = 1.0;
    CHECK(((a1 * eA) - eA).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("adjoint representation demands a trivial center") {
    const MetricLieAlgebra h3 = heisenberg3();
    Mat D = Mat::Zero(3, 3);
    D.diagonal() << 1.0, 1.0, 2.0;
    const Grading g = grading_from_derivation(h3, D);
    const SolvableSplit nosplit{{}, {0, 1, 2}};
    const OrderedBasis ob = ordered_basis(h3, nosplit, g);
    CHECK_THROWS_AS((void)adjoint_rep(h3, ob), NotFaithful);
}

TEST_CASE("structure conditions gate the pipeline") {
    const CatalogEntry e = example("heisenberg_ext");
    const SolvableSplit wrong{{1}, {0, 2, 3}};
    CHECK_THROWS_AS((void)embed(e.alg, wrong), ConditionsFailed);
}
