// Lower gradings and scaling certificates.

#include "rht/flexcert.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace rht;
using rht::testing::load;

namespace {

VolumeForm volume_of(const std::string& name) {
    auto f = catalog(name);
    auto vc = verify_volume_form(f.algebra, *f.volume, ellipticity_certificate(*f.algebra).certificate);
    REQUIRE(vc.volume);
    return *vc.volume;
}

Integer pow2(unsigned e) { return Integer(1) << e; }

}  // namespace

TEST_CASE("ex02: grading, scaling map and multiples") {
    auto alg = load("ex02");
    CHECK(monomial_differential_check(*alg).pass);
    CHECK_FALSE(two_stage_decomposition(*alg));
    auto gr = construct_lower_grading(*alg);
    REQUIRE(gr.grading);
    CHECK(gr.grading->lower == std::vector<unsigned>{0, 0, 1, 2});
    CHECK(check_grading_condition(*alg, *gr.grading).pass);
    auto sc = scaling_certificate(alg, *gr.grading, volume_of("ex02"));
    CHECK(sc.exponent == 21u);
    CHECK(sc.degree == Rational(pow2(21)));
    auto mr = multiple_family_verify(alg, *gr.grading, volume_of("ex02"), {1, 2, 3});
    CHECK(mr.pass);
    REQUIRE(mr.checks.size() == 3);
    for (auto& m : mr.checks) {
        CAPTURE(m.k.get_str());
        Integer b = 2 * m.k, e = 1;
        for (int i = 0; i < 21; ++i) e *= b;
        CHECK(m.valid);
        CHECK(m.degree == Rational(e));
        CHECK(m.classes > 0);
    }
    // k = 1 reproduces the base certificate
    CHECK(mr.checks[0].degree == sc.degree);
}

TEST_CASE("sphere(2): f(x) = 4x, f(y) = 16y") {
    auto alg = load("sphere(2)");
    auto gr = construct_lower_grading(*alg);
    REQUIRE(gr.grading);
    CHECK(gr.grading->lower == std::vector<unsigned>{0, 1});
    auto f = scaling_morphism(*alg, *gr.grading, 2);
    CHECK(f.images[0] == alg->generator("x").scaled(4));
    CHECK(f.images[1] == alg->generator("y").scaled(16));
    auto sc = scaling_certificate(alg, *gr.grading, volume_of("sphere(2)"));
    CHECK(sc.degree == 4);
}

TEST_CASE("CP(n): scaling degree 4^(2n)") {
    for (int n = 1; n <= 4; ++n) {
        std::string name = "CP(" + std::to_string(n) + ")";
        auto alg = load(name);
        auto ts = two_stage_decomposition(*alg);
        REQUIRE(ts);
        auto sc = scaling_certificate(alg, two_stage_grading(*alg, *ts), volume_of(name));
        CHECK(sc.degree == Rational(pow2(4 * n)));
    }
}

TEST_CASE("prop1 is two-stage and the multiples verify") {
    auto alg = load("prop1(4,2)");
    auto ts = two_stage_decomposition(*alg);
    REQUIRE(ts);
    CHECK(ts->closed == std::vector<std::size_t>{0, 1});
    CHECK(ts->rest == std::vector<std::size_t>{2, 3, 4, 5});
    auto g = two_stage_grading(*alg, *ts);
    CHECK(check_grading_condition(*alg, g).pass);
    auto mr = multiple_family_verify(alg, g, volume_of("prop1(4,2)"), {2});
    CHECK(mr.pass);
}

TEST_CASE("closed generators only") {
    auto alg = parse_algebra("gen a : 3\ngen x : 2\n").algebra;
    auto ts = two_stage_decomposition(*alg);
    REQUIRE(ts);
    CHECK(ts->closed.size() == 2);
    CHECK(ts->rest.empty());
}

TEST_CASE("A(0) has no admissible lower grading") {
    auto alg = load("A(0)");
    CHECK_FALSE(monomial_differential_check(*alg).pass);
    auto gr = construct_lower_grading(*alg);
    if (gr.grading) CHECK_FALSE(check_grading_condition(*alg, *gr.grading).pass);
}

TEST_CASE("grading invariants over the catalog") {
    for (auto& name : rht::testing::catalog_sample()) {
        CAPTURE(name);
        auto alg = load(name);
        if (monomial_differential_check(*alg).pass) CHECK(construct_lower_grading(*alg).grading);
        if (auto ts = two_stage_decomposition(*alg)) CHECK(check_grading_condition(*alg, two_stage_grading(*alg, *ts)).pass);
        auto gr = construct_lower_grading(*alg);
        if (!gr.grading || !check_grading_condition(*alg, *gr.grading).pass) continue;
        if (!catalog(name).volume || !check_minimality(*alg).pass) continue;
        auto sc = scaling_certificate(alg, *gr.grading, volume_of(name));
        CHECK(sc.degree > 0);
        CHECK(sc.degree == Rational(pow2(sc.exponent)));
    }
}
