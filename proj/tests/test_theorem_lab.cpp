#include "doctest.h"

#include "maslov/errors.hpp"
#include "maslov/theorem_lab.hpp"
#include "support.hpp"

using namespace maslov;
using maslov::testing::ellipsoid_records;

namespace {

Scenario r4_scenario()
{
    Scenario sc;
    sc.n = 2;
    sc.records = ellipsoid_records({Scalar(1), Scalar::sqrt(2)});
    sc.non_degenerate = true;
    return sc;
}

Scenario r6_scenario()
{
    Scenario sc;
    sc.n = 3;
    sc.records = ellipsoid_records({Scalar(1), Scalar::sqrt(2), Scalar::sqrt(3)});
    sc.non_degenerate = true;
    return sc;
}

PathRecord mixed_r6(int i1)
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar::sqrt(2) - Scalar(1)};
    d.k = 1;
    return make_record("mixed", i1, d);
}

std::string failure_text(const Report& r)
{
    const Check* c = r.first_failure();
    return c ? c->name + " [" + c->tag + "] " + c->detail : std::string();
}

std::string first_tag(const Report& r)
{
    const Check* c = r.first_failure();
    return c ? c->tag : std::string();
}

}  // namespace

TEST_CASE("ellipsoid records match the closed forms")
{
    auto recs = ellipsoid_records({Scalar(1), Scalar::sqrt(2)});
    CHECK(recs[0].i1 == 4);
    CHECK(recs[1].i1 == 2);
    CHECK(recs[0].descriptor.theta[0] == Scalar::sqrt(2) * Scalar(2) - Scalar(2));
    CHECK(recs[1].descriptor.theta[0] == Scalar::sqrt(2));
    CHECK(recs[0].mean_index == Scalar(2) + Scalar::sqrt(2) * Scalar(2));
    CHECK(recs[1].mean_index == Scalar(2) + Scalar::sqrt(2));
    auto r6 = ellipsoid_records({Scalar(1), Scalar::sqrt(2), Scalar::sqrt(3)});
    CHECK(r6[0].i1 == 7);
    CHECK(r6[1].i1 == 5);
    CHECK(r6[2].i1 == 3);
}

TEST_CASE("scenario validation")
{
    CHECK_NOTHROW(validate_scenario(r4_scenario()));
    Scenario bad = r4_scenario();
    bad.records[0].descriptor.theta[0] = Scalar(Rational(1, 2));
    bad.records[0] = make_record("x1", 4, bad.records[0].descriptor);
    CHECK_THROWS_AS(validate_scenario(bad), InputError);
    Scenario dim = r4_scenario();
    dim.n = 3;
    CHECK_THROWS_AS(validate_scenario(dim), InputError);
    CHECK_THROWS_AS(validate_scenario(Scenario{}), InputError);
}

TEST_CASE("slot equality fails for r = 1, r_* = 0, Delta = 0 at s = 1")
{
    Scenario sc;
    sc.n = 3;
    sc.non_degenerate = true;
    sc.records = {mixed_r6(5)};
    JumpCertificate cert;
    cert.N = 10;
    cert.m = {2};
    cert.chi = {0};
    cert.Delta = {0};
    auto rep = check_jump_bounds(cert, sc, 1, 0);
    const Check* eq = nullptr;
    for (const auto& c : rep.checks)
        if (c.tag == "slot-equality") eq = &c;
    REQUIRE(eq != nullptr);
    CHECK_FALSE(eq->passed);
    CHECK(eq->detail == "2 != 5");
}

TEST_CASE("delta bounds with a rational rotation")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar(Rational(1, 2))};
    auto rec = make_record("q", 2, d);
    for (long m : {4L, 8L, 12L, 40L}) {
        CHECK(compute_Delta(rec, m, Rational(1, 5)) == 0);
        auto rep = delta_bounds(rec, 0, m, Rational(1, 5));
        CHECK(rep.passed());
    }
}

TEST_CASE("classify_s1 accepts the short ellipsoid orbit and rejects a hyperbolic block")
{
    Scenario sc = r4_scenario();
    CHECK(classify_s1(sc.records[0], sc).passed());
    Scenario m;
    m.n = 3;
    m.non_degenerate = true;
    auto rep = classify_s1(mixed_r6(5), m);
    CHECK_FALSE(rep.passed());
    CHECK(first_tag(rep) == "slot-one-normal-form");
}

TEST_CASE("hyperbolic axiom")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.k = 1;
    Scenario sc;
    sc.n = 2;
    sc.records = {make_record("h", 3, d)};
    CHECK_FALSE(hyperbolic_axiom(sc).passed());
    sc.finite_family = false;
    CHECK(hyperbolic_axiom(sc).passed());
}

TEST_CASE("two elliptic characteristics on the R^4 ellipsoid")
{
    JumpProblem p;
    p.threads = 2;
    auto out = run_two_elliptic(r4_scenario(), p);
    INFO(failure_text(out.report));
    CHECK(out.consistent());
    REQUIRE(out.runs.size() == 2);
    CHECK(out.elliptic.size() == 2);
    CHECK(out.irrationally_elliptic.size() == 2);
    for (int a : out.runs[0].slot_one)
        for (int b : out.runs[1].slot_one) CHECK(a != b);
}

TEST_CASE("Assumption A reports irrational ellipticity")
{
    Scenario sc = r4_scenario();
    sc.non_degenerate = false;
    sc.assumption_A = true;
    JumpProblem p;
    p.threads = 2;
    auto out = run_two_elliptic(sc, p);
    CHECK(out.consistent());
    CHECK(out.irrationally_elliptic.size() == 2);
}

TEST_CASE("all rational mean indices cannot realize chi at slot one")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar(Rational(1, 2))};
    Scenario sc;
    sc.n = 2;
    sc.records = {make_record("a", 3, d), make_record("b", 5, d)};
    auto out = run_two_elliptic(sc, JumpProblem{});
    CHECK_FALSE(out.consistent());
    CHECK(first_tag(out.report) == "chi-slot-one");
}

TEST_CASE("three elliptic characteristics on the R^6 ellipsoid")
{
    JumpProblem p;
    p.threads = 2;
    auto out = run_r6_pipeline(r6_scenario(), p);
    INFO(failure_text(out.report));
    CHECK(out.consistent());
    CHECK(out.elliptic.size() == 3);
    CHECK(out.irrationally_elliptic.size() >= 2);
    REQUIRE(out.runs.size() == 1);
    CHECK(out.runs[0].injection.rho == 3);
}

TEST_CASE("R^6 pipeline rejects a hyperbolic record")
{
    Scenario sc = r6_scenario();
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.k = 2;
    sc.records.push_back(make_record("h", 5, d));
    auto out = run_r6_pipeline(sc, JumpProblem{});
    CHECK_FALSE(out.consistent());
    CHECK(first_tag(out.report) == "hyperbolic-axiom");
}

TEST_CASE("R^6 pipeline rejects an N1 R M1 record through the slot equality")
{
    Scenario sc = r6_scenario();
    sc.records[1] = mixed_r6(5);
    JumpProblem p;
    p.threads = 2;
    auto out = run_r6_pipeline(sc, p);
    CHECK_FALSE(out.consistent());
    CHECK(first_tag(out.report) == "slot-equality");
    CHECK(out.report.first_failure()->detail.find("N1(1,1)") != std::string::npos);
}

TEST_CASE("R^6 pipeline preconditions")
{
    Scenario sc = r4_scenario();
    CHECK_THROWS_AS(run_r6_pipeline(sc, JumpProblem{}), InputError);
    Scenario deg = r6_scenario();
    deg.non_degenerate = false;
    CHECK_THROWS_AS(run_r6_pipeline(deg, JumpProblem{}), InputError);
}

TEST_CASE("property: two-elliptic pipeline is consistent on R^4 ellipsoids")
{
    for (unsigned long q : {2UL, 3UL, 5UL, 7UL}) {
        for (int c : {1, 2, 3}) {
            Scenario sc;
            sc.n = 2;
            sc.non_degenerate = true;
            sc.records = ellipsoid_records({Scalar(c), Scalar::sqrt(q)});
            JumpProblem p;
            p.threads = 2;
            auto out = run_two_elliptic(sc, p);
            INFO("c = " << c << ", q = " << q);
            INFO(failure_text(out.report));
            CHECK(out.consistent());
            CHECK(out.elliptic.size() == 2);
        }
    }
}

TEST_CASE("worked certificate satisfies both slot-one bounds")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar(Rational(1, 2))};
    Scenario sc;
    sc.n = 2;
    sc.records = {make_record("worked", 2, d)};
    JumpProblem p;
    p.records = sc.records;
    p.delta = Rational(1, 50);
    p.epsilon = Rational(1, 100);
    p.M = 4;
    p.M0 = 10;
    p.N_bound = 1000;
    p = normalized(p);
    const auto v = build_v(p);
    const auto cert = search_N(p, v, choose_a(v)).hits.front();
    REQUIRE(cert.N == 10);
    auto rep = check_jump_bounds(cert, sc, 1, 0);
    CHECK(rep.passed());
    bool saw_lower = false, saw_upper = false;
    for (const auto& c : rep.checks) {
        if (c.tag == "slot-lower-bound") {
            saw_lower = true;
            CHECK(c.detail == "2 >= 2");
        }
        if (c.tag == "slot-upper-bound") {
            saw_upper = true;
            CHECK(c.detail == "2 <= 4");
        }
    }
    CHECK(saw_lower);
    CHECK(saw_upper);

    JumpCertificate big = cert;
    big.Delta = {2};
    auto pre = check_jump_bounds(big, sc, 1, 0);
    CHECK(first_tag(pre) == "delta-at-most-C");
}

TEST_CASE("delta bound counts")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar::sqrt(2) - Scalar(1), Scalar::sqrt(3) - Scalar(1)};
    d.alpha = {Scalar::sqrt(5) - Scalar(2)};
    auto rec = make_record("wide", 5, d);
    for (long m : {1L, 7L, 29L, 169L}) {
        auto rep = delta_bounds(rec, 1, m, Rational(1, 5));
        REQUIRE(!rep.checks.empty());
        CHECK(rep.checks[0].detail.substr(rep.checks[0].detail.size() - 4) == "<= 3");
        CHECK(rep.passed());
    }
}

TEST_CASE("strengthened delta bound on an irrational rotation")
{
    Scenario sc = r4_scenario();
    JumpProblem p;
    p.threads = 2;
    p = normalized([&] {
        JumpProblem q = p;
        q.records = sc.records;
        return q;
    }());
    const auto v = build_v(p);
    const auto d = choose_a(v);
    const auto cert = search_N(p, v, d).hits.front();
    for (std::size_t k = 0; k < 2; ++k) {
        auto rep = delta_bounds(sc.records[k], cert.chi[k], cert.m[k], cert.delta);
        CHECK(rep.passed());
        if (cert.chi[k] == 0) {
            CHECK(rep.checks.size() == 2);
            CHECK(rep.checks[1].tag == "delta-bound-strict");
        }
    }
}

TEST_CASE("corollary bounds at slot one")
{
    NormalFormDescriptor plain;
    plain.p_minus = 1;
    plain.theta = {Scalar::sqrt(2) - Scalar(1)};
    auto rep = corollary_bounds(make_record("plain", 2, plain), 1, 1);
    CHECK(rep.passed());
    CHECK(rep.checks[0].detail == "2 >= 2");

    NormalFormDescriptor star;
    star.p_minus = 1;
    star.alpha = {Scalar::sqrt(2) - Scalar(1)};
    auto rep2 = corollary_bounds(make_record("star", 3, star), 1, 1);
    CHECK_FALSE(rep2.passed());
    CHECK(rep2.checks[0].detail == "2 >= 4");

    auto rep3 = corollary_bounds(make_record("plain", 2, plain), 1, 0);
    CHECK_FALSE(rep3.passed());
    CHECK(first_tag(rep3) == "nullity-lower-bound-strict");
    CHECK(rep3.first_failure()->detail == "2 >= 4");
}

TEST_CASE("classify_s1 examples")
{
    NormalFormDescriptor two;
    two.p_minus = 1;
    two.theta = {Scalar::sqrt(2) - Scalar(1), Scalar::sqrt(3) - Scalar(1)};
    Scenario sc;
    sc.n = 3;
    sc.non_degenerate = true;
    CHECK(classify_s1(make_record("two", 5, two), sc).passed());

    NormalFormDescriptor n2;
    n2.p_minus = 1;
    n2.beta = {Scalar::sqrt(2) - Scalar(1)};
    Scenario deg;
    deg.n = 3;
    auto rep = classify_s1(make_record("n2", 5, n2), deg);
    CHECK_FALSE(rep.passed());
    CHECK(first_tag(rep) == "slot-one-normal-form");
}

TEST_CASE("sign flip moves slot one on the R^6 ellipsoid")
{
    JumpProblem p;
    p.threads = 2;
    auto out = run_two_elliptic(r6_scenario(), p);
    INFO(failure_text(out.report));
    CHECK(out.consistent());
    REQUIRE(out.runs.size() == 2);
    for (int a : out.runs[0].slot_one)
        for (int b : out.runs[1].slot_one) CHECK(a != b);
}

TEST_CASE("chi monotonicity holds in ellipsoid certificates")
{
    JumpProblem p;
    p.threads = 2;
    for (const auto& out : {run_two_elliptic(r4_scenario(), p), run_r6_pipeline(r6_scenario(), p)})
        for (const auto& run : out.runs)
            for (const auto& c : run.certificate.checks.checks)
                if (c.tag == "chi-monotonicity") CHECK(c.passed);
}
