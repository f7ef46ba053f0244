#include "doctest.h"

#include "maslov/dynamics.hpp"
#include "maslov/errors.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace maslov;

namespace {

Ellipsoid r4() { return Ellipsoid{{Scalar(1), Scalar::sqrt(2)}}; }
Ellipsoid r6() { return Ellipsoid{{Scalar(1), Scalar::sqrt(2), Scalar::sqrt(3)}}; }

}  // namespace

TEST_CASE("ellipsoid validation and resonance flag")
{
    CHECK(r4().non_resonant());
    CHECK_FALSE(Ellipsoid{{Scalar(1), Scalar(1)}}.non_resonant());
    CHECK_FALSE(Ellipsoid{{Scalar(3), Scalar(4)}}.non_resonant());
    CHECK_THROWS_AS(validate_ellipsoid(Ellipsoid{}), InputError);
    CHECK_THROWS_AS(validate_ellipsoid(Ellipsoid{{Scalar(1), Scalar(-2)}}), InputError);
}

TEST_CASE("analytic monodromy is symplectic with the expected blocks")
{
    const auto m = analytic_monodromy(r4(), 0);
    CHECK(SymplecticMatrix::numeric(m).residual() < 1e-12);
    CHECK(m(2, 0) == doctest::Approx(-std::numbers::pi));
    const double psi = 2 * std::numbers::pi * std::sqrt(2.0);
    CHECK(m(1, 1) == doctest::Approx(std::cos(psi)));
    CHECK(m(3, 1) == doctest::Approx(std::sin(psi)));
}

TEST_CASE("numeric monodromy matches the closed form within 1e-8")
{
    for (std::size_t i = 0; i < 2; ++i) {
        const auto num = linearized_monodromy(r4(), i, 100000);
        CHECK((num.numeric_entries() - analytic_monodromy(r4(), i)).cwiseAbs().maxCoeff() < 1e-8);
    }
    const auto num6 = linearized_monodromy(r6(), 2, 20000);
    CHECK((num6.numeric_entries() - analytic_monodromy(r6(), 2)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("numeric monodromy decomposes into the generated descriptor")
{
    const auto run = ellipsoid_characteristics(r4());
    for (std::size_t i = 0; i < 2; ++i) {
        const auto dec = decompose(linearized_monodromy(r4(), i, 20000));
        CHECK(dec.descriptor.p_minus == 1);
        CHECK(dec.descriptor.k == 0);
        REQUIRE(dec.descriptor.theta.size() == 1);
        CHECK(dec.descriptor.theta[0].to_double() ==
              doctest::Approx(run.records[i].descriptor.theta[0].to_double()).epsilon(1e-8));
    }
}

TEST_CASE("fully resonant sphere has eigenvalue 1 of multiplicity 6")
{
    Ellipsoid s{{Scalar(1), Scalar(1), Scalar(1)}};
    const auto m = linearized_monodromy(s, 0, 20000);
    const auto clusters = cluster_eigenvalues(m.numeric_entries(), 1e-4);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].multiplicity == 6);
    CHECK(std::abs(clusters[0].center - std::complex<double>(1.0, 0.0)) < 1e-6);
}

TEST_CASE("coarse integration exceeds the drift budget")
{
    CHECK_THROWS_WITH_AS(linearized_path(r4(), 0, 10), doctest::Contains("drift budget exceeded"), Error);
}

TEST_CASE("sampled path validation")
{
    auto p = linearized_path(r4(), 1, 2000);
    CHECK_NOTHROW(validate_path(p));
    auto bad = p;
    bad.matrices[0](0, 0) = 2.0;
    CHECK_THROWS_AS(validate_path(bad), InputError);
    auto drift = p;
    drift.matrices[5](0, 1) += 1e-6;
    CHECK_THROWS_AS(validate_path(drift), InputError);
    auto order = p;
    order.times[3] = order.times[2];
    CHECK_THROWS_AS(validate_path(order), InputError);
}

TEST_CASE("iterated path ends at the matrix power")
{
    const auto p = linearized_path(r4(), 0, 2000);
    const auto p3 = iterate_path(p, 3);
    CHECK(p3.size() == 3 * (p.size() - 1) + 1);
    CHECK(p3.duration() == doctest::Approx(3 * p.duration()));
    CHECK((p3.end() - p.end() * p.end() * p.end()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK_NOTHROW(validate_path(p3));
}

TEST_CASE("generated records match the closed-form oracle")
{
    for (const auto& e : {r4(), r6()}) {
        const auto run = ellipsoid_characteristics(e);
        const auto expect = maslov::testing::ellipsoid_records(e.alphas);
        CHECK(run.checks.passed());
        CHECK(run.warnings.empty());
        REQUIRE(run.records.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            CHECK(run.records[i].i1 == expect[i].i1);
            CHECK(run.records[i].descriptor == expect[i].descriptor);
            CHECK(run.records[i].mean_index == expect[i].mean_index);
            CHECK(run.records[i].tau_over_pi == Scalar(2) / e.alphas[i]);
            CHECK(check_convex_constraints(run.records[i]).passed());
            CHECK(classify_stability(run.records[i].descriptor, e.n()) == Stability::irrationally_elliptic);
        }
    }
}

TEST_CASE("mean index ratio on the R^4 ellipsoid is sqrt 2")
{
    const auto run = ellipsoid_characteristics(r4());
    CHECK(run.records[0].mean_index / run.records[1].mean_index == Scalar::sqrt(2));
}

TEST_CASE("oracle reproduces the iteration formula on R^4 iterates")
{
    const auto run = ellipsoid_characteristics(r4());
    for (std::size_t i = 0; i < 2; ++i) {
        const auto path = linearized_path(r4(), i, 20000);
        for (int m = 2; m <= 6; ++m) {
            const auto r = crossing_oracle(iterate_path(path, m));
            CHECK(r.i1 == index_iterate(run.records[i], m));
        }
    }
}

TEST_CASE("oracle offset calibration is frozen at the reference record")
{
    const auto path = linearized_path(r4(), 0, 20000);
    const auto rec = maslov::testing::ellipsoid_record(r4().alphas, 0);
    CHECK(calibrate_oracle_offset(path, rec.descriptor) == kOracleOffset);
}

TEST_CASE("oracle is invariant under doubling the step count")
{
    const int a = crossing_oracle_i1(linearized_path(r4(), 0, 100000));
    const int b = crossing_oracle_i1(linearized_path(r4(), 0, 200000));
    CHECK(a == 4);
    CHECK(a == b);
}

TEST_CASE("resonant sphere is flagged and perturbed")
{
    Ellipsoid s{{Scalar(1), Scalar(1)}};
    const auto r = crossing_oracle(linearized_path(s, 0, 20000));
    CHECK(r.perturbed);
    CHECK(r.nu1 == 3);
    const auto run = ellipsoid_characteristics(s);
    CHECK(run.records[0].descriptor.p_zero == 1);
    CHECK(run.records[0].descriptor.theta.empty());
    CHECK(run.warnings.size() == 4);
    CHECK(run.records[0].mean_index == Scalar(4));
}

TEST_CASE("rotation by pi lands in q_zero")
{
    Ellipsoid e{{Scalar(2), Scalar(3)}};
    const auto run = ellipsoid_characteristics(e);
    CHECK(run.records[0].descriptor.q_zero == 1);
    CHECK(run.records[1].descriptor.theta.size() == 1);
    CHECK(run.records[1].descriptor.theta[0] == Scalar(Rational(4, 3)));
    CHECK(run.records[0].mean_index * Scalar(2) == run.records[1].mean_index * Scalar(3));
}
