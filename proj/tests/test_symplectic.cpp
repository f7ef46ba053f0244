#include "doctest.h"

#include "maslov/errors.hpp"
#include "maslov/polynomial.hpp"
#include "maslov/symplectic.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace maslov;

namespace {

Polynomial poly(std::initializer_list<int> c)
{
    std::vector<Scalar> v;
    for (int x : c) v.emplace_back(x);
    return Polynomial(v);
}

ExactMatrix ex(std::initializer_list<std::initializer_list<int>> rows)
{
    ExactMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (int x : r) m(i, j++) = Scalar(x);
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("exact rank, nullspace and inverse")
{
    const ExactMatrix a = ex({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(a) == 2);
    const ExactMatrix k = nullspace(a);
    REQUIRE(k.cols() == 1);
    CHECK(is_zero(a * k));

    ExactMatrix b = ex({{2, 1}, {1, 1}});
    b(0, 1) = Scalar::sqrt(2);
    const ExactMatrix bi = inverse(b);
    CHECK(is_zero(b * bi - ExactMatrix::Identity(2, 2)));
    CHECK(power(b, 3) == b * b * b);
}

TEST_CASE("inertia matches eigenvalue signs")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> e(-3, 3);
    for (int t = 0; t < 40; ++t) {
        ExactMatrix s(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) s(i, j) = s(j, i) = Scalar(e(rng));
        if (t % 4 == 0) s.row(3) = s.row(0) + s.row(1), s.col(3) = s.col(0) + s.col(1);
        const Inertia in = inertia(s);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_double(s));
        int pos = 0, neg = 0, zero = 0;
        for (double ev : es.eigenvalues()) (ev > 1e-9 ? pos : ev < -1e-9 ? neg : zero)++;
        CHECK(in.positive == pos);
        CHECK(in.negative == neg);
        CHECK(in.zero == zero);
        const Inertia nin = numeric_inertia(to_double(s), 1e-9);
        CHECK(nin.positive == pos);
        CHECK(nin.negative == neg);
    }
}

TEST_CASE("polynomial arithmetic and gcd")
{
    const Polynomial a = poly({-1, 0, 1});  // x^2 - 1
    const Polynomial b = poly({1, 1});      // x + 1
    auto [q, r] = divmod(a, b);
    CHECK(q.coeffs() == poly({-1, 1}).coeffs());
    CHECK(r.is_zero());
    CHECK(gcd(a, poly({1, 2, 1})).coeffs() == b.coeffs());
    CHECK(a.derivative().coeffs() == poly({0, 2}).coeffs());
    CHECK(a(Scalar::sqrt(2)) == Scalar(1));
}

TEST_CASE("squarefree factors and multiplicities")
{
    // (x - 1)^3 (x + 2)
    const Polynomial p = poly({1, -1}) * poly({1, -1}) * poly({1, -1}) * poly({2, 1});
    const auto f = squarefree_factors(p);
    Polynomial rebuilt = poly({1});
    for (const auto& [g, e] : f)
        for (int i = 0; i < e; ++i) rebuilt = rebuilt * g;
    CHECK(rebuilt.monic().coeffs() == p.monic().coeffs());
    CHECK(root_multiplicity(p, Scalar(1)) == 3);
    CHECK(root_multiplicity(p, Scalar(-2)) == 1);
    CHECK(root_multiplicity(p, Scalar(0)) == 0);
}

TEST_CASE("sturm counts real roots")
{
    // (x^2 - 2)(x - 3): roots -sqrt2, sqrt2, 3
    const Polynomial p = poly({-2, 0, 1}) * poly({-3, 1});
    CHECK(sturm_count(p, std::nullopt, std::nullopt) == 3);
    CHECK(sturm_count(p, Scalar(0), std::nullopt) == 2);
    CHECK(sturm_count(p, Scalar(0), Scalar(2)) == 1);
    CHECK(sturm_count(p, Scalar(-1), Scalar::sqrt(2)) == 1);
    CHECK(sturm_count(poly({1, 0, 1}), std::nullopt, std::nullopt) == 0);
}

TEST_CASE("characteristic polynomial agrees with eigenvalues")
{
    std::mt19937 rng(9);
    for (int t = 0; t < 10; ++t) {
        const ExactMatrix m = maslov::testing::random_symplectic(2, rng);
        const Polynomial p = characteristic_polynomial(m);
        CHECK(p.degree() == 4);
        // Symplectic: palindromic with unit constant term.
        for (int i = 0; i <= 4; ++i) CHECK(p.coeffs()[i] == p.coeffs()[4 - i]);
        Eigen::EigenSolver<Eigen::MatrixXd> es(to_double(m));
        for (const auto& lam : es.eigenvalues()) {
            std::complex<double> v = 0;
            for (int i = 4; i >= 0; --i) v = v * lam + p.coeffs()[i].to_double();
            CHECK(std::abs(v) < 1e-6 * std::max(1.0, std::pow(std::abs(lam), 4)));
        }
        const Polynomial q = palindromic_reduce(p);
        CHECK(q.degree() == 2);
    }
}

TEST_CASE("J and diamond")
{
    const ExactMatrix j = standard_J<Scalar>(2);
    CHECK(is_zero(Mat<Scalar>(j * j + ExactMatrix::Identity(4, 4))));
    const auto i2 = SymplecticMatrix::exact(ExactMatrix::Identity(2, 2));
    CHECK(diamond(i2, i2).exact_entries() == ExactMatrix::Identity(4, 4));

    const auto d = BasicForm::D(2).realize();
    const auto r = BasicForm::R(Scalar(Rational(1, 2))).realize();
    const auto dr = diamond(d, r).exact_entries();
    CHECK(dr(0, 0) == Scalar(2));
    CHECK(dr(1, 1) == Scalar(0));
    CHECK(dr(2, 2) == Scalar(Rational(1, 2)));
    CHECK(dr(1, 3) == Scalar(-1));
    CHECK(dr(3, 1) == Scalar(1));
    CHECK(dr(0, 1) == Scalar(0));

    std::mt19937 rng(1);
    for (int t = 0; t < 10; ++t) {
        const auto a = SymplecticMatrix::exact(maslov::testing::random_symplectic(1 + t % 2, rng));
        const auto b = SymplecticMatrix::exact(maslov::testing::random_symplectic(1 + (t / 2) % 2, rng));
        const ExactMatrix ab = diamond(a, b).exact_entries();
        CHECK(is_zero(symplectic_residual(ab)));
        CHECK(elliptic_height(diamond(a, b)) == elliptic_height(a) + elliptic_height(b));
    }
    CHECK_THROWS(diamond(d, SymplecticMatrix::numeric(d.to_numeric())));
}

TEST_CASE("constructors reject non-symplectic input")
{
    CHECK_THROWS_AS(SymplecticMatrix::exact(ex({{1, 1}, {1, 1}})), InputError);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 0) = 1 + 1e-6;
    CHECK_THROWS_AS(SymplecticMatrix::numeric(m), InputError);
}

TEST_CASE("basic forms are exactly symplectic")
{
    std::vector<BasicForm> forms{BasicForm::D(2), BasicForm::D(-2), BasicForm::N1(1, 1), BasicForm::N1(1, 0),
                                 BasicForm::N1(-1, -1), BasicForm::R(Scalar(Rational(1, 3))),
                                 BasicForm::R(Scalar(Rational(7, 4))), BasicForm::N2(Scalar(Rational(1, 6)), true),
                                 BasicForm::N2(Scalar(Rational(5, 6)), false)};
    for (const auto& f : forms) {
        const auto m = f.realize();
        REQUIRE(m.is_exact());
        CHECK(is_zero(symplectic_residual(m.exact_entries())));
    }
    const auto irr = BasicForm::R(Scalar::sqrt(2) - Scalar(1)).realize();
    CHECK_FALSE(irr.is_exact());
    CHECK(irr.residual() < 1e-12);
}

TEST_CASE("exact trig table")
{
    auto t = exact_trig(Scalar(Rational(1, 6)));
    REQUIRE(t);
    CHECK(t->cos == Scalar::sqrt(3) / Scalar(2));
    CHECK(t->sin == Scalar(Rational(1, 2)));
    for (int k = 0; k < 24; ++k) {
        auto e = exact_trig(Scalar(Rational(k, 12)));
        REQUIRE(e);
        CHECK(e->cos.to_double() == doctest::Approx(std::cos(std::numbers::pi * k / 12.0)));
        CHECK(e->sin.to_double() == doctest::Approx(std::sin(std::numbers::pi * k / 12.0)));
    }
    CHECK_FALSE(exact_trig(Scalar(Rational(1, 5))));
    CHECK_FALSE(is_table_angle(Scalar::sqrt(2)));
}

TEST_CASE("elliptic height examples")
{
    CHECK(elliptic_height(BasicForm::R(Scalar(Rational(1, 3))).realize()) == 2);
    CHECK(elliptic_height(BasicForm::D(2).realize()) == 0);
    CHECK(elliptic_height(diamond(BasicForm::N1(1, 1).realize(), BasicForm::D(-2).realize())) == 2);
    const auto num = SymplecticMatrix::numeric(BasicForm::R(Scalar(Rational(1, 3))).realize().to_numeric());
    CHECK(elliptic_height(num) == 2);
}

TEST_CASE("omega nullity examples and conjugate symmetry")
{
    CHECK(nullity_omega(BasicForm::N1(1, 1).realize(), Scalar(0)) == 1);
    const auto minus_i = SymplecticMatrix::exact(-ExactMatrix::Identity(2, 2));
    CHECK(nullity_omega(minus_i, Scalar(1)) == 2);
    const auto r = BasicForm::R(Scalar(Rational(1, 2))).realize();
    CHECK(nullity_omega(r, Scalar(Rational(1, 2))) == 1);
    CHECK(nullity_omega(r, Scalar(Rational(3, 2))) == 1);
    CHECK(nullity_omega(r, Scalar(0)) == 0);

    std::mt19937 rng(2);
    for (int t = 0; t < 40; ++t) {
        const auto d = maslov::testing::random_descriptor(rng, 3);
        const auto m = realize(d);
        for (int k = 1; k < 12; ++k) {
            const Scalar w(Rational(k, 6));
            CHECK(nullity_omega(m, w) == nullity_omega(m, Scalar(2) - w));
            if (m.is_exact())
                CHECK(nullity_omega(m.to_numeric(), k / 6.0) == nullity_omega(m, w));
        }
    }
}

TEST_CASE("eigenvalue clustering")
{
    const auto m = diamond(BasicForm::D(2).realize(), BasicForm::R(Scalar(Rational(1, 2))).realize());
    const auto c = cluster_eigenvalues(m.to_numeric(), 1e-4);
    CHECK(c.size() == 4);
    Eigen::MatrixXd near = Eigen::MatrixXd::Identity(2, 2);
    near(0, 0) = 1 + 5e-4;
    near(1, 1) = 1 / (1 + 5e-4);
    CHECK_THROWS_AS(cluster_eigenvalues(near, 1e-4), NumericError);
}

TEST_CASE("N2 triviality sign")
{
    Eigen::Matrix2d b;
    b << 0, 1, -1, 0;
    CHECK(n2_triviality_sign(b, std::numbers::pi / 3) > 0);
    CHECK(n2_triviality_sign(b, 4 * std::numbers::pi / 3) < 0);
}
