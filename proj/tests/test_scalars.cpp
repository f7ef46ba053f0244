#include "doctest.h"

#include "maslov/errors.hpp"
#include "maslov/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace maslov;

namespace {

Scalar random_scalar(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-40, 40), den(1, 12);
    return Scalar(Rational(num(rng), den(rng))) + Scalar::sqrt(2) * Scalar(Rational(num(rng), den(rng))) +
           Scalar::sqrt(3) * Scalar(Rational(num(rng), den(rng)));
}

}  // namespace

TEST_CASE("parse_rational accepts fractions and decimals")
{
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("-6/8") == Rational(-3, 4));
    CHECK(parse_rational("-1.25") == Rational(-5, 4));
    CHECK(parse_rational("3e-2") == Rational(3, 100));
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
}

TEST_CASE("floor_ops examples")
{
    auto two = floor_ops(Scalar(2));
    CHECK(two.floor == 2);
    CHECK(two.frac == Scalar(0));
    CHECK(two.ceil == 2);
    CHECK(two.phi == 0);

    auto half = floor_ops(Scalar(Rational(3, 2)));
    CHECK(half.floor == 1);
    CHECK(half.frac == Scalar(Rational(1, 2)));
    CHECK(half.ceil == 2);
    CHECK(half.phi == 1);

    auto g = declare_generator("r", "root two", "1.414213", "1.414214");
    auto r = floor_ops(Scalar::generator(g));
    CHECK(r.floor == 1);
    CHECK(r.frac == Scalar::generator(g) - Scalar(1));
    CHECK(r.ceil == 2);
    CHECK(r.phi == 1);

    auto s = floor_ops(Scalar::sqrt(2));
    CHECK(s.floor == 1);
    CHECK(s.frac == Scalar::sqrt(2) - Scalar(1));

    auto neg = floor_ops(-Scalar::sqrt(2));
    CHECK(neg.floor == -2);
    CHECK(neg.ceil == -1);
}

TEST_CASE("opaque generator straddling an integer exhausts the budget")
{
    auto g = declare_generator("g", "unknown constant", "0.9", "1.1");
    CHECK_THROWS_AS(floor_ops(Scalar::generator(g)), EnclosureBudgetExceeded);
}

TEST_CASE("floor properties on random scalars")
{
    std::mt19937 rng(11);
    for (int t = 0; t < 300; ++t) {
        const Scalar a = random_scalar(rng);
        const auto p = floor_ops(a);
        const long double x = a.approx();
        CHECK(static_cast<long double>(p.floor.get_d()) <= x);
        CHECK(x < static_cast<long double>(p.floor.get_d()) + 1);
        CHECK(static_cast<long double>(p.ceil.get_d()) >= x);
        CHECK(static_cast<long double>(p.ceil.get_d()) < x + 1);
        CHECK((p.phi == 0 || p.phi == 1));
        CHECK((p.phi == 0) == p.frac.is_zero());
        CHECK(p.frac + Scalar(p.floor) == a);
        CHECK(std::floor(x) == static_cast<long double>(p.floor.get_d()));
    }
}

TEST_CASE("is_rational")
{
    CHECK(is_rational(Scalar(Rational(5, 3))));
    CHECK_FALSE(is_rational(Scalar::sqrt(2)));
    CHECK(is_rational(Scalar::sqrt(2) - Scalar::sqrt(2)));
}

TEST_CASE("multiquadratic arithmetic")
{
    const Scalar r2 = Scalar::sqrt(2), r3 = Scalar::sqrt(3);
    CHECK(r2 * r2 == Scalar(2));
    CHECK(r2 * r3 == Scalar::sqrt(6));
    CHECK((Scalar(1) + r2).inverse() == r2 - Scalar(1));
    const Scalar x = Scalar(Rational(1, 3)) + r2 - r3 * Scalar(2);
    CHECK(x * x.inverse() == Scalar(1));
    CHECK((x * x).approx() == doctest::Approx(static_cast<double>(x.approx() * x.approx())));
    CHECK(r2.conjugate(2) == -r2);
    CHECK(r3.conjugate(2) == r3);
    CHECK(Scalar::sqrt(8) == r2 * Scalar(2));
    CHECK(compare(r2, Scalar(Rational(3, 2))) < 0);
    CHECK(r3 > r2);
    CHECK((r2 - Scalar(Rational(14142136, 10000000))).sign() < 0);
    CHECK_THROWS(Scalar(0).inverse());
}

TEST_CASE("opaque generators do not multiply")
{
    auto g = declare_generator("e", "euler", "2.71", "2.72");
    CHECK_THROWS_AS(Scalar::generator(g) * Scalar::generator(g), NonlinearError);
    CHECK(Scalar::generator(g) * Scalar(3) == Scalar::generator(g, 3));
}

TEST_CASE("to_string is readable")
{
    CHECK(to_string(Scalar(Rational(-1, 2))) == "-1/2");
    CHECK(to_string(Scalar(2) + Scalar::sqrt(2) * Scalar(2)) == "2 + 2*sqrt2");
}

TEST_CASE("relation lattice examples")
{
    auto half = relation_lattice({Scalar(Rational(1, 2))});
    REQUIRE(half.rank() == 1);
    CHECK(half.basis[0] == IntVector{2});
    CHECK(half.tangent.empty());

    auto irr = relation_lattice({Scalar::sqrt(2) / Scalar(2)});
    CHECK(irr.rank() == 0);
    CHECK(irr.tangent.size() == 1);
    // Weyl sampling: {N sqrt2 / 2} visits every bin of width 1/100.
    std::vector<bool> hit(100, false);
    for (int n = 1; n <= 20000; ++n) {
        const double f = std::fmod(n * std::sqrt(2.0) / 2.0, 1.0);
        hit[static_cast<int>(f * 100)] = true;
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));

    auto diag = relation_lattice({Scalar::sqrt(2), Scalar::sqrt(2)});
    REQUIRE(diag.rank() == 1);
    CHECK(diag.basis[0] == IntVector{1, -1});
    REQUIRE(diag.tangent.size() == 1);
    CHECK(diag.tangent[0][0] == diag.tangent[0][1]);
    CHECK(diag.tangent[0][0] * diag.basis[0][0] + diag.tangent[0][1] * diag.basis[0][1] == 0);
}

TEST_CASE("relation lattice properties")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> small(-3, 3), den(1, 6);
    for (int t = 0; t < 60; ++t) {
        std::vector<Scalar> v;
        const int h = 2 + t % 3;
        for (int i = 0; i < h; ++i)
            v.push_back(Scalar(Rational(small(rng), den(rng))) + Scalar::sqrt(2) * Scalar(small(rng)) +
                        Scalar::sqrt(5) * Scalar(Rational(small(rng), 2)));
        const auto lat = relation_lattice(v);
        for (const auto& k : lat.basis) CHECK(is_rational(pairing(k, v)));
        for (const auto& k : lat.basis) CHECK(pairing(k, v).rational_part().get_den() == 1);
        CHECK(lat.rank() + lat.tangent.size() == static_cast<std::size_t>(h));
        CHECK(hermite_rows(lat.basis) == lat.basis);

        std::vector<Scalar> rev(v.rbegin(), v.rend());
        const auto lat2 = relation_lattice(rev);
        CHECK(lat2.rank() == lat.rank());
        for (auto k : lat2.basis) {
            std::reverse(k.begin(), k.end());
            CHECK(is_rational(pairing(k, v)));
        }
    }
}

TEST_CASE("hermite form is unique for the row lattice")
{
    const IntMatrix a{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
    IntMatrix b{{2, 4, 4}, {-4, 10, 16}, {10, -4, -16}};
    CHECK(hermite_rows(a) == hermite_rows(b));
    const auto h = hermite_rows(a);
    for (std::size_t i = 0; i < h.size(); ++i) {
        std::size_t lead = 0;
        while (h[i][lead] == 0) ++lead;
        CHECK(h[i][lead] > 0);
        for (std::size_t r = 0; r < i; ++r) {
            CHECK(h[r][lead] >= 0);
            CHECK(h[r][lead] < h[i][lead]);
        }
    }
}

TEST_CASE("integer left kernel and rational nullspace")
{
    const IntMatrix w{{1, 0}, {0, 1}, {1, 1}};
    const auto k = integer_left_kernel(w, 3);
    REQUIRE(k.size() == 1);
    CHECK(k[0] == IntVector{1, 1, -1});

    const std::vector<RatVector> a{{1, 2, 3}};
    const auto ns = rational_nullspace(a, 3);
    CHECK(ns.size() == 2);
    for (const auto& x : ns) CHECK(x[0] + 2 * x[1] + 3 * x[2] == 0);
}
