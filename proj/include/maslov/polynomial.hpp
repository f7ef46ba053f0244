#pragma once

#include "maslov/linalg.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace maslov {

// Dense polynomial over the exact field, coefficients from degree 0 upward,
// with no trailing zero coefficient.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Scalar> coeffs);
    static Polynomial monomial(const Scalar& c, std::size_t degree);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Scalar>& coeffs() const { return c_; }
    const Scalar& leading() const { return c_.back(); }
    Scalar operator()(const Scalar& x) const;

    Polynomial derivative() const;
    Polynomial monic() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    std::vector<Scalar> c_;
};

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
Polynomial gcd(Polynomial a, Polynomial b);

// Yun decomposition p = c · Π f_i^i with squarefree, pairwise coprime f_i.
std::vector<std::pair<Polynomial, int>> squarefree_factors(const Polynomial& p);

// Distinct real roots of a squarefree p in (lo, hi]; nullopt bounds mean ∓∞.
// lo must not be a root.
int sturm_count(const Polynomial& p, const std::optional<Scalar>& lo, const std::optional<Scalar>& hi);

// det(λI − A) via Faddeev–LeVerrier.
Polynomial characteristic_polynomial(const ExactMatrix& a);

// For palindromic p of degree 2n returns q with p(z) = z^n q(z + 1/z).
Polynomial palindromic_reduce(const Polynomial& p);

// Multiplicity of x as a root of p.
int root_multiplicity(Polynomial p, const Scalar& x);

}  // namespace maslov
