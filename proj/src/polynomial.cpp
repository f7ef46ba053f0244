#include "maslov/polynomial.hpp"

#include "maslov/errors.hpp"

namespace maslov {

Polynomial::Polynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs))
{
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Polynomial Polynomial::monomial(const Scalar& c, std::size_t degree)
{
    std::vector<Scalar> v(degree + 1);
    v[degree] = c;
    return Polynomial(std::move(v));
}

Scalar Polynomial::operator()(const Scalar& x) const
{
    Scalar acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const
{
    if (c_.size() <= 1) return {};
    std::vector<Scalar> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Scalar(static_cast<long>(k));
    return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const
{
    if (c_.empty()) return {};
    Scalar inv = leading().inverse();
    std::vector<Scalar> v = c_;
    for (auto& x : v) x = x * inv;
    return Polynomial(std::move(v));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    std::vector<Scalar> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b)
{
    std::vector<Scalar> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
    return Polynomial(std::move(v));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Scalar> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            if (!b.c_[j].is_zero()) v[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(v));
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero()) throw Error("polynomial division by zero");
    std::vector<Scalar> rem = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<Scalar> quot(static_cast<std::size_t>(a.degree() - db + 1));
    Scalar inv = b.leading().inverse();
    for (int k = a.degree(); k >= db; --k) {
        Scalar f = rem[static_cast<std::size_t>(k)] * inv;
        if (f.is_zero()) continue;
        quot[static_cast<std::size_t>(k - db)] = f;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b)
{
    while (!b.is_zero()) {
        Polynomial r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::vector<std::pair<Polynomial, int>> squarefree_factors(const Polynomial& p)
{
    std::vector<std::pair<Polynomial, int>> out;
    if (p.degree() < 1) return out;
    Polynomial d = p.derivative();
    Polynomial a = gcd(p, d);
    Polynomial b = divmod(p, a).first;
    Polynomial c = divmod(d, a).first;
    Polynomial e = c - b.derivative();
    for (int i = 1; b.degree() >= 1; ++i) {
        Polynomial f = gcd(b, e);
        if (f.degree() >= 1) out.emplace_back(f, i);
        b = divmod(b, f).first;
        c = divmod(e, f).first;
        e = c - b.derivative();
    }
    return out;
}

namespace {

int sign_at_infinity(const Polynomial& p, bool negative)
{
    int s = p.leading().sign();
    return (negative && p.degree() % 2 == 1) ? -s : s;
}

int variations(const std::vector<Polynomial>& chain, const std::optional<Scalar>& x, bool negative)
{
    int count = 0;
    int last = 0;
    for (const auto& q : chain) {
        int s = x ? q(*x).sign() : sign_at_infinity(q, negative);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

}  // namespace

int sturm_count(const Polynomial& p, const std::optional<Scalar>& lo, const std::optional<Scalar>& hi)
{
    if (p.degree() < 1) return 0;
    std::vector<Polynomial> chain{p, p.derivative()};
    while (!chain.back().is_zero()) {
        Polynomial r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(Polynomial() - r);
    }
    return variations(chain, lo, true) - variations(chain, hi, false);
}

Polynomial characteristic_polynomial(const ExactMatrix& a)
{
    const Eigen::Index n = a.rows();
    std::vector<Scalar> c(static_cast<std::size_t>(n + 1));
    c[static_cast<std::size_t>(n)] = Scalar(1);
    ExactMatrix m = ExactMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        ExactMatrix next = a * m;
        for (Eigen::Index i = 0; i < n; ++i) next(i, i) += c[static_cast<std::size_t>(n - k + 1)];
        m = std::move(next);
        ExactMatrix am = a * m;
        Scalar trace;
        for (Eigen::Index i = 0; i < n; ++i) trace += am(i, i);
        c[static_cast<std::size_t>(n - k)] = -trace * Scalar(Rational(1, static_cast<long>(k)));
    }
    return Polynomial(std::move(c));
}

Polynomial palindromic_reduce(const Polynomial& p)
{
    const int deg = p.degree();
    if (deg < 0 || deg % 2 != 0) throw ConsistencyError("palindromic reduction needs even degree");
    const int n = deg / 2;
    const auto& a = p.coeffs();
    for (int i = 0; i <= deg; ++i)
        if (a[static_cast<std::size_t>(i)] != a[static_cast<std::size_t>(deg - i)])
            throw ConsistencyError("characteristic polynomial is not palindromic");
    // z^j + z^{-j} = P_j(w) with P_0 = 2, P_1 = w, P_{j+1} = w P_j − P_{j−1}.
    Polynomial w = Polynomial::monomial(Scalar(1), 1);
    Polynomial prev = Polynomial({Scalar(2)});
    Polynomial cur = w;
    Polynomial q = Polynomial({a[static_cast<std::size_t>(n)]});
    for (int j = 1; j <= n; ++j) {
        q = q + Polynomial({a[static_cast<std::size_t>(n + j)]}) * cur;
        Polynomial next = w * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return q;
}

int root_multiplicity(Polynomial p, const Scalar& x)
{
    int k = 0;
    Polynomial lin({-x, Scalar(1)});
    while (!p.is_zero() && p(x).is_zero()) {
        p = divmod(p, lin).first;
        ++k;
    }
    return k;
}

}  // namespace maslov
