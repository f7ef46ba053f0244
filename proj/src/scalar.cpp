#include "maslov/scalar.hpp"

#include "maslov/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace maslov {

namespace {

constexpr unsigned kDefaultBudget = 256;
constexpr unsigned kFirstBits = 16;

std::atomic<unsigned>& budget_slot()
{
    static std::atomic<unsigned> slot = [] {
        unsigned bits = kDefaultBudget;
        if (const char* env = std::getenv("MASLOV_ENCLOSURE_BUDGET")) {
            char* end = nullptr;
            unsigned long v = std::strtoul(env, &end, 10);
            if (end != env && *end == '\0' && v >= kFirstBits) bits = static_cast<unsigned>(v);
        }
        return bits;
    }();
    return slot;
}

bool squarefree(unsigned long d)
{
    for (unsigned long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

std::vector<unsigned long> prime_factors(unsigned long d)
{
    std::vector<unsigned long> out;
    for (unsigned long p = 2; p * p <= d; ++p) {
        if (d % p == 0) {
            out.push_back(p);
            while (d % p == 0) d /= p;
        }
    }
    if (d > 1) out.push_back(d);
    return out;
}

// Parses "sqrt(d)" (whitespace tolerant); returns 0 when desc has another shape.
unsigned long parse_sqrt_desc(const std::string& desc)
{
    std::string s;
    for (char c : desc)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.size() < 7 || s.compare(0, 5, "sqrt(") != 0 || s.back() != ')') return 0;
    std::string digits = s.substr(5, s.size() - 6);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return 0;
    return std::stoul(digits);
}

std::string decimal(const Rational& q, int digits, bool round_up)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Rational scaled = q * scale;
    Integer z;
    if (round_up)
        mpz_cdiv_q(z.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    else
        mpz_fdiv_q(z.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    bool neg = sgn(z) < 0;
    std::string body = (neg ? Integer(-z) : z).get_str();
    if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
    return (neg ? "-" : "") + body;
}

bool same_definition(const Generator& a, const Generator& b)
{
    return a.id == b.id && a.radicand == b.radicand && a.lo == b.lo && a.hi == b.hi;
}

void check_same(const GeneratorPtr& a, const GeneratorPtr& b)
{
    if (a.get() != b.get() && !same_definition(*a, *b))
        throw InputError("generator '" + a->id + "' declared twice with different enclosures");
}

Rational floor_q(const Rational& q)
{
    Integer z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(z);
}

}  // namespace

unsigned enclosure_budget() { return budget_slot().load(); }
void set_enclosure_budget(unsigned bits) { budget_slot().store(std::max(bits, kFirstBits)); }

Rational parse_rational(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text += c;
    if (text.empty()) throw InputError("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            Integer num(text.substr(0, slash), 10);
            Integer den(text.substr(slash + 1), 10);
            if (sgn(den) == 0) throw InputError("zero denominator in '" + raw + "'");
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        std::string mant = text;
        long exponent = 0;
        auto e = text.find_first_of("eE");
        if (e != std::string::npos) {
            mant = text.substr(0, e);
            exponent = std::stol(text.substr(e + 1));
        }
        bool neg = !mant.empty() && (mant[0] == '-' || mant[0] == '+');
        bool minus = !mant.empty() && mant[0] == '-';
        if (neg) mant = mant.substr(1);
        auto dot = mant.find('.');
        std::string digits = mant;
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            exponent -= static_cast<long>(mant.size() - dot - 1);
        }
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
            throw InputError("malformed rational literal '" + raw + "'");
        Integer z(digits, 10);
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
        Rational q = exponent >= 0 ? Rational(z * p) : Rational(z, p);
        q.canonicalize();
        return minus ? Rational(-q) : q;
    } catch (const std::invalid_argument&) {
        throw InputError("malformed rational literal '" + raw + "'");
    } catch (const std::out_of_range&) {
        throw InputError("malformed rational literal '" + raw + "'");
    }
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

Interval Generator::enclosure(unsigned bits) const
{
    if (!algebraic()) return {lo, hi};
    Integer scaled = Integer(radicand) << (2 * bits);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    Integer den = Integer(1) << bits;
    return {Rational(s, den), Rational(s + 1, den)};
}

GeneratorPtr declare_generator(const std::string& id, const std::string& desc,
                               const std::string& lo, const std::string& hi)
{
    if (id.empty()) throw InputError("generator id must be non-empty");
    auto g = std::make_shared<Generator>();
    g->id = id;
    g->desc = desc;
    g->lo_text = lo;
    g->hi_text = hi;
    g->lo = parse_rational(lo);
    g->hi = parse_rational(hi);
    if (!(g->lo < g->hi)) throw InputError("generator '" + id + "' needs lo < hi");
    if (unsigned long d = parse_sqrt_desc(desc)) {
        if (d < 2 || !squarefree(d))
            throw InputError("generator '" + id + "': sqrt radicand must be squarefree and > 1");
        if (id != "sqrt" + std::to_string(d))
            throw InputError("generator '" + id + "': algebraic generators must use id sqrt" +
                             std::to_string(d));
        if (sgn(g->lo) < 0 || !(g->lo * g->lo < d && Rational(d) < g->hi * g->hi))
            throw InputError("generator '" + id + "': enclosure does not contain sqrt(" +
                             std::to_string(d) + ")");
        g->radicand = d;
    } else if (id.compare(0, 4, "sqrt") == 0 && id.size() > 4 &&
               std::all_of(id.begin() + 4, id.end(), ::isdigit)) {
        throw InputError("generator id '" + id + "' is reserved for sqrt(" + id.substr(4) + ")");
    }
    return g;
}

GeneratorPtr sqrt_generator(unsigned long d)
{
    static std::mutex mu;
    static std::map<unsigned long, GeneratorPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    if (d < 2 || !squarefree(d)) throw InputError("sqrt generator needs squarefree d > 1");
    auto g = std::make_shared<Generator>();
    g->id = "sqrt" + std::to_string(d);
    g->desc = "sqrt(" + std::to_string(d) + ")";
    g->radicand = d;
    Interval box = g->enclosure(64);
    g->lo_text = decimal(box.lo, 12, false);
    g->hi_text = decimal(box.hi, 12, true);
    g->lo = parse_rational(g->lo_text);
    g->hi = parse_rational(g->hi_text);
    cache.emplace(d, g);
    return g;
}

Scalar::Scalar(Rational rat, std::vector<Term> terms) : rat_(std::move(rat))
{
    rat_.canonicalize();
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first->id < b.first->id; });
    for (auto& t : terms) {
        if (!terms_.empty() && terms_.back().first->id == t.first->id) {
            check_same(terms_.back().first, t.first);
            terms_.back().second += t.second;
        } else {
            terms_.push_back(std::move(t));
        }
    }
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return sgn(t.second) == 0; }),
                 terms_.end());
}

Scalar Scalar::generator(const GeneratorPtr& g, const Rational& coeff)
{
    return Scalar(Rational(0), {{g, coeff}});
}

Scalar Scalar::sqrt(unsigned long d)
{
    unsigned long square = 1;
    unsigned long rest = d;
    for (unsigned long p = 2; p * p <= rest; ++p)
        while (rest % (p * p) == 0) {
            rest /= p * p;
            square *= p;
        }
    if (rest == 1) return Scalar(Rational(static_cast<long>(square)));
    return generator(sqrt_generator(rest), Rational(static_cast<long>(square)));
}

Rational Scalar::coefficient(const std::string& id) const
{
    for (const auto& t : terms_)
        if (t.first->id == id) return t.second;
    return 0;
}

Interval Scalar::enclosure(unsigned bits) const
{
    Interval out{rat_, rat_};
    for (const auto& [g, c] : terms_) {
        Interval box = g->enclosure(bits);
        if (sgn(c) > 0) {
            out.lo += c * box.lo;
            out.hi += c * box.hi;
        } else {
            out.lo += c * box.hi;
            out.hi += c * box.lo;
        }
    }
    return out;
}

int Scalar::sign() const
{
    if (terms_.empty()) return sgn(rat_);
    bool refinable = std::any_of(terms_.begin(), terms_.end(),
                                 [](const Term& t) { return t.first->algebraic(); });
    unsigned budget = enclosure_budget();
    for (unsigned bits = std::min(kFirstBits, budget);; bits = std::min(2 * bits, budget)) {
        Interval box = enclosure(bits);
        if (sgn(box.lo) > 0) return 1;
        if (sgn(box.hi) < 0) return -1;
        if (!refinable || bits >= budget) throw EnclosureBudgetExceeded("sign of " + to_string(*this));
    }
}

long double Scalar::approx() const
{
    Interval box = enclosure(72);
    Rational mid = (box.lo + box.hi) / 2;
    Rational whole = floor_q(mid);
    Rational scaled = (mid - whole) * Rational(Integer(1) << 64);
    Integer f = floor_q(scaled).get_num();
    long double frac = static_cast<long double>(mpz_get_ui(f.get_mpz_t())) / 18446744073709551616.0L;
    return static_cast<long double>(whole.get_d()) + frac;
}

Scalar Scalar::operator-() const
{
    Scalar out = *this;
    out.rat_ = -out.rat_;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    if (o.terms_.empty()) {
        rat_ += o.rat_;
        return *this;
    }
    rat_ += o.rat_;
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
        if (b == o.terms_.end() || (a != terms_.end() && a->first->id < b->first->id)) {
            merged.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->first->id < a->first->id) {
            merged.push_back(*b++);
        } else {
            check_same(a->first, b->first);
            Rational c = a->second + b->second;
            if (sgn(c) != 0) merged.emplace_back(a->first, c);
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o)
{
    *this = *this * o;
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    *this = *this / o;
    return *this;
}

Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }

Scalar operator*(const Scalar& a, const Scalar& b)
{
    if (a.is_zero() || b.is_zero()) return Scalar();
    if (b.is_rational()) {
        std::vector<Scalar::Term> terms = a.terms();
        for (auto& t : terms) t.second *= b.rational_part();
        return Scalar(a.rational_part() * b.rational_part(), std::move(terms));
    }
    if (a.is_rational()) return b * a;
    Rational rat = a.rational_part() * b.rational_part();
    std::vector<Scalar::Term> terms;
    for (const auto& t : a.terms()) terms.emplace_back(t.first, t.second * b.rational_part());
    for (const auto& t : b.terms()) terms.emplace_back(t.first, t.second * a.rational_part());
    for (const auto& [g, c] : a.terms()) {
        for (const auto& [h, d] : b.terms()) {
            if (!g->algebraic() || !h->algebraic())
                throw NonlinearError("product " + g->id + "*" + h->id +
                                     " is not representable over the declared generators");
            unsigned long common = std::gcd(g->radicand, h->radicand);
            unsigned long rest = (g->radicand / common) * (h->radicand / common);
            Rational coeff = c * d * Rational(static_cast<long>(common));
            if (rest == 1)
                rat += coeff;
            else
                terms.emplace_back(sqrt_generator(rest), coeff);
        }
    }
    return Scalar(std::move(rat), std::move(terms));
}

Scalar Scalar::conjugate(unsigned long p) const
{
    Scalar out = *this;
    for (auto& t : out.terms_)
        if (t.first->algebraic() && t.first->radicand % p == 0) t.second = -t.second;
    return out;
}

Scalar Scalar::inverse() const
{
    if (is_zero()) throw Error("division by zero");
    if (terms_.empty()) return Scalar(Rational(1) / rat_);
    std::set<unsigned long> primes;
    for (const auto& t : terms_) {
        if (!t.first->algebraic())
            throw NonlinearError("inverse of a value involving opaque generator " + t.first->id);
        for (unsigned long p : prime_factors(t.first->radicand)) primes.insert(p);
    }
    Scalar num(1);
    Scalar y = *this;
    for (unsigned long p : primes) {
        Scalar c = y.conjugate(p);
        num = num * c;
        y = y * c;
    }
    if (!y.is_rational()) throw ConsistencyError("field norm did not reduce to a rational");
    return num * Scalar(Rational(1) / y.rational_part());
}

Scalar operator/(const Scalar& a, const Scalar& b)
{
    if (b.is_rational()) {
        if (sgn(b.rational_part()) == 0) throw Error("division by zero");
        return a * Scalar(Rational(1) / b.rational_part());
    }
    return a * b.inverse();
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.rat_ != b.rat_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].first->id != b.terms_[i].first->id || a.terms_[i].second != b.terms_[i].second)
            return false;
    return true;
}

int compare(const Scalar& a, const Scalar& b)
{
    if (a.is_rational() && b.is_rational()) return cmp(a.rational_part(), b.rational_part());
    return (a - b).sign();
}

bool is_rational(const Scalar& a) { return a.is_rational(); }

FloorParts floor_ops(const Scalar& a)
{
    FloorParts out;
    if (a.is_rational()) {
        const Rational& q = a.rational_part();
        mpz_fdiv_q(out.floor.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        mpz_cdiv_q(out.ceil.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        out.frac = Scalar(q - Rational(out.floor));
        out.phi = out.ceil == out.floor ? 0 : 1;
        return out;
    }
    bool refinable = std::any_of(a.terms().begin(), a.terms().end(),
                                 [](const Scalar::Term& t) { return t.first->algebraic(); });
    unsigned budget = enclosure_budget();
    for (unsigned bits = std::min(kFirstBits, budget);; bits = std::min(2 * bits, budget)) {
        Interval box = a.enclosure(bits);
        Rational f = floor_q(box.lo);
        if (box.hi <= f + 1) {
            out.floor = f.get_num();
            out.ceil = out.floor + 1;
            out.phi = 1;
            out.frac = a - Scalar(f);
            return out;
        }
        if (!refinable || bits >= budget)
            throw EnclosureBudgetExceeded("floor of " + to_string(a));
    }
}

std::vector<GeneratorPtr> generators_of(const std::vector<Scalar>& values)
{
    std::map<std::string, GeneratorPtr> seen;
    for (const auto& v : values)
        for (const auto& t : v.terms()) {
            auto [it, fresh] = seen.emplace(t.first->id, t.first);
            if (!fresh) check_same(it->second, t.first);
        }
    std::vector<GeneratorPtr> out;
    for (auto& [id, g] : seen) out.push_back(g);
    return out;
}

std::string to_string(const Scalar& a)
{
    std::ostringstream os;
    bool first = true;
    if (sgn(a.rational_part()) != 0 || a.terms().empty()) {
        os << a.rational_part().get_str();
        first = false;
    }
    for (const auto& [g, c] : a.terms()) {
        Rational mag = abs(c);
        if (first)
            os << (sgn(c) < 0 ? "-" : "");
        else
            os << (sgn(c) < 0 ? " - " : " + ");
        if (mag != 1) os << mag.get_str() << "*";
        os << g->id;
        first = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& a) { return os << to_string(a); }

}  // namespace maslov
