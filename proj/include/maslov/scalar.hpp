#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace maslov {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "p", "p/q", "-1.25", "3e-2" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Closed rational interval [lo, hi].
struct Interval {
    Rational lo;
    Rational hi;
};

// A named real number with a certified enclosure.
//
// Generators whose description is "sqrt(d)" with d squarefree are algebraic:
// their id must be "sqrt<d>", their enclosure refines without limit, and
// products/inverses stay inside the multiquadratic field they span. Every
// other generator is opaque and keeps its declared enclosure forever.
struct Generator {
    std::string id;
    std::string desc;
    Rational lo;
    Rational hi;
    std::string lo_text;
    std::string hi_text;
    unsigned long radicand = 0;

    bool algebraic() const { return radicand != 0; }
    Interval enclosure(unsigned bits) const;
};

using GeneratorPtr = std::shared_ptr<const Generator>;

GeneratorPtr declare_generator(const std::string& id, const std::string& desc,
                               const std::string& lo, const std::string& hi);
// Canonical generator for sqrt(d), d > 1 squarefree.
GeneratorPtr sqrt_generator(unsigned long d);

// Refinement budget in bits; MASLOV_ENCLOSURE_BUDGET overrides the default 256.
unsigned enclosure_budget();
void set_enclosure_budget(unsigned bits);

// rational_part + Σ coeff · generator, with coefficients sorted by generator id
// and never zero.
class Scalar {
public:
    using Term = std::pair<GeneratorPtr, Rational>;

    Scalar() = default;
    Scalar(int v) : rat_(v) {}
    Scalar(long v) : rat_(v) {}
    Scalar(const Integer& v) : rat_(v) {}
    Scalar(Rational v) : rat_(std::move(v)) { rat_.canonicalize(); }
    Scalar(Rational rat, std::vector<Term> terms);

    static Scalar generator(const GeneratorPtr& g, const Rational& coeff = 1);
    static Scalar sqrt(unsigned long d);

    const Rational& rational_part() const { return rat_; }
    const std::vector<Term>& terms() const { return terms_; }
    Rational coefficient(const std::string& id) const;

    bool is_rational() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && sgn(rat_) == 0; }

    Interval enclosure(unsigned bits) const;
    // Sign decided by refining enclosures; exact for rationals.
    int sign() const;
    long double approx() const;
    double to_double() const { return static_cast<double>(approx()); }

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    Scalar inverse() const;
    // Galois conjugate flipping every sqrt generator whose radicand has prime p.
    Scalar conjugate(unsigned long p) const;

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    Rational rat_;
    std::vector<Term> terms_;
};

Scalar operator+(Scalar a, const Scalar& b);
Scalar operator-(Scalar a, const Scalar& b);
Scalar operator*(const Scalar& a, const Scalar& b);
Scalar operator/(const Scalar& a, const Scalar& b);

int compare(const Scalar& a, const Scalar& b);
inline bool operator<(const Scalar& a, const Scalar& b) { return compare(a, b) < 0; }
inline bool operator>(const Scalar& a, const Scalar& b) { return compare(a, b) > 0; }
inline bool operator<=(const Scalar& a, const Scalar& b) { return compare(a, b) <= 0; }
inline bool operator>=(const Scalar& a, const Scalar& b) { return compare(a, b) >= 0; }

bool is_rational(const Scalar& a);

struct FloorParts {
    Integer floor;
    Scalar frac;
    Integer ceil;
    int phi = 0;
};

// floor, fractional part, E(a) = ceil and φ(a) = E(a) − ⌊a⌋.
FloorParts floor_ops(const Scalar& a);
inline Integer floor_of(const Scalar& a) { return floor_ops(a).floor; }
inline Integer ceil_of(const Scalar& a) { return floor_ops(a).ceil; }
inline Scalar frac_of(const Scalar& a) { return floor_ops(a).frac; }

// Generators referenced by a value, deduplicated by id.
std::vector<GeneratorPtr> generators_of(const std::vector<Scalar>& values);

std::string to_string(const Scalar& a);
std::ostream& operator<<(std::ostream& os, const Scalar& a);

}  // namespace maslov
