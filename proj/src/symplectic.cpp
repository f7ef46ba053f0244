#include "maslov/symplectic.hpp"

#include "maslov/errors.hpp"
#include "maslov/polynomial.hpp"

#include <cmath>
#include <numeric>

namespace maslov {

namespace {

constexpr double kBorderlineBand = 1e-5;

// cos(kπ/12) for k = 0..6.
const std::vector<Scalar>& cos_twelfths()
{
    static const std::vector<Scalar> table = [] {
        Scalar s2 = Scalar::sqrt(2), s3 = Scalar::sqrt(3), s6 = Scalar::sqrt(6);
        Scalar q(Rational(1, 4));
        return std::vector<Scalar>{Scalar(1),          (s6 + s2) * q,
                                   s3 * Scalar(Rational(1, 2)), s2 * Scalar(Rational(1, 2)),
                                   Scalar(Rational(1, 2)),      (s6 - s2) * q,
                                   Scalar(0)};
    }();
    return table;
}

Scalar cos_k(long k)
{
    k = ((k % 24) + 24) % 24;
    if (k > 12) k = 24 - k;
    if (k > 6) return -cos_twelfths()[static_cast<std::size_t>(12 - k)];
    return cos_twelfths()[static_cast<std::size_t>(k)];
}

}  // namespace

SymplecticMatrix SymplecticMatrix::exact(ExactMatrix m)
{
    if (m.rows() != m.cols() || m.rows() % 2 != 0) throw InputError("symplectic matrix must be 2n x 2n");
    if (!is_zero(symplectic_residual(m))) throw InputError("non-symplectic input");
    return SymplecticMatrix(std::move(m));
}

SymplecticMatrix SymplecticMatrix::numeric(Eigen::MatrixXd m)
{
    if (m.rows() != m.cols() || m.rows() % 2 != 0) throw InputError("symplectic matrix must be 2n x 2n");
    double r = symplectic_residual(m).cwiseAbs().maxCoeff();
    if (!(r <= kSymplecticResidualTol)) throw InputError("non-symplectic input (residual " + std::to_string(r) + ")");
    return SymplecticMatrix(std::move(m));
}

Eigen::Index SymplecticMatrix::dim() const
{
    return is_exact() ? exact_entries().rows() : numeric_entries().rows();
}

Eigen::MatrixXd SymplecticMatrix::to_numeric() const
{
    return is_exact() ? to_double(exact_entries()) : numeric_entries();
}

double SymplecticMatrix::residual() const
{
    if (is_exact()) return is_zero(symplectic_residual(exact_entries())) ? 0.0 : 1.0;
    return symplectic_residual(numeric_entries()).cwiseAbs().maxCoeff();
}

SymplecticMatrix diamond(const SymplecticMatrix& m1, const SymplecticMatrix& m2)
{
    if (m1.mode() != m2.mode()) throw Error("mode mismatch in diamond product");
    if (m1.is_exact()) return SymplecticMatrix::exact(diamond(m1.exact_entries(), m2.exact_entries()));
    return SymplecticMatrix::numeric(diamond(m1.numeric_entries(), m2.numeric_entries()));
}

std::optional<ExactTrig> exact_trig(const Scalar& over_pi)
{
    if (!over_pi.is_rational()) return std::nullopt;
    Rational twelve = over_pi.rational_part() * 12;
    if (twelve.get_den() != 1) return std::nullopt;
    Integer k24;
    mpz_fdiv_r_ui(k24.get_mpz_t(), twelve.get_num_mpz_t(), 24);
    long k = k24.get_si();
    return ExactTrig{cos_k(k), cos_k(6 - k)};
}

bool is_table_angle(const Scalar& over_pi) { return exact_trig(over_pi).has_value(); }

BasicForm BasicForm::D(int lambda)
{
    if (lambda != 2 && lambda != -2) throw InputError("D(λ) needs λ = ±2");
    BasicForm f;
    f.kind = BasicKind::D;
    f.lambda = lambda;
    return f;
}

BasicForm BasicForm::N1(int lambda, int a)
{
    if ((lambda != 1 && lambda != -1) || a < -1 || a > 1) throw InputError("N1(λ, a) needs λ = ±1, a ∈ {−1, 0, 1}");
    BasicForm f;
    f.kind = BasicKind::N1;
    f.lambda = lambda;
    f.a = a;
    return f;
}

BasicForm BasicForm::R(const Scalar& angle_over_pi)
{
    BasicForm f;
    f.kind = BasicKind::R;
    f.angle_over_pi = angle_over_pi;
    return f;
}

BasicForm BasicForm::N2(const Scalar& angle_over_pi, bool nontrivial)
{
    BasicForm f;
    f.kind = BasicKind::N2;
    f.angle_over_pi = angle_over_pi;
    f.nontrivial = nontrivial;
    return f;
}

ExactMatrix exact_block(const BasicForm& f)
{
    switch (f.kind) {
    case BasicKind::D: {
        ExactMatrix m = ExactMatrix::Zero(2, 2);
        m(0, 0) = Scalar(f.lambda);
        m(1, 1) = Scalar(Rational(1, f.lambda));
        return m;
    }
    case BasicKind::N1: {
        ExactMatrix m = ExactMatrix::Zero(2, 2);
        m(0, 0) = m(1, 1) = Scalar(f.lambda);
        m(0, 1) = Scalar(f.a);
        return m;
    }
    case BasicKind::R:
    case BasicKind::N2: {
        auto trig = exact_trig(f.angle_over_pi);
        if (!trig) throw Error("angle " + to_string(f.angle_over_pi) + "·π has no exact cosine in the table");
        ExactMatrix r(2, 2);
        r << trig->cos, -trig->sin, trig->sin, trig->cos;
        if (f.kind == BasicKind::R) return r;
        ExactMatrix m = ExactMatrix::Zero(4, 4);
        m.topLeftCorner(2, 2) = r;
        m.bottomRightCorner(2, 2) = r;
        m.topRightCorner(2, 2) = f.nontrivial ? r : ExactMatrix(-r);
        return m;
    }
    }
    throw Error("unknown basic form");
}

Eigen::MatrixXd numeric_block(const BasicForm& f)
{
    switch (f.kind) {
    case BasicKind::D:
        return Eigen::Vector2d(f.lambda, 1.0 / f.lambda).asDiagonal();
    case BasicKind::N1: {
        Eigen::MatrixXd m(2, 2);
        m << f.lambda, f.a, 0, f.lambda;
        return m;
    }
    case BasicKind::R:
    case BasicKind::N2: {
        double t = M_PI * static_cast<double>(f.angle_over_pi.approx());
        Eigen::MatrixXd r(2, 2);
        r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        if (f.kind == BasicKind::R) return r;
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
        m.topLeftCorner(2, 2) = r;
        m.bottomRightCorner(2, 2) = r;
        m.topRightCorner(2, 2) = f.nontrivial ? r : Eigen::MatrixXd(-r);
        return m;
    }
    }
    throw Error("unknown basic form");
}

SymplecticMatrix BasicForm::realize(Mode preferred) const
{
    bool exact_ok = (kind == BasicKind::D || kind == BasicKind::N1) || is_table_angle(angle_over_pi);
    if (preferred == Mode::exact && exact_ok) return SymplecticMatrix::exact(exact_block(*this));
    return SymplecticMatrix::numeric(numeric_block(*this));
}

int n2_triviality_sign(const Eigen::Matrix2d& b, double theta)
{
    double v = (b(0, 1) - b(1, 0)) * std::sin(theta);
    return v < 0 ? -1 : (v > 0 ? 1 : 0);
}

std::vector<EigenCluster> cluster_eigenvalues(const Eigen::MatrixXd& m, double radius)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    const auto& ev = es.eigenvalues();
    const Eigen::Index n = ev.size();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Eigen::Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(ev(i) - ev(j)) <= radius) parent[static_cast<std::size_t>(find(j))] = find(i);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (find(i) != find(j) && std::abs(ev(i) - ev(j)) <= 10 * radius)
                throw NumericError("ambiguous cluster near " + std::to_string(ev(i).real()) + "+" +
                                   std::to_string(ev(i).imag()) + "i");
    std::vector<EigenCluster> out;
    std::vector<Eigen::Index> roots;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index r = find(i);
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            out.push_back({});
            it = roots.end() - 1;
        }
        auto& c = out[static_cast<std::size_t>(it - roots.begin())];
        c.center += ev(i);
        c.multiplicity += 1;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].center /= static_cast<double>(out[k].multiplicity);
        for (Eigen::Index i = 0; i < n; ++i)
            if (find(i) == roots[k]) out[k].spread = std::max(out[k].spread, std::abs(ev(i) - out[k].center));
    }
    return out;
}

int elliptic_height(const SymplecticMatrix& m)
{
    if (m.is_exact()) {
        Polynomial q = palindromic_reduce(characteristic_polynomial(m.exact_entries()));
        Scalar two(2), minus_two(-2);
        int roots = 0;
        for (const auto& [f, mult] : squarefree_factors(q)) {
            int count = sturm_count(f, minus_two, two) + (f(minus_two).is_zero() ? 1 : 0);
            roots += mult * count;
        }
        return 2 * roots;
    }
    int e = 0;
    for (const auto& c : cluster_eigenvalues(m.numeric_entries(), std::sqrt(kUnitCircleTol))) {
        double dev = std::abs(std::abs(c.center) - 1.0);
        if (dev <= kUnitCircleTol)
            e += c.multiplicity;
        else if (dev <= kBorderlineBand)
            throw NumericError("borderline spectrum: |λ| − 1 = " + std::to_string(dev));
    }
    return e;
}

int nullity_omega(const SymplecticMatrix& m, const Scalar& angle_over_pi)
{
    if (!m.is_exact()) return nullity_omega(m.numeric_entries(), static_cast<double>(angle_over_pi.approx()));
    const ExactMatrix& a = m.exact_entries();
    const Eigen::Index d = a.rows();
    auto trig = exact_trig(angle_over_pi);
    if (!trig) throw Error("exact nullity needs an angle with a tabulated cosine; use numeric mode");
    ExactMatrix id = ExactMatrix::Identity(d, d);
    if (trig->sin.is_zero()) {
        ExactMatrix shifted = a - id * trig->cos;
        return static_cast<int>(d) - rank(shifted);
    }
    ExactMatrix p = a * a - a * (trig->cos * Scalar(2)) + id;
    return (static_cast<int>(d) - rank(p)) / 2;
}

int nullity_omega(const Eigen::MatrixXd& m, double angle_over_pi, double tol)
{
    using C = std::complex<double>;
    const Eigen::Index d = m.rows();
    C omega = std::polar(1.0, M_PI * angle_over_pi);
    Eigen::MatrixXcd shifted = m.cast<C>() - omega * Eigen::MatrixXcd::Identity(d, d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    int null = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        double s = svd.singularValues()(i);
        if (s <= tol)
            ++null;
        else if (s <= 1e3 * tol)
            throw NumericError("borderline rank: singular value " + std::to_string(s));
    }
    return null;
}

}  // namespace maslov
