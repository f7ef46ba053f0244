#include "maslov/normal_form.hpp"

#include "maslov/errors.hpp"
#include "maslov/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace maslov {

namespace {

const Scalar kOne(1);
const Scalar kTwo(2);

bool valid_angle(const Scalar& t)
{
    return t.sign() > 0 && compare(t, kTwo) < 0 && t != kOne;
}

Scalar reduce_mod_two(const Scalar& t)
{
    Integer f = floor_of(t * Scalar(Rational(1, 2)));
    return t - Scalar(Rational(2 * f));
}

Scalar fold(const Scalar& t) { return compare(t, kOne) > 0 ? kTwo - t : t; }

void sort_angles(std::vector<Scalar>& v)
{
    std::sort(v.begin(), v.end(), [](const Scalar& a, const Scalar& b) { return compare(a, b) < 0; });
}

void add_weight(std::vector<SpectrumEntry>& out, const Scalar& angle, int w)
{
    if (w == 0) return;
    for (auto& e : out)
        if (e.angle_over_pi == angle) {
            e.s_minus += w;
            return;
        }
    out.push_back({angle, w});
}

}  // namespace

int NormalFormDescriptor::n() const
{
    return p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + r() + k + 2 * (r_star() + r_zero());
}

void NormalFormDescriptor::validate() const
{
    const int counts[] = {p_minus, p_zero, p_plus, q_minus, q_zero, q_plus, k};
    const char* names[] = {"p_minus", "p_zero", "p_plus", "q_minus", "q_zero", "q_plus", "k"};
    for (int i = 0; i < 7; ++i)
        if (counts[i] < 0) throw InputError(std::string(names[i]) + " must be non-negative");
    if (n() <= 0) throw InputError("descriptor has dimension 0");
    if (hyperbolic_negative && k == 0) throw InputError("hyperbolic_sign requires k >= 1");
    auto check = [](const std::vector<Scalar>& v, const char* name) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!valid_angle(v[i]))
                throw InputError(std::string(name) + "[" + std::to_string(i) + "] = " + to_string(v[i]) +
                                 " outside (0,1)∪(1,2) (angles are given divided by π)");
    };
    check(theta, "theta_list");
    check(alpha, "alpha_list");
    check(beta, "beta_list");
}

bool operator==(const NormalFormDescriptor& a, const NormalFormDescriptor& b)
{
    return a.p_minus == b.p_minus && a.p_zero == b.p_zero && a.p_plus == b.p_plus && a.q_minus == b.q_minus &&
           a.q_zero == b.q_zero && a.q_plus == b.q_plus && a.k == b.k &&
           a.hyperbolic_negative == b.hyperbolic_negative && a.theta == b.theta && a.alpha == b.alpha &&
           a.beta == b.beta;
}

NormalFormDescriptor canonical(NormalFormDescriptor d)
{
    sort_angles(d.theta);
    for (auto& a : d.alpha) a = fold(a);
    for (auto& b : d.beta) b = fold(b);
    sort_angles(d.alpha);
    sort_angles(d.beta);
    return d;
}

NormalFormDescriptor direct_sum(const NormalFormDescriptor& a, const NormalFormDescriptor& b)
{
    NormalFormDescriptor d = a;
    d.p_minus += b.p_minus;
    d.p_zero += b.p_zero;
    d.p_plus += b.p_plus;
    d.q_minus += b.q_minus;
    d.q_zero += b.q_zero;
    d.q_plus += b.q_plus;
    d.k += b.k;
    d.hyperbolic_negative = a.hyperbolic_negative != b.hyperbolic_negative;
    d.theta.insert(d.theta.end(), b.theta.begin(), b.theta.end());
    d.alpha.insert(d.alpha.end(), b.alpha.begin(), b.alpha.end());
    d.beta.insert(d.beta.end(), b.beta.begin(), b.beta.end());
    d.numeric_angles = a.numeric_angles || b.numeric_angles;
    return d;
}

std::vector<SpectrumEntry> minus_spectrum(const NormalFormDescriptor& d)
{
    std::vector<SpectrumEntry> out;
    add_weight(out, kOne, d.q_zero + d.q_plus);
    for (const auto& t : d.theta) add_weight(out, t, 1);
    for (const auto& a : d.alpha) {
        add_weight(out, a, 1);
        add_weight(out, kTwo - a, 1);
    }
    return out;
}

std::vector<BasicForm> basic_forms(const NormalFormDescriptor& d)
{
    std::vector<BasicForm> f;
    for (int i = 0; i < d.p_minus; ++i) f.push_back(BasicForm::N1(1, 1));
    for (int i = 0; i < d.p_zero; ++i) f.push_back(BasicForm::N1(1, 0));
    for (int i = 0; i < d.p_plus; ++i) f.push_back(BasicForm::N1(1, -1));
    for (int i = 0; i < d.q_minus; ++i) f.push_back(BasicForm::N1(-1, 1));
    for (int i = 0; i < d.q_zero; ++i) f.push_back(BasicForm::N1(-1, 0));
    for (int i = 0; i < d.q_plus; ++i) f.push_back(BasicForm::N1(-1, -1));
    for (const auto& t : d.theta) f.push_back(BasicForm::R(t));
    for (const auto& a : d.alpha) f.push_back(BasicForm::N2(a, true));
    for (const auto& b : d.beta) f.push_back(BasicForm::N2(b, false));
    for (int i = 0; i < d.k; ++i) f.push_back(BasicForm::D(i == 0 && d.hyperbolic_negative ? -2 : 2));
    return f;
}

SymplecticMatrix realize(const NormalFormDescriptor& d, Mode preferred)
{
    d.validate();
    auto forms = basic_forms(d);
    bool exact = preferred == Mode::exact && !d.numeric_angles;
    for (const auto& f : forms)
        if ((f.kind == BasicKind::R || f.kind == BasicKind::N2) && !is_table_angle(f.angle_over_pi)) exact = false;
    if (exact) {
        ExactMatrix m = exact_block(forms.front());
        for (std::size_t i = 1; i < forms.size(); ++i) m = diamond(m, exact_block(forms[i]));
        if (m.rows() != 2 * d.n()) throw ConsistencyError("dimension bookkeeping violation");
        return SymplecticMatrix::exact(std::move(m));
    }
    Eigen::MatrixXd m = numeric_block(forms.front());
    for (std::size_t i = 1; i < forms.size(); ++i) m = diamond(m, numeric_block(forms[i]));
    if (m.rows() != 2 * d.n()) throw ConsistencyError("dimension bookkeeping violation");
    return SymplecticMatrix::numeric(std::move(m));
}

std::pair<int, int> splitting_numbers(const NormalFormDescriptor& d, const Scalar& angle_over_pi)
{
    Scalar t = reduce_mod_two(angle_over_pi);
    if (t.is_zero()) return {d.p_minus + d.p_zero, d.p_minus + d.p_zero};
    if (t == kOne) return {d.q_zero + d.q_plus, d.q_zero + d.q_plus};
    Scalar mirror = kTwo - t;
    int plus = 0, minus = 0;
    for (const auto& th : d.theta) {
        if (th == t) minus += 1;
        if (th == mirror) plus += 1;
    }
    for (const auto& a : d.alpha)
        if (a == t || a == mirror) {
            plus += 1;
            minus += 1;
        }
    return {plus, minus};
}

int s_plus_one(const NormalFormDescriptor& d) { return d.p_minus + d.p_zero; }
int capital_C(const NormalFormDescriptor& d) { return d.q_zero + d.q_plus + d.r() + 2 * d.r_star(); }

int mu(const NormalFormDescriptor& d)
{
    int total = 0;
    for (const auto& e : minus_spectrum(d)) total += e.s_minus;
    return total;
}

int nullity_one(const NormalFormDescriptor& d) { return d.p_minus + 2 * d.p_zero + d.p_plus; }

RationalCounts rational_counts(const NormalFormDescriptor& d)
{
    if (d.numeric_angles) throw Error("rationality undecidable numerically");
    auto count = [](const std::vector<Scalar>& v) {
        return static_cast<int>(std::count_if(v.begin(), v.end(), [](const Scalar& s) { return s.is_rational(); }));
    };
    return {count(d.theta), count(d.alpha), count(d.beta)};
}

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::elliptic: return "elliptic";
    case Stability::hyperbolic: return "hyperbolic";
    case Stability::irrationally_elliptic: return "irrationally_elliptic";
    case Stability::mixed: return "mixed";
    }
    return "mixed";
}

Stability classify_stability(const NormalFormDescriptor& d, int n)
{
    d.validate();
    if (d.n() != n) throw InputError("descriptor dimension " + std::to_string(d.n()) + " does not match n = " +
                                     std::to_string(n));
    const bool only_shear = d.p_minus == 1 && d.p_zero == 0 && d.p_plus == 0 && d.q_minus == 0 &&
                            d.q_zero == 0 && d.q_plus == 0 && d.r_star() == 0 && d.r_zero() == 0;
    if (only_shear && d.k == 0 && d.r() == n - 1 && !d.numeric_angles &&
        std::none_of(d.theta.begin(), d.theta.end(), [](const Scalar& t) { return t.is_rational(); }))
        return Stability::irrationally_elliptic;
    if (d.k == 0) return Stability::elliptic;
    if (only_shear && d.r() == 0 && d.k == n - 1) return Stability::hyperbolic;
    return Stability::mixed;
}

namespace {

struct Tally {
    int negative = 0;
    int positive = 0;
    int zero = 0;
};

// Splits a ±1 generalized eigenspace of dimension m and eigenspace dimension
// nu into (a = 1, a = 0, a = −1) style counts from the form inertia.
void split_unipotent(int m, int nu, const Inertia& form, int& first, int& middle, int& last, bool minus_one)
{
    int blocks_with_sign = form.negative + form.positive;
    int rest = form.zero - blocks_with_sign;
    if (rest < 0 || rest % 2 != 0 || m != 2 * (blocks_with_sign + rest / 2) || nu != blocks_with_sign + rest)
        throw Error("unsupported Jordan structure at eigenvalue " + std::string(minus_one ? "-1" : "1"));
    if (!minus_one) {
        first += form.negative;  // N₁(1,1)
        middle += rest / 2;
        last += form.positive;  // N₁(1,−1)
    } else {
        first += form.negative;  // N₁(−1,1)
        middle += rest / 2;
        last += form.positive;  // N₁(−1,−1)
    }
}

void split_rotation(int dim_e, int dim_k, const Inertia& pform, const Inertia& rform, const Scalar& theta,
                    NormalFormDescriptor& d)
{
    int n2 = (dim_e - dim_k) / 2;
    if (dim_e - dim_k < 0 || (dim_e - dim_k) % 2 != 0 || pform.positive % 2 != 0 || pform.negative % 2 != 0 ||
        pform.positive + pform.negative != 2 * n2 || rform.positive % 2 != 0 || rform.negative % 2 != 0 ||
        rform.zero != 2 * n2)
        throw Error("unsupported Jordan structure at angle " + to_string(theta) + "·π");
    for (int i = 0; i < rform.negative / 2; ++i) d.theta.push_back(theta);
    for (int i = 0; i < rform.positive / 2; ++i) d.theta.push_back(kTwo - theta);
    for (int i = 0; i < pform.positive / 2; ++i) d.alpha.push_back(theta);
    for (int i = 0; i < pform.negative / 2; ++i) d.beta.push_back(theta);
}

Decomposition decompose_exact(const ExactMatrix& m)
{
    const Eigen::Index dim = m.rows();
    const int n = static_cast<int>(dim / 2);
    ExactMatrix id = ExactMatrix::Identity(dim, dim);
    ExactMatrix j = standard_J<Scalar>(n);
    Decomposition out;
    NormalFormDescriptor& d = out.descriptor;

    Polynomial q = palindromic_reduce(characteristic_polynomial(m));
    int unit_roots = 0;
    int positive_real = 0, negative_real = 0, complex_roots = 0;
    for (const auto& [f, mult] : squarefree_factors(q)) {
        int at_minus = f(Scalar(-2)).is_zero() ? 1 : 0;
        unit_roots += mult * (sturm_count(f, Scalar(-2), kTwo) + at_minus);
        positive_real += mult * sturm_count(f, kTwo, std::nullopt);
        int below = sturm_count(f, std::nullopt, Scalar(-2)) - at_minus;
        negative_real += mult * below;
        int real = sturm_count(f, std::nullopt, std::nullopt);
        complex_roots += mult * (f.degree() - real);
    }
    d.k = positive_real + negative_real + complex_roots;
    d.hyperbolic_negative = negative_real % 2 == 1;

    int found = 0;
    for (int sign : {1, -1}) {
        int mult = root_multiplicity(q, Scalar(2 * sign));
        if (mult == 0) continue;
        found += mult;
        ExactMatrix a = m - id * Scalar(sign);
        ExactMatrix e = nullspace(power(a, static_cast<unsigned>(dim)));
        int nu = static_cast<int>(dim) - rank(a);
        Inertia form = inertia(ExactMatrix(e.transpose() * symmetric_part(ExactMatrix(a.transpose() * j)) * e));
        if (sign == 1)
            split_unipotent(static_cast<int>(e.cols()), nu, form, d.p_minus, d.p_zero, d.p_plus, false);
        else
            split_unipotent(static_cast<int>(e.cols()), nu, form, d.q_minus, d.q_zero, d.q_plus, true);
    }
    for (long k = 1; k < 12; ++k) {
        Scalar theta(Rational(k, 12));
        auto trig = exact_trig(theta);
        Scalar w = trig->cos * kTwo;
        int mult = root_multiplicity(q, w);
        if (mult == 0) continue;
        found += mult;
        ExactMatrix p = m * m - m * w + id;
        ExactMatrix e = nullspace(power(p, static_cast<unsigned>(n)));
        ExactMatrix kk = nullspace(p);
        Inertia pform = inertia(ExactMatrix(e.transpose() * symmetric_part(ExactMatrix(p.transpose() * j)) * e));
        Inertia rform = inertia(ExactMatrix(kk.transpose() * symmetric_part(ExactMatrix(j * m)) * kk));
        split_rotation(static_cast<int>(e.cols()), static_cast<int>(kk.cols()), pform, rform, theta, d);
    }
    if (found != unit_roots)
        throw Error("exact decomposition is restricted to unit eigenvalues at multiples of π/12");
    out.certainty.certain = true;
    out.certainty.notes.push_back("exact");
    return out;
}

// Right singular vectors for the `count` smallest singular values.
Eigen::MatrixXd smallest_subspace(const Eigen::MatrixXd& a, Eigen::Index count, double& gap_low, double& gap_high)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index n = s.size();
    gap_low = count > 0 ? s(n - count) : 0.0;
    gap_high = count < n ? s(n - count - 1) : INFINITY;
    return svd.matrixV().rightCols(count);
}

Decomposition decompose_numeric(const Eigen::MatrixXd& m, double tol)
{
    const Eigen::Index dim = m.rows();
    const int n = static_cast<int>(dim / 2);
    const double radius = std::sqrt(tol);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd j = standard_J<double>(n);
    Decomposition out;
    NormalFormDescriptor& d = out.descriptor;
    d.numeric_angles = true;
    double margin = INFINITY;
    auto note_rank = [&](double lo, double hi) {
        // lo should be ~0 and hi well separated; margin tracks the weaker side.
        double sep = std::min(hi / (scale * 1e-6), (scale * 1e-6) / std::max(lo, 1e-300));
        margin = std::min(margin, sep);
    };
    auto form_inertia = [&](const Eigen::MatrixXd& f) {
        double fscale = std::max(1.0, f.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            double e = std::abs(es.eigenvalues()(i));
            if (e > 1e-6 * fscale) margin = std::min(margin, e / (1e-6 * fscale));
        }
        return numeric_inertia(f, 1e-6 * fscale);
    };
    int negative_real = 0;
    for (const auto& c : cluster_eigenvalues(m, radius)) {
        double dev = std::abs(std::abs(c.center) - 1.0);
        if (dev > radius) {
            if (dev <= 10 * radius) throw NumericError("borderline spectrum");
            if (std::abs(c.center) < 1.0) continue;
            if (std::abs(c.center.imag()) <= radius) {
                d.k += c.multiplicity;
                if (c.center.real() < 0) negative_real += c.multiplicity;
            } else if (c.center.imag() > 0) {
                d.k += 2 * c.multiplicity;
            }
            continue;
        }
        const double theta = std::arg(c.center);
        if (std::abs(c.center - 1.0) <= radius || std::abs(c.center + 1.0) <= radius) {
            const bool minus_one = c.center.real() < 0;
            Eigen::MatrixXd a = m - (minus_one ? -1.0 : 1.0) * id;
            double lo, hi;
            Eigen::MatrixXd apow = a;
            for (int i = 1; i < c.multiplicity; ++i) apow = apow * a;
            Eigen::MatrixXd e = smallest_subspace(apow, c.multiplicity, lo, hi);
            note_rank(lo, hi);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
            int nu = 0;
            for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()(i) <= 1e-6 * scale) ++nu;
            Inertia form = form_inertia(e.transpose() * symmetric_part(Eigen::MatrixXd(a.transpose() * j)) * e);
            if (!minus_one)
                split_unipotent(c.multiplicity, nu, form, d.p_minus, d.p_zero, d.p_plus, false);
            else
                split_unipotent(c.multiplicity, nu, form, d.q_minus, d.q_zero, d.q_plus, true);
            continue;
        }
        if (theta < 0) continue;
        Eigen::MatrixXd p = m * m - 2.0 * std::cos(theta) * m + id;
        Eigen::MatrixXd ppow = p;
        for (int i = 1; i < c.multiplicity; ++i) ppow = ppow * p;
        double lo, hi;
        Eigen::MatrixXd e = smallest_subspace(ppow, 2 * c.multiplicity, lo, hi);
        note_rank(lo, hi);
        Eigen::MatrixXd kk = numeric_nullspace(p, 1e-6 * scale * scale);
        Inertia pform = form_inertia(e.transpose() * symmetric_part(Eigen::MatrixXd(p.transpose() * j)) * e);
        Inertia rform = form_inertia(kk.transpose() * symmetric_part(Eigen::MatrixXd(j * m)) * kk);
        Scalar t(Rational(theta / M_PI));
        split_rotation(static_cast<int>(e.cols()), static_cast<int>(kk.cols()), pform, rform, t, d);
    }
    d.hyperbolic_negative = negative_real % 2 == 1;
    out.certainty.margin = margin;
    out.certainty.certain = margin >= 10.0;
    if (!out.certainty.certain) out.certainty.notes.push_back("decision statistic within a decade of its threshold");
    if (d.n() != n) throw ConsistencyError("decomposition lost dimensions");
    return out;
}

}  // namespace

Decomposition decompose(const SymplecticMatrix& m, double tol)
{
    Decomposition out = m.is_exact() ? decompose_exact(m.exact_entries()) : decompose_numeric(m.numeric_entries(), tol);
    if (out.descriptor.n() != m.n()) throw ConsistencyError("decomposition lost dimensions");
    return out;
}

}  // namespace maslov
