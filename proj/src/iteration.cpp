#include "maslov/iteration.hpp"

#include "maslov/errors.hpp"

namespace maslov {

namespace {

// E(x) = min{k ∈ ℤ : k ≥ x} and φ(x) = E(x) − ⌊x⌋.
Integer E(const Scalar& x) { return ceil_of(x); }
int phi(const Scalar& x) { return floor_ops(x).phi; }

Scalar half_multiple(long m, const Scalar& over_pi) { return over_pi * Scalar(Rational(m, 2)); }

int even_indicator(long m) { return m % 2 == 0 ? 1 : 0; }

}  // namespace

Scalar mean_index(const NormalFormDescriptor& d, int i1)
{
    Scalar s(i1 + d.p_minus + d.p_zero - d.r());
    for (const auto& t : d.theta) s += t;
    return s;
}

Scalar mean_index(const PathRecord& rec) { return mean_index(rec.descriptor, rec.i1); }

void validate_record(const PathRecord& rec)
{
    const std::string where = rec.label.empty() ? "record" : "record " + rec.label;
    rec.descriptor.validate();
    if (rec.n != rec.descriptor.n())
        throw InputError(where + ": n = " + std::to_string(rec.n) + " but the descriptor has dimension " +
                         std::to_string(rec.descriptor.n()));
    if (rec.nu1 != nullity_one(rec.descriptor))
        throw InputError(where + ": nu1 = " + std::to_string(rec.nu1) + " but the descriptor forces " +
                         std::to_string(nullity_one(rec.descriptor)));
    if (rec.tau_over_pi.sign() <= 0) throw InputError(where + ": period must be positive");
    if (rec.mean_index != mean_index(rec))
        throw InputError(where + ": mean_index " + to_string(rec.mean_index) + " differs from the closed form " +
                         to_string(mean_index(rec)));
}

PathRecord make_record(std::string label, int i1, NormalFormDescriptor d, Scalar tau_over_pi)
{
    PathRecord rec;
    rec.label = std::move(label);
    rec.n = d.n();
    rec.i1 = i1;
    rec.nu1 = nullity_one(d);
    rec.descriptor = std::move(d);
    rec.tau_over_pi = std::move(tau_over_pi);
    rec.mean_index = mean_index(rec);
    validate_record(rec);
    return rec;
}

Integer index_iterate_rewritten(const PathRecord& rec, long m)
{
    const auto& d = rec.descriptor;
    Integer v = Integer(m) * (rec.i1 + d.p_minus + d.p_zero - d.r());
    for (const auto& t : d.theta) v += 2 * E(half_multiple(m, t));
    v -= d.r() + d.p_minus + d.p_zero;
    v -= even_indicator(m) * (d.q_zero + d.q_plus);
    int phis = 0;
    for (const auto& a : d.alpha) phis += phi(half_multiple(m, a));
    v += 2 * (phis - d.r_star());
    return v;
}

Integer index_iterate_abstract(const PathRecord& rec, long m)
{
    const auto& d = rec.descriptor;
    const int sp = s_plus_one(d), c = capital_C(d);
    Integer v = Integer(m) * (rec.i1 + sp - c);
    for (const auto& e : minus_spectrum(d)) v += 2 * E(half_multiple(m, e.angle_over_pi)) * e.s_minus;
    v -= sp + c;
    return v;
}

int index_iterate(const PathRecord& rec, long m)
{
    if (m < 1) throw InputError("iterate m must be positive");
    Integer a = index_iterate_rewritten(rec, m);
    Integer b = index_iterate_abstract(rec, m);
    if (a != b)
        throw ConsistencyError("index iteration forms disagree at m = " + std::to_string(m) + ": " + to_string(a) +
                               " vs " + to_string(b));
    if (!a.fits_sint_p()) throw Error("index overflow at m = " + std::to_string(m));
    return static_cast<int>(a.get_si());
}

int nullity_iterate(const PathRecord& rec, long m)
{
    if (m < 1) throw InputError("iterate m must be positive");
    const auto& d = rec.descriptor;
    int v = rec.nu1 + even_indicator(m) * (d.q_minus + 2 * d.q_zero + d.q_plus) + 2 * (d.r() + d.r_star() + d.r_zero());
    int phis = 0;
    for (const auto* list : {&d.theta, &d.alpha, &d.beta})
        for (const auto& t : *list) phis += phi(half_multiple(m, t));
    return v - 2 * phis;
}

std::vector<int> power_kernel_dims(const NormalFormDescriptor& d, long m_max)
{
    std::vector<int> out;
    SymplecticMatrix base = realize(d);
    const Eigen::Index dim = base.dim();
    if (base.is_exact()) {
        const ExactMatrix& a = base.exact_entries();
        const ExactMatrix id = ExactMatrix::Identity(dim, dim);
        ExactMatrix p = a;
        for (long m = 1; m <= m_max; ++m) {
            if (m > 1) p = p * a;
            out.push_back(static_cast<int>(dim) - rank(ExactMatrix(p - id)));
        }
        return out;
    }
    Eigen::MatrixXd p = base.numeric_entries();
    for (long m = 1; m <= m_max; ++m) {
        if (m > 1) p = p * base.numeric_entries();
        out.push_back(nullity_omega(p, 0.0, 1e-6));
    }
    return out;
}

int nullity_iterate_checked(const PathRecord& rec, long m)
{
    int formula = nullity_iterate(rec, m);
    SymplecticMatrix base = realize(rec.descriptor);
    int oracle;
    if (base.is_exact()) {
        const ExactMatrix& a = base.exact_entries();
        ExactMatrix p = power(a, static_cast<unsigned>(m));
        oracle = static_cast<int>(a.rows()) - rank(ExactMatrix(p - ExactMatrix::Identity(a.rows(), a.cols())));
    } else {
        oracle = power_kernel_dims(rec.descriptor, m).back();
    }
    if (formula != oracle)
        throw ConsistencyError("nullity formula " + std::to_string(formula) + " differs from the matrix-power kernel " +
                               std::to_string(oracle) + " at m = " + std::to_string(m));
    return formula;
}

int mean_index_deviation_bound(const NormalFormDescriptor& d)
{
    return 3 * d.r() + d.p_minus + d.p_zero + d.q_zero + d.q_plus + 2 * d.r_star();
}

Report check_convex_constraints(const PathRecord& rec)
{
    Report rep;
    rep.subject = rec.label;
    const int pm = rec.descriptor.p_minus;
    rep.add("shear block N1(1,1) present", "convex-shear-block", pm >= 1,
            pm >= 1 ? "p_minus = " + std::to_string(pm) : "missing N1(1,1): p_minus = 0");
    const Scalar mi = mean_index(rec);
    const bool above = compare(mi, Scalar(2)) > 0;
    rep.add("mean index exceeds 2", "convex-mean-index", above,
            (above ? "mean index " : "mean index ") + to_string(mi) + (above ? " > 2" : " <= 2"));
    return rep;
}

}  // namespace maslov
