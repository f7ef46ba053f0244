#include "maslov/index_jump.hpp"

#include "maslov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace maslov {

namespace {

std::vector<Scalar> rational_spectrum_angles(const PathRecord& rec)
{
    const auto& d = rec.descriptor;
    std::vector<Scalar> out;
    if (d.q_minus + d.q_zero + d.q_plus > 0) out.emplace_back(1);
    for (const auto* list : {&d.theta, &d.alpha, &d.beta})
        for (const auto& t : *list)
            if (t.is_rational()) out.push_back(t);
    for (const auto& a : d.alpha)
        if (a.is_rational()) out.push_back(Scalar(2) - a);
    return out;
}

long to_long(const Integer& z, const char* what)
{
    if (!z.fits_slong_p()) throw Error(std::string(what) + " does not fit in 64 bits");
    return z.get_si();
}

bool is_integer(const Scalar& s) { return s.is_rational() && s.rational_part().get_den() == 1; }

std::string str(const Scalar& s) { return to_string(s); }

// The slot-order checks are consequences for the family, not conditions on N.
bool jump_conditions_pass(const Report& r)
{
    for (const auto& c : r.checks)
        if (!c.passed && c.tag != "slot-order-rational" && c.tag != "slot-order-irrational" &&
            c.tag != "chi-monotonicity")
            return false;
    return true;
}

}  // namespace

long default_M(const std::vector<PathRecord>& records)
{
    Integer M = 1;
    for (const auto& rec : records)
        for (const auto& t : rational_spectrum_angles(rec)) {
            const Rational& q = t.rational_part();
            Integer need = q.get_den();
            if (q.get_num() % 2 != 0) need *= 2;
            M = lcm(M, need);
        }
    return to_long(M, "M");
}

long default_M0(const std::vector<PathRecord>& records, long M)
{
    Integer M0 = M;
    for (const auto& rec : records)
        if (rec.mean_index.is_rational()) {
            Rational x = rec.mean_index.rational_part() * M;
            Integer num = abs(x.get_num());
            if (num != 0) M0 = lcm(M0, num);
        }
    return to_long(M0, "M0");
}

Rational default_epsilon(const Rational& delta)
{
    Rational cap = delta < Rational(1, 3) ? delta : Rational(1, 3);
    return cap / 2;
}

JumpProblem normalized(JumpProblem p)
{
    if (p.M == 0) p.M = default_M(p.records);
    if (p.M0 == 0) p.M0 = default_M0(p.records, p.M);
    if (sgn(p.epsilon) == 0) p.epsilon = default_epsilon(p.delta);
    if (p.threads == 0) p.threads = std::max(1u, std::thread::hardware_concurrency());
    validate_problem(p);
    return p;
}

void validate_problem(const JumpProblem& p)
{
    if (p.records.empty()) throw InputError("problem has no records");
    for (const auto& rec : p.records) validate_record(rec);
    if (!(sgn(p.delta) > 0 && p.delta < Rational(1, 2))) throw InputError("delta must lie in (0, 1/2)");
    int max_mu = 0;
    for (const auto& rec : p.records) max_mu = std::max(max_mu, mu(rec.descriptor));
    if (!(p.delta * max_mu < Rational(1, 2)))
        throw InputError("delta * max mu_k = " + to_string(Rational(p.delta * max_mu)) + " must be < 1/2");
    if (!(sgn(p.epsilon) > 0 && p.epsilon < p.delta && p.epsilon < Rational(1, 3)))
        throw InputError("epsilon must lie in (0, min(delta, 1/3))");
    if (p.M <= 0 || p.M0 <= 0 || p.N_bound <= 0) throw InputError("M, M0 and n_bound must be positive");
    if (p.max_hits < 1) throw InputError("max_hits must be positive");
    for (const auto& rec : p.records)
        if (rec.mean_index.sign() <= 0) throw InputError("record " + rec.label + " has non-positive mean index");
}

JumpVector build_v(const JumpProblem& p)
{
    JumpVector out;
    for (std::size_t k = 0; k < p.records.size(); ++k) {
        const Scalar& mi = p.records[k].mean_index;
        if (mi.is_zero()) throw InputError("record " + p.records[k].label + " has zero mean index");
        out.v.push_back(mi.inverse());
        out.owner.push_back(static_cast<int>(k));
        out.angle.emplace_back(0);
    }
    for (std::size_t k = 0; k < p.records.size(); ++k) {
        Scalar inv = p.records[k].mean_index.inverse();
        for (const auto& e : minus_spectrum(p.records[k].descriptor))
            for (int w = 0; w < e.s_minus; ++w) {
                out.v.push_back(e.angle_over_pi * inv);
                out.owner.push_back(static_cast<int>(k));
                out.angle.push_back(e.angle_over_pi);
            }
    }
    return out;
}

Direction direction_from(const JumpVector& v, std::vector<Rational> a)
{
    if (a.size() != v.h()) throw InputError("direction has length " + std::to_string(a.size()) + ", expected " +
                                            std::to_string(v.h()));
    Direction d;
    d.lattice = relation_lattice(v.v);
    for (const auto& k : d.lattice.basis) {
        Rational dot = 0;
        for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * k[j];
        if (sgn(dot) != 0) throw InputError("direction is not in the tangent space V");
    }
    for (std::size_t j = 0; j < a.size(); ++j)
        if (!v.v[j].is_rational() && sgn(a[j]) == 0)
            throw InputError("direction has a zero entry at irrational coordinate " + std::to_string(j));
    d.chi.resize(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) d.chi[j] = sgn(a[j]) < 0 ? 1 : 0;
    d.a = std::move(a);
    return d;
}

Direction choose_a(const JumpVector& v, const std::map<std::size_t, int>& constraints, unsigned seed)
{
    const std::size_t h = v.h();
    for (const auto& [idx, val] : constraints) {
        if (idx >= h) throw InputError("constraint index " + std::to_string(idx) + " out of range");
        if (val != 0 && val != 1) throw InputError("constraint values must be 0 or 1");
        if (v.v[idx].is_rational() && val == 1)
            throw InputError("constraint unsatisfiable: coordinate " + std::to_string(idx) +
                             " is rational, which forces chi = 0");
    }
    Direction d;
    d.lattice = relation_lattice(v.v);
    const auto& T = d.lattice.tangent;
    auto combine = [&](const std::vector<long>& c) {
        std::vector<Rational> a(h, Rational(0));
        for (std::size_t i = 0; i < T.size(); ++i)
            for (std::size_t j = 0; j < h; ++j) a[j] += T[i][j] * c[i];
        return a;
    };
    auto admissible = [&](const std::vector<Rational>& a) {
        for (std::size_t j = 0; j < h; ++j)
            if (!v.v[j].is_rational() && sgn(a[j]) == 0) return false;
        for (const auto& [idx, val] : constraints)
            if (!v.v[idx].is_rational() && (sgn(a[idx]) < 0 ? 1 : 0) != val) return false;
        return true;
    };
    auto accept = [&](std::vector<Rational> a) {
        d.chi.assign(h, 0);
        for (std::size_t j = 0; j < h; ++j) d.chi[j] = sgn(a[j]) < 0 ? 1 : 0;
        d.a = std::move(a);
        return d;
    };
    if (T.empty()) {
        std::vector<Rational> zero(h, Rational(0));
        if (!admissible(zero)) throw InputError("constraint unsatisfiable: V = {0}");
        return accept(zero);
    }
    // Deterministic first choices −ΣT_i and ΣT_i, then seeded random integer combinations.
    std::vector<long> ones(T.size(), -1);
    if (auto a = combine(ones); admissible(a)) return accept(a);
    for (auto& c : ones) c = 1;
    if (auto a = combine(ones); admissible(a)) return accept(a);
    std::mt19937 rng(seed);
    for (long radius = 1; radius <= 8; ++radius) {
        std::uniform_int_distribution<long> pick(-radius, radius);
        for (int attempt = 0; attempt < 500; ++attempt) {
            std::vector<long> c(T.size());
            for (auto& x : c) x = pick(rng);
            if (auto a = combine(c); admissible(a)) return accept(a);
        }
    }
    throw InputError("constraint unsatisfiable: no direction in A(v) has the requested chi pattern");
}

long iterate_for(const PathRecord& rec, long N, long M, int chi)
{
    Scalar x = Scalar(N) / (Scalar(M) * rec.mean_index);
    return to_long((floor_of(x) + chi) * M, "m_k");
}

int compute_Delta(const PathRecord& rec, long m, const Rational& delta)
{
    int total = 0;
    const Scalar dlt(delta);
    for (const auto& e : minus_spectrum(rec.descriptor)) {
        Scalar f = frac_of(Scalar(m) * e.angle_over_pi);
        if (f.sign() > 0 && compare(f, dlt) < 0) total += e.s_minus;
    }
    return total;
}

long compute_I(const PathRecord& rec, long m)
{
    const auto& d = rec.descriptor;
    const int sp = s_plus_one(d), c = capital_C(d);
    Integer I = Integer(m) * (rec.i1 + sp - c);
    for (const auto& e : minus_spectrum(d)) I += ceil_of(Scalar(m) * e.angle_over_pi) * e.s_minus;
    Integer twice = Integer(index_iterate(rec, 2 * m)) + sp + c;
    if (2 * I != twice)
        throw ConsistencyError("2I(k,m) = " + to_string(Integer(2 * I)) + " but i(2m) + S+ + C = " + to_string(twice));
    return to_long(I, "I");
}

JumpCertificate build_certificate(const JumpProblem& p, const JumpVector& v, const Direction& d, long N)
{
    JumpCertificate c;
    c.N = N;
    c.chi = d.chi;
    c.a = d.a;
    c.delta = p.delta;
    c.epsilon = p.epsilon;
    c.M = p.M;
    c.M0 = p.M0;
    for (std::size_t k = 0; k < p.records.size(); ++k) {
        const auto& rec = p.records[k];
        long m = iterate_for(rec, N, p.M, d.chi[k]);
        c.m.push_back(m);
        c.Delta.push_back(compute_Delta(rec, m, p.delta));
        c.I.push_back(m >= 1 ? compute_I(rec, m) : 0);
    }
    (void)v;
    c.checks = verify_certificate(c, p);
    return c;
}

Report verify_certificate(const JumpCertificate& cert, const JumpProblem& p)
{
    Report rep;
    rep.subject = "certificate N = " + std::to_string(cert.N);
    const std::size_t q = p.records.size();
    const JumpVector v = build_v(p);
    if (cert.m.size() != q || cert.Delta.size() != q || cert.I.size() != q || cert.chi.size() != v.h()) {
        rep.add("certificate shape", "certificate-shape", false, "field lengths do not match the problem");
        return rep;
    }
    rep.add("M0 divides N", "mean-index-divisibility", cert.M0 > 0 && cert.N % cert.M0 == 0,
            std::to_string(cert.N) + " mod " + std::to_string(cert.M0) + " = " +
                std::to_string(cert.M0 ? cert.N % cert.M0 : -1));

    // |{Nv} − χ| < ε coordinatewise.
    {
        bool ok = true;
        std::ostringstream why;
        const Scalar eps(cert.epsilon);
        for (std::size_t j = 0; j < v.h(); ++j) {
            Scalar f = frac_of(Scalar(cert.N) * v.v[j]);
            Scalar dist = cert.chi[j] ? Scalar(1) - f : f;
            if (compare(dist, eps) >= 0) {
                ok = false;
                why << "coordinate " << j << ": {Nv} = " << str(f) << ", chi = " << cert.chi[j] << "; ";
            }
        }
        rep.add("torus proximity |{Nv} - chi| < epsilon", "torus-proximity", ok, ok ? "all coordinates" : why.str());
    }

    std::vector<Scalar> D(q);
    for (std::size_t k = 0; k < q; ++k) {
        const auto& rec = p.records[k];
        const std::string who = "path " + (rec.label.empty() ? std::to_string(k + 1) : rec.label);
        const long m = cert.m[k];
        D[k] = rec.mean_index;
        const long expect_m = iterate_for(rec, cert.N, cert.M, cert.chi[k]);
        rep.add(who + ": m_k = (floor(N/(M D_k)) + chi_k) M", "iterate-choice", m == expect_m && m >= 1,
                "m = " + std::to_string(m) + ", expected " + std::to_string(expect_m));
        if (m < 1) continue;
        const int Delta = compute_Delta(rec, m, cert.delta);
        long I = 0;
        bool identity_ok = true;
        std::string identity_detail;
        try {
            I = compute_I(rec, m);
        } catch (const ConsistencyError& e) {
            identity_ok = false;
            identity_detail = e.what();
        }
        rep.add(who + ": 2I = i(2m) + S+ + C", "index-identity", identity_ok,
                identity_ok ? "I = " + std::to_string(I) : identity_detail);
        rep.add(who + ": recorded Delta and I", "certificate-values", Delta == cert.Delta[k] && I == cert.I[k],
                "Delta = " + std::to_string(Delta) + ", I = " + std::to_string(I));
        rep.add(who + ": I = N + Delta", "jump-identity", I == cert.N + Delta,
                std::to_string(I) + (I == cert.N + Delta ? " = " : " != ") + std::to_string(cert.N) + " + " +
                    std::to_string(Delta));

        bool near_ok = true, int_ok = true;
        std::ostringstream near_why, int_why;
        const Scalar dlt(cert.delta);
        for (const auto& e : minus_spectrum(rec.descriptor)) {
            Scalar x = Scalar(m) * e.angle_over_pi;
            Scalar f = frac_of(x);
            Scalar g = Scalar(1) - f;
            Scalar mn = compare(f, g) <= 0 ? f : g;
            if (compare(mn, dlt) >= 0) {
                near_ok = false;
                near_why << "theta/pi = " << str(e.angle_over_pi) << ": {m theta/pi} = " << str(f) << "; ";
            }
            if (e.angle_over_pi.is_rational() && !is_integer(x)) {
                int_ok = false;
                int_why << "m theta/pi = " << str(x) << " for theta/pi = " << str(e.angle_over_pi) << "; ";
            }
        }
        rep.add(who + ": min({m theta/pi}, 1 - {m theta/pi}) < delta", "fraction-proximity", near_ok,
                near_ok ? "all spectrum angles" : near_why.str());
        rep.add(who + ": m theta/pi integral for rational theta/pi", "rational-angle-integrality", int_ok,
                int_ok ? "all rational angles" : int_why.str());
        if (D[k].is_rational()) {
            Scalar ratio = Scalar(cert.N) / (Scalar(cert.M) * D[k]);
            rep.add(who + ": N/(M D_k) integral for rational D_k", "mean-index-divisibility", is_integer(ratio),
                    "N/(M D_k) = " + str(ratio));
            rep.add(who + ": rational D_k forces chi_k = 0", "mean-index-divisibility", cert.chi[k] == 0,
                    "chi_k = " + std::to_string(cert.chi[k]));
        }
    }

    // Slot order: decreasing m_k D_k = (⌊N/(MD_k)⌋ + χ_k) M D_k.
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Scalar> value(q);
    for (std::size_t k = 0; k < q; ++k) value[k] = Scalar(cert.m[k]) * D[k];
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return compare(value[a], value[b]) > 0; });
    const Scalar Ns(cert.N);
    for (std::size_t x = 0; x < q; ++x)
        for (std::size_t y = x + 1; y < q; ++y) {
            const std::size_t k1 = order[x], k2 = order[y];
            const std::string pair = "pair (" + std::to_string(k1 + 1) + ", " + std::to_string(k2 + 1) + ")";
            const bool d1_irr = !D[k1].is_rational(), d2_irr = !D[k2].is_rational();
            if (!d2_irr) {
                bool ok = cert.chi[k2] == 0 && value[k2] == Ns && compare(value[k2], value[k1]) < 0 && d1_irr &&
                          cert.chi[k1] == 1;
                rep.add(pair + ": rational later slot", "slot-order-rational", ok,
                        "chi = (" + std::to_string(cert.chi[k1]) + ", " + std::to_string(cert.chi[k2]) +
                            "), D rational = (" + (d1_irr ? "no" : "yes") + ", yes)");
            }
            if (cert.chi[k2] == 1) {
                bool ok = d2_irr && compare(Ns, value[k2]) < 0 && compare(value[k2], value[k1]) < 0 && d1_irr &&
                          cert.chi[k1] == 1;
                rep.add(pair + ": chi = 1 in later slot", "slot-order-irrational", ok,
                        "chi = (" + std::to_string(cert.chi[k1]) + ", 1)");
            }
            rep.add(pair + ": chi monotone", "chi-monotonicity", cert.chi[k2] <= cert.chi[k1],
                    std::to_string(cert.chi[k2]) + " <= " + std::to_string(cert.chi[k1]));
        }
    return rep;
}

SearchResult search_N(const JumpProblem& p, const JumpVector& v, const Direction& d)
{
    SearchResult res;
    const std::size_t h = v.h();
    // Rational coordinates p/q are reduced exactly as (N·p mod q)/q.
    std::vector<long double> approx(h);
    std::vector<long> num(h, 0), den(h, 0);
    for (std::size_t j = 0; j < h; ++j) {
        approx[j] = v.v[j].approx();
        if (v.v[j].is_rational()) {
            const Rational& r = v.v[j].rational_part();
            if (r.get_den().fits_slong_p() && r.get_den() < Integer(1L << 31)) {
                Integer pr = r.get_num() % r.get_den();
                if (pr < 0) pr += r.get_den();
                num[j] = pr.get_si();
                den[j] = r.get_den().get_si();
            }
        }
    }
    const long double eps = static_cast<long double>(p.epsilon.get_d());
    // Long-double fractional parts are trusted to 1e-12; the exact check decides.
    const long double slack = 1e-12L;
    const long count = p.N_bound / p.M0;
    const long block = 1L << 16;
    const unsigned workers = std::max(1u, p.threads);

    struct Local {
        std::vector<long> candidates;
        long best_N = 0;
        long double best = 2.0L;
    };
    auto scan = [&](long first, long last, Local& out) {
        for (long idx = first; idx < last; ++idx) {
            const long N = (idx + 1) * p.M0;
            long double worst = 0.0L;
            for (std::size_t j = 0; j < h; ++j) {
                long double f;
                if (den[j] != 0) {
                    f = static_cast<long double>(static_cast<long>((static_cast<__int128>(N % den[j]) * num[j]) % den[j])) /
                        static_cast<long double>(den[j]);
                } else {
                    long double x = static_cast<long double>(N) * approx[j];
                    f = x - std::floor(x);
                }
                long double dist = d.chi[j] ? 1.0L - f : f;
                if (dist > worst) {
                    worst = dist;
                    if (worst >= eps + slack && worst >= out.best) break;
                }
            }
            if (worst < out.best) {
                out.best = worst;
                out.best_N = N;
            }
            if (worst < eps + slack) out.candidates.push_back(N);
        }
    };

    long double best = 2.0L;
    for (long start = 0; start < count && static_cast<int>(res.hits.size()) < p.max_hits; start += block) {
        const long stop = std::min(count, start + block);
        std::vector<Local> locals(workers);
        std::vector<std::thread> pool;
        const long span = (stop - start + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            long a = start + w * span, b = std::min(stop, a + span);
            if (a >= b) continue;
            pool.emplace_back(scan, a, b, std::ref(locals[w]));
        }
        for (auto& t : pool) t.join();
        std::vector<long> candidates;
        for (const auto& l : locals) {
            candidates.insert(candidates.end(), l.candidates.begin(), l.candidates.end());
            if (l.best < best || (l.best == best && l.best_N < res.best_near_miss)) {
                best = l.best;
                res.best_near_miss = l.best_N;
            }
        }
        std::sort(candidates.begin(), candidates.end());
        res.scanned = stop;
        for (long N : candidates) {
            JumpCertificate cert = build_certificate(p, v, d, N);
            if (jump_conditions_pass(cert.checks)) {
                res.hits.push_back(std::move(cert));
                if (static_cast<int>(res.hits.size()) >= p.max_hits) break;
            } else {
                ++res.rejected;
            }
        }
    }
    res.best_distance = static_cast<double>(best);
    if (res.hits.empty()) {
        std::ostringstream msg;
        msg << "no hit below bound " << p.N_bound << " (best near-miss N = " << res.best_near_miss
            << ", max coordinate distance " << res.best_distance << ", epsilon " << to_string(p.epsilon)
            << ", rejected " << res.rejected << ")";
        throw Error(msg.str());
    }
    return res;
}

Injection rho_and_injection(const JumpCertificate& cert, const JumpProblem& p, int n, bool non_degenerate)
{
    Injection inj;
    inj.checks.subject = "injection at N = " + std::to_string(cert.N);
    const std::size_t q = p.records.size();
    bool first = true;
    for (const auto& rec : p.records) {
        Rational val(rec.i1 + 2 * s_plus_one(rec.descriptor) - rec.nu1 + n, 2);
        if (first || val < inj.rho_value) inj.rho_value = val;
        first = false;
    }
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), inj.rho_value.get_num_mpz_t(), inj.rho_value.get_den_mpz_t());
    inj.rho = static_cast<int>(fl.get_si());
    if (inj.rho_value.get_den() != 1)
        inj.checks.note("rho minimum " + to_string(inj.rho_value) + " is not an integer; floored to " +
                        std::to_string(inj.rho));
    inj.checks.note("rho is evaluated with i(x,1) in place of the mean index");
    if (non_degenerate)
        inj.checks.add("rho equals n for non-degenerate families", "rho-equals-n", inj.rho == n,
                       "rho = " + std::to_string(inj.rho) + ", n = " + std::to_string(n));

    std::vector<long> i2(q);
    std::vector<int> nu2(q);
    std::vector<Scalar> mean2(q);
    for (std::size_t k = 0; k < q; ++k) {
        i2[k] = index_iterate(p.records[k], 2 * cert.m[k]);
        nu2[k] = nullity_iterate(p.records[k], 2 * cert.m[k]);
        mean2[k] = Scalar(2 * cert.m[k]) * p.records[k].mean_index;
    }
    for (int s = 1; s <= inj.rho; ++s) {
        const long mid = 2 * cert.N - 2 * s + n;
        std::vector<int> row;
        std::ostringstream detail;
        for (std::size_t k = 0; k < q; ++k) {
            const bool in = i2[k] <= mid && mid <= i2[k] + nu2[k] - 1;
            if (in) row.push_back(static_cast<int>(k));
            detail << "k=" << k + 1 << ": " << i2[k] << " <= " << mid << " <= " << i2[k] + nu2[k] - 1
                   << (in ? " yes; " : " no; ");
        }
        inj.checks.add("slot " + std::to_string(s) + " sandwich", "index-sandwich", !row.empty(), detail.str());
        if (row.size() > 1) inj.checks.note("slot " + std::to_string(s) + " has several candidates");
        inj.rows.push_back(std::move(row));
    }

    std::vector<int> current;
    std::vector<bool> used(q, false);
    std::function<void(int)> extend = [&](int s) {
        if (s > inj.rho) {
            inj.assignments.push_back(current);
            return;
        }
        for (int k : inj.rows[static_cast<std::size_t>(s - 1)]) {
            if (used[static_cast<std::size_t>(k)]) continue;
            if (!current.empty() &&
                compare(mean2[static_cast<std::size_t>(k)], mean2[static_cast<std::size_t>(current.back())]) >= 0)
                continue;
            used[static_cast<std::size_t>(k)] = true;
            current.push_back(k);
            extend(s + 1);
            current.pop_back();
            used[static_cast<std::size_t>(k)] = false;
        }
    };
    extend(1);
    inj.checks.add("injective mean-index-monotone assignment exists", "slot-assignment", !inj.assignments.empty(),
                   std::to_string(inj.assignments.size()) + " assignment(s)");
    return inj;
}

}  // namespace maslov
