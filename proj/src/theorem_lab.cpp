#include "maslov/theorem_lab.hpp"

#include "maslov/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace maslov {

namespace {

std::string label_of(const PathRecord& rec, std::size_t k)
{
    return rec.label.empty() ? "record " + std::to_string(k + 1) : rec.label;
}

bool all_irrational(const std::vector<Scalar>& v)
{
    return std::none_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_rational(); });
}

std::string ineq(long lhs, const char* op, long rhs)
{
    return std::to_string(lhs) + " " + op + " " + std::to_string(rhs);
}

JumpProblem problem_for(const Scenario& sc, JumpProblem p)
{
    p.records = sc.records;
    return normalized(std::move(p));
}

// One certificate search plus injection for a fixed direction.
PipelineRun run_once(const JumpProblem& p, const JumpVector& v, const Direction& d, const Scenario& sc)
{
    PipelineRun run;
    run.certificate = search_N(p, v, d).hits.front();
    run.injection = rho_and_injection(run.certificate, p, sc.n, sc.non_degenerate);
    std::set<int> ones;
    for (const auto& a : run.injection.assignments)
        if (!a.empty()) ones.insert(a.front());
    run.slot_one.assign(ones.begin(), ones.end());
    return run;
}

Direction negated(const JumpVector& v, const Direction& d)
{
    std::vector<Rational> a = d.a;
    for (auto& x : a) x = -x;
    return direction_from(v, std::move(a));
}

void add_slot_checks(Report& rep, const PipelineRun& run, const Scenario& sc, const JumpProblem& p,
                     const std::string& prefix)
{
    const auto& cert = run.certificate;
    std::set<std::pair<int, int>> seen;
    for (const auto& assignment : run.injection.assignments)
        for (std::size_t s = 0; s < assignment.size(); ++s) {
            const int k = assignment[s];
            if (!seen.insert({static_cast<int>(s), k}).second) continue;
            const auto& rec = p.records[static_cast<std::size_t>(k)];
            const std::string who = prefix + "slot " + std::to_string(s + 1) + " = " + label_of(rec, static_cast<std::size_t>(k));
            rep.merge(check_jump_bounds(cert, sc, static_cast<int>(s + 1), static_cast<std::size_t>(k)), who);
            rep.merge(delta_bounds(rec, cert.chi[static_cast<std::size_t>(k)], cert.m[static_cast<std::size_t>(k)], cert.delta), who);
            rep.merge(corollary_bounds(rec, static_cast<int>(s + 1), cert.chi[static_cast<std::size_t>(k)],
                                       cert.m[static_cast<std::size_t>(k)]),
                      who);
        }
}

}  // namespace

bool is_non_degenerate(const PathRecord& rec)
{
    const auto& d = rec.descriptor;
    return d.p_minus == 1 && d.p_zero == 0 && d.p_plus == 0 && d.q_minus == 0 && d.q_zero == 0 && d.q_plus == 0 &&
           !d.numeric_angles && all_irrational(d.theta) && all_irrational(d.alpha) && all_irrational(d.beta);
}

void validate_scenario(const Scenario& sc)
{
    if (sc.n <= 0) throw InputError("n must be positive");
    if (sc.records.empty()) throw InputError("scenario has no records");
    for (std::size_t k = 0; k < sc.records.size(); ++k) {
        const auto& rec = sc.records[k];
        const std::string where = "records[" + std::to_string(k) + "]";
        try {
            validate_record(rec);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
        if (rec.n != sc.n)
            throw InputError(where + ": record dimension " + std::to_string(rec.n) + " differs from n = " +
                             std::to_string(sc.n));
        auto convex = check_convex_constraints(rec);
        if (!convex.passed()) throw InputError(where + ": " + convex.first_failure()->detail);
        if (sc.non_degenerate) {
            if (!is_non_degenerate(rec))
                throw InputError(where + ": non_degenerate requires p_minus = 1, no p_zero/p_plus/q blocks and "
                                         "irrational angles");
            for (long m = 1; m <= 12; ++m)
                if (nullity_iterate(rec, m) != 1)
                    throw ConsistencyError(where + ": nu(x, " + std::to_string(m) + ") != 1");
        }
    }
}

Report check_jump_bounds(const JumpCertificate& cert, const Scenario& sc, int s, std::size_t k)
{
    Report rep;
    const auto& rec = sc.records.at(k);
    const auto& d = rec.descriptor;
    const long m = cert.m.at(k);
    const int Delta = cert.Delta.at(k);
    const int sp = s_plus_one(d), c = capital_C(d);
    const int nu2 = nullity_iterate(rec, 2 * m);
    const long lower = sc.n + sp + c - 2L * Delta - nu2 + 1;
    const long upper = sc.n + sp + c - 2L * Delta;
    rep.add("Delta <= C", "delta-at-most-C", Delta <= c, ineq(Delta, "<=", c));
    rep.add("2s >= n + S+ + C - 2 Delta - nu(2m) + 1", "slot-lower-bound", 2L * s >= lower, ineq(2L * s, ">=", lower));
    rep.add("2s <= n + S+ + C - 2 Delta", "slot-upper-bound", 2L * s <= upper, ineq(2L * s, "<=", upper));
    if (sc.non_degenerate && sc.n == 3) {
        const long rhs = 4 + d.r() + 2L * d.r_star() - 2L * Delta;
        rep.add("2s = 4 + r + 2 r_* - 2 Delta", "slot-equality", 2L * s == rhs,
                std::to_string(2L * s) + (2L * s == rhs ? " = " : " != ") + std::to_string(rhs));
    }
    return rep;
}

Report delta_bounds(const PathRecord& rec, int chi_k, long m_k, const Rational& delta)
{
    Report rep;
    const auto& d = rec.descriptor;
    const auto rc = rational_counts(d);
    const int Delta = compute_Delta(rec, m_k, delta);
    const int bound = d.r() - rc.r_tilde + d.r_star() - rc.r_star_tilde;
    rep.add("Delta <= r - r~ + r_* - r~_*", "delta-bound", Delta <= bound, ineq(Delta, "<=", bound));
    if (chi_k == 0 && !rec.mean_index.is_rational())
        rep.add("Delta <= r - r~ - 1 + r_* - r~_* (chi = 0, irrational mean index)", "delta-bound-strict",
                Delta <= bound - 1, ineq(Delta, "<=", bound - 1));
    return rep;
}

Report corollary_bounds(const PathRecord& rec, int s, int chi_k, std::optional<long> m_k)
{
    Report rep;
    const auto& d = rec.descriptor;
    const auto rc = rational_counts(d);
    const long base = d.p_minus + d.q_plus + 2L * d.r_star() + 2L * (d.r_zero() - rc.r_zero_tilde) + d.k;
    rep.add("2s >= p- + q+ + 2 r_* + 2 (r_0 - r~_0) + k + 1", "nullity-lower-bound", 2L * s >= base + 1,
            ineq(2L * s, ">=", base + 1));
    if (chi_k == 0 && !rec.mean_index.is_rational())
        rep.add("2s >= p- + q+ + 2 r_* + 2 (r_0 - r~_0) + k + 3 (chi = 0, irrational mean index)",
                "nullity-lower-bound-strict", 2L * s >= base + 3, ineq(2L * s, ">=", base + 3));
    if (m_k) {
        const int rewritten = d.p_minus + 2 * d.p_zero + d.p_plus + d.q_minus + 2 * d.q_zero + d.q_plus +
                              2 * (rc.r_tilde + rc.r_star_tilde + rc.r_zero_tilde);
        const int actual = nullity_iterate(rec, 2 * *m_k);
        rep.add("nu(x, 2m) by rational counts", "rewritten-nullity", rewritten == actual,
                std::to_string(actual) + (rewritten == actual ? " = " : " != ") + std::to_string(rewritten));
    }
    return rep;
}

Report classify_s1(const PathRecord& rec, const Scenario& sc)
{
    Report rep;
    rep.subject = rec.label;
    const auto& d = rec.descriptor;
    const auto rc = rational_counts(d);
    std::ostringstream shape;
    shape << "p- = " << d.p_minus << ", q+ = " << d.q_plus << ", r_* = " << d.r_star() << ", k = " << d.k
          << ", r_0 = " << d.r_zero() << ", r~_0 = " << rc.r_zero_tilde;
    const bool forced = d.p_minus == 1 && d.q_plus == 0 && d.r_star() == 0 && d.k == 0 && d.r_zero() == rc.r_zero_tilde;
    rep.add("slot 1 normal form: p- = 1, q+ = r_* = k = 0, r_0 = r~_0", "slot-one-normal-form", forced, shape.str());
    rep.add("slot 1 is elliptic", "slot-one-normal-form", d.k == 0, "k = " + std::to_string(d.k));
    if (sc.non_degenerate) {
        const bool nd = d.p_zero == 0 && d.p_plus == 0 && d.q_minus == 0 && d.q_zero == 0 && rc.r_tilde == 0 &&
                        d.r_zero() == 0;
        rep.add("non-degenerate slot 1: p0 = p+ = q- = q0 = r~ = r_0 = 0", "slot-one-normal-form", nd, shape.str());
        const auto st = classify_stability(d, sc.n);
        rep.add("non-degenerate slot 1 is irrationally elliptic", "slot-one-normal-form",
                st == Stability::irrationally_elliptic, to_string(st));
    }
    return rep;
}

Report hyperbolic_axiom(const Scenario& sc)
{
    Report rep;
    for (std::size_t k = 0; k < sc.records.size(); ++k) {
        const auto st = classify_stability(sc.records[k].descriptor, sc.n);
        const bool bad = sc.finite_family && st == Stability::hyperbolic;
        rep.add(label_of(sc.records[k], k) + ": hyperbolic record in a finite family", "hyperbolic-axiom", !bad,
                bad ? "a hyperbolic closed characteristic forces infinitely many; finite_family is contradicted"
                    : to_string(st));
    }
    return rep;
}

TheoremReport run_two_elliptic(const Scenario& sc, JumpProblem problem)
{
    validate_scenario(sc);
    TheoremReport out;
    out.report.subject = "two elliptic closed characteristics";
    out.report.merge(hyperbolic_axiom(sc));
    if (!out.report.passed()) return out;

    const JumpProblem p = problem_for(sc, std::move(problem));
    const JumpVector v = build_v(p);
    const Direction a0 = choose_a(v);

    bool any_irrational = std::any_of(p.records.begin(), p.records.end(),
                                      [](const PathRecord& r) { return !r.mean_index.is_rational(); });
    if (!any_irrational) {
        out.report.add("choose a with chi_{j(1)} = 1", "chi-slot-one", false,
                       "cannot realize chi_{j(1)} = 1: every record has a rational mean index, contradicting the "
                       "irrational mean index count");
        return out;
    }

    // Try a0 then −a0 for the hat direction.
    std::optional<PipelineRun> hat;
    Direction hat_dir;
    for (int attempt = 0; attempt < 2 && !hat; ++attempt) {
        Direction d = attempt == 0 ? a0 : negated(v, a0);
        PipelineRun run = run_once(p, v, d, sc);
        out.report.merge(run.injection.checks, attempt == 0 ? "a0" : "-a0");
        bool all_one = !run.slot_one.empty();
        for (int k : run.slot_one) all_one = all_one && d.chi[static_cast<std::size_t>(k)] == 1;
        if (all_one) {
            hat = std::move(run);
            hat_dir = d;
        }
    }
    if (!hat) {
        out.report.add("choose a with chi_{j(1)} = 1", "chi-slot-one", false,
                       "cannot realize chi_{j(1)} = 1 with a0 or -a0");
        return out;
    }
    out.report.add("choose a with chi_{j(1)} = 1", "chi-slot-one", true,
                   "j(1) = " + label_of(p.records[static_cast<std::size_t>(hat->slot_one.front())],
                                        static_cast<std::size_t>(hat->slot_one.front())));
    out.report.merge(hat->certificate.checks, "hat");

    const Direction tilde_dir = negated(v, hat_dir);
    PipelineRun tilde = run_once(p, v, tilde_dir, sc);
    out.report.merge(tilde.injection.checks, "tilde");
    out.report.merge(tilde.certificate.checks, "tilde");

    for (const auto* run : {&*hat, &tilde}) {
        const bool is_hat = run == &*hat;
        const Direction& d = is_hat ? hat_dir : tilde_dir;
        const std::string tag = is_hat ? "hat: " : "tilde: ";
        add_slot_checks(out.report, *run, sc, p, tag);
        for (int k : run->slot_one) {
            const auto& rec = p.records[static_cast<std::size_t>(k)];
            const bool irr = !rec.mean_index.is_rational();
            const int chi = d.chi[static_cast<std::size_t>(k)];
            out.report.add(tag + label_of(rec, static_cast<std::size_t>(k)) + ": irrational mean index iff chi_{j(1)} = 1",
                           "irrational-mean-index-iff-chi", irr == (chi == 1),
                           std::string("irrational = ") + (irr ? "yes" : "no") + ", chi = " + std::to_string(chi));
            out.report.merge(classify_s1(rec, sc), tag + label_of(rec, static_cast<std::size_t>(k)));
        }
    }
    bool distinct = !tilde.slot_one.empty();
    for (int a : hat->slot_one)
        for (int b : tilde.slot_one) distinct = distinct && a != b;
    std::ostringstream why;
    why << "j(1) in {";
    for (int a : hat->slot_one) why << ' ' << label_of(p.records[static_cast<std::size_t>(a)], static_cast<std::size_t>(a));
    why << " }, j~(1) in {";
    for (int b : tilde.slot_one) why << ' ' << label_of(p.records[static_cast<std::size_t>(b)], static_cast<std::size_t>(b));
    why << " }";
    out.report.add("sign flip moves slot 1", "sign-flip-distinct-slot", distinct, why.str());

    std::set<int> slot_ones(hat->slot_one.begin(), hat->slot_one.end());
    slot_ones.insert(tilde.slot_one.begin(), tilde.slot_one.end());
    for (int k : slot_ones) {
        const auto& rec = p.records[static_cast<std::size_t>(k)];
        out.elliptic.push_back(label_of(rec, static_cast<std::size_t>(k)));
        const auto st = classify_stability(rec.descriptor, sc.n);
        if (sc.assumption_A) {
            out.report.add(label_of(rec, static_cast<std::size_t>(k)) + ": irrationally elliptic under Assumption A",
                           "assumption-a-consistency", st == Stability::irrationally_elliptic, to_string(st));
            out.irrationally_elliptic.push_back(label_of(rec, static_cast<std::size_t>(k)));
        } else if (st == Stability::irrationally_elliptic) {
            out.irrationally_elliptic.push_back(label_of(rec, static_cast<std::size_t>(k)));
        }
    }
    out.runs.push_back(std::move(*hat));
    out.runs.push_back(std::move(tilde));
    return out;
}

TheoremReport run_r6_pipeline(const Scenario& sc, JumpProblem problem)
{
    if (sc.n != 3) throw InputError("the R^6 pipeline needs n = 3");
    if (!sc.non_degenerate) throw InputError("the R^6 pipeline needs a non-degenerate scenario");
    if (!sc.finite_family) throw InputError("the R^6 pipeline needs finite_family");
    validate_scenario(sc);
    TheoremReport out;
    out.report.subject = "three elliptic closed characteristics in R^6";
    out.report.merge(hyperbolic_axiom(sc));
    if (!out.report.passed()) return out;

    const JumpProblem p = problem_for(sc, std::move(problem));
    const JumpVector v = build_v(p);
    const Direction d = choose_a(v);
    PipelineRun run = run_once(p, v, d, sc);
    const auto& cert = run.certificate;

    // Every slotted record satisfies 2s = 4 + r + 2r_* − 2Δ; a record for
    // which this has no solution s ∈ {1, 2, 3} can never occupy a slot.
    for (std::size_t k = 0; k < p.records.size(); ++k) {
        const auto& rec = p.records[k];
        const auto& dd = rec.descriptor;
        const long twice = 4 + dd.r() + 2L * dd.r_star() - 2L * cert.Delta[k];
        const bool slot_ok = twice % 2 == 0 && twice >= 2 && twice <= 6;
        std::string detail = "2s = 4 + r + 2r_* - 2Delta = " + std::to_string(twice);
        if (!slot_ok && dd.k > 0 && dd.r() == 1)
            detail += "; shape N1(1,1)<>R(theta)<>M1 contradicts 0 = r + 2r_* - 2Delta at slot 2";
        out.report.add(label_of(rec, k) + ": admits a slot", "slot-equality", slot_ok, detail);
    }
    out.report.merge(cert.checks, "certificate");
    out.report.merge(run.injection.checks, "injection");
    if (!out.report.passed()) {
        out.runs.push_back(std::move(run));
        return out;
    }

    add_slot_checks(out.report, run, sc, p, "");
    std::set<int> elliptic, irrational_elliptic;
    for (const auto& assignment : run.injection.assignments) {
        std::ostringstream name;
        name << "assignment (";
        for (std::size_t s = 0; s < assignment.size(); ++s)
            name << (s ? ", " : "") << label_of(p.records[static_cast<std::size_t>(assignment[s])],
                                                 static_cast<std::size_t>(assignment[s]));
        name << ")";
        const std::string tag = name.str();
        if (assignment.size() < 3) {
            out.report.add(tag + ": three slots", "slot-assignment", false, "rho < 3");
            continue;
        }
        const auto& r1 = p.records[static_cast<std::size_t>(assignment[0])];
        const auto& r2 = p.records[static_cast<std::size_t>(assignment[1])];
        const auto& r3 = p.records[static_cast<std::size_t>(assignment[2])];
        out.report.merge(classify_s1(r1, sc), tag + " slot 1");
        const long delta2 = cert.Delta[static_cast<std::size_t>(assignment[1])];
        out.report.add(tag + " slot 2: elliptic", "slot-equality", r2.descriptor.k == 0,
                       r2.descriptor.k == 0 ? "k = 0"
                                            : "0 = r + 2r_* - 2Delta = " +
                                                  std::to_string(r2.descriptor.r() + 2 * r2.descriptor.r_star() - 2 * delta2) +
                                                  " with a hyperbolic block");
        const bool three = r3.descriptor.r() == 2 || r3.descriptor.r_star() == 1;
        out.report.add(tag + " slot 3: r = 2 or r_* = 1", "slot-equality", three && r3.descriptor.k == 0,
                       "r = " + std::to_string(r3.descriptor.r()) + ", r_* = " + std::to_string(r3.descriptor.r_star()));
        int irrational = 0;
        for (int k : assignment)
            if (!p.records[static_cast<std::size_t>(k)].mean_index.is_rational()) ++irrational;
        out.report.add(tag + ": at least two irrational mean indices", "irrational-mean-index-count", irrational >= 2,
                       std::to_string(irrational) + " of 3");
        for (std::size_t s = 1; s < 3; ++s) {
            const auto& rec = p.records[static_cast<std::size_t>(assignment[s])];
            if (rec.mean_index.is_rational()) continue;
            const auto st = classify_stability(rec.descriptor, sc.n);
            out.report.add(tag + " slot " + std::to_string(s + 1) + ": irrational mean index forces irrational ellipticity",
                           "irrational-slot-classification", st == Stability::irrationally_elliptic, to_string(st));
        }
        for (int k : assignment) {
            const auto& rec = p.records[static_cast<std::size_t>(k)];
            if (rec.descriptor.k == 0) elliptic.insert(k);
            if (classify_stability(rec.descriptor, sc.n) == Stability::irrationally_elliptic) irrational_elliptic.insert(k);
        }
    }
    for (int k : elliptic) out.elliptic.push_back(label_of(p.records[static_cast<std::size_t>(k)], static_cast<std::size_t>(k)));
    for (int k : irrational_elliptic)
        out.irrationally_elliptic.push_back(label_of(p.records[static_cast<std::size_t>(k)], static_cast<std::size_t>(k)));
    out.report.add("three elliptic, at least two irrationally elliptic", "r6-conclusion",
                   out.elliptic.size() >= 3 && out.irrationally_elliptic.size() >= 2,
                   std::to_string(out.elliptic.size()) + " elliptic, " + std::to_string(out.irrationally_elliptic.size()) +
                       " irrationally elliptic");
    out.runs.push_back(std::move(run));
    return out;
}

}  // namespace maslov
