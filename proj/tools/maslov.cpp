// maslov: command-line front end for the index-theory toolkit.
//
// Exit status: 0 all checks pass, 2 scenario inconsistent or a check failed,
// 3 bad input, 1 internal error or exhausted search.

#include "maslov/dynamics.hpp"
#include "maslov/errors.hpp"
#include "maslov/io.hpp"
#include "maslov/theorem_lab.hpp"

#include "CLI11.hpp"

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

using namespace maslov;
using io::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kInconsistent = 2, kInput = 3 };

struct Common {
    std::string input;
    std::string output;
    std::string format = "json";
    std::string delta, epsilon;
    long M = 0, M0 = 0;
    long n_bound = 0;
    unsigned seed = 1;
    unsigned threads = 0;
};

struct Emitted {
    json doc;
    std::string table;
    int status = kOk;
};

void finish(const Common& c, const Emitted& e)
{
    const std::string text = io::emit(e.doc);
    if (!c.output.empty()) io::write_text_file(c.output, text);
    if (c.format == "table")
        std::cout << e.table;
    else
        std::cout << text;
}

std::string report_table(const Report& r)
{
    std::ostringstream os;
    if (!r.subject.empty()) os << r.subject << "\n";
    for (const auto& c : r.checks)
        os << (c.passed ? "  PASS  " : "  FAIL  ") << std::left << std::setw(28) << c.tag << c.name
           << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    if (const Check* f = r.first_failure()) os << "first failure: [" << f->tag << "] " << f->name << "\n";
    return os.str();
}

JumpProblem apply_overrides(JumpProblem p, const Common& c)
{
    if (!c.delta.empty()) p.delta = parse_rational(c.delta);
    if (!c.epsilon.empty()) p.epsilon = parse_rational(c.epsilon);
    if (c.M) p.M = c.M;
    if (c.M0) p.M0 = c.M0;
    if (c.n_bound) p.N_bound = c.n_bound;
    if (c.threads) p.threads = c.threads;
    return p;
}

std::string certificate_table(const JumpCertificate& cert)
{
    std::ostringstream os;
    os << "N = " << cert.N << "  M = " << cert.M << "  M0 = " << cert.M0 << "  delta = " << to_string(cert.delta)
       << "  epsilon = " << to_string(cert.epsilon) << "\n";
    os << "  k    m_k   Delta_k   I_k\n";
    for (std::size_t k = 0; k < cert.m.size(); ++k)
        os << "  " << std::setw(3) << k + 1 << std::setw(6) << cert.m[k] << std::setw(10) << cert.Delta[k] << std::setw(6)
           << cert.I[k] << "\n";
    os << "  chi = (";
    for (std::size_t i = 0; i < cert.chi.size(); ++i) os << (i ? ", " : "") << cert.chi[i];
    os << ")\n";
    return os.str() + report_table(cert.checks);
}

Emitted cmd_normal_form(const Common& c)
{
    const json in = io::read_json_file(c.input);
    Emitted e;
    if (in.contains("descriptor") && !in.contains("matrix")) {
        if (!in.contains("schema") || in["schema"] != io::kSchema) throw InputError("schema: missing or unsupported");
        io::GeneratorTable gens;
        if (in.contains("generators")) gens.declare(in["generators"], "generators");
        const auto d = io::descriptor_from_json(in["descriptor"], gens, "descriptor");
        const auto m = realize(d);
        e.doc = io::matrix_document(m);
        e.doc["descriptor"] = io::to_json(d);
        e.doc["S_plus_1"] = s_plus_one(d);
        e.doc["C"] = capital_C(d);
        e.doc["nu1"] = nullity_one(d);
        e.table = "realized " + std::string(m.is_exact() ? "exact" : "numeric") + " matrix of dimension " +
                  std::to_string(m.dim()) + "; S+(1) = " + std::to_string(s_plus_one(d)) +
                  ", C = " + std::to_string(capital_C(d)) + ", nu(1) = " + std::to_string(nullity_one(d)) + "\n";
        return e;
    }
    const auto m = io::matrix_document(in);
    const auto dec = decompose(m);
    e.doc = io::to_json(dec);
    e.doc["schema"] = io::kSchema;
    e.doc["stability"] = to_string(classify_stability(dec.descriptor, static_cast<int>(m.n())));
    std::ostringstream os;
    const auto& d = dec.descriptor;
    os << "p- " << d.p_minus << "  p0 " << d.p_zero << "  p+ " << d.p_plus << "  q- " << d.q_minus << "  q0 "
       << d.q_zero << "  q+ " << d.q_plus << "  k " << d.k << "\n";
    for (const auto& t : d.theta) os << "  R(theta)   theta/pi = " << to_string(t) << "\n";
    for (const auto& t : d.alpha) os << "  N2 nontrivial   /pi = " << to_string(t) << "\n";
    for (const auto& t : d.beta) os << "  N2 trivial   /pi = " << to_string(t) << "\n";
    os << "stability: " << to_string(classify_stability(d, static_cast<int>(m.n())))
       << (dec.certainty.certain ? "" : "  (uncertain)")
       << (d.numeric_angles ? "  (numeric angles; rationality undecided)" : "") << "\n";
    e.table = os.str();
    return e;
}

Emitted cmd_iterate(const Common& c, long m_max)
{
    if (m_max < 1) throw InputError("--m-max must be positive");
    const json in = io::read_json_file(c.input);
    Scenario sc;
    if (in.contains("n"))
        sc = io::scenario_from_json(in);
    else
        sc.records = io::problem_from_json(in).records;
    Emitted e;
    e.doc = {{"schema", io::kSchema}, {"records", json::array()}};
    std::ostringstream os;
    for (const auto& rec : sc.records) {
        json rows = json::array();
        os << rec.label << "  mean index " << to_string(rec.mean_index) << "\n     m     i(m)   nu(m)   m*mean\n";
        for (long m = 1; m <= m_max; ++m) {
            const int i = index_iterate(rec, m);
            const int nu = nullity_iterate(rec, m);
            const double mean = static_cast<double>(m) * rec.mean_index.to_double();
            rows.push_back({{"m", m}, {"index", i}, {"nullity", nu}});
            os << std::setw(6) << m << std::setw(9) << i << std::setw(8) << nu << std::setw(12) << std::fixed
               << std::setprecision(4) << mean << "\n";
        }
        e.doc["records"].push_back({{"label", rec.label}, {"mean_index", io::to_json(rec.mean_index)}, {"iterates", rows}});
    }
    e.table = os.str();
    return e;
}

Emitted cmd_jump_search(const Common& c)
{
    const JumpProblem p = normalized(apply_overrides(io::problem_from_json(io::read_json_file(c.input)), c));
    const auto v = build_v(p);
    const auto d = choose_a(v, {}, c.seed);
    const auto result = search_N(p, v, d);
    const auto& cert = result.hits.front();
    Emitted e;
    e.doc = io::document(cert);
    e.doc["scanned"] = result.scanned;
    e.doc["rejected"] = result.rejected;
    e.table = certificate_table(cert);
    return e;
}

Emitted cmd_jump_verify(const Common& c, const std::string& problem_path)
{
    const JumpCertificate cert = io::certificate_document(io::read_json_file(c.input));
    const JumpProblem p = normalized(apply_overrides(io::problem_from_json(io::read_json_file(problem_path)), c));
    const Report rep = verify_certificate(cert, p);
    Emitted e;
    e.doc = io::to_json(rep);
    e.doc["schema"] = io::kSchema;
    e.table = report_table(rep);
    e.status = rep.passed() ? kOk : kInconsistent;
    return e;
}

Emitted theorem_output(const TheoremReport& out)
{
    Emitted e;
    e.doc = io::document(out);
    std::ostringstream os;
    os << report_table(out.report);
    os << out.elliptic.size() << " elliptic, " << out.irrationally_elliptic.size() << " irrationally elliptic";
    if (!out.elliptic.empty()) {
        os << ":";
        for (const auto& l : out.elliptic) os << " " << l;
    }
    os << "\n" << (out.consistent() ? "consistent" : "scenario inconsistent") << "\n";
    e.table = os.str();
    e.status = out.consistent() ? kOk : kInconsistent;
    return e;
}

Emitted cmd_theorem(const Common& c, bool r6)
{
    const Scenario sc = io::parse_scenario(c.input);
    JumpProblem p = apply_overrides(JumpProblem{}, c);
    if (r6 && !c.n_bound) p.N_bound = 10000000;
    return theorem_output(r6 ? run_r6_pipeline(sc, p) : run_two_elliptic(sc, p));
}

Emitted cmd_ellipsoid_gen(const Common& c, long steps)
{
    const Ellipsoid el = io::ellipsoid_from_json(io::read_json_file(c.input));
    EllipsoidOptions opts;
    opts.steps = steps;
    opts.threads = c.threads;
    const EllipsoidRun run = ellipsoid_characteristics(el, opts);
    Scenario sc;
    sc.n = el.n();
    sc.records = run.records;
    sc.non_degenerate = el.non_resonant();
    sc.finite_family = true;
    Emitted e;
    e.doc = io::document(sc);
    std::ostringstream os;
    for (const auto& rec : run.records)
        os << rec.label << "  i1 = " << rec.i1 << "  mean index = " << to_string(rec.mean_index) << "  "
           << to_string(classify_stability(rec.descriptor, sc.n)) << "\n";
    for (const auto& w : run.warnings) {
        os << "warning: " << w << "\n";
        std::cerr << "warning: " << w << "\n";
    }
    e.table = os.str() + report_table(run.checks);
    return e;
}

Emitted cmd_ellipsoid_monodromy(const Common& c, std::size_t orbit, long steps, const std::string& path_out)
{
    const Ellipsoid el = io::ellipsoid_from_json(io::read_json_file(c.input));
    if (orbit < 1 || orbit > el.alphas.size()) throw InputError("--orbit must lie in 1.." + std::to_string(el.alphas.size()));
    const auto path = linearized_path(el, orbit - 1, steps);
    const auto m = SymplecticMatrix::numeric(path.end());
    const double diff = (path.end() - analytic_monodromy(el, orbit - 1)).cwiseAbs().maxCoeff();
    if (!path_out.empty()) io::write_text_file(path_out, io::emit(io::document(path)));
    Emitted e;
    e.doc = io::matrix_document(m);
    e.doc["analytic_max_deviation"] = diff;
    e.doc["residual"] = m.residual();
    std::ostringstream os;
    os << "orbit x" << orbit << ", " << steps << " steps; residual " << m.residual() << "; max deviation from closed form "
       << diff << "\n";
    e.table = os.str();
    return e;
}

Emitted cmd_oracle(const Common& c, std::size_t orbit, long steps, int iterate)
{
    const json in = io::read_json_file(c.input);
    SampledPath path;
    if (in.contains("alphas")) {
        const Ellipsoid el = io::ellipsoid_from_json(in);
        if (orbit < 1 || orbit > el.alphas.size())
            throw InputError("--orbit must lie in 1.." + std::to_string(el.alphas.size()));
        path = linearized_path(el, orbit - 1, steps);
    } else {
        path = io::path_from_json(in);
    }
    if (iterate < 1) throw InputError("--iterate must be positive");
    if (iterate > 1) path = iterate_path(path, iterate);
    const auto r = crossing_oracle(path);
    Emitted e;
    json crossings = json::array();
    for (const auto& x : r.crossings) crossings.push_back({{"t", x.t}, {"dim", x.dim}, {"signature", x.signature}});
    e.doc = {{"schema", io::kSchema},      {"i1", r.i1},          {"nu1", r.nu1}, {"perturbed", r.perturbed},
             {"start", r.start},           {"offset", kOracleOffset}, {"crossings", crossings}};
    std::ostringstream os;
    os << "i = " << r.i1 << "  (start " << r.start << ", offset " << kOracleOffset << ", " << r.crossings.size()
       << " crossings)  nu = " << r.nu1 << (r.perturbed ? "  [degenerate endpoint perturbed]" : "") << "\n";
    for (const auto& x : r.crossings) os << "  t = " << x.t << "  dim " << x.dim << "  signature " << x.signature << "\n";
    e.table = os.str();
    return e;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Maslov-type index iteration, common index jumps and closed-characteristic scenarios"};
    app.require_subcommand(1);
    Common c;
    long m_max = 12, steps = 20000;
    std::size_t orbit = 1;
    int iterate = 1;
    std::string problem_path, path_out;

    auto common = [&](CLI::App* s, bool jump) {
        s->add_option("--input,-i", c.input, "input JSON file")->required()->check(CLI::ExistingFile);
        s->add_option("--output,-o", c.output, "write the JSON report here");
        s->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"json", "table"}));
        s->add_option("--threads", c.threads, "worker threads (0 = hardware)");
        if (jump) {
            s->add_option("--delta", c.delta, "delta as a rational, e.g. 1/5");
            s->add_option("--epsilon", c.epsilon, "epsilon as a rational");
            s->add_option("--M", c.M, "M override")->check(CLI::PositiveNumber);
            s->add_option("--M0", c.M0, "M0 override")->check(CLI::PositiveNumber);
            s->add_option("--n-bound", c.n_bound, "largest N scanned")->check(CLI::PositiveNumber);
            s->add_option("--seed", c.seed, "seed for the random direction fallback");
        }
    };

    auto* nf = app.add_subcommand("normal-form", "decompose a matrix or realize a descriptor");
    common(nf, false);
    auto* it = app.add_subcommand("iterate", "index, nullity and mean-index tables");
    common(it, false);
    it->add_option("--m-max", m_max, "largest iterate");
    auto* js = app.add_subcommand("jump-search", "search for a common index jump certificate");
    common(js, true);
    auto* jv = app.add_subcommand("jump-verify", "re-check a certificate against its problem");
    common(jv, true);
    jv->add_option("--problem", problem_path, "problem JSON")->required()->check(CLI::ExistingFile);
    auto* t2 = app.add_subcommand("theorem-two-elliptic", "two elliptic closed characteristics pipeline");
    common(t2, true);
    auto* t6 = app.add_subcommand("theorem-r6", "three elliptic closed characteristics pipeline in R^6");
    common(t6, true);
    auto* eg = app.add_subcommand("ellipsoid-gen", "closed-characteristic records of an ellipsoid");
    common(eg, false);
    eg->add_option("--steps", steps, "integration steps per period")->check(CLI::PositiveNumber);
    auto* em = app.add_subcommand("ellipsoid-monodromy", "numeric monodromy of one ellipsoid orbit");
    common(em, false);
    em->add_option("--orbit", orbit, "orbit index, 1-based");
    em->add_option("--steps", steps, "integration steps")->check(CLI::PositiveNumber);
    em->add_option("--path-out", path_out, "export the sampled path");
    auto* oc = app.add_subcommand("oracle-i1", "crossing oracle for i(gamma, 1)");
    common(oc, false);
    oc->add_option("--orbit", orbit, "orbit index when the input is an ellipsoid");
    oc->add_option("--steps", steps, "integration steps when the input is an ellipsoid")->check(CLI::PositiveNumber);
    oc->add_option("--iterate", iterate, "evaluate the m-fold iterate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        Emitted e;
        if (nf->parsed())
            e = cmd_normal_form(c);
        else if (it->parsed())
            e = cmd_iterate(c, m_max);
        else if (js->parsed())
            e = cmd_jump_search(c);
        else if (jv->parsed())
            e = cmd_jump_verify(c, problem_path);
        else if (t2->parsed())
            e = cmd_theorem(c, false);
        else if (t6->parsed())
            e = cmd_theorem(c, true);
        else if (eg->parsed())
            e = cmd_ellipsoid_gen(c, steps);
        else if (em->parsed())
            e = cmd_ellipsoid_monodromy(c, orbit, steps, path_out);
        else
            e = cmd_oracle(c, orbit, steps, iterate);
        finish(c, e);
        if (e.status == kInconsistent && e.doc.contains("first_failure"))
            std::cerr << "inconsistent: [" << e.doc["first_failure"]["tag"].get<std::string>() << "] "
                      << e.doc["first_failure"]["name"].get<std::string>() << "\n";
        return e.status;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const ConsistencyError& e) {
        std::cerr << "inconsistent: " << e.what() << "\n";
        return kInconsistent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
}
