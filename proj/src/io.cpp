#include "maslov/io.hpp"

#include "maslov/errors.hpp"

#include <fstream>
#include <sstream>

namespace maslov::io {

namespace {

std::string at_key(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw InputError((path.empty() ? std::string("document") : path) + ": " + what);
}

void need_object(const json& j, const std::string& path)
{
    if (!j.is_object()) fail(path, "expected an object");
}

const json& field(const json& j, const std::string& key, const std::string& path)
{
    need_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) fail(at_key(path, key), "missing field");
    return *it;
}

const json* optional_field(const json& j, const std::string& key, const std::string& path)
{
    need_object(j, path);
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

long get_long(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

int get_int(const json& j, const std::string& path)
{
    const long v = get_long(j, path);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(path, "integer out of range");
    return static_cast<int>(v);
}

bool get_bool(const json& j, const std::string& path)
{
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path)
{
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double get_double(const json& j, const std::string& path)
{
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

const json& get_array(const json& j, const std::string& path)
{
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

int int_or(const json& j, const std::string& key, const std::string& path, int def)
{
    const json* f = optional_field(j, key, path);
    return f ? get_int(*f, at_key(path, key)) : def;
}

bool bool_or(const json& j, const std::string& key, const std::string& path, bool def)
{
    const json* f = optional_field(j, key, path);
    return f ? get_bool(*f, at_key(path, key)) : def;
}

void check_schema(const json& j)
{
    const json& s = field(j, "schema", "");
    if (get_long(s, "schema") != kSchema) fail("schema", "unsupported version " + s.dump());
}

template <typename F>
auto wrap(const std::string& path, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const InputError& e) {
        const std::string what = e.what();
        if (!path.empty() && what.rfind(path, 0) != 0) throw InputError(path + ": " + what);
        throw;
    }
}

using GenMap = std::map<std::string, GeneratorPtr>;

void collect(const Scalar& s, GenMap& out)
{
    for (const auto& [g, c] : s.terms()) out.emplace(g->id, g);
}

void collect(const NormalFormDescriptor& d, GenMap& out)
{
    for (const auto* v : {&d.theta, &d.alpha, &d.beta})
        for (const auto& s : *v) collect(s, out);
}

void collect(const PathRecord& r, GenMap& out)
{
    collect(r.descriptor, out);
    collect(r.tau_over_pi, out);
    collect(r.mean_index, out);
}

void attach_generators(json& doc, const GenMap& gens)
{
    json list = json::array();
    for (const auto& [id, g] : gens) {
        if (g->algebraic()) continue;
        list.push_back({{"id", g->id}, {"desc", g->desc}, {"lo", g->lo_text}, {"hi", g->hi_text}});
    }
    if (!list.empty()) doc["generators"] = std::move(list);
}

GeneratorTable table_for(const json& doc)
{
    GeneratorTable t;
    if (const json* g = optional_field(doc, "generators", "")) t.declare(*g, "generators");
    return t;
}

std::string certainty_json_key(bool certain) { return certain ? "certain" : "uncertain"; }

}  // namespace

void GeneratorTable::declare(const json& list, const std::string& path)
{
    get_array(list, path);
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = at_index(path, i);
        const json& e = list[i];
        const std::string id = get_string(field(e, "id", p), at_key(p, "id"));
        const std::string desc = get_string(field(e, "desc", p), at_key(p, "desc"));
        const std::string lo = get_string(field(e, "lo", p), at_key(p, "lo"));
        const std::string hi = get_string(field(e, "hi", p), at_key(p, "hi"));
        GeneratorPtr g = wrap(p, [&] { return declare_generator(id, desc, lo, hi); });
        if (g->algebraic()) g = sqrt_generator(g->radicand);
        if (!declared_.emplace(id, g).second) fail(at_key(p, "id"), "duplicate generator id '" + id + "'");
    }
}

GeneratorPtr GeneratorTable::get(const std::string& id, const std::string& path) const
{
    auto it = declared_.find(id);
    if (it != declared_.end()) return it->second;
    if (id.size() > 4 && id.compare(0, 4, "sqrt") == 0 && id.find_first_not_of("0123456789", 4) == std::string::npos) {
        const unsigned long d = std::stoul(id.substr(4));
        return wrap(path, [&] { return sqrt_generator(d); });
    }
    fail(path, "unknown generator id '" + id + "'");
}

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j, const std::string& path)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return wrap(path, [&] { return parse_rational(j.get<std::string>()); });
    fail(path, "expected a rational string such as \"1/5\"");
}

json to_json(const Scalar& s)
{
    json out = {{"rat", to_string(s.rational_part())}};
    if (!s.terms().empty()) {
        json irr = json::object();
        for (const auto& [g, c] : s.terms()) irr[g->id] = to_string(c);
        out["irr"] = std::move(irr);
    }
    return out;
}

Scalar scalar_from_json(const json& j, const GeneratorTable& gens, const std::string& path)
{
    if (j.is_string() || j.is_number_integer()) return Scalar(rational_from_json(j, path));
    need_object(j, path);
    Rational rat = rational_from_json(field(j, "rat", path), at_key(path, "rat"));
    std::vector<Scalar::Term> terms;
    if (const json* irr = optional_field(j, "irr", path)) {
        const std::string ip = at_key(path, "irr");
        need_object(*irr, ip);
        for (const auto& [id, c] : irr->items()) {
            Rational coeff = rational_from_json(c, at_key(ip, id));
            if (sgn(coeff) == 0) continue;
            terms.emplace_back(gens.get(id, at_key(ip, id)), coeff);
        }
    }
    return Scalar(std::move(rat), std::move(terms));
}

json to_json(const SymplecticMatrix& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.dim(); ++c)
            row.push_back(m.is_exact() ? to_json(m.exact_entries()(r, c)) : json(m.numeric_entries()(r, c)));
        rows.push_back(std::move(row));
    }
    return {{"dim", m.dim()}, {"mode", m.is_exact() ? "exact" : "numeric"}, {"rows", std::move(rows)}};
}

SymplecticMatrix matrix_from_json(const json& j, const GeneratorTable& gens, const std::string& path)
{
    const long dim = get_long(field(j, "dim", path), at_key(path, "dim"));
    if (dim <= 0 || dim % 2 != 0) fail(at_key(path, "dim"), "must be a positive even integer");
    const std::string mode = get_string(field(j, "mode", path), at_key(path, "mode"));
    if (mode != "exact" && mode != "numeric") fail(at_key(path, "mode"), "must be \"exact\" or \"numeric\"");
    const std::string rp = at_key(path, "rows");
    const json& rows = get_array(field(j, "rows", path), rp);
    if (static_cast<long>(rows.size()) != dim) fail(rp, "expected " + std::to_string(dim) + " rows");
    ExactMatrix ex(dim, dim);
    Eigen::MatrixXd nu(dim, dim);
    for (long r = 0; r < dim; ++r) {
        const std::string rowp = at_index(rp, static_cast<std::size_t>(r));
        const json& row = get_array(rows[static_cast<std::size_t>(r)], rowp);
        if (static_cast<long>(row.size()) != dim) fail(rowp, "expected " + std::to_string(dim) + " entries");
        for (long c = 0; c < dim; ++c) {
            const std::string ep = at_index(rowp, static_cast<std::size_t>(c));
            if (mode == "exact")
                ex(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)], gens, ep);
            else
                nu(r, c) = get_double(row[static_cast<std::size_t>(c)], ep);
        }
    }
    return wrap(path, [&] { return mode == "exact" ? SymplecticMatrix::exact(ex) : SymplecticMatrix::numeric(nu); });
}

json to_json(const NormalFormDescriptor& d)
{
    auto angles = [](const std::vector<Scalar>& v) {
        json a = json::array();
        for (const auto& s : v) a.push_back(to_json(s));
        return a;
    };
    json out = {{"p_minus", d.p_minus},         {"p_zero", d.p_zero},   {"p_plus", d.p_plus},
                {"q_minus", d.q_minus},         {"q_zero", d.q_zero},   {"q_plus", d.q_plus},
                {"k", d.k},                     {"hyperbolic_negative", d.hyperbolic_negative},
                {"theta", angles(d.theta)},     {"alpha", angles(d.alpha)},
                {"beta", angles(d.beta)},       {"numeric_angles", d.numeric_angles}};
    return out;
}

NormalFormDescriptor descriptor_from_json(const json& j, const GeneratorTable& gens, const std::string& path)
{
    need_object(j, path);
    NormalFormDescriptor d;
    d.p_minus = int_or(j, "p_minus", path, 0);
    d.p_zero = int_or(j, "p_zero", path, 0);
    d.p_plus = int_or(j, "p_plus", path, 0);
    d.q_minus = int_or(j, "q_minus", path, 0);
    d.q_zero = int_or(j, "q_zero", path, 0);
    d.q_plus = int_or(j, "q_plus", path, 0);
    d.k = int_or(j, "k", path, 0);
    d.hyperbolic_negative = bool_or(j, "hyperbolic_negative", path, false);
    d.numeric_angles = bool_or(j, "numeric_angles", path, false);
    for (auto [key, vec] : {std::pair{"theta", &d.theta}, std::pair{"alpha", &d.alpha}, std::pair{"beta", &d.beta}}) {
        const json* a = optional_field(j, key, path);
        if (!a) continue;
        const std::string ap = at_key(path, key);
        get_array(*a, ap);
        for (std::size_t i = 0; i < a->size(); ++i) vec->push_back(scalar_from_json((*a)[i], gens, at_index(ap, i)));
    }
    wrap(path, [&] {
        d.validate();
        return 0;
    });
    return d;
}

json to_json(const Decomposition& d)
{
    json notes = d.certainty.notes;
    return {{"descriptor", to_json(d.descriptor)},
            {"certainty", {{"status", certainty_json_key(d.certainty.certain)},
                           {"margin", d.certainty.margin},
                           {"notes", std::move(notes)}}}};
}

json to_json(const PathRecord& r)
{
    return {{"label", r.label},
            {"n", r.n},
            {"i1", r.i1},
            {"nu1", r.nu1},
            {"descriptor", to_json(r.descriptor)},
            {"tau_over_pi", to_json(r.tau_over_pi)},
            {"mean_index", to_json(r.mean_index)}};
}

PathRecord record_from_json(const json& j, const GeneratorTable& gens, const std::string& path)
{
    need_object(j, path);
    std::string label;
    if (const json* l = optional_field(j, "label", path)) label = get_string(*l, at_key(path, "label"));
    const int i1 = get_int(field(j, "i1", path), at_key(path, "i1"));
    NormalFormDescriptor d = descriptor_from_json(field(j, "descriptor", path), gens, at_key(path, "descriptor"));
    Scalar tau(2);
    if (const json* t = optional_field(j, "tau_over_pi", path)) tau = scalar_from_json(*t, gens, at_key(path, "tau_over_pi"));
    PathRecord rec = wrap(path, [&] { return make_record(label, i1, d, tau); });
    if (const json* n = optional_field(j, "n", path))
        if (get_int(*n, at_key(path, "n")) != rec.n)
            fail(at_key(path, "n"), "declared " + n->dump() + " but the descriptor has n = " + std::to_string(rec.n));
    if (const json* nu = optional_field(j, "nu1", path))
        if (get_int(*nu, at_key(path, "nu1")) != rec.nu1)
            fail(at_key(path, "nu1"), "declared " + nu->dump() + " but the descriptor gives " + std::to_string(rec.nu1));
    if (const json* mi = optional_field(j, "mean_index", path))
        if (scalar_from_json(*mi, gens, at_key(path, "mean_index")) != rec.mean_index)
            fail(at_key(path, "mean_index"), "does not match the derived value " + to_string(rec.mean_index));
    return rec;
}

json to_json(const Report& r)
{
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"tag", c.tag}, {"passed", c.passed}, {"detail", c.detail}});
    json out = {{"subject", r.subject}, {"passed", r.passed()}, {"checks", std::move(checks)}, {"notes", r.notes}};
    if (const Check* f = r.first_failure())
        out["first_failure"] = {{"name", f->name}, {"tag", f->tag}, {"detail", f->detail}};
    return out;
}

Report report_from_json(const json& j, const std::string& path)
{
    Report r;
    if (const json* s = optional_field(j, "subject", path)) r.subject = get_string(*s, at_key(path, "subject"));
    const std::string cp = at_key(path, "checks");
    const json& checks = get_array(field(j, "checks", path), cp);
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const std::string p = at_index(cp, i);
        const json& c = checks[i];
        r.add(get_string(field(c, "name", p), at_key(p, "name")), get_string(field(c, "tag", p), at_key(p, "tag")),
              get_bool(field(c, "passed", p), at_key(p, "passed")),
              optional_field(c, "detail", p) ? get_string(c["detail"], at_key(p, "detail")) : std::string());
    }
    if (const json* notes = optional_field(j, "notes", path)) {
        get_array(*notes, at_key(path, "notes"));
        for (std::size_t i = 0; i < notes->size(); ++i) r.note(get_string((*notes)[i], at_index(at_key(path, "notes"), i)));
    }
    return r;
}

json to_json(const JumpCertificate& c)
{
    json a = json::array();
    for (const auto& x : c.a) a.push_back(to_json(x));
    return {{"N", c.N},
            {"m", c.m},
            {"chi", c.chi},
            {"a", std::move(a)},
            {"delta", to_json(c.delta)},
            {"epsilon", to_json(c.epsilon)},
            {"M", c.M},
            {"M0", c.M0},
            {"Delta", c.Delta},
            {"I", c.I},
            {"checks", to_json(c.checks)}};
}

JumpCertificate certificate_from_json(const json& j, const std::string& path)
{
    JumpCertificate c;
    c.N = get_long(field(j, "N", path), at_key(path, "N"));
    auto longs = [&](const char* key) {
        std::vector<long> out;
        const std::string p = at_key(path, key);
        const json& a = get_array(field(j, key, path), p);
        for (std::size_t i = 0; i < a.size(); ++i) out.push_back(get_long(a[i], at_index(p, i)));
        return out;
    };
    c.m = longs("m");
    for (long v : longs("chi")) c.chi.push_back(static_cast<int>(v));
    for (long v : longs("Delta")) c.Delta.push_back(static_cast<int>(v));
    c.I = longs("I");
    const std::string ap = at_key(path, "a");
    const json& a = get_array(field(j, "a", path), ap);
    for (std::size_t i = 0; i < a.size(); ++i) c.a.push_back(rational_from_json(a[i], at_index(ap, i)));
    c.delta = rational_from_json(field(j, "delta", path), at_key(path, "delta"));
    c.epsilon = rational_from_json(field(j, "epsilon", path), at_key(path, "epsilon"));
    c.M = get_long(field(j, "M", path), at_key(path, "M"));
    c.M0 = get_long(field(j, "M0", path), at_key(path, "M0"));
    if (const json* ch = optional_field(j, "checks", path)) c.checks = report_from_json(*ch, at_key(path, "checks"));
    const std::size_t k = c.m.size();
    if (c.Delta.size() != k || c.I.size() != k) fail(path, "m, Delta and I must have one entry per record");
    if (c.chi.size() != c.a.size()) fail(path, "chi and a must have one entry per coordinate of v");
    return c;
}

json to_json(const Injection& inj)
{
    return {{"rho_value", to_json(inj.rho_value)},
            {"rho", inj.rho},
            {"rows", inj.rows},
            {"assignments", inj.assignments},
            {"checks", to_json(inj.checks)}};
}

json document(const Scenario& sc)
{
    json records = json::array();
    GenMap gens;
    for (const auto& r : sc.records) {
        records.push_back(to_json(r));
        collect(r, gens);
    }
    json doc = {{"schema", kSchema},
                {"n", sc.n},
                {"records", std::move(records)},
                {"non_degenerate", sc.non_degenerate},
                {"assumption_A", sc.assumption_A},
                {"finite_family", sc.finite_family}};
    attach_generators(doc, gens);
    return doc;
}

Scenario scenario_from_json(const json& j)
{
    check_schema(j);
    const GeneratorTable gens = table_for(j);
    Scenario sc;
    sc.n = get_int(field(j, "n", ""), "n");
    const json& recs = get_array(field(j, "records", ""), "records");
    for (std::size_t i = 0; i < recs.size(); ++i) sc.records.push_back(record_from_json(recs[i], gens, at_index("records", i)));
    sc.non_degenerate = bool_or(j, "non_degenerate", "", false);
    sc.assumption_A = bool_or(j, "assumption_A", "", false);
    sc.finite_family = bool_or(j, "finite_family", "", true);
    validate_scenario(sc);
    return sc;
}

json document(const JumpProblem& p)
{
    json records = json::array();
    GenMap gens;
    for (const auto& r : p.records) {
        records.push_back(to_json(r));
        collect(r, gens);
    }
    json doc = {{"schema", kSchema},        {"records", std::move(records)}, {"delta", to_json(p.delta)},
                {"epsilon", to_json(p.epsilon)}, {"M", p.M},                  {"M0", p.M0},
                {"N_bound", p.N_bound},     {"max_hits", p.max_hits}};
    attach_generators(doc, gens);
    return doc;
}

JumpProblem problem_from_json(const json& j)
{
    check_schema(j);
    const GeneratorTable gens = table_for(j);
    JumpProblem p;
    const json& recs = get_array(field(j, "records", ""), "records");
    for (std::size_t i = 0; i < recs.size(); ++i) p.records.push_back(record_from_json(recs[i], gens, at_index("records", i)));
    if (const json* d = optional_field(j, "delta", "")) p.delta = rational_from_json(*d, "delta");
    if (const json* e = optional_field(j, "epsilon", "")) p.epsilon = rational_from_json(*e, "epsilon");
    if (const json* m = optional_field(j, "M", "")) p.M = get_long(*m, "M");
    if (const json* m = optional_field(j, "M0", "")) p.M0 = get_long(*m, "M0");
    if (const json* b = optional_field(j, "N_bound", "")) p.N_bound = get_long(*b, "N_bound");
    if (const json* h = optional_field(j, "max_hits", "")) p.max_hits = get_int(*h, "max_hits");
    return p;
}

json document(const JumpCertificate& c)
{
    json doc = to_json(c);
    doc["schema"] = kSchema;
    return doc;
}

JumpCertificate certificate_document(const json& j)
{
    check_schema(j);
    return certificate_from_json(j, "");
}

json document(const Ellipsoid& e)
{
    json alphas = json::array();
    GenMap gens;
    for (const auto& a : e.alphas) {
        alphas.push_back(to_json(a));
        collect(a, gens);
    }
    json doc = {{"schema", kSchema}, {"alphas", std::move(alphas)}};
    attach_generators(doc, gens);
    return doc;
}

Ellipsoid ellipsoid_from_json(const json& j)
{
    check_schema(j);
    const GeneratorTable gens = table_for(j);
    Ellipsoid e;
    const json& a = get_array(field(j, "alphas", ""), "alphas");
    for (std::size_t i = 0; i < a.size(); ++i) e.alphas.push_back(scalar_from_json(a[i], gens, at_index("alphas", i)));
    validate_ellipsoid(e);
    return e;
}

json document(const SampledPath& p)
{
    json mats = json::array();
    for (const auto& m : p.matrices) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    return {{"schema", kSchema}, {"times", p.times}, {"matrices", std::move(mats)}};
}

SampledPath path_from_json(const json& j)
{
    check_schema(j);
    SampledPath p;
    const json& t = get_array(field(j, "times", ""), "times");
    for (std::size_t i = 0; i < t.size(); ++i) p.times.push_back(get_double(t[i], at_index("times", i)));
    const json& ms = get_array(field(j, "matrices", ""), "matrices");
    for (std::size_t k = 0; k < ms.size(); ++k) {
        const std::string mp = at_index("matrices", k);
        const json& rows = get_array(ms[k], mp);
        const auto dim = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd m(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) {
            const std::string rp = at_index(mp, static_cast<std::size_t>(r));
            const json& row = get_array(rows[static_cast<std::size_t>(r)], rp);
            if (static_cast<Eigen::Index>(row.size()) != dim) fail(rp, "matrix must be square");
            for (Eigen::Index c = 0; c < dim; ++c)
                m(r, c) = get_double(row[static_cast<std::size_t>(c)], at_index(rp, static_cast<std::size_t>(c)));
        }
        p.matrices.push_back(std::move(m));
    }
    validate_path(p);
    return p;
}

json document(const TheoremReport& r)
{
    json runs = json::array();
    for (const auto& run : r.runs)
        runs.push_back({{"certificate", to_json(run.certificate)},
                        {"injection", to_json(run.injection)},
                        {"slot_one", run.slot_one}});
    json doc = to_json(r.report);
    doc["schema"] = kSchema;
    doc["consistent"] = r.consistent();
    doc["elliptic"] = r.elliptic;
    doc["irrationally_elliptic"] = r.irrationally_elliptic;
    doc["runs"] = std::move(runs);
    return doc;
}

json document(const EllipsoidRun& r)
{
    json records = json::array();
    GenMap gens;
    for (const auto& rec : r.records) {
        records.push_back(to_json(rec));
        collect(rec, gens);
    }
    json doc = {{"schema", kSchema}, {"records", std::move(records)}, {"warnings", r.warnings}, {"checks", to_json(r.checks)}};
    attach_generators(doc, gens);
    return doc;
}

SymplecticMatrix matrix_document(const json& j)
{
    if (j.is_object() && j.contains("matrix")) {
        check_schema(j);
        return matrix_from_json(j["matrix"], table_for(j), "matrix");
    }
    return matrix_from_json(j, table_for(j), "");
}

json matrix_document(const SymplecticMatrix& m)
{
    json doc = {{"schema", kSchema}, {"matrix", to_json(m)}};
    if (m.is_exact()) {
        GenMap gens;
        const auto& e = m.exact_entries();
        for (Eigen::Index r = 0; r < e.rows(); ++r)
            for (Eigen::Index c = 0; c < e.cols(); ++c) collect(e(r, c), gens);
        attach_generators(doc, gens);
    }
    return doc;
}

std::string emit(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw InputError(path + ": invalid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open for writing");
    out << text;
    if (!out) throw Error(path + ": write failed");
}

Scenario parse_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

}  // namespace maslov::io
