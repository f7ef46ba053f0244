#include "doctest.h"

#include "maslov/errors.hpp"
#include "maslov/io.hpp"
#include "support.hpp"

using namespace maslov;
using namespace maslov::io;

namespace {

Scenario r6_scenario()
{
    Scenario sc;
    sc.n = 3;
    sc.non_degenerate = true;
    sc.records = maslov::testing::ellipsoid_records({Scalar(1), Scalar::sqrt(2), Scalar::sqrt(3)});
    return sc;
}

std::string error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("scalar serialization")
{
    const Scalar s = Scalar(Rational(1, 3)) + Scalar::sqrt(2) * Scalar(Rational(-2, 5));
    const json j = to_json(s);
    CHECK(j.dump() == R"({"irr":{"sqrt2":"-2/5"},"rat":"1/3"})");
    CHECK(scalar_from_json(j, GeneratorTable{}, "x") == s);
    CHECK(scalar_from_json(json("3/4"), GeneratorTable{}, "x") == Scalar(Rational(3, 4)));
    CHECK(to_json(Scalar(2)).dump() == R"({"rat":"2"})");
}

TEST_CASE("opaque generators are declared at the top level")
{
    json doc = json::parse(R"({"schema": 1, "alphas": [{"rat": "1"}, {"rat": "0", "irr": {"pi": "1"}}],
        "generators": [{"id": "pi", "desc": "pi", "lo": "3.14159", "hi": "3.14160"}]})");
    const Ellipsoid e = ellipsoid_from_json(doc);
    CHECK(e.alphas[1].terms().front().first->id == "pi");
    const std::string text = emit(document(e));
    CHECK(text.find("\"generators\"") != std::string::npos);
    CHECK(emit(document(ellipsoid_from_json(json::parse(text)))) == text);

    doc.erase("generators");
    CHECK(error_of([&] { ellipsoid_from_json(doc); }) == "alphas[1].irr.pi: unknown generator id 'pi'");
}

TEST_CASE("scenario round trip is byte identical")
{
    const std::string text = emit(document(r6_scenario()));
    const Scenario back = scenario_from_json(json::parse(text));
    CHECK(back.records.size() == 3);
    CHECK(back.records[1].mean_index == r6_scenario().records[1].mean_index);
    CHECK(emit(document(back)) == text);
}

TEST_CASE("scenario errors name the field path")
{
    json doc = document(r6_scenario());
    json missing = doc;
    missing["records"][0].erase("i1");
    CHECK(error_of([&] { scenario_from_json(missing); }) == "records[0].i1: missing field");

    json wrong_nu = doc;
    wrong_nu["records"][2]["nu1"] = 2;
    CHECK(error_of([&] { scenario_from_json(wrong_nu); }).rfind("records[2].nu1:", 0) == 0);

    json bad_angle = doc;
    bad_angle["records"][1]["descriptor"]["theta"][0] = json::object();
    CHECK(error_of([&] { scenario_from_json(bad_angle); }) == "records[1].descriptor.theta[0].rat: missing field");

    json version = doc;
    version["schema"] = 2;
    CHECK(error_of([&] { scenario_from_json(version); }).rfind("schema:", 0) == 0);

    json type = doc;
    type["n"] = "three";
    CHECK(error_of([&] { scenario_from_json(type); }) == "n: expected an integer");
}

TEST_CASE("problem and certificate round trip")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar(Rational(1, 2))};
    JumpProblem p;
    p.records = {make_record("worked", 2, d)};
    p.delta = Rational(1, 50);
    p.epsilon = Rational(1, 100);
    p.M = 4;
    p.M0 = 10;
    p.N_bound = 1000;
    const std::string ptext = emit(document(p));
    const JumpProblem back = problem_from_json(json::parse(ptext));
    CHECK(emit(document(back)) == ptext);

    const JumpProblem np = normalized(back);
    const auto v = build_v(np);
    const auto cert = search_N(np, v, choose_a(v)).hits.front();
    const std::string ctext = emit(document(cert));
    const JumpCertificate c2 = certificate_document(json::parse(ctext));
    CHECK(c2.N == 10);
    CHECK(c2.m == std::vector<long>{4});
    CHECK(c2.I == std::vector<long>{10});
    CHECK(emit(document(c2)) == ctext);
    CHECK(verify_certificate(c2, np).passed());
}

TEST_CASE("matrix documents")
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    d.theta = {Scalar(Rational(1, 3))};
    const auto m = realize(d);
    REQUIRE(m.is_exact());
    const std::string text = emit(matrix_document(m));
    const auto back = matrix_document(json::parse(text));
    CHECK(back.exact_entries() == m.exact_entries());
    CHECK(emit(matrix_document(back)) == text);

    const auto num = SymplecticMatrix::numeric(m.to_numeric());
    const std::string ntext = emit(matrix_document(num));
    CHECK(emit(matrix_document(matrix_document(json::parse(ntext)))) == ntext);

    json bad = json::parse(text);
    bad["matrix"]["rows"][0][0] = {{"rat", "2"}};
    CHECK_THROWS_AS(matrix_document(bad), InputError);
}

TEST_CASE("sampled path documents")
{
    Ellipsoid e{{Scalar(1), Scalar::sqrt(2)}};
    const auto p = linearized_path(e, 1, 1000);
    const std::string text = emit(document(p));
    const auto back = path_from_json(json::parse(text));
    CHECK(back.size() == p.size());
    CHECK(back.end() == p.end());
    CHECK(emit(document(back)) == text);
}

TEST_CASE("theorem report document names the first failure")
{
    Scenario sc = r6_scenario();
    NormalFormDescriptor h;
    h.p_minus = 1;
    h.k = 2;
    sc.records.push_back(make_record("h", 5, h));
    const auto out = run_r6_pipeline(sc, JumpProblem{});
    const json doc = document(out);
    CHECK(doc["consistent"] == false);
    CHECK(doc["first_failure"]["tag"] == "hyperbolic-axiom");
}

TEST_CASE("scenario files")
{
    const std::string path = "test_io_scenario.json";
    write_text_file(path, emit(document(r6_scenario())));
    const Scenario sc = parse_scenario(path);
    CHECK(sc.records.size() == 3);
    std::remove(path.c_str());
    CHECK(error_of([&] { parse_scenario("does-not-exist.json"); }) == "does-not-exist.json: cannot open file");
}
