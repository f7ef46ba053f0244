#pragma once

#include "maslov/dynamics.hpp"
#include "maslov/index_jump.hpp"
#include "maslov/theorem_lab.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <vector>

namespace maslov::io {

using json = nlohmann::json;

inline constexpr int kSchema = 1;

// Generator ids visible while parsing one document. Ids of the form sqrt<d>
// resolve to the canonical algebraic generator without a declaration.
class GeneratorTable {
public:
    void declare(const json& list, const std::string& path);
    GeneratorPtr get(const std::string& id, const std::string& path) const;

private:
    std::map<std::string, GeneratorPtr> declared_;
};

// Top-level documents carry "schema": 1 and, when opaque generators occur,
// a "generators" list. Every parse error is an InputError prefixed with the
// field path, e.g. "records[0].i1: missing field".

json to_json(const Rational& q);
Rational rational_from_json(const json& j, const std::string& path);

json to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, const GeneratorTable& gens, const std::string& path);

json to_json(const SymplecticMatrix& m);
SymplecticMatrix matrix_from_json(const json& j, const GeneratorTable& gens, const std::string& path);

json to_json(const NormalFormDescriptor& d);
NormalFormDescriptor descriptor_from_json(const json& j, const GeneratorTable& gens, const std::string& path);

json to_json(const Decomposition& d);

json to_json(const PathRecord& r);
PathRecord record_from_json(const json& j, const GeneratorTable& gens, const std::string& path);

json to_json(const Report& r);
Report report_from_json(const json& j, const std::string& path);

json to_json(const JumpCertificate& c);
JumpCertificate certificate_from_json(const json& j, const std::string& path);

json to_json(const Injection& inj);

// Documents.
json document(const Scenario& sc);
Scenario scenario_from_json(const json& j);

json document(const JumpProblem& p);
JumpProblem problem_from_json(const json& j);

json document(const JumpCertificate& c);
JumpCertificate certificate_document(const json& j);

json document(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const json& j);

json document(const SampledPath& p);
SampledPath path_from_json(const json& j);

json document(const TheoremReport& r);
json document(const EllipsoidRun& r);

// Reads a matrix document {"schema": 1, "matrix": {...}} or a bare matrix.
SymplecticMatrix matrix_document(const json& j);
json matrix_document(const SymplecticMatrix& m);

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string emit(const json& j);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Scenario parse_scenario(const std::string& path);

}  // namespace maslov::io
