#pragma once

#include "maslov/index_jump.hpp"

#include <optional>
#include <string>
#include <vector>

namespace maslov {

// A hypothetical finite family of closed characteristics.
struct Scenario {
    int n = 0;
    std::vector<PathRecord> records;
    bool non_degenerate = false;
    bool assumption_A = false;
    bool finite_family = true;
};

// Throws InputError naming the first violated scenario invariant.
void validate_scenario(const Scenario& sc);
// ν(x, m) = 1 for every m.
bool is_non_degenerate(const PathRecord& rec);

Report check_jump_bounds(const JumpCertificate& cert, const Scenario& sc, int s, std::size_t k);
Report delta_bounds(const PathRecord& rec, int chi_k, long m_k, const Rational& delta);
// With m_k given, also checks the rewritten ν(x, 2m_k).
Report corollary_bounds(const PathRecord& rec, int s, int chi_k, std::optional<long> m_k = std::nullopt);
Report classify_s1(const PathRecord& rec, const Scenario& sc);

// Rejects finite families containing a hyperbolic record.
Report hyperbolic_axiom(const Scenario& sc);

struct PipelineRun {
    JumpCertificate certificate;
    Injection injection;
    std::vector<int> slot_one;  // distinct j(1) over all assignments
};

struct TheoremReport {
    Report report;
    std::vector<PipelineRun> runs;
    std::vector<std::string> elliptic;
    std::vector<std::string> irrationally_elliptic;
    bool consistent() const { return report.passed(); }
};

TheoremReport run_two_elliptic(const Scenario& sc, JumpProblem problem);
TheoremReport run_r6_pipeline(const Scenario& sc, JumpProblem problem);

}  // namespace maslov
