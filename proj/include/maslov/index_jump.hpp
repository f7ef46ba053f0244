#pragma once

#include "maslov/iteration.hpp"
#include "maslov/lattice.hpp"
#include "maslov/report.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maslov {

struct JumpProblem {
    std::vector<PathRecord> records;
    Rational delta{1, 5};
    Rational epsilon;  // 0 selects min(δ, 1/3)/2
    long M = 0;        // 0 selects default_M
    long M0 = 0;       // 0 selects default_M0
    long N_bound = 1000000;
    int max_hits = 1;
    unsigned threads = 0;  // 0 selects the hardware concurrency
};

// Fills the defaults and checks δ·max μ_k < 1/2 and every î_k > 0.
JumpProblem normalized(JumpProblem p);
void validate_problem(const JumpProblem& p);

// Least M > 0 with M·θ/π even for every rational spectrum angle θ/π.
long default_M(const std::vector<PathRecord>& records);
// lcm of M and the numerators of M·î_k over rational î_k, so that M0 | N
// forces N/(M·î_k) ∈ ℤ.
long default_M0(const std::vector<PathRecord>& records, long M);
Rational default_epsilon(const Rational& delta);

// Coordinate layout of v: one per record, then one per S⁻-weighted spectrum
// angle of each record in descriptor order.
struct JumpVector {
    std::vector<Scalar> v;
    std::vector<int> owner;         // record index of each coordinate
    std::vector<Scalar> angle;      // θ/π of angle coordinates, 0 for the record ones
    std::size_t h() const { return v.size(); }
};
JumpVector build_v(const JumpProblem& p);

struct Direction {
    std::vector<Rational> a;
    std::vector<int> chi;
    RelationLattice lattice;
};

// a ∈ A(v) with ψ-pattern honoring `constraints` (coordinate → χ value).
// Throws InputError "constraint unsatisfiable" when no such a exists in the
// searched family.
Direction choose_a(const JumpVector& v, const std::map<std::size_t, int>& constraints = {}, unsigned seed = 1);
// χ(a) for a given direction, checking a ∈ A(v).
Direction direction_from(const JumpVector& v, std::vector<Rational> a);

struct JumpCertificate {
    long N = 0;
    std::vector<long> m;
    std::vector<int> chi;
    std::vector<Rational> a;
    Rational delta;
    Rational epsilon;
    long M = 0;
    long M0 = 0;
    std::vector<int> Delta;
    std::vector<long> I;
    Report checks;
};

struct SearchResult {
    std::vector<JumpCertificate> hits;
    long scanned = 0;
    long rejected = 0;  // torus hits that failed exact verification
    long best_near_miss = 0;
    double best_distance = 1.0;
};

// Scans N = M0, 2M0, … ≤ N_bound. Throws Error "no hit below bound" with the
// best near-miss when nothing verifies.
SearchResult search_N(const JumpProblem& p, const JumpVector& v, const Direction& d);

// m_k = (⌊N/(M·î_k)⌋ + χ_k)·M.
long iterate_for(const PathRecord& rec, long N, long M, int chi);
int compute_Delta(const PathRecord& rec, long m, const Rational& delta);
// m(i1 + S⁺ − C) + Σ E(mθ/π) S⁻, cross-checked against 2I = i(2m) + S⁺ + C.
long compute_I(const PathRecord& rec, long m);

JumpCertificate build_certificate(const JumpProblem& p, const JumpVector& v, const Direction& d, long N);
Report verify_certificate(const JumpCertificate& cert, const JumpProblem& p);

struct Injection {
    Rational rho_value;  // the defining minimum before flooring
    int rho = 0;
    // rows[s−1] = records k whose iterate 2m_k satisfies the sandwich at slot s.
    std::vector<std::vector<int>> rows;
    // Injective, mean-index-monotone choices s ↦ j(s).
    std::vector<std::vector<int>> assignments;
    Report checks;
};

Injection rho_and_injection(const JumpCertificate& cert, const JumpProblem& p, int n, bool non_degenerate);

}  // namespace maslov
