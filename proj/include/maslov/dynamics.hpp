#pragma once

#include "maslov/iteration.hpp"
#include "maslov/report.hpp"
#include "maslov/symplectic.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace maslov {

// Exponent of the gauge-power Hamiltonian H = j(x)^a; indices do not depend on
// a ∈ (1, 2).
inline constexpr double kGaugeExponent = 1.5;

// Σ = {Σ (α_i/2)(x_i² + y_i²) = 1}.
struct Ellipsoid {
    std::vector<Scalar> alphas;

    int n() const { return static_cast<int>(alphas.size()); }
    // True iff every ratio α_i/α_j with i ≠ j is irrational.
    bool non_resonant() const;
};

void validate_ellipsoid(const Ellipsoid& e);

// Time for orbit x_i of H = j^a to close: 4π/(a·α_i).
double orbit_period(const Ellipsoid& e, std::size_t i, double gauge = kGaugeExponent);

// Closed-form γ_{x_i}(T_i) with the orbit started at x_i = √(2/α_i)·e_{x_i}.
Eigen::MatrixXd analytic_monodromy(const Ellipsoid& e, std::size_t i, double gauge = kGaugeExponent);

struct SampledPath {
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> matrices;

    std::size_t size() const { return times.size(); }
    double duration() const { return times.back(); }
    const Eigen::MatrixXd& end() const { return matrices.back(); }
};

// Throws InputError unless times increase from 0, the first matrix is I and
// every sample has symplectic residual ≤ kSymplecticResidualTol.
void validate_path(const SampledPath& p);

// γ on [0, T_i] by fixed-step RK4 of ẏ = J H''(x(t)) y, one sample per step.
// Every 100 steps the residual must stay ≤ kSymplecticResidualTol (else Error
// "drift budget exceeded") and the matrix is projected back onto Sp(2n).
SampledPath linearized_path(const Ellipsoid& e, std::size_t i, long steps, double gauge = kGaugeExponent);
SymplecticMatrix linearized_monodromy(const Ellipsoid& e, std::size_t i, long steps, double gauge = kGaugeExponent);

// a then b, with b's samples multiplied on the right by a.end().
SampledPath concatenate(const SampledPath& a, const SampledPath& b);
// The m-fold iterate γ^m.
SampledPath iterate_path(const SampledPath& p, int m);

struct Crossing {
    double t = 0.0;
    int dim = 0;
    int signature = 0;
};

struct OracleOptions {
    double epsilon = 1e-6;       // endpoint perturbation e^{−εJ}
    double nullity_tol = 1e-7;   // singular value counted as kernel at the endpoint
    double zero_tol = 1e-9;      // refined σ_min below this is a crossing
    double ambiguous_tol = 1e-7; // σ_min in (zero_tol, ambiguous_tol] is unresolved
    double candidate = 5e-2;     // sampled local minima below this are refined
};

struct OracleResult {
    int i1 = 0;
    int nu1 = 0;
    bool perturbed = false;
    int start = 0;  // half the crossing-form signature at t = 0
    std::vector<Crossing> crossings;
};

// Frozen additive normalization; see calibrate_oracle_offset.
inline constexpr int kOracleOffset = 0;

// Signed crossings of γ(t)e^{−εJ} with the singular cycle {det(M − I) = 0},
// each weighted by the signature of the crossing form on ker(γ − I).
// Throws Error "tangential crossing" when a zero is unresolved or its
// crossing form is degenerate.
OracleResult crossing_oracle(const SampledPath& path, const OracleOptions& opts = {});
int crossing_oracle_i1(const SampledPath& path, const OracleOptions& opts = {});

// The offset c for which i1 = c + oracle makes index_iterate reproduce the
// oracle on iterates 1..m_max with î > 2. Throws ConsistencyError if none.
int calibrate_oracle_offset(const SampledPath& path, const NormalFormDescriptor& d, int m_max = 6,
                            const OracleOptions& opts = {});

struct EllipsoidRun {
    std::vector<PathRecord> records;
    std::vector<std::string> warnings;
    Report checks;
};

struct EllipsoidOptions {
    long steps = 20000;
    double gauge = kGaugeExponent;
    OracleOptions oracle;
    unsigned threads = 0;
};

// One record per axis: p₋ = 1 plus R(2πα_j/α_i mod 2π) for j ≠ i, with i1 from
// the crossing oracle. Resonant angles 0 and π become p₀ and q₀ blocks with a
// warning. Throws ConsistencyError when the numeric ν₁ disagrees with the
// descriptor or, for non-resonant α, when î_i·α_i ≠ î_j·α_j.
EllipsoidRun ellipsoid_characteristics(const Ellipsoid& e, const EllipsoidOptions& opts = {});

}  // namespace maslov
