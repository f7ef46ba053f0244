#pragma once

#include "maslov/symplectic.hpp"

#include <string>
#include <utility>
#include <vector>

namespace maslov {

// Block counts of the normal form
//   N₁(1,1)^{p₋} ⋄ I_{2p₀} ⋄ N₁(1,−1)^{p₊} ⋄ N₁(−1,1)^{q₋} ⋄ −I_{2q₀} ⋄ N₁(−1,−1)^{q₊}
//   ⋄ R(θ_1..θ_r) ⋄ N₂(α_1..α_{r₊}) ⋄ N₂(β_1..β_{r₀}) ⋄ M_k.
// Angles are stored divided by π, inside (0,1) ∪ (1,2).
struct NormalFormDescriptor {
    int p_minus = 0;
    int p_zero = 0;
    int p_plus = 0;
    int q_minus = 0;
    int q_zero = 0;
    int q_plus = 0;
    int k = 0;
    // M_k = D(−2) ⋄ D(2)^{k−1} when set, D(2)^k otherwise.
    bool hyperbolic_negative = false;
    std::vector<Scalar> theta;
    std::vector<Scalar> alpha;  // nontrivial N₂
    std::vector<Scalar> beta;   // trivial N₂
    // Angles recovered from floating-point eigenvalues; rationality is unknown.
    bool numeric_angles = false;

    int r() const { return static_cast<int>(theta.size()); }
    int r_star() const { return static_cast<int>(alpha.size()); }
    int r_zero() const { return static_cast<int>(beta.size()); }
    int n() const;

    // Throws InputError naming the violated invariant.
    void validate() const;
};

bool operator==(const NormalFormDescriptor& a, const NormalFormDescriptor& b);

// Angle lists sorted by value, N₂ angles folded into (0,1).
NormalFormDescriptor canonical(NormalFormDescriptor d);
NormalFormDescriptor direct_sum(const NormalFormDescriptor& a, const NormalFormDescriptor& b);

struct RationalCounts {
    int r_tilde = 0;
    int r_star_tilde = 0;
    int r_zero_tilde = 0;
};

// Distinct unit-circle angles (÷π, in (0,2)) carrying S⁻ > 0, in descriptor
// order, with equal angles merged into the weight.
struct SpectrumEntry {
    Scalar angle_over_pi;
    int s_minus = 0;
};
std::vector<SpectrumEntry> minus_spectrum(const NormalFormDescriptor& d);

SymplecticMatrix realize(const NormalFormDescriptor& d, Mode preferred = Mode::exact);
std::vector<BasicForm> basic_forms(const NormalFormDescriptor& d);

// (S⁺, S⁻) at e^{iπt}, t = angle_over_pi in [0, 2).
std::pair<int, int> splitting_numbers(const NormalFormDescriptor& d, const Scalar& angle_over_pi);

int s_plus_one(const NormalFormDescriptor& d);
int capital_C(const NormalFormDescriptor& d);
int mu(const NormalFormDescriptor& d);
// ν₁ of the realized matrix, p₋ + 2p₀ + p₊.
int nullity_one(const NormalFormDescriptor& d);
RationalCounts rational_counts(const NormalFormDescriptor& d);

enum class Stability { elliptic, hyperbolic, irrationally_elliptic, mixed };
std::string to_string(Stability s);
Stability classify_stability(const NormalFormDescriptor& d, int n);

struct Certainty {
    bool certain = true;
    // Smallest gap between a decision statistic and its threshold.
    double margin = 0.0;
    std::vector<std::string> notes;
};

struct Decomposition {
    NormalFormDescriptor descriptor;
    Certainty certainty;
};

// Exact input: restricted to conjugates of realized descriptors whose unit
// spectrum uses tabulated angles. Numeric input: eigenvalues clustered within
// sqrt(tol), ranks and form signs thresholded at tol.
Decomposition decompose(const SymplecticMatrix& m, double tol = kRankTol);

}  // namespace maslov
