#pragma once

#include "maslov/scalar.hpp"

#include <vector>

namespace maslov {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;
using RatVector = std::vector<Rational>;

// Row Hermite normal form: positive pivots, entries above each pivot reduced
// into [0, pivot), zero rows dropped. Unique for the row lattice.
IntMatrix hermite_rows(IntMatrix rows);

// Integer row vectors x with x·W = 0, as a Hermite basis.
IntMatrix integer_left_kernel(const IntMatrix& w, std::size_t rows);

// Basis (reduced-echelon, free variables set to 1) of {x ∈ ℚ^cols : A x = 0}.
std::vector<RatVector> rational_nullspace(const std::vector<RatVector>& a, std::size_t cols);

// Λ = {k ∈ ℤ^h : ⟨k, v⟩ ∈ ℤ} and V = Λ^⊥ ⊂ ℝ^h.
struct RelationLattice {
    std::size_t ambient_dim = 0;
    IntMatrix basis;
    std::vector<RatVector> tangent;

    std::size_t rank() const { return basis.size(); }
};

RelationLattice relation_lattice(const std::vector<Scalar>& v);

// ⟨k, v⟩ evaluated exactly.
Scalar pairing(const IntVector& k, const std::vector<Scalar>& v);

}  // namespace maslov
