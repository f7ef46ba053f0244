#pragma once

#include "maslov/iteration.hpp"
#include "maslov/normal_form.hpp"

#include <random>

namespace maslov::testing {

// Exact symplectic matrix built from shears [[I,S],[0,I]] and [[I,0],[S,I]]
// with small integer symmetric S.
inline ExactMatrix random_symplectic(int n, std::mt19937& rng, int factors = 3)
{
    std::uniform_int_distribution<int> entry(-1, 1);
    ExactMatrix p = ExactMatrix::Identity(2 * n, 2 * n);
    for (int f = 0; f < factors; ++f) {
        ExactMatrix s = ExactMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) s(i, j) = s(j, i) = Scalar(entry(rng));
        ExactMatrix e = ExactMatrix::Identity(2 * n, 2 * n);
        if (f % 2 == 0)
            e.topRightCorner(n, n) = s;
        else
            e.bottomLeftCorner(n, n) = s;
        p = p * e;
    }
    return p;
}

// Table angle k/12 in (0,1)∪(1,2).
inline Scalar random_table_angle(std::mt19937& rng)
{
    std::uniform_int_distribution<int> k(1, 22);
    int v = k(rng);
    if (v >= 12) ++v;
    return Scalar(Rational(v, 12));
}

// Random descriptor with n ≤ max_n whose angles all have exact cosines.
inline NormalFormDescriptor random_descriptor(std::mt19937& rng, int max_n = 4, bool allow_n2 = true)
{
    std::uniform_int_distribution<int> pick(0, allow_n2 ? 10 : 8);
    std::uniform_int_distribution<int> size(1, max_n);
    NormalFormDescriptor d;
    const int target = size(rng);
    while (d.n() < target) {
        int room = target - d.n();
        switch (pick(rng)) {
        case 0: ++d.p_minus; break;
        case 1: ++d.p_zero; break;
        case 2: ++d.p_plus; break;
        case 3: ++d.q_minus; break;
        case 4: ++d.q_zero; break;
        case 5: ++d.q_plus; break;
        case 6:
        case 7: d.theta.push_back(random_table_angle(rng)); break;
        case 8:
            ++d.k;
            if (std::uniform_int_distribution<int>(0, 1)(rng)) d.hyperbolic_negative = !d.hyperbolic_negative;
            break;
        case 9:
            if (room >= 2) d.alpha.push_back(random_table_angle(rng));
            break;
        case 10:
            if (room >= 2) d.beta.push_back(random_table_angle(rng));
            break;
        }
    }
    if (d.k == 0) d.hyperbolic_negative = false;
    return d;
}

// Record of the closed characteristic along axis i of the ellipsoid with
// semi-axis weights α (pairwise rationally independent): p₋ = 1, θ_j/π =
// 2{α_j/α_i}, i(x, 1) = n + 2Σ⌊α_j/α_i⌋.
inline PathRecord ellipsoid_record(const std::vector<Scalar>& alpha, std::size_t i)
{
    NormalFormDescriptor d;
    d.p_minus = 1;
    int i1 = static_cast<int>(alpha.size());
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (j == i) continue;
        auto parts = floor_ops(alpha[j] / alpha[i]);
        d.theta.push_back(parts.frac * Scalar(2));
        i1 += 2 * static_cast<int>(parts.floor.get_si());
    }
    return make_record("x" + std::to_string(i + 1), i1, d, Scalar(2) * alpha[i]);
}

inline std::vector<PathRecord> ellipsoid_records(const std::vector<Scalar>& alpha)
{
    std::vector<PathRecord> out;
    for (std::size_t i = 0; i < alpha.size(); ++i) out.push_back(ellipsoid_record(alpha, i));
    return out;
}

}  // namespace maslov::testing
