#include "maslov/lattice.hpp"

#include <algorithm>
#include <map>

namespace maslov {

IntMatrix hermite_rows(IntMatrix rows)
{
    if (rows.empty()) return rows;
    const std::size_t cols = rows.front().size();
    std::size_t pivot_row = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t r = pivot_row; r < rows.size(); ++r)
                if (sgn(rows[r][c]) != 0 &&
                    (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c])))
                    best = r;
            if (best == rows.size()) break;
            std::swap(rows[pivot_row], rows[best]);
            bool clean = true;
            for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
                if (sgn(rows[r][c]) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pivot_row][c].get_mpz_t());
                for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[pivot_row][j];
                if (sgn(rows[r][c]) != 0) clean = false;
            }
            if (clean) {
                if (sgn(rows[pivot_row][c]) < 0)
                    for (auto& x : rows[pivot_row]) x = -x;
                pivots.emplace_back(pivot_row, c);
                ++pivot_row;
                break;
            }
        }
    }
    rows.resize(pivot_row);
    for (auto [pr, c] : pivots) {
        for (std::size_t r = 0; r < pr; ++r) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pr][c].get_mpz_t());
            if (sgn(q) == 0) continue;
            for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[pr][j];
        }
    }
    return rows;
}

IntMatrix integer_left_kernel(const IntMatrix& w, std::size_t rows)
{
    const std::size_t cols = rows ? w.front().size() : 0;
    // [W | I]; unimodular row operations on the W block expose the kernel in I.
    IntMatrix aug(rows, IntVector(cols + rows));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) aug[r][c] = w[r][c];
        aug[r][cols + r] = 1;
    }
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        for (;;) {
            std::size_t best = rows;
            for (std::size_t r = pivot_row; r < rows; ++r)
                if (sgn(aug[r][c]) != 0 && (best == rows || abs(aug[r][c]) < abs(aug[best][c])))
                    best = r;
            if (best == rows) break;
            std::swap(aug[pivot_row], aug[best]);
            bool clean = true;
            for (std::size_t r = pivot_row + 1; r < rows; ++r) {
                if (sgn(aug[r][c]) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), aug[r][c].get_mpz_t(), aug[pivot_row][c].get_mpz_t());
                for (std::size_t j = c; j < cols + rows; ++j) aug[r][j] -= q * aug[pivot_row][j];
                if (sgn(aug[r][c]) != 0) clean = false;
            }
            if (clean) {
                ++pivot_row;
                break;
            }
        }
    }
    IntMatrix kernel;
    for (std::size_t r = pivot_row; r < rows; ++r)
        kernel.emplace_back(aug[r].begin() + static_cast<long>(cols), aug[r].end());
    return hermite_rows(std::move(kernel));
}

std::vector<RatVector> rational_nullspace(const std::vector<RatVector>& a, std::size_t cols)
{
    std::vector<RatVector> m = a;
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && sgn(m[p][c]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[row], m[p]);
        Rational inv = 1 / m[row][c];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][c]) == 0) continue;
            Rational f = m[r][c];
            for (std::size_t j = 0; j < cols; ++j) m[r][j] -= f * m[row][j];
        }
        pivot_cols.push_back(c);
        ++row;
    }
    std::vector<RatVector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
        RatVector x(cols);
        x[free] = 1;
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) x[pivot_cols[r]] = -m[r][free];
        basis.push_back(std::move(x));
    }
    return basis;
}

RelationLattice relation_lattice(const std::vector<Scalar>& v)
{
    RelationLattice out;
    const std::size_t h = v.size();
    out.ambient_dim = h;
    auto gens = generators_of(v);
    std::map<std::string, std::size_t> column;
    for (std::size_t g = 0; g < gens.size(); ++g) column[gens[g]->id] = g;

    Integer den = 1;
    for (const auto& x : v) {
        den = lcm(den, x.rational_part().get_den());
        for (const auto& t : x.terms()) den = lcm(den, t.second.get_den());
    }
    // Rows are (k_1..k_h, t); columns are the generators then the rational part:
    // Σ k_j c_{jg} = 0 for each g and Σ k_j r_j − t = 0, all scaled by den.
    const std::size_t cols = gens.size() + 1;
    IntMatrix w(h + 1, IntVector(cols));
    for (std::size_t j = 0; j < h; ++j) {
        for (const auto& t : v[j].terms()) w[j][column[t.first->id]] = Rational(t.second * den).get_num();
        w[j][gens.size()] = Rational(v[j].rational_part() * den).get_num();
    }
    w[h][gens.size()] = -den;

    IntMatrix kernel = integer_left_kernel(w, h + 1);
    IntMatrix projected;
    for (auto& row : kernel) projected.emplace_back(row.begin(), row.begin() + static_cast<long>(h));
    out.basis = hermite_rows(std::move(projected));

    std::vector<RatVector> rows;
    for (const auto& k : out.basis) {
        RatVector r(h);
        for (std::size_t j = 0; j < h; ++j) r[j] = Rational(k[j]);
        rows.push_back(std::move(r));
    }
    out.tangent = rational_nullspace(rows, h);
    return out;
}

Scalar pairing(const IntVector& k, const std::vector<Scalar>& v)
{
    Scalar s;
    for (std::size_t j = 0; j < k.size(); ++j)
        if (sgn(k[j]) != 0) s += v[j] * Scalar(Rational(k[j]));
    return s;
}

}  // namespace maslov
