#include "maslov/linalg.hpp"

#include "maslov/errors.hpp"

#include <vector>

namespace maslov {

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<Eigen::Index> rref(ExactMatrix& m)
{
    std::vector<Eigen::Index> pivots;
    Eigen::Index row = 0;
    for (Eigen::Index c = 0; c < m.cols() && row < m.rows(); ++c) {
        Eigen::Index p = row;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row) m.row(p).swap(m.row(row));
        Scalar inv = m(row, c).inverse();
        for (Eigen::Index j = c; j < m.cols(); ++j)
            if (!m(row, j).is_zero()) m(row, j) = m(row, j) * inv;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, c).is_zero()) continue;
            Scalar f = m(r, c);
            for (Eigen::Index j = c; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) m(r, j) -= f * m(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

int rank(const ExactMatrix& a)
{
    ExactMatrix m = a;
    return static_cast<int>(rref(m).size());
}

ExactMatrix nullspace(const ExactMatrix& a)
{
    ExactMatrix m = a;
    auto pivots = rref(m);
    std::vector<Eigen::Index> free;
    for (Eigen::Index c = 0, p = 0; c < m.cols(); ++c) {
        if (p < static_cast<Eigen::Index>(pivots.size()) && pivots[p] == c)
            ++p;
        else
            free.push_back(c);
    }
    ExactMatrix basis = ExactMatrix::Zero(a.cols(), static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        Eigen::Index col = static_cast<Eigen::Index>(k);
        basis(free[k], col) = Scalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            basis(pivots[r], col) = -m(static_cast<Eigen::Index>(r), free[k]);
    }
    return basis;
}

ExactMatrix inverse(const ExactMatrix& a)
{
    const Eigen::Index n = a.rows();
    ExactMatrix aug(n, 2 * n);
    aug.leftCols(n) = a;
    aug.rightCols(n) = ExactMatrix::Identity(n, n);
    auto pivots = rref(aug);
    if (static_cast<Eigen::Index>(pivots.size()) < n || pivots[n - 1] != n - 1)
        throw Error("singular matrix has no inverse");
    return aug.rightCols(n);
}

Inertia inertia(const ExactMatrix& sym)
{
    ExactMatrix a = sym;
    const Eigen::Index n = a.rows();
    Inertia out;
    Eigen::Index k = 0;
    while (k < n) {
        Eigen::Index d = k;
        while (d < n && a(d, d).is_zero()) ++d;
        if (d == n) {
            Eigen::Index bi = -1, bj = -1;
            for (Eigen::Index i = k; i < n && bi < 0; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j)
                    if (!a(i, j).is_zero()) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi < 0) {
                out.zero += static_cast<int>(n - k);
                break;
            }
            // Congruence e_i ← e_i + e_j makes the (i, i) entry 2·a(i, j).
            a.row(bi) += a.row(bj);
            a.col(bi) += a.col(bj);
            d = bi;
        }
        if (d != k) {
            a.row(d).swap(a.row(k));
            a.col(d).swap(a.col(k));
        }
        Scalar p = a(k, k);
        (p.sign() > 0 ? out.positive : out.negative) += 1;
        Scalar inv = p.inverse();
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (a(i, k).is_zero()) continue;
            Scalar f = a(i, k) * inv;
            for (Eigen::Index j = k + 1; j < n; ++j)
                if (!a(k, j).is_zero()) a(i, j) -= f * a(k, j);
        }
        ++k;
    }
    return out;
}

ExactMatrix power(const ExactMatrix& a, unsigned m)
{
    ExactMatrix result = ExactMatrix::Identity(a.rows(), a.cols());
    ExactMatrix base = a;
    while (m) {
        if (m & 1u) result = (result * base).eval();
        m >>= 1u;
        if (m) base = (base * base).eval();
    }
    return result;
}

bool is_zero(const ExactMatrix& a)
{
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

Eigen::MatrixXd to_double(const ExactMatrix& a)
{
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).to_double();
    return out;
}

ExactMatrix symmetric_part(const ExactMatrix& a)
{
    ExactMatrix s = a + a.transpose();
    Scalar half(Rational(1, 2));
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j) s(i, j) = s(i, j) * half;
    return s;
}

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

int numeric_rank(const Eigen::MatrixXd& a, double tol)
{
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    return r;
}

Eigen::MatrixXd numeric_nullspace(const Eigen::MatrixXd& a, double tol)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol) ++r;
    return svd.matrixV().rightCols(a.cols() - r);
}

Inertia numeric_inertia(const Eigen::MatrixXd& sym, double tol)
{
    Inertia out;
    if (sym.size() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double e = es.eigenvalues()(i);
        if (e > tol)
            ++out.positive;
        else if (e < -tol)
            ++out.negative;
        else
            ++out.zero;
    }
    return out;
}

}  // namespace maslov
