#pragma once

#include "maslov/linalg.hpp"

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace maslov {

enum class Mode { exact, numeric };

constexpr double kUnitCircleTol = 1e-8;
constexpr double kRankTol = 1e-8;
constexpr double kSymplecticResidualTol = 1e-10;

// J = [[0, −I_n], [I_n, 0]] in coordinates (x_1..x_n, y_1..y_n).
template <typename T>
Mat<T> standard_J(Eigen::Index n)
{
    Mat<T> j = Mat<T>::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        j(i, n + i) = T(-1);
        j(n + i, i) = T(1);
    }
    return j;
}

// Block interleaving M1 ⋄ M2: the A, B, C, D quarters of each factor are
// placed block-diagonally inside the corresponding quarter of the result.
template <typename T>
Mat<T> diamond(const Mat<T>& m1, const Mat<T>& m2)
{
    const Eigen::Index a = m1.rows() / 2;
    const Eigen::Index b = m2.rows() / 2;
    const Eigen::Index n = a + b;
    Mat<T> out = Mat<T>::Zero(2 * n, 2 * n);
    for (int qi = 0; qi < 2; ++qi)
        for (int qj = 0; qj < 2; ++qj) {
            out.block(qi * n, qj * n, a, a) = m1.block(qi * a, qj * a, a, a);
            out.block(qi * n + a, qj * n + a, b, b) = m2.block(qi * b, qj * b, b, b);
        }
    return out;
}

template <typename T>
Mat<T> symplectic_residual(const Mat<T>& m)
{
    Mat<T> j = standard_J<T>(m.rows() / 2);
    return Mat<T>(m.transpose() * j * m - j);
}

// Dense symplectic matrix, either exact over the Scalar field or in doubles.
class SymplecticMatrix {
public:
    // Throws when the residual M^T J M − J is not identically zero.
    static SymplecticMatrix exact(ExactMatrix m);
    // Throws when the max-norm residual exceeds kSymplecticResidualTol.
    static SymplecticMatrix numeric(Eigen::MatrixXd m);

    Mode mode() const { return std::holds_alternative<ExactMatrix>(data_) ? Mode::exact : Mode::numeric; }
    bool is_exact() const { return mode() == Mode::exact; }
    Eigen::Index dim() const;
    Eigen::Index n() const { return dim() / 2; }

    const ExactMatrix& exact_entries() const { return std::get<ExactMatrix>(data_); }
    const Eigen::MatrixXd& numeric_entries() const { return std::get<Eigen::MatrixXd>(data_); }
    Eigen::MatrixXd to_numeric() const;
    double residual() const;

private:
    explicit SymplecticMatrix(std::variant<ExactMatrix, Eigen::MatrixXd> d) : data_(std::move(d)) {}
    std::variant<ExactMatrix, Eigen::MatrixXd> data_;
};

SymplecticMatrix diamond(const SymplecticMatrix& m1, const SymplecticMatrix& m2);

// cos and sin of π·t for t with denominator dividing 12, exactly.
struct ExactTrig {
    Scalar cos;
    Scalar sin;
};
std::optional<ExactTrig> exact_trig(const Scalar& over_pi);
bool is_table_angle(const Scalar& over_pi);

enum class BasicKind { D, N1, R, N2 };

// One basic normal form. N₂ keeps only its angle and triviality; the b entries
// are regenerated as b = ±R(θ) on realization.
struct BasicForm {
    BasicKind kind = BasicKind::D;
    int lambda = 2;
    int a = 0;
    Scalar angle_over_pi;
    bool nontrivial = false;

    static BasicForm D(int lambda);
    static BasicForm N1(int lambda, int a);
    static BasicForm R(const Scalar& angle_over_pi);
    static BasicForm N2(const Scalar& angle_over_pi, bool nontrivial);

    // Exact when every entry is representable, numeric otherwise.
    SymplecticMatrix realize(Mode preferred = Mode::exact) const;
};

ExactMatrix exact_block(const BasicForm& f);
Eigen::MatrixXd numeric_block(const BasicForm& f);

// Sign of (b₂ − b₃)·sin θ for an explicit N₂ upper-right block.
int n2_triviality_sign(const Eigen::Matrix2d& b, double theta);

struct EigenCluster {
    std::complex<double> center;
    int multiplicity = 0;
    double spread = 0.0;
};

// Single-linkage clusters of the eigenvalues of m within radius.
// Throws "ambiguous cluster" when two clusters lie within 10·radius.
std::vector<EigenCluster> cluster_eigenvalues(const Eigen::MatrixXd& m, double radius);

// Total algebraic multiplicity of unit-circle eigenvalues.
int elliptic_height(const SymplecticMatrix& m);
// dim_C ker(M − e^{iπt} I) for t = angle_over_pi.
int nullity_omega(const SymplecticMatrix& m, const Scalar& angle_over_pi);
int nullity_omega(const Eigen::MatrixXd& m, double angle_over_pi, double tol = kRankTol);

}  // namespace maslov
