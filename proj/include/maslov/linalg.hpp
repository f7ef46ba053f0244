#pragma once

#include "maslov/scalar.hpp"

#include <Eigen/Dense>

namespace Eigen {

template <>
struct NumTraits<maslov::Scalar> : GenericNumTraits<maslov::Scalar> {
    using Real = maslov::Scalar;
    using NonInteger = maslov::Scalar;
    using Nested = maslov::Scalar;
    using Literal = maslov::Scalar;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 32
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace maslov {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using ExactMatrix = Mat<Scalar>;
using ExactVector = Vec<Scalar>;

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

// Exact linear algebra over the field spanned by the matrix entries.
int rank(const ExactMatrix& a);
// Column basis of ker a.
ExactMatrix nullspace(const ExactMatrix& a);
ExactMatrix inverse(const ExactMatrix& a);
// Sylvester inertia of a symmetric matrix via congruence elimination.
Inertia inertia(const ExactMatrix& sym);
ExactMatrix power(const ExactMatrix& a, unsigned m);
bool is_zero(const ExactMatrix& a);
Eigen::MatrixXd to_double(const ExactMatrix& a);

// Floating-point counterparts with an explicit threshold.
int numeric_rank(const Eigen::MatrixXd& a, double tol);
Eigen::MatrixXd numeric_nullspace(const Eigen::MatrixXd& a, double tol);
Inertia numeric_inertia(const Eigen::MatrixXd& sym, double tol);

ExactMatrix symmetric_part(const ExactMatrix& a);
Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& a);

}  // namespace maslov
