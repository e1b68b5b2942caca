// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pqls/core/row_oracle.hpp"
#include "pqls/core/types.hpp"

namespace pqls {

// Every quantum-pipeline result is checked against an exact classical
// solve; keep that reference path at sizes where a dense factorization
// is unquestionably reliable.
inline constexpr Index kDenseDimCap = 4096;

// Relative threshold below which sigma_min is treated as zero.
inline constexpr double kSingularTol = 1e-12;

struct ConditionReport {
    double kappa = 1.0;
    double sigma_max = 1.0;
    double sigma_min = 1.0;
};

struct Eigensystem {
    RealVector eigenvalues;   // ascending
    DenseMatrix eigenvectors; // column j pairs with eigenvalues(j)

    // Coefficients of v in the eigenbasis.
    DenseVector expand(const DenseVector& v) const { return eigenvectors.adjoint() * v; }
};

inline void check_dense_scale(Index n) {
    if (n > kDenseDimCap) {
        throw ContractViolation("dense reference path capped at N = " +
                                std::to_string(kDenseDimCap) + ", got " + std::to_string(n));
    }
}

inline DenseVector dense_solve(const DenseMatrix& a, const DenseVector& b) {
    check_dense_scale(a.rows());
    Eigen::FullPivLU<DenseMatrix> lu(a);
    if (!lu.isInvertible()) throw SingularMatrixError("dense solve: matrix is singular");
    DenseVector x = lu.solve(b);
    const double rel = (a * x - b).norm() / std::max(b.norm(), 1e-300);
    if (rel > 1e-10) {
        throw SingularMatrixError("dense solve: residual " + std::to_string(rel) +
                                  " exceeds 1e-10; matrix effectively singular");
    }
    return x;
}

inline DenseVector dense_solve(const RowOracle& a, const DenseVector& b) {
    return dense_solve(densify(a), b);
}

inline ConditionReport condition_number(const DenseMatrix& a) {
    check_dense_scale(a.rows());
    Eigen::BDCSVD<DenseMatrix> svd(a);
    const auto& s = svd.singularValues();
    ConditionReport rep;
    rep.sigma_max = s(0);
    rep.sigma_min = s(s.size() - 1);
    if (rep.sigma_min < kSingularTol * rep.sigma_max) {
        throw SingularMatrixError("condition number: sigma_min below machine-scaled threshold");
    }
    rep.kappa = rep.sigma_max / rep.sigma_min;
    return rep;
}

inline ConditionReport condition_number(const RowOracle& a) {
    return condition_number(densify(a));
}

inline Eigensystem eigensystem(const DenseMatrix& h) {
    check_dense_scale(h.rows());
    if ((h - h.adjoint()).norm() > 1e-10 * std::max(1.0, h.norm())) {
        throw ContractViolation("eigensystem requires a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    return Eigensystem{es.eigenvalues(), es.eigenvectors()};
}

inline Eigensystem eigensystem(const RowOracle& h) { return eigensystem(densify(h)); }

// Sparse direct solve for instances past the dense cap (large 1-D FEM
// chains); same residual guarantee as dense_solve.
inline DenseVector sparse_lu_solve(const RowOracle& a, const DenseVector& b) {
    Eigen::SparseMatrix<Complex> m(a.dim(), a.dim());
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Index i = 0; i < a.dim(); ++i) {
        for (const Entry& e : a.row(i)) trips.emplace_back(i, e.col, e.value);
    }
    m.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(m);
    if (lu.info() != Eigen::Success) throw SingularMatrixError("sparse LU factorization failed");
    DenseVector x = lu.solve(b);
    const double rel = (m * x - b).norm() / std::max(b.norm(), 1e-300);
    if (rel > 1e-8) throw SingularMatrixError("sparse LU: residual too large");
    return x;
}

}  // namespace pqls
