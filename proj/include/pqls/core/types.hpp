// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pqls {

using Complex = std::complex<double>;
using Index = std::int64_t;

using DenseVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// One nonzero of a sparse row, kept sorted by column index.
struct Entry {
    Index col;
    Complex value;
};

using SparseRow = std::vector<Entry>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller violated an operation precondition (bad index, non-Hermitian
// input where Hermitian is required, ...).
struct ContractViolation : Error {
    using Error::Error;
};

// Matrix is singular to working precision.
struct SingularMatrixError : Error {
    using Error::Error;
};

// Invalid or degenerate mesh.
struct MeshError : Error {
    using Error::Error;
};

// Malformed run configuration or input file.
struct ConfigError : Error {
    using Error::Error;
};

// A computation failed to reach its numerical target (non-convergence,
// degenerate pipeline, ...).
struct NumericalError : Error {
    using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace pqls
