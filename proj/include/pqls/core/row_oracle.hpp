// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>

#include "pqls/core/types.hpp"

namespace pqls {

// Black-box row-query access to a complex sparse matrix. Every row holds
// at most sparsity() nonzeros, sorted by ascending column index, and
// repeated queries for the same row return identical entries. row() is
// instrumented: each call bumps a counter so tests and benchmarks can
// account for oracle usage.
class RowOracle {
public:
    virtual ~RowOracle() = default;

    Index dim() const { return dim_; }
    Index sparsity() const { return sparsity_; }
    bool hermitian() const { return hermitian_; }

    SparseRow row(Index k) const {
        if (k < 0 || k >= dim_) {
            throw ContractViolation("row query index " + std::to_string(k) +
                                    " out of range [0, " + std::to_string(dim_) + ")");
        }
        ++queries_;
        return do_row(k);
    }

    std::uint64_t query_count() const { return queries_.load(); }
    void reset_query_count() const { queries_.store(0); }

protected:
    RowOracle(Index dim, Index sparsity, bool hermitian)
        : dim_(dim), sparsity_(sparsity), hermitian_(hermitian) {}

private:
    virtual SparseRow do_row(Index k) const = 0;

    Index dim_;
    Index sparsity_;
    bool hermitian_;
    mutable std::atomic<std::uint64_t> queries_{0};
};

// Concrete CSR-backed oracle. Construction sorts each row by column and
// drops exact zeros, so the row-query invariants hold by construction.
class SparseMatrix : public RowOracle {
public:
    SparseMatrix(Index dim, std::vector<SparseRow> rows, bool hermitian = false)
        : RowOracle(dim, max_row_nnz(rows), hermitian), rows_(std::move(rows)) {
        if (static_cast<Index>(rows_.size()) != dim) {
            throw ContractViolation("row count does not match dimension");
        }
        for (auto& r : rows_) {
            std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
            r.erase(std::remove_if(r.begin(), r.end(),
                                   [](const Entry& e) { return e.value == Complex(0.0, 0.0); }),
                    r.end());
        }
    }

    static SparseMatrix from_dense(const DenseMatrix& a, bool hermitian = false, double drop_tol = 0.0) {
        std::vector<SparseRow> rows(a.rows());
        for (Index i = 0; i < a.rows(); ++i) {
            for (Index j = 0; j < a.cols(); ++j) {
                if (std::abs(a(i, j)) > drop_tol) rows[i].push_back({j, a(i, j)});
            }
        }
        return SparseMatrix(a.rows(), std::move(rows), hermitian);
    }

    static SparseMatrix identity(Index n) {
        std::vector<SparseRow> rows(n);
        for (Index i = 0; i < n; ++i) rows[i].push_back({i, Complex(1.0, 0.0)});
        return SparseMatrix(n, std::move(rows), true);
    }

    static SparseMatrix diagonal(const DenseVector& d) {
        std::vector<SparseRow> rows(d.size());
        bool herm = true;
        for (Index i = 0; i < d.size(); ++i) {
            rows[i].push_back({i, d(i)});
            if (std::abs(d(i).imag()) > 0.0) herm = false;
        }
        return SparseMatrix(d.size(), std::move(rows), herm);
    }

    // Toeplitz tridiagonal (diag, off, off); (2, -1, -1) is the 1-D
    // Laplace stencil used in several tests.
    static SparseMatrix tridiagonal(Index n, Complex diag, Complex off) {
        std::vector<SparseRow> rows(n);
        for (Index i = 0; i < n; ++i) {
            if (i > 0) rows[i].push_back({i - 1, off});
            rows[i].push_back({i, diag});
            if (i + 1 < n) rows[i].push_back({i + 1, off});
        }
        return SparseMatrix(n, std::move(rows), std::abs(diag.imag()) == 0.0 && std::abs(off.imag()) == 0.0);
    }

    const SparseRow& stored_row(Index k) const { return rows_[k]; }

private:
    static Index max_row_nnz(const std::vector<SparseRow>& rows) {
        std::size_t d = 1;
        for (const auto& r : rows) d = std::max(d, r.size());
        return static_cast<Index>(d);
    }

    SparseRow do_row(Index k) const override { return rows_[k]; }

    std::vector<SparseRow> rows_;
};

// Oracle defined by a callback; used for stencil matrices that are never
// materialized.
class FunctionOracle : public RowOracle {
public:
    using RowFn = std::function<SparseRow(Index)>;

    FunctionOracle(Index dim, Index sparsity, bool hermitian, RowFn fn)
        : RowOracle(dim, sparsity, hermitian), fn_(std::move(fn)) {}

private:
    SparseRow do_row(Index k) const override { return fn_(k); }

    RowFn fn_;
};

inline DenseMatrix densify(const RowOracle& a) {
    DenseMatrix m = DenseMatrix::Zero(a.dim(), a.dim());
    for (Index i = 0; i < a.dim(); ++i) {
        for (const Entry& e : a.row(i)) m(i, e.col) = e.value;
    }
    return m;
}

inline DenseVector apply(const RowOracle& a, const DenseVector& x) {
    DenseVector y = DenseVector::Zero(a.dim());
    for (Index i = 0; i < a.dim(); ++i) {
        Complex acc(0.0, 0.0);
        for (const Entry& e : a.row(i)) acc += e.value * x(e.col);
        y(i) = acc;
    }
    return y;
}

// y = A^H x via one pass over the rows.
inline DenseVector apply_adjoint(const RowOracle& a, const DenseVector& x) {
    DenseVector y = DenseVector::Zero(a.dim());
    for (Index i = 0; i < a.dim(); ++i) {
        for (const Entry& e : a.row(i)) y(e.col) += std::conj(e.value) * x(i);
    }
    return y;
}

// Checks the Hermitian pairing (k, j, v) <-> (j, k, conj(v)) entrywise.
inline bool is_hermitian(const RowOracle& a, double tol = 1e-12) {
    for (Index i = 0; i < a.dim(); ++i) {
        for (const Entry& e : a.row(i)) {
            const SparseRow other = a.row(e.col);
            auto it = std::find_if(other.begin(), other.end(),
                                   [&](const Entry& o) { return o.col == i; });
            if (it == other.end()) return false;
            if (std::abs(it->value - std::conj(e.value)) > tol) return false;
        }
    }
    return true;
}

}  // namespace pqls
