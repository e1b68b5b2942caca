// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "pqls/core/row_oracle.hpp"

namespace pqls {

// Hermitian dilation H = [[0, A], [A^H, 0]] of dimension 2N. Solving
// H (x1, x2) = (b, 0) gives x1 = 0 and A x2 = b, so a general matrix can
// be simulated as a Hamiltonian at the cost of doubling the register.
// The adjoint block is indexed once from A's rows at construction.
class DilatedOracle : public RowOracle {
public:
    explicit DilatedOracle(std::shared_ptr<const RowOracle> a)
        : RowOracle(2 * a->dim(), dilated_sparsity(*a), true), a_(std::move(a)) {
        const Index n = a_->dim();
        cols_.resize(n);
        for (Index i = 0; i < n; ++i) {
            for (const Entry& e : a_->row(i)) cols_[e.col].push_back({i, std::conj(e.value)});
        }
    }

private:
    static Index dilated_sparsity(const RowOracle& a) {
        std::vector<Index> col_nnz(a.dim(), 0);
        for (Index i = 0; i < a.dim(); ++i) {
            for (const Entry& e : a.row(i)) ++col_nnz[e.col];
        }
        Index d = a.sparsity();
        for (Index c : col_nnz) d = std::max(d, c);
        return d;
    }

    SparseRow do_row(Index k) const override {
        const Index n = a_->dim();
        SparseRow out;
        if (k < n) {
            for (const Entry& e : a_->row(k)) out.push_back({e.col + n, e.value});
        } else {
            out = cols_[k - n];
        }
        return out;
    }

    std::shared_ptr<const RowOracle> a_;
    std::vector<SparseRow> cols_; // rows of A^H, sorted by construction order (row-major over A)
};

// Embeds b in the upper block so that the dilated solution carries x in
// the lower block.
inline DenseVector dilate_rhs(const DenseVector& b) {
    DenseVector out = DenseVector::Zero(2 * b.size());
    out.head(b.size()) = b;
    return out;
}

inline DenseVector lower_block(const DenseVector& v) {
    return v.tail(v.size() / 2);
}

}  // namespace pqls
