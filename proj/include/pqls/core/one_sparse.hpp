// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <vector>

#include "pqls/core/row_oracle.hpp"

namespace pqls {

// Hermitian matrix with at most one nonzero per row and column: a set of
// disjoint 2x2 couplings plus disjoint diagonal entries. Each term can be
// exponentiated directly, which is what the Trotter backend relies on.
struct OneSparseTerm {
    Index dim = 0;
    // (j, k, v) with j < k represents H[j,k] = v, H[k,j] = conj(v).
    std::vector<std::tuple<Index, Index, Complex>> couplings;
    // (j, d) with real d on the diagonal.
    std::vector<std::pair<Index, double>> diagonal;

    DenseMatrix densify() const {
        DenseMatrix m = DenseMatrix::Zero(dim, dim);
        for (const auto& [j, k, v] : couplings) {
            m(j, k) = v;
            m(k, j) = std::conj(v);
        }
        for (const auto& [j, d] : diagonal) m(j, j) = Complex(d, 0.0);
        return m;
    }
};

// Splits a Hermitian sparse matrix into 1-sparse Hermitian terms that sum
// back exactly: a greedy edge coloring of the off-diagonal sparsity graph
// (edges visited in row-major order, smallest free color wins) plus one
// diagonal term. Greedy needs at most 2d-1 colors, well inside the 6d^2
// ceiling quoted for oracle-local decompositions.
inline std::vector<OneSparseTerm> one_sparse_decomposition(const RowOracle& h) {
    if (!h.hermitian() && !is_hermitian(h)) {
        throw ContractViolation("one-sparse decomposition requires a Hermitian matrix");
    }
    const Index n = h.dim();

    std::vector<std::tuple<Index, Index, Complex>> edges;
    std::vector<std::pair<Index, double>> diag;
    for (Index i = 0; i < n; ++i) {
        for (const Entry& e : h.row(i)) {
            if (e.col == i) {
                diag.emplace_back(i, e.value.real());
            } else if (e.col > i) {
                edges.emplace_back(i, e.col, e.value);
            }
        }
    }

    std::vector<std::set<int>> used(n); // colors already incident to each vertex
    std::vector<int> color(edges.size(), 0);
    int num_colors = 0;
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        const auto& [j, k, v] = edges[idx];
        int c = 0;
        while (used[j].count(c) || used[k].count(c)) ++c;
        color[idx] = c;
        used[j].insert(c);
        used[k].insert(c);
        num_colors = std::max(num_colors, c + 1);
    }

    std::vector<OneSparseTerm> terms(num_colors);
    for (auto& t : terms) t.dim = n;
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
        terms[color[idx]].couplings.push_back(edges[idx]);
    }
    if (!diag.empty()) {
        OneSparseTerm t;
        t.dim = n;
        t.diagonal = std::move(diag);
        terms.push_back(std::move(t));
    }
    if (terms.empty()) {
        // Zero matrix: represent as a single empty term so callers always
        // have something to exponentiate.
        OneSparseTerm t;
        t.dim = n;
        terms.push_back(std::move(t));
    }
    return terms;
}

}  // namespace pqls
