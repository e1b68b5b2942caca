// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <future>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <thread>

#include "pqls/core/dense.hpp"
#include "pqls/core/matrix_market.hpp"
#include "pqls/core/row_oracle.hpp"
#include "pqls/core/vector_oracle.hpp"
#include <nlohmann/json.hpp>

namespace pqls::spai {

// Left preconditioning (M A x = M b) is the default; right solves A M y = b.
enum class Side { kLeft, kRight };

inline const char* to_string(Side s) { return s == Side::kLeft ? "left" : "right"; }

inline Side side_from_string(const std::string& s) {
    if (s == "left") return Side::kLeft;
    if (s == "right") return Side::kRight;
    throw ConfigError("unknown preconditioner side '" + s + "'");
}

// A-priori support sets for the sparse approximate inverse: level 0 is
// diagonal, level 1 follows the sparsity of A (transposed for the left
// side), level 2 the boolean square of that pattern. Index k always
// belongs to its own support so the levels nest.
struct SparsityPattern {
    int level = 1;
    Side side = Side::kLeft;
    std::vector<std::vector<Index>> support;

    // Transposed copy of A, materialized only for right-side patterns so
    // that every local problem can be set up from row queries.
    std::shared_ptr<const SparseMatrix> transposed;
};

namespace detail {

inline std::shared_ptr<const SparseMatrix> materialize_transpose(const RowOracle& a) {
    std::vector<SparseRow> rows(a.dim());
    for (Index i = 0; i < a.dim(); ++i) {
        for (const Entry& e : a.row(i)) rows[e.col].push_back({i, std::conj(std::conj(e.value))});
    }
    // transpose without conjugation: T[j][i] = A[i][j]
    return std::make_shared<SparseMatrix>(a.dim(), std::move(rows), false);
}

// For the left side the working matrix is A^T, whose column k is row k of
// A; the right side reads rows of the materialized transpose so both
// sides share one code path.
inline const RowOracle& row_source(const RowOracle& a, const SparsityPattern& p) {
    return p.side == Side::kLeft ? a : *p.transposed;
}

inline std::vector<Index> row_cols(const RowOracle& src, Index k) {
    std::vector<Index> cols;
    for (const Entry& e : src.row(k)) cols.push_back(e.col);
    return cols;
}

}  // namespace detail

inline SparsityPattern build_pattern(const RowOracle& a, int level, Side side = Side::kLeft) {
    if (level < 0 || level > 2) throw ContractViolation("pattern level must be 0, 1, or 2");
    SparsityPattern p;
    p.level = level;
    p.side = side;
    if (side == Side::kRight) p.transposed = detail::materialize_transpose(a);
    const RowOracle& src = detail::row_source(a, p);

    const Index n = a.dim();
    p.support.resize(n);
    for (Index k = 0; k < n; ++k) {
        std::set<Index> s;
        s.insert(k);
        if (level >= 1) {
            for (Index c : detail::row_cols(src, k)) s.insert(c);
        }
        if (level == 2) {
            const std::set<Index> level1 = s;
            for (Index j : level1) {
                for (Index c : detail::row_cols(src, j)) s.insert(c);
            }
        }
        p.support[k].assign(s.begin(), s.end());
    }
    return p;
}

// One local least-squares fit, fully described so tests can poke at it.
struct SpaiLocalProblem {
    Index k = 0;
    std::vector<Index> rows;    // global indices of the nonzero row set
    std::vector<Index> columns; // global indices of the allowed support
    DenseMatrix local_matrix;   // rows.size() x columns.size()
    DenseVector local_unit;     // e_k restricted to the row set
};

struct LocalSolution {
    SparseRow m_k; // solution over the support, sorted by index
    double residual = 0.0;
    bool rank_deficient = false;
};

inline SpaiLocalProblem build_local_problem(const RowOracle& a, const SparsityPattern& pattern,
                                            Index k) {
    const RowOracle& src = detail::row_source(a, pattern);
    const std::vector<Index>& support = pattern.support.at(k);
    if (support.empty()) throw ContractViolation("empty SPAI support for index " + std::to_string(k));

    std::map<Index, SparseRow> src_rows;
    std::set<Index> row_set;
    row_set.insert(k);
    for (Index j : support) {
        src_rows[j] = src.row(j);
        for (const Entry& e : src_rows[j]) row_set.insert(e.col);
    }

    SpaiLocalProblem prob;
    prob.k = k;
    prob.columns = support;
    prob.rows.assign(row_set.begin(), row_set.end());
    std::map<Index, Index> row_pos;
    for (std::size_t r = 0; r < prob.rows.size(); ++r) row_pos[prob.rows[r]] = static_cast<Index>(r);

    prob.local_matrix = DenseMatrix::Zero(prob.rows.size(), support.size());
    for (std::size_t c = 0; c < support.size(); ++c) {
        // Local matrix column c holds column support[c] of the working
        // matrix, i.e. row support[c] of the row source.
        for (const Entry& e : src_rows[support[c]]) {
            prob.local_matrix(row_pos[e.col], c) = e.value;
        }
    }
    prob.local_unit = DenseVector::Zero(prob.rows.size());
    prob.local_unit(row_pos[k]) = Complex(1.0, 0.0);
    return prob;
}

// Minimizes ||A_hat m_hat - e_hat|| over the allowed support via
// column-pivoted orthogonal factorization; rank-deficient fits fall back
// to the minimum-norm solution and are flagged.
inline LocalSolution solve_local(const RowOracle& a, const SparsityPattern& pattern, Index k) {
    const SpaiLocalProblem prob = build_local_problem(a, pattern, k);
    Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(prob.local_matrix);
    LocalSolution sol;
    sol.rank_deficient = cod.rank() < static_cast<Eigen::Index>(prob.columns.size());
    const DenseVector m_hat = cod.solve(prob.local_unit);
    sol.residual = (prob.local_matrix * m_hat - prob.local_unit).norm();
    for (std::size_t c = 0; c < prob.columns.size(); ++c) {
        if (m_hat(c) != Complex(0.0, 0.0)) sol.m_k.push_back({prob.columns[c], m_hat(c)});
    }
    return sol;
}

// Sparse approximate inverse with per-index residual bookkeeping.
// eps_pre is the largest residual over all local fits, the quantity that
// drives the condition-number bound.
struct Preconditioner {
    std::shared_ptr<const SparseMatrix> m;
    std::vector<double> residuals;
    double eps_pre = 0.0;
    Side side = Side::kLeft;
    int level = 1;
    bool any_rank_deficient = false;

    const SparseMatrix& oracle() const { return *m; }
    double frobenius_objective() const {
        double s = 0.0;
        for (double r : residuals) s += r * r;
        return s;
    }
};

inline Preconditioner assemble_preconditioner(const RowOracle& a, const SparsityPattern& pattern,
                                              bool parallel = false) {
    const Index n = a.dim();
    std::vector<LocalSolution> sols(n);
    if (parallel) {
        // Independent local problems; results land in per-index slots so
        // assembly order never affects the outcome.
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::future<void>> futures;
        std::atomic<Index> next{0};
        for (unsigned w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&] {
                for (Index k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
                    sols[k] = solve_local(a, pattern, k);
                }
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (Index k = 0; k < n; ++k) sols[k] = solve_local(a, pattern, k);
    }

    Preconditioner pre;
    pre.side = pattern.side;
    pre.level = pattern.level;
    pre.residuals.resize(n);
    std::vector<SparseRow> rows(n);
    for (Index k = 0; k < n; ++k) {
        pre.residuals[k] = sols[k].residual;
        pre.eps_pre = std::max(pre.eps_pre, sols[k].residual);
        pre.any_rank_deficient = pre.any_rank_deficient || sols[k].rank_deficient;
        if (pattern.side == Side::kLeft) {
            rows[k] = sols[k].m_k; // m_k is row k of M
        } else {
            for (const Entry& e : sols[k].m_k) rows[e.col].push_back({k, e.value});
        }
    }
    pre.m = std::make_shared<SparseMatrix>(n, std::move(rows), false);
    return pre;
}

struct BoundCheck {
    bool applicable = false;
    std::optional<double> bound;
};

// Condition-number bound from the largest fit residual: applicable when
// sqrt(d) * eps_pre < 1, in which case
// kappa <= (1 + sqrt(d) eps) / (1 - sqrt(d) eps).
inline BoundCheck bound_check(const Preconditioner& pre, Index d) {
    const double x = std::sqrt(static_cast<double>(d)) * pre.eps_pre;
    BoundCheck out;
    out.applicable = x < 1.0;
    if (out.applicable) out.bound = (1.0 + x) / (1.0 - x);
    return out;
}

namespace detail {

inline SparseRow merge_scaled_rows(const std::vector<std::pair<Complex, SparseRow>>& parts) {
    std::map<Index, Complex> acc;
    for (const auto& [w, row] : parts) {
        for (const Entry& e : row) acc[e.col] += w * e.value;
    }
    SparseRow out;
    for (const auto& [col, v] : acc) {
        if (v != Complex(0.0, 0.0)) out.push_back({col, v});
    }
    return out;
}

}  // namespace detail

// Row k of the preconditioned matrix (MA for the left side, AM for the
// right), computed from rows of M and O(d) row queries of A.
inline SparseRow preconditioned_row_oracle(const RowOracle& a, const Preconditioner& pre, Index k) {
    if (k < 0 || k >= a.dim()) throw ContractViolation("preconditioned row index out of range");
    std::vector<std::pair<Complex, SparseRow>> parts;
    if (pre.side == Side::kLeft) {
        for (const Entry& e : pre.oracle().row(k)) parts.emplace_back(e.value, a.row(e.col));
    } else {
        for (const Entry& e : a.row(k)) parts.emplace_back(e.value, pre.oracle().row(e.col));
    }
    return detail::merge_scaled_rows(parts);
}

// Element j of M b from row j of M and O(d) vector-oracle queries.
inline Complex preconditioned_rhs_element(const Preconditioner& pre, const VectorOracle& b,
                                          Index j) {
    if (j < 0 || j >= pre.oracle().dim()) {
        throw ContractViolation("preconditioned rhs index out of range");
    }
    Complex acc(0.0, 0.0);
    for (const Entry& e : pre.oracle().row(j)) acc += e.value * b.value(e.col);
    return acc;
}

// Oracle view of the preconditioned system, backed by an assembled M.
class PreconditionedOracle : public RowOracle {
public:
    PreconditionedOracle(std::shared_ptr<const RowOracle> a, std::shared_ptr<const Preconditioner> pre)
        : RowOracle(a->dim(), a->sparsity() * pre->oracle().sparsity(), false),
          a_(std::move(a)),
          pre_(std::move(pre)) {}

private:
    SparseRow do_row(Index k) const override { return preconditioned_row_oracle(*a_, *pre_, k); }

    std::shared_ptr<const RowOracle> a_;
    std::shared_ptr<const Preconditioner> pre_;
};

// Fully local oracle for MA that never assembles M: each row query sets
// up and solves the local least-squares problem for m_k on demand, the
// composition a quantum implementation would evaluate inside the sparse
// Hamiltonian oracle. Per-row cost is O(d^2) A-queries regardless of N.
class LocalSpaiOracle : public RowOracle {
public:
    LocalSpaiOracle(std::shared_ptr<const RowOracle> a, int level)
        : RowOracle(a->dim(), a->sparsity() * a->sparsity() * (level == 2 ? a->sparsity() : 1),
                    false),
          a_(std::move(a)),
          level_(level) {
        if (level < 0 || level > 2) throw ContractViolation("pattern level must be 0, 1, or 2");
    }

private:
    SparseRow do_row(Index k) const override {
        // Rebuild the support for this k only; all queries hit rows of A.
        SparsityPattern local;
        local.level = level_;
        local.side = Side::kLeft;
        local.support.resize(a_->dim());
        std::set<Index> s;
        s.insert(k);
        if (level_ >= 1) {
            for (Index c : detail::row_cols(*a_, k)) s.insert(c);
        }
        if (level_ == 2) {
            const std::set<Index> level1 = s;
            for (Index j : level1) {
                for (Index c : detail::row_cols(*a_, j)) s.insert(c);
            }
        }
        local.support[k].assign(s.begin(), s.end());
        const LocalSolution sol = solve_local(*a_, local, k);
        std::vector<std::pair<Complex, SparseRow>> parts;
        for (const Entry& e : sol.m_k) parts.emplace_back(e.value, a_->row(e.col));
        return detail::merge_scaled_rows(parts);
    }

    std::shared_ptr<const RowOracle> a_;
    int level_;
};

// Export/import: Matrix Market payload plus a JSON sidecar carrying the
// metadata that cannot be reconstructed from the matrix alone.
inline void save_preconditioner(const std::string& matrix_path, const std::string& sidecar_path,
                                const Preconditioner& pre) {
    write_matrix_market_file(matrix_path, pre.oracle(), false);
    nlohmann::json meta;
    meta["schema_version"] = 1;
    meta["level"] = pre.level;
    meta["side"] = to_string(pre.side);
    meta["eps_pre"] = pre.eps_pre;
    meta["residuals"] = pre.residuals;
    meta["any_rank_deficient"] = pre.any_rank_deficient;
    std::ofstream out(sidecar_path);
    if (!out) throw ConfigError("cannot open '" + sidecar_path + "' for writing");
    out << meta.dump(2) << "\n";
}

inline Preconditioner load_preconditioner(const std::string& matrix_path,
                                          const std::string& sidecar_path) {
    std::ifstream in(sidecar_path);
    if (!in) throw ConfigError("cannot open sidecar '" + sidecar_path + "'");
    nlohmann::json meta = nlohmann::json::parse(in);
    Preconditioner pre;
    pre.m = std::make_shared<SparseMatrix>(read_matrix_market_file(matrix_path));
    pre.level = meta.at("level").get<int>();
    pre.side = side_from_string(meta.at("side").get<std::string>());
    pre.eps_pre = meta.at("eps_pre").get<double>();
    pre.residuals = meta.at("residuals").get<std::vector<double>>();
    pre.any_rank_deficient = meta.value("any_rank_deficient", false);
    return pre;
}

}  // namespace pqls::spai
