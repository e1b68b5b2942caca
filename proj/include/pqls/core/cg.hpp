// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pqls/core/row_oracle.hpp"

namespace pqls {

struct CgResult {
    DenseVector x;
    Index iterations = 0;
    bool converged = false;
    double relative_residual = 0.0; // ||Ax - b|| / ||b||, always the unpreconditioned system
    bool used_normal_equations = false;
};

namespace detail {

// Hermitian-positive-definite conjugate gradient, optionally with an
// approximate-inverse preconditioner applied as z = M r. Returns false on
// an indefinite pivot so the caller can fall back to normal equations.
inline bool cg_hpd(const RowOracle& a, const DenseVector& b, double tol, Index max_iter,
                   const RowOracle* m, CgResult& out) {
    const double bnorm = b.norm();
    DenseVector x = DenseVector::Zero(a.dim());
    if (bnorm == 0.0) {
        out = {x, 0, true, 0.0, false};
        return true;
    }
    DenseVector r = b;
    DenseVector z = m ? apply(*m, r) : r;
    DenseVector p = z;
    Complex rz = r.dot(z); // Eigen dot conjugates the left argument
    for (Index it = 1; it <= max_iter; ++it) {
        DenseVector ap = apply(a, p);
        const Complex pap = p.dot(ap);
        if (pap.real() <= 0.0) return false; // not positive definite
        const Complex alpha = rz / pap;
        x += alpha * p;
        r -= alpha * ap;
        if (r.norm() / bnorm <= tol) {
            const double rel = (b - apply(a, x)).norm() / bnorm;
            if (rel <= tol) {
                out = {x, it, true, rel, false};
                return true;
            }
        }
        z = m ? apply(*m, r) : r;
        const Complex rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    out = {x, max_iter, false, (b - apply(a, x)).norm() / bnorm, false};
    return true;
}

// CG on the normal equations of the (optionally left-preconditioned)
// system: (MA)^H (MA) x = (MA)^H (Mb). Convergence is declared on the
// original residual ||Ax - b||.
inline CgResult cgnr(const RowOracle& a, const DenseVector& b, double tol, Index max_iter,
                     const RowOracle* m) {
    const double bnorm = b.norm();
    DenseVector x = DenseVector::Zero(a.dim());
    if (bnorm == 0.0) return {x, 0, true, 0.0, true};

    auto op = [&](const DenseVector& v) {
        DenseVector w = apply(a, v);
        return m ? apply(*m, w) : w;
    };
    auto op_adjoint = [&](const DenseVector& v) {
        DenseVector w = m ? apply_adjoint(*m, v) : v;
        return apply_adjoint(a, w);
    };

    const DenseVector rhs = m ? apply(*m, b) : b;
    const double snorm0 = rhs.norm();
    DenseVector s = rhs;            // M(b - Ax), equals the true residual when M is absent
    DenseVector r = op_adjoint(s);  // normal-equations residual
    DenseVector p = r;
    double rr = r.squaredNorm();
    double s_tol = tol;
    for (Index it = 1; it <= max_iter; ++it) {
        DenseVector q = op(p);
        const double qq = q.squaredNorm();
        if (qq == 0.0) break;
        const double alpha = rr / qq;
        x += alpha * p;
        s -= alpha * q;
        if (s.norm() <= s_tol * snorm0) {
            // Cheap incremental test passed; confirm against the true residual.
            const double true_rel = (b - apply(a, x)).norm() / bnorm;
            if (true_rel <= tol) return {x, it, true, true_rel, true};
            s_tol *= 0.5;
        }
        r = op_adjoint(s);
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    return {x, max_iter, false, (b - apply(a, x)).norm() / bnorm, true};
}

}  // namespace detail

// Conjugate-gradient solve with iteration instrumentation. Hermitian
// systems run plain (P)CG; anything else, or a CG breakdown on an
// indefinite Hermitian matrix, switches to the normal-equations variant.
// Non-convergence is flagged in the result, never silent.
inline CgResult cg_solve(const RowOracle& a, const DenseVector& b, double tol, Index max_iter,
                         const RowOracle* precond = nullptr) {
    if (tol <= 0.0) throw ContractViolation("cg_solve requires tol > 0");
    if (b.size() != a.dim()) throw ContractViolation("cg_solve dimension mismatch");
    if (a.hermitian()) {
        CgResult out;
        if (detail::cg_hpd(a, b, tol, max_iter, precond, out)) return out;
    }
    return detail::cgnr(a, b, tol, max_iter, precond);
}

}  // namespace pqls
