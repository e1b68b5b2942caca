// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pqls/core/row_oracle.hpp"

namespace pqls {

// Matrix Market coordinate format, complex general/hermitian (real
// entries accepted and promoted). Hermitian files store the lower
// triangle; the mirrored entries are reconstructed on read.
inline SparseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("matrix market: empty stream");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate") {
        throw ConfigError("matrix market: unsupported banner '" + line + "'");
    }
    const bool complex_field = field == "complex";
    if (!complex_field && field != "real" && field != "integer") {
        throw ConfigError("matrix market: unsupported field '" + field + "'");
    }
    bool hermitian = symmetry == "hermitian";
    const bool symmetric = symmetry == "symmetric";
    if (!hermitian && !symmetric && symmetry != "general") {
        throw ConfigError("matrix market: unsupported symmetry '" + symmetry + "'");
    }

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream header(line);
    Index rows = 0, cols = 0, nnz = 0;
    header >> rows >> cols >> nnz;
    if (rows != cols || rows <= 0) throw ConfigError("matrix market: expected a square matrix");

    std::vector<SparseRow> data(rows);
    for (Index e = 0; e < nnz; ++e) {
        if (!std::getline(in, line)) throw ConfigError("matrix market: truncated entry list");
        std::istringstream entry(line);
        Index i = 0, j = 0;
        double re = 0.0, im = 0.0;
        entry >> i >> j >> re;
        if (complex_field) entry >> im;
        if (entry.fail() || i < 1 || i > rows || j < 1 || j > cols) {
            throw ConfigError("matrix market: malformed entry '" + line + "'");
        }
        --i;
        --j;
        const Complex v(re, im);
        data[i].push_back({j, v});
        if (i != j) {
            if (hermitian) data[j].push_back({i, std::conj(v)});
            if (symmetric) data[j].push_back({i, v});
        }
    }
    return SparseMatrix(rows, std::move(data), hermitian);
}

inline SparseMatrix read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open matrix file '" + path + "'");
    return read_matrix_market(in);
}

inline void write_matrix_market(std::ostream& out, const RowOracle& a, bool as_hermitian = false) {
    std::vector<std::pair<std::pair<Index, Index>, Complex>> entries;
    for (Index i = 0; i < a.dim(); ++i) {
        for (const Entry& e : a.row(i)) {
            if (as_hermitian && e.col > i) continue; // lower triangle only
            entries.push_back({{i, e.col}, e.value});
        }
    }
    out << "%%MatrixMarket matrix coordinate complex " << (as_hermitian ? "hermitian" : "general")
        << "\n";
    out << a.dim() << " " << a.dim() << " " << entries.size() << "\n";
    out.precision(17);
    for (const auto& [ij, v] : entries) {
        out << (ij.first + 1) << " " << (ij.second + 1) << " " << v.real() << " " << v.imag()
            << "\n";
    }
}

inline void write_matrix_market_file(const std::string& path, const RowOracle& a,
                                     bool as_hermitian = false) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    write_matrix_market(out, a, as_hermitian);
}

// One complex value per line: "re im" (a single column is read as real).
inline DenseVector read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open vector file '" + path + "'");
    std::vector<Complex> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%' || line[0] == '#') continue;
        std::istringstream entry(line);
        double re = 0.0, im = 0.0;
        entry >> re;
        if (entry.fail()) throw ConfigError("vector file: malformed line '" + line + "'");
        entry >> im;
        if (entry.fail()) im = 0.0;
        values.emplace_back(re, im);
    }
    DenseVector v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v(i) = values[i];
    return v;
}

inline void write_vector_file(const std::string& path, const DenseVector& v) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out.precision(17);
    for (Index i = 0; i < v.size(); ++i) out << v(i).real() << " " << v(i).imag() << "\n";
}

}  // namespace pqls
