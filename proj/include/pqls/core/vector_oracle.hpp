// Copyright (c) the pqls authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cmath>

#include "pqls/core/types.hpp"

namespace pqls {

// Amplitude/phase query access to a vector, the preparation-side analog
// of RowOracle. Amplitudes are nonnegative with the sign of real entries
// folded into the phase (0 or pi), and scale() * amplitude(j) <= 1 for
// every j so controlled rotations stay well defined.
class VectorOracle {
public:
    struct Sample {
        double amplitude; // >= 0
        double phase;     // [0, 2*pi)
    };

    explicit VectorOracle(DenseVector values, double scale = 0.0)
        : values_(std::move(values)) {
        double max_amp = 0.0;
        for (Index j = 0; j < values_.size(); ++j) max_amp = std::max(max_amp, std::abs(values_(j)));
        max_amplitude_ = max_amp;
        scale_ = scale > 0.0 ? scale : (max_amp > 0.0 ? 1.0 / max_amp : 1.0);
        if (max_amp * scale_ > 1.0 + 1e-12) {
            throw ContractViolation("vector oracle scale violates C * max(b) <= 1");
        }
    }

    Index dim() const { return values_.size(); }
    double scale() const { return scale_; }
    double max_amplitude() const { return max_amplitude_; }

    Sample query(Index j) const {
        if (j < 0 || j >= dim()) throw ContractViolation("vector oracle index out of range");
        ++queries_;
        const Complex v = values_(j);
        double amp = std::abs(v);
        double phase = amp > 0.0 ? std::arg(v) : 0.0;
        if (phase < 0.0) phase += 2.0 * kPi;
        return {amp, phase};
    }

    Complex value(Index j) const {
        const Sample s = query(j);
        return s.amplitude * Complex(std::cos(s.phase), std::sin(s.phase));
    }

    // The vector realized by the oracle; diagnostic use.
    const DenseVector& dense() const { return values_; }

    std::uint64_t query_count() const { return queries_.load(); }
    void reset_query_count() const { queries_.store(0); }

private:
    DenseVector values_;
    double scale_ = 1.0;
    double max_amplitude_ = 0.0;
    mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace pqls
