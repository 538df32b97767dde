// Copyright 2026 The QSignal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsignal/random_stream.hpp"

namespace qsignal {

using Complex = std::complex<double>;

/// Hermiticity, idempotence and normalization are all judged against this.
inline constexpr double kTolerance = 1e-12;

/// Measurement branches whose Born weight is below this are never sampled.
inline constexpr double kNegligibleBranch = 1e-15;

/// Normalized amplitude vector over a labelled basis.
class StateVector {
public:
    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    const Eigen::VectorXcd &amplitudes() const noexcept {
        return amplitudes_;
    }
    const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }
    Complex operator[](std::size_t i) const {
        return amplitudes_(static_cast<Eigen::Index>(i));
    }
    double norm() const {
        return amplitudes_.norm();
    }

private:
    StateVector(Eigen::VectorXcd amplitudes, std::vector<std::string> labels)
        : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
    }
    friend StateVector make_state(const Eigen::VectorXcd &, std::vector<std::string>);

    Eigen::VectorXcd amplitudes_;
    std::vector<std::string> labels_;
};

/// Normalizes `amplitudes`, keeping relative phases. Throws ZeroVector when the
/// norm is at most kTolerance, DimensionMismatch when the label count differs.
StateVector make_state(const Eigen::VectorXcd &amplitudes, std::vector<std::string> labels);
StateVector make_state(std::span<const Complex> amplitudes, std::vector<std::string> labels);

/// Unlabelled states get labels "0", "1", ...
StateVector make_state(const Eigen::VectorXcd &amplitudes);

/// Dense square complex matrix.
class Operator {
public:
    explicit Operator(Eigen::MatrixXcd entries);

    static Operator identity(std::size_t dimension);
    static Operator zero(std::size_t dimension);

    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }
    const Eigen::MatrixXcd &entries() const noexcept {
        return entries_;
    }
    Complex operator()(std::size_t row, std::size_t col) const {
        return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    Operator adjoint() const;
    bool is_hermitian() const;
    /// P = P† and P² = P, both within kTolerance (Frobenius).
    bool is_projector() const;

    friend Operator operator+(const Operator &x, const Operator &y);
    friend Operator operator-(const Operator &x, const Operator &y);
    friend Operator operator*(const Operator &x, const Operator &y);
    friend Operator operator*(Complex scale, const Operator &x);

private:
    Eigen::MatrixXcd entries_;
};

/// ⟨a|b⟩, conjugate-linear in `a`.
Complex inner(const StateVector &a, const StateVector &b);

/// |ket⟩⟨bra|.
Operator outer(const StateVector &ket, const StateVector &bra);

/// |s⟩⟨s|.
Operator projector_onto(const StateVector &s);

/// ⟨s|P|s⟩. For projectors the value is clamped to [0, 1] when it strays by at
/// most kTolerance and rejected with ProbabilityOutOfRange beyond that.
double expectation(const Operator &op, const StateVector &s);

struct MeasurementResult {
    bool fired;
    /// Born probability of the realized branch.
    double probability;
    StateVector post_state;
};

/// The branch of a projective measurement with the given outcome, or nothing
/// if that branch has Born weight below kNegligibleBranch. Does not sample.
std::optional<MeasurementResult> collapse(const StateVector &s, const Operator &projector, bool fired);

/// Samples the outcome of measuring `projector` on `s` and reduces the state.
/// Consumes exactly one uniform draw unless the outcome is certain.
MeasurementResult measure(const StateVector &s, const Operator &projector, RandomStream &rng);

/// XY − YX.
Operator commutator(const Operator &x, const Operator &y);

double frobenius_norm(const Operator &x);
double frobenius_distance(const Operator &x, const Operator &y);

// Two-site basis used by the protocols, ordered (A, B).
StateVector state_at_a();
StateVector state_at_b();
/// (|A⟩ + |B⟩)/√2
StateVector state_plus();
/// (|A⟩ − |B⟩)/√2
StateVector state_minus();

}  // namespace qsignal
