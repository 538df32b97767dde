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

#include "qsignal/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "qsignal/errors.hpp"

namespace qsignal {

namespace {

void require_same_dimension(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": dimensions " + std::to_string(a) + " and " + std::to_string(b));
    }
}

std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
    }
    return labels;
}

}  // namespace

StateVector make_state(const Eigen::VectorXcd &amplitudes, std::vector<std::string> labels) {
    if (amplitudes.size() == 0) {
        throw Error(ErrorKind::ZeroVector, "state must have dimension >= 1");
    }
    require_same_dimension(static_cast<std::size_t>(amplitudes.size()), labels.size(), "make_state");
    double n = amplitudes.norm();
    if (!(n > kTolerance)) {
        throw Error(ErrorKind::ZeroVector, "amplitude norm " + std::to_string(n) + " is not above 1e-12");
    }
    return StateVector(amplitudes / n, std::move(labels));
}

StateVector make_state(std::span<const Complex> amplitudes, std::vector<std::string> labels) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amplitudes.size()));
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = amplitudes[i];
    }
    return make_state(v, std::move(labels));
}

StateVector make_state(const Eigen::VectorXcd &amplitudes) {
    return make_state(amplitudes, index_labels(static_cast<std::size_t>(amplitudes.size())));
}

Operator::Operator(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "operator must be a non-empty square matrix, got " +
                                                      std::to_string(entries_.rows()) + "x" +
                                                      std::to_string(entries_.cols()));
    }
}

Operator Operator::identity(std::size_t dimension) {
    auto n = static_cast<Eigen::Index>(dimension);
    return Operator(Eigen::MatrixXcd::Identity(n, n));
}

Operator Operator::zero(std::size_t dimension) {
    auto n = static_cast<Eigen::Index>(dimension);
    return Operator(Eigen::MatrixXcd::Zero(n, n));
}

Operator Operator::adjoint() const {
    return Operator(entries_.adjoint());
}

bool Operator::is_hermitian() const {
    return (entries_ - entries_.adjoint()).norm() < kTolerance;
}

bool Operator::is_projector() const {
    return is_hermitian() && (entries_ * entries_ - entries_).norm() < kTolerance;
}

Operator operator+(const Operator &x, const Operator &y) {
    require_same_dimension(x.dimension(), y.dimension(), "operator+");
    return Operator(x.entries_ + y.entries_);
}

Operator operator-(const Operator &x, const Operator &y) {
    require_same_dimension(x.dimension(), y.dimension(), "operator-");
    return Operator(x.entries_ - y.entries_);
}

Operator operator*(const Operator &x, const Operator &y) {
    require_same_dimension(x.dimension(), y.dimension(), "operator*");
    return Operator(x.entries_ * y.entries_);
}

Operator operator*(Complex scale, const Operator &x) {
    return Operator(scale * x.entries_);
}

Complex inner(const StateVector &a, const StateVector &b) {
    require_same_dimension(a.dimension(), b.dimension(), "inner");
    return a.amplitudes().dot(b.amplitudes());  // Eigen conjugates the left operand
}

Operator outer(const StateVector &ket, const StateVector &bra) {
    require_same_dimension(ket.dimension(), bra.dimension(), "outer");
    return Operator(ket.amplitudes() * bra.amplitudes().adjoint());
}

Operator projector_onto(const StateVector &s) {
    return outer(s, s);
}

double expectation(const Operator &op, const StateVector &s) {
    require_same_dimension(op.dimension(), s.dimension(), "expectation");
    if (!op.is_hermitian()) {
        throw Error(ErrorKind::NotHermitian, "expectation requires a Hermitian operator");
    }
    double value = s.amplitudes().dot(op.entries() * s.amplitudes()).real();
    if (!op.is_projector()) {
        return value;
    }
    if (value < -kTolerance || value > 1.0 + kTolerance) {
        throw Error(ErrorKind::ProbabilityOutOfRange,
                    "Born probability " + std::to_string(value) + " outside [-1e-12, 1+1e-12]");
    }
    return std::clamp(value, 0.0, 1.0);
}

namespace {

void require_projector(const Operator &p, const StateVector &s) {
    require_same_dimension(p.dimension(), s.dimension(), "measure");
    if (!p.is_projector()) {
        throw Error(ErrorKind::NotProjector, "measurement operator is not a projector (P^2=P=P^dagger)");
    }
}

// The branch weight is ‖Ps‖² (or ‖(I-P)s‖²) of the unnormalized branch.
MeasurementResult reduce(const StateVector &s, const Operator &projector, bool fired) {
    Eigen::VectorXcd v = projector.entries() * s.amplitudes();
    if (!fired) {
        v = s.amplitudes() - v;
    }
    double weight = std::min(v.squaredNorm(), 1.0);
    return MeasurementResult{fired, weight, make_state(v, s.labels())};
}

}  // namespace

std::optional<MeasurementResult> collapse(const StateVector &s, const Operator &projector, bool fired) {
    require_projector(projector, s);
    double p = expectation(projector, s);
    double weight = fired ? p : 1.0 - p;
    if (weight < kNegligibleBranch) {
        return std::nullopt;
    }
    return reduce(s, projector, fired);
}

MeasurementResult measure(const StateVector &s, const Operator &projector, RandomStream &rng) {
    require_projector(projector, s);
    double p = expectation(projector, s);
    if (p == 0.0 || p == 1.0) {
        return reduce(s, projector, p == 1.0);
    }
    bool fired = rng.uniform() < p;
    if (p < kNegligibleBranch) {
        fired = false;
    } else if (1.0 - p < kNegligibleBranch) {
        fired = true;
    }
    return reduce(s, projector, fired);
}

Operator commutator(const Operator &x, const Operator &y) {
    require_same_dimension(x.dimension(), y.dimension(), "commutator");
    return Operator(x.entries() * y.entries() - y.entries() * x.entries());
}

double frobenius_norm(const Operator &x) {
    return x.entries().norm();
}

double frobenius_distance(const Operator &x, const Operator &y) {
    require_same_dimension(x.dimension(), y.dimension(), "frobenius_distance");
    return (x.entries() - y.entries()).norm();
}

StateVector state_at_a() {
    return make_state(Eigen::Vector2cd(1.0, 0.0), {"A", "B"});
}

StateVector state_at_b() {
    return make_state(Eigen::Vector2cd(0.0, 1.0), {"A", "B"});
}

StateVector state_plus() {
    return make_state(Eigen::Vector2cd(1.0, 1.0), {"A", "B"});
}

StateVector state_minus() {
    return make_state(Eigen::Vector2cd(1.0, -1.0), {"A", "B"});
}

}  // namespace qsignal
