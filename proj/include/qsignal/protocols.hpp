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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsignal/hilbert.hpp"
#include "qsignal/random_stream.hpp"
#include "qsignal/wavepacket.hpp"

namespace qsignal {

/// Half-width of every reported confidence band, in binomial standard deviations.
inline constexpr double kConfidenceSigmas = 4.0;

/// Nonlocal-projector protocol: the particle starts at |A⟩, the sender
/// optionally measures |+⟩⟨+|, then the receiver measures |B⟩⟨B|.
struct Protocol1Params {
    std::uint64_t n_trials = 100000;
    bool sender_acts = true;
    /// Particles per trial for the "at least one reaches B" statistic.
    std::uint64_t n_particles = 1;
    std::uint64_t seed = 42;

    bool operator==(const Protocol1Params &) const = default;
};

/// Momentum-measurement protocol: a width-sigma packet at the origin, an
/// optional precise momentum measurement by the sender, then detection in
/// [d - k, d + k] by the receiver.
struct Protocol2Params {
    double sigma = 1.0;
    double sigma_bar = 100.0;
    double d = 100.0;
    double k = 1.0;
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 42;
    bool sender_acts = true;

    bool operator==(const Protocol2Params &) const = default;
};

void validate(const Protocol1Params &params);
void validate(const Protocol2Params &params);

struct TrialRecord {
    std::uint64_t trial_index = 0;
    /// Protocol 1: whether the sender's |+⟩⟨+| fired.
    std::optional<bool> intermediate_outcome;
    /// Protocol 2: sampled momentum.
    std::optional<double> lambda;
    bool receiver_detected = false;
    /// Born probability of detection given this trial's pre-detection state.
    double receiver_probability = 0.0;
    /// Protocol 1: at least one of the trial's particles reached B.
    std::optional<bool> ensemble_detected;
};

struct Protocol1Report {
    Protocol1Params params;
    std::vector<TrialRecord> trials;
    std::uint64_t detections = 0;
    double empirical_probability = 0.0;
    double analytic_probability = 0.0;
    double confidence_halfwidth = 0.0;
    std::uint64_t ensemble_detections = 0;
    double empirical_ensemble_success = 0.0;
    double analytic_ensemble_success = 0.0;
    /// ‖[|+⟩⟨+|, |B⟩⟨B|]‖_F
    double commutator_norm = 0.0;
};

struct Protocol2Report {
    Protocol2Params params;
    std::vector<TrialRecord> trials;
    /// Detection probability of the untouched width-sigma packet.
    double p_before = 0.0;
    /// Detection probability after collapse to width sigma_bar.
    double p_after = 0.0;
    /// Expected receiver probability for this run (p_after or p_before).
    double analytic_probability = 0.0;
    /// max over trials of |P_after(λ) - P_after(0)|; 0 when the sender is idle.
    double max_lambda_deviation = 0.0;
    std::uint64_t detections = 0;
    double empirical_probability = 0.0;
    double confidence_halfwidth = 0.0;
};

/// 4-sigma binomial half-width for a frequency estimated from n draws.
double binomial_halfwidth(double p, std::uint64_t n);

/// P(at least one of n particles ends at B) = 1 - 2^-n.
double ensemble_success(std::uint64_t n_particles);

/// Trials are split across `workers` threads; results do not depend on it.
Protocol1Report run_protocol1(const Protocol1Params &params, unsigned workers = 1);
Protocol2Report run_protocol2(const Protocol2Params &params, unsigned workers = 1);

struct AnalyticProtocol2 {
    double p_before;
    double p_after;
    double gap;
};

/// Closed-form before/after detection probabilities for a parameter point.
AnalyticProtocol2 analyze_protocol2(const Protocol2Params &params);

struct LambdaPoint {
    double lambda;
    double p_after;
    /// |P_after(λ) - P_after(0)|
    double deviation;
};

/// Evaluates P_after at λ = m/(σ√2) for each multiplier m.
std::vector<LambdaPoint> lambda_scan(const Protocol2Params &params,
                                     const std::vector<double> &multipliers = {-3.0, -1.0, 0.0, 1.0, 3.0});

struct SignallingReport {
    double p_receiver_sender_acts = 0.0;
    double p_receiver_sender_idle = 0.0;
    /// Difference of analytic marginals.
    double gap = 0.0;
    double empirical_gap = 0.0;
    double gap_confidence_halfwidth = 0.0;
    /// Absent for Protocol 2, whose operators are not finite matrices.
    std::optional<double> commutator_frobenius_norm;
};

/// Both reports must share every parameter except `sender_acts`.
SignallingReport signalling_gap(const Protocol1Report &acts, const Protocol1Report &idle);
SignallingReport signalling_gap(const Protocol2Report &acts, const Protocol2Report &idle);

/// Exact P(receiver fires) with no prior measurement.
double receiver_marginal(const StateVector &initial, const Operator &receiver);

/// Exact P(receiver fires) after the sender's projective measurement,
/// summed over the sender's outcome branches.
double receiver_marginal_after(const StateVector &initial, const Operator &sender, const Operator &receiver);

struct AuditRecord {
    double commutator_norm = 0.0;
    /// ‖[A, B]‖_F < tol
    bool premise_holds = false;
    double p_receiver_sender_measured = 0.0;
    double p_receiver_sender_idle = 0.0;
    /// p_receiver_sender_measured - p_receiver_sender_idle
    double marginal_difference = 0.0;
};

AuditRecord commutation_audit(const Operator &sender, const Operator &receiver, const StateVector &initial,
                              double tol = kTolerance);

struct ProjectorPair {
    Operator sender;
    Operator receiver;
    StateVector initial;
};

/// The nonlocal pair (|+⟩⟨+|, |B⟩⟨B|) acting on |A⟩.
ProjectorPair paper_pair();

/// Projectors diagonal in a shared random orthonormal basis of dimension
/// 2..max_dimension, plus a random initial state.
ProjectorPair random_commuting_pair(RandomStream &rng, std::size_t max_dimension = 5);

/// Independent random projectors (ranks 0..dimension, so some pairs commute
/// trivially) plus a random initial state.
ProjectorPair random_projector_pair(RandomStream &rng, std::size_t max_dimension = 5);

}  // namespace qsignal
