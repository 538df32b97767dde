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

#include "qsignal/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "qsignal/errors.hpp"

namespace qsignal {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw Error(ErrorKind::InvalidParameter, what);
    }
}

// Runs body(i) for every trial index. Each index is handled by exactly one
// worker and writes only its own slot, so the outcome is independent of the
// worker count.
template <typename Body>
void for_each_trial(std::uint64_t n, unsigned workers, Body &&body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2 * static_cast<std::uint64_t>(workers)) {
        for (std::uint64_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t begin = w * chunk;
        std::uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([begin, end, &body] {
            for (std::uint64_t i = begin; i < end; ++i) {
                body(i);
            }
        });
    }
}

std::uint64_t count_detections(const std::vector<TrialRecord> &trials) {
    return static_cast<std::uint64_t>(
        std::count_if(trials.begin(), trials.end(), [](const TrialRecord &t) { return t.receiver_detected; }));
}

double frequency(std::uint64_t hits, std::uint64_t n) {
    return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

void validate(const Protocol1Params &params) {
    require(params.n_trials >= 1, "n_trials must be >= 1");
    require(params.n_particles >= 1, "n_particles must be >= 1");
}

void validate(const Protocol2Params &params) {
    require(params.n_trials >= 1, "n_trials must be >= 1");
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
        throw Error(ErrorKind::NonPositiveWidth, "sigma must be positive, got " + std::to_string(params.sigma));
    }
    if (!(params.sigma_bar > params.sigma) || !std::isfinite(params.sigma_bar)) {
        throw Error(ErrorKind::WidthNotIncreased, "sigma_bar (" + std::to_string(params.sigma_bar) +
                                                      ") must exceed sigma (" + std::to_string(params.sigma) + ")");
    }
    require(params.k > 0.0 && std::isfinite(params.k), "k must be positive");
    require(std::isfinite(params.d), "d must be finite");
}

double binomial_halfwidth(double p, std::uint64_t n) {
    return kConfidenceSigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double ensemble_success(std::uint64_t n_particles) {
    require(n_particles >= 1, "n_particles must be >= 1");
    if (n_particles > 1100) {
        return 1.0;
    }
    return 1.0 - std::ldexp(1.0, -static_cast<int>(n_particles));
}

double receiver_marginal(const StateVector &initial, const Operator &receiver) {
    if (!receiver.is_projector()) {
        throw Error(ErrorKind::NotProjector, "receiver operator is not a projector");
    }
    return expectation(receiver, initial);
}

double receiver_marginal_after(const StateVector &initial, const Operator &sender, const Operator &receiver) {
    if (!receiver.is_projector()) {
        throw Error(ErrorKind::NotProjector, "receiver operator is not a projector");
    }
    double total = 0.0;
    for (bool fired : {true, false}) {
        if (auto branch = collapse(initial, sender, fired)) {
            total += branch->probability * expectation(receiver, branch->post_state);
        }
    }
    return total;
}

Protocol1Report run_protocol1(const Protocol1Params &params, unsigned workers) {
    validate(params);
    const StateVector start = state_at_a();
    const Operator sender = projector_onto(state_plus());
    const Operator receiver = projector_onto(state_at_b());

    Protocol1Report report;
    report.params = params;
    report.trials.resize(params.n_trials);

    for_each_trial(params.n_trials, workers, [&](std::uint64_t i) {
        auto rng = RandomStream::for_trial(params.seed, i);
        TrialRecord &record = report.trials[i];
        record.trial_index = i;
        bool any_arrived = false;
        for (std::uint64_t particle = 0; particle < params.n_particles; ++particle) {
            StateVector state = start;
            std::optional<bool> branch;
            if (params.sender_acts) {
                auto m = measure(state, sender, rng);
                branch = m.fired;
                state = std::move(m.post_state);
            }
            double p_detect = expectation(receiver, state);
            bool detected = measure(state, receiver, rng).fired;
            if (particle == 0) {
                record.intermediate_outcome = branch;
                record.receiver_detected = detected;
                record.receiver_probability = p_detect;
            }
            any_arrived = any_arrived || detected;
        }
        record.ensemble_detected = any_arrived;
    });

    report.detections = count_detections(report.trials);
    report.empirical_probability = frequency(report.detections, params.n_trials);
    report.analytic_probability = params.sender_acts ? receiver_marginal_after(start, sender, receiver)
                                                     : receiver_marginal(start, receiver);
    report.confidence_halfwidth = binomial_halfwidth(report.analytic_probability, params.n_trials);
    report.ensemble_detections = static_cast<std::uint64_t>(std::count_if(
        report.trials.begin(), report.trials.end(), [](const TrialRecord &t) { return *t.ensemble_detected; }));
    report.empirical_ensemble_success = frequency(report.ensemble_detections, params.n_trials);
    // Particles are independent; with the sender idle none can ever reach B.
    report.analytic_ensemble_success = params.sender_acts ? ensemble_success(params.n_particles) : 0.0;
    report.commutator_norm = frobenius_norm(commutator(sender, receiver));
    return report;
}

AnalyticProtocol2 analyze_protocol2(const Protocol2Params &params) {
    validate(params);
    const auto initial = position_gaussian(params.sigma, 0.0);
    const DetectionWindow window(params.d, params.k);
    double before = detection_probability(initial, window);
    double after = detection_probability(momentum_collapse(initial, 0.0, params.sigma_bar), window);
    return {before, after, after - before};
}

Protocol2Report run_protocol2(const Protocol2Params &params, unsigned workers) {
    validate(params);
    const auto initial = position_gaussian(params.sigma, 0.0);
    const DetectionWindow window(params.d, params.k);
    const auto analytic = analyze_protocol2(params);

    Protocol2Report report;
    report.params = params;
    report.p_before = analytic.p_before;
    report.p_after = analytic.p_after;
    report.analytic_probability = params.sender_acts ? analytic.p_after : analytic.p_before;
    report.trials.resize(params.n_trials);

    for_each_trial(params.n_trials, workers, [&](std::uint64_t i) {
        auto rng = RandomStream::for_trial(params.seed, i);
        TrialRecord &record = report.trials[i];
        record.trial_index = i;
        double p_detect = analytic.p_before;
        if (params.sender_acts) {
            double lambda = sample_momentum(initial, rng);
            record.lambda = lambda;
            p_detect = detection_probability(momentum_collapse(initial, lambda, params.sigma_bar), window);
        }
        record.receiver_probability = p_detect;
        record.receiver_detected = rng.uniform() < p_detect;
    });

    for (const auto &t : report.trials) {
        if (t.lambda) {
            report.max_lambda_deviation =
                std::max(report.max_lambda_deviation, std::abs(t.receiver_probability - analytic.p_after));
        }
    }
    report.detections = count_detections(report.trials);
    report.empirical_probability = frequency(report.detections, params.n_trials);
    report.confidence_halfwidth = binomial_halfwidth(report.analytic_probability, params.n_trials);
    return report;
}

std::vector<LambdaPoint> lambda_scan(const Protocol2Params &params, const std::vector<double> &multipliers) {
    validate(params);
    const auto initial = position_gaussian(params.sigma, 0.0);
    const DetectionWindow window(params.d, params.k);
    double reference = detection_probability(momentum_collapse(initial, 0.0, params.sigma_bar), window);
    double unit = 1.0 / (params.sigma * std::numbers::sqrt2);

    std::vector<LambdaPoint> points;
    points.reserve(multipliers.size());
    for (double m : multipliers) {
        double lambda = m * unit;
        double p = detection_probability(momentum_collapse(initial, lambda, params.sigma_bar), window);
        points.push_back({lambda, p, std::abs(p - reference)});
    }
    return points;
}

namespace {

template <typename Params>
void require_matching(Params acts, Params idle) {
    acts.sender_acts = idle.sender_acts;
    if (!(acts == idle)) {
        throw Error(ErrorKind::MismatchedReports, "reports differ in parameters other than sender action");
    }
}

template <typename Report>
SignallingReport gap_between(const Report &acts, const Report &idle) {
    SignallingReport out;
    out.p_receiver_sender_acts = acts.analytic_probability;
    out.p_receiver_sender_idle = idle.analytic_probability;
    out.gap = acts.analytic_probability - idle.analytic_probability;
    out.empirical_gap = acts.empirical_probability - idle.empirical_probability;
    double pa = acts.analytic_probability;
    double pb = idle.analytic_probability;
    out.gap_confidence_halfwidth =
        kConfidenceSigmas * std::sqrt(pa * (1.0 - pa) / static_cast<double>(acts.params.n_trials) +
                                      pb * (1.0 - pb) / static_cast<double>(idle.params.n_trials));
    return out;
}

}  // namespace

SignallingReport signalling_gap(const Protocol1Report &acts, const Protocol1Report &idle) {
    require_matching(acts.params, idle.params);
    auto out = gap_between(acts, idle);
    out.commutator_frobenius_norm = frobenius_norm(commutator(projector_onto(state_plus()), projector_onto(state_at_b())));
    return out;
}

SignallingReport signalling_gap(const Protocol2Report &acts, const Protocol2Report &idle) {
    require_matching(acts.params, idle.params);
    return gap_between(acts, idle);
}

AuditRecord commutation_audit(const Operator &sender, const Operator &receiver, const StateVector &initial,
                              double tol) {
    if (sender.dimension() != receiver.dimension() || sender.dimension() != initial.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "audit operands must share one dimension");
    }
    if (!sender.is_projector() || !receiver.is_projector()) {
        throw Error(ErrorKind::NotProjector, "audit operands must be projectors");
    }
    AuditRecord record;
    record.commutator_norm = frobenius_norm(commutator(sender, receiver));
    record.premise_holds = record.commutator_norm < tol;
    record.p_receiver_sender_measured = receiver_marginal_after(initial, sender, receiver);
    record.p_receiver_sender_idle = receiver_marginal(initial, receiver);
    record.marginal_difference = record.p_receiver_sender_measured - record.p_receiver_sender_idle;
    return record;
}

ProjectorPair paper_pair() {
    return {projector_onto(state_plus()), projector_onto(state_at_b()), state_at_a()};
}

namespace {

Eigen::Index random_dimension(RandomStream &rng, std::size_t max_dimension) {
    require(max_dimension >= 2, "max_dimension must be >= 2");
    return 2 + static_cast<Eigen::Index>(rng() % (max_dimension - 1));
}

Eigen::VectorXcd gaussian_vector(RandomStream &rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double re = normal(rng);
        v(i) = Complex(re, normal(rng));
    }
    return v;
}

Eigen::MatrixXcd random_unitary(RandomStream &rng, Eigen::Index n) {
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        g.col(c) = gaussian_vector(rng, n);
    }
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

// Sum of |u_i⟩⟨u_i| over the columns i selected by `keep`.
Operator span_projector(const Eigen::MatrixXcd &basis, const std::vector<bool> &keep) {
    Eigen::Index n = basis.rows();
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        if (keep[static_cast<std::size_t>(c)]) {
            p += basis.col(c) * basis.col(c).adjoint();
        }
    }
    // Symmetrize away rounding so the Hermiticity check is exact.
    return Operator(0.5 * (p + p.adjoint()));
}

std::vector<bool> random_subset(RandomStream &rng, Eigen::Index n) {
    std::vector<bool> keep(static_cast<std::size_t>(n));
    for (auto &&k : keep) {
        k = (rng() & 1u) != 0;
    }
    return keep;
}

std::vector<bool> random_rank_subset(RandomStream &rng, Eigen::Index n) {
    auto rank = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n + 1));
    std::vector<bool> keep(static_cast<std::size_t>(n), false);
    std::fill(keep.begin(), keep.begin() + rank, true);
    return keep;
}

}  // namespace

ProjectorPair random_commuting_pair(RandomStream &rng, std::size_t max_dimension) {
    Eigen::Index n = random_dimension(rng, max_dimension);
    Eigen::MatrixXcd basis = random_unitary(rng, n);
    Operator sender = span_projector(basis, random_subset(rng, n));
    Operator receiver = span_projector(basis, random_subset(rng, n));
    return {std::move(sender), std::move(receiver), make_state(gaussian_vector(rng, n))};
}

ProjectorPair random_projector_pair(RandomStream &rng, std::size_t max_dimension) {
    Eigen::Index n = random_dimension(rng, max_dimension);
    Operator sender = span_projector(random_unitary(rng, n), random_rank_subset(rng, n));
    Operator receiver = span_projector(random_unitary(rng, n), random_rank_subset(rng, n));
    return {std::move(sender), std::move(receiver), make_state(gaussian_vector(rng, n))};
}

}  // namespace qsignal
