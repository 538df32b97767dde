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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qsignal/hilbert.hpp"
#include "qsignal/protocols.hpp"
#include "qsignal/wavepacket.hpp"

using namespace qsignal;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    const char *name;
    double time_limit_s;  // 0 = no limit
    std::function<Outcome()> check;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Outcome teleportation_probability() {
    Protocol1Params acts;
    acts.n_trials = 100000;
    acts.seed = 42;
    auto report = run_protocol1(acts);
    Protocol1Params idle = acts;
    idle.sender_acts = false;
    auto idle_report = run_protocol1(idle);
    const double band = 0.0063;
    bool pass = std::abs(report.empirical_probability - 0.5) <= band &&
                std::abs(report.analytic_probability - 0.5) <= 1e-15 && idle_report.detections == 0;
    return {pass, fmt("empirical %.6f (|d|<=%.4f), analytic-0.5 = %.1e, idle detections %llu",
                      report.empirical_probability, band, report.analytic_probability - 0.5,
                      static_cast<unsigned long long>(idle_report.detections))};
}

Outcome commutator_identity() {
    auto c = commutator(projector_onto(state_plus()), projector_onto(state_at_b()));
    auto expected = Complex(0.5) * (outer(state_at_a(), state_at_b()) - outer(state_at_b(), state_at_a()));
    double distance = frobenius_distance(c, expected);
    return {distance < 1e-12, fmt("||[P+,PB] - 1/2(|A><B|-|B><A|)||_F = %.3e", distance)};
}

Outcome ensemble_amplification() {
    // Oracle: sum the 2^n equally likely (weight 2^-n) joint outcomes with at least one arrival.
    bool all_equal = true;
    for (unsigned n = 1; n <= 12; ++n) {
        double oracle = 0.0;
        for (std::uint64_t leaf = 1; leaf < (std::uint64_t{1} << n); ++leaf) {
            oracle += std::ldexp(1.0, -static_cast<int>(n));
        }
        all_equal = all_equal && ensemble_success(n) == oracle;
    }
    bool pass = all_equal && ensemble_success(10) == 0.9990234375;
    return {pass, fmt("n=1..12 exact match %s, n=10 -> %.10f", all_equal ? "yes" : "no", ensemble_success(10))};
}

Outcome before_after_detection() {
    Protocol2Params params;  // sigma=1, sigma_bar=100, d=100, k=1
    auto analytic = analyze_protocol2(params);
    double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double x) { return std::exp(-x * x / 1e4) / std::sqrt(std::numbers::pi * 1e4); }, 99.0, 101.0, 20,
        1e-15);
    bool pass = analytic.p_before < 1e-12 && std::abs(analytic.p_after - oracle) < 1e-9;
    return {pass, fmt("P_before = %.3e, P_after = %.12f, quadrature = %.12f, |diff| = %.2e", analytic.p_before,
                      analytic.p_after, oracle, std::abs(analytic.p_after - oracle))};
}

Outcome lambda_independence() {
    double worst = 0.0;
    for (const auto &p : lambda_scan(Protocol2Params{})) {
        worst = std::max(worst, p.deviation);
    }
    return {worst < 1e-12, fmt("max |P_after(lambda) - P_after(0)| = %.3e", worst)};
}

Outcome fourier_cross_check() {
    auto packet = position_gaussian(1.0, 0.0);
    auto grid = to_grid(packet, -8.0, 8.0, 4096);
    auto spectrum = grid_fourier(grid);
    double l2 = l2_distance(spectrum, analytic_fourier(packet));
    double parseval = std::abs(spectrum.norm() - grid.norm());
    return {l2 < 1e-8 && parseval < 1e-12, fmt("L2 error %.3e, Parseval drift %.3e", l2, parseval)};
}

Outcome uncertainty_saturation() {
    double worst = 0.0;
    for (double sigma : {0.1, 1.0, 100.0}) {
        auto p = position_gaussian(sigma, 0.0);
        worst = std::max(worst, std::abs(2.0 * std::sqrt(variance_position(p) * variance_momentum(p)) - 1.0));
    }
    return {worst < 1e-10, fmt("max |2 dx dp - 1| = %.3e", worst)};
}

Outcome no_signalling_restoration() {
    double worst = 0.0;
    bool all_commute = true;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto rng = RandomStream::for_trial(8, i);
        auto pair = random_commuting_pair(rng);
        auto record = commutation_audit(pair.sender, pair.receiver, pair.initial);
        all_commute = all_commute && record.premise_holds;
        worst = std::max(worst, std::abs(record.marginal_difference));
    }
    auto paper = paper_pair();
    auto record = commutation_audit(paper.sender, paper.receiver, paper.initial);
    bool pass = all_commute && worst < 1e-12 && !record.premise_holds &&
                std::abs(record.marginal_difference - 0.5) < 1e-15;
    return {pass, fmt("commuting pairs: max |diff| = %.3e; paper pair: diff = %.15f, ||[A,B]|| = %.6f", worst,
                      record.marginal_difference, record.commutator_norm)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1 teleportation probability 1/2", 5.0, teleportation_probability},
        {"AC2 commutator identity", 0.0, commutator_identity},
        {"AC3 ensemble amplification", 0.0, ensemble_amplification},
        {"AC4 detection before/after momentum measurement", 1.0, before_after_detection},
        {"AC5 lambda independence", 0.0, lambda_independence},
        {"AC6 Fourier cross-check", 1.0, fourier_cross_check},
        {"AC7 uncertainty saturation", 0.0, uncertainty_saturation},
        {"AC8 no-signalling restoration", 2.0, no_signalling_restoration},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, ""};
        try {
            outcome = c.check();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.time_limit_s == 0.0 || elapsed < c.time_limit_s;
        bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("[%s] %-50s %s (%.3f s%s)\n", pass ? "PASS" : "FAIL", c.name, outcome.detail.c_str(), elapsed,
                    in_time ? "" : ", over time limit");
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
