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

#include "qsignal/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gtest/gtest.h"

#include "qsignal/errors.hpp"

using namespace qsignal;
using std::numbers::pi;

namespace {

// Independent oracle: adaptive Gauss-Kronrod on the closed-form density.
template <typename F>
double quad(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

// Fourier integral of the packet evaluated numerically at one momentum.
Complex numeric_fourier(const GaussianPacket &packet, double p) {
    double lo = packet.center() - 14.0 * packet.width();
    double hi = packet.center() + 14.0 * packet.width();
    double re = quad([&](double x) { return (packet.amplitude(x) * std::polar(1.0, -p * x)).real(); }, lo, hi);
    double im = quad([&](double x) { return (packet.amplitude(x) * std::polar(1.0, -p * x)).imag(); }, lo, hi);
    return Complex(re, im) / std::sqrt(2.0 * pi);
}

double quad_window(const GaussianPacket &packet, const DetectionWindow &w) {
    return quad([&](double x) { return packet.density(x); }, w.lower(), w.upper());
}

template <typename F>
ErrorKind kind_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected qsignal::Error";
    return ErrorKind::InvalidParameter;
}

// 0.5*(erf(1.01) - erf(0.99)), evaluated to 40 digits with mpmath and
// confirmed by mpmath.quad of the density over [99, 101].
constexpr double kFarWindowProbability = 0.004151213336453447;

}  // namespace

TEST(position_gaussian, density_and_normalization) {
    auto g = position_gaussian(1.0, 0.0);
    EXPECT_NEAR(g.density(0.0), 0.5641895835477563, 1e-15);
    EXPECT_NEAR(std::norm(g.amplitude(0.0)), g.density(0.0), 1e-15);
    double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return g.density(x); }, -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(), 20, 1e-14);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(position_gaussian, momentum_does_not_change_density) {
    auto still = position_gaussian(100.0, 0.0);
    auto moving = position_gaussian(100.0, 3.0);
    for (double x = -500.0; x <= 500.0; x += 12.5) {
        EXPECT_EQ(still.density(x), moving.density(x));
        EXPECT_NEAR(std::norm(moving.amplitude(x)), still.density(x), 1e-15);
    }
}

TEST(position_gaussian, rejects_non_positive_width) {
    EXPECT_EQ(kind_of([] { position_gaussian(0.0, 0.0); }), ErrorKind::NonPositiveWidth);
    EXPECT_EQ(kind_of([] { position_gaussian(-1.0, 0.0); }), ErrorKind::NonPositiveWidth);
}

TEST(analytic_fourier, unit_width_momentum_density) {
    auto m = analytic_fourier(position_gaussian(1.0, 0.0));
    EXPECT_EQ(m.representation(), Representation::Momentum);
    EXPECT_NEAR(m.density(0.0), 1.0 / std::sqrt(pi), 1e-15);
    // ⁴√(σ²/π) e^(-σ²p²/2) with σ = 1.
    for (double p : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        EXPECT_NEAR(std::abs(m.amplitude(p) - std::pow(1.0 / pi, 0.25) * std::exp(-p * p / 2.0)), 0.0, 1e-15);
    }
}

TEST(analytic_fourier, width_two_maps_to_half) {
    auto m = analytic_fourier(position_gaussian(2.0, 0.0));
    EXPECT_DOUBLE_EQ(m.width(), 0.5);
    // Cross-check against the grid transform.
    auto spectrum = grid_fourier(to_grid(position_gaussian(2.0, 0.0)));
    EXPECT_LT(l2_distance(spectrum, m), 1e-8);
}

TEST(analytic_fourier, matches_numeric_fourier_integral) {
    for (auto packet : {position_gaussian(1.0, 0.0), position_gaussian(0.7, 2.5, 1.5),
                        position_gaussian(3.0, -1.0, -4.0)}) {
        auto m = analytic_fourier(packet);
        for (double p : {-3.0, -1.0, 0.0, 0.4, 2.0, 3.5}) {
            EXPECT_NEAR(std::abs(m.amplitude(p) - numeric_fourier(packet, p)), 0.0, 1e-10)
                << "width " << packet.width() << " p " << p;
        }
    }
}

TEST(analytic_fourier, twice_is_parity) {
    auto g = position_gaussian(1.3, 0.8, 0.5);
    auto twice = analytic_fourier(analytic_fourier(g));
    EXPECT_EQ(twice.representation(), Representation::Position);
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        EXPECT_NEAR(std::abs(twice.amplitude(x) - g.amplitude(-x)), 0.0, 1e-14);
    }
    auto even = position_gaussian(1.0, 0.0);
    auto even_twice = analytic_fourier(analytic_fourier(even));
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        EXPECT_NEAR(std::abs(even_twice.amplitude(x) - even.amplitude(x)), 0.0, 1e-15);
    }
}

TEST(detection_probability, narrow_packet_is_invisible_far_away) {
    EXPECT_LT(detection_probability(position_gaussian(1.0, 0.0), DetectionWindow(100.0, 1.0)), 1e-12);
}

TEST(detection_probability, spread_packet_matches_quadrature) {
    DetectionWindow w(100.0, 1.0);
    auto wide = position_gaussian(100.0, 0.0);
    double p = detection_probability(wide, w);
    EXPECT_NEAR(p, 0.004151, 1e-4);
    EXPECT_NEAR(p, quad_window(wide, w), 1e-9);
    EXPECT_NEAR(p, kFarWindowProbability, 1e-15);
}

TEST(detection_probability, independent_of_momentum) {
    DetectionWindow w(100.0, 1.0);
    double base = detection_probability(position_gaussian(100.0, 0.0), w);
    EXPECT_NEAR(detection_probability(position_gaussian(100.0, 7.0), w), base, 1e-12);
    double unit = 1.0 / std::numbers::sqrt2;
    for (double m : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        EXPECT_NEAR(detection_probability(position_gaussian(100.0, m * unit), w), base, 1e-12);
    }
}

TEST(detection_probability, requires_position_representation) {
    auto m = analytic_fourier(position_gaussian(1.0, 0.0));
    EXPECT_EQ(kind_of([&] { detection_probability(m, DetectionWindow(0.0, 1.0)); }),
              ErrorKind::WrongRepresentation);
    EXPECT_EQ(kind_of([] { DetectionWindow(0.0, 0.0); }), ErrorKind::InvalidParameter);
}

TEST(detection_probability, closed_form_agrees_with_quadrature_on_random_windows) {
    RandomStream rng(314);
    for (int i = 0; i < 50; ++i) {
        double sigma_bar = 0.5 + 200.0 * rng.uniform();
        double d = sigma_bar * (12.0 * rng.uniform() - 6.0);
        double k = sigma_bar * (0.01 + 2.0 * rng.uniform());
        auto packet = position_gaussian(sigma_bar, 0.0);
        DetectionWindow w(d, k);
        EXPECT_NEAR(detection_probability(packet, w), quad_window(packet, w), 1e-9)
            << "sigma_bar " << sigma_bar << " d " << d << " k " << k;
    }
}

TEST(detection_probability, increases_with_spread_below_distance) {
    DetectionWindow w(100.0, 1.0);
    // Below σ̄ ≈ 4 the probability is under the smallest double and reads 0.
    double previous = 0.0;
    for (double sigma_bar = 5.0; sigma_bar < 100.0; sigma_bar += 0.5) {
        double p = detection_probability(position_gaussian(sigma_bar, 0.0), w);
        EXPECT_GT(p, previous) << "sigma_bar " << sigma_bar;
        previous = p;
    }
}

TEST(sample_momentum, moments_follow_born_density) {
    auto g = position_gaussian(1.0, 0.0);
    RandomStream rng(2718);
    const int n = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double p = sample_momentum(g, rng);
        sum += p;
        sum_sq += p * p;
    }
    double mean = sum / n;
    double sd = std::sqrt(sum_sq / n - mean * mean);
    EXPECT_NEAR(mean, 0.0, 0.003);
    EXPECT_NEAR(sd, 1.0 / std::sqrt(2.0), 0.002);
}

TEST(sample_momentum, wide_packet_draws_are_tiny) {
    auto g = position_gaussian(1e6, 0.0);
    RandomStream rng(3);
    for (int i = 0; i < 10000; ++i) {
        EXPECT_LT(std::abs(sample_momentum(g, rng)), 1e-5);
    }
}

TEST(momentum_collapse, produces_wide_packet_with_measured_momentum) {
    auto g = position_gaussian(1.0, 0.0);
    auto c0 = momentum_collapse(g, 0.0, 100.0);
    auto c5 = momentum_collapse(g, 5.0, 100.0);
    EXPECT_EQ(c0.width(), 100.0);
    EXPECT_EQ(c5.momentum_center(), 5.0);
    for (double x : {-300.0, -10.0, 0.0, 42.0, 250.0}) {
        double expected = std::exp(-x * x / 1e4) / std::sqrt(pi * 1e4);
        EXPECT_NEAR(c0.density(x), expected, 1e-17);
        EXPECT_EQ(c5.density(x), c0.density(x));
    }
    // Its transform is the narrow momentum Gaussian centered at λ with width 1/σ̄.
    auto m = analytic_fourier(c5);
    EXPECT_DOUBLE_EQ(m.width(), 0.01);
    EXPECT_EQ(m.center(), 5.0);
}

TEST(momentum_collapse, requires_wider_packet) {
    auto g = position_gaussian(1.0, 0.0);
    EXPECT_EQ(kind_of([&] { momentum_collapse(g, 0.0, 0.5); }), ErrorKind::WidthNotIncreased);
    EXPECT_EQ(kind_of([&] { momentum_collapse(g, 0.0, 1.0); }), ErrorKind::WidthNotIncreased);
    EXPECT_EQ(kind_of([&] { momentum_collapse(g, 0.0, -2.0); }), ErrorKind::NonPositiveWidth);
}

TEST(variance, minimum_uncertainty) {
    auto g = position_gaussian(1.0, 0.0);
    EXPECT_NEAR(std::sqrt(variance_position(g)), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::sqrt(variance_momentum(g)), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::sqrt(variance_position(position_gaussian(100.0, 0.0))), 100.0 / std::sqrt(2.0), 1e-12);
    for (double sigma : {0.01, 0.1, 1.0, 7.5, 100.0, 1e4}) {
        auto p = position_gaussian(sigma, 0.3);
        EXPECT_NEAR(2.0 * std::sqrt(variance_position(p) * variance_momentum(p)), 1.0, 1e-10);
        auto m = analytic_fourier(p);
        EXPECT_NEAR(variance_position(m), variance_position(p), 1e-12 * variance_position(p));
    }
}

TEST(variance, matches_numeric_second_moment) {
    auto g = position_gaussian(2.5, 0.0);
    double second = quad([&](double x) { return x * x * g.density(x); }, -40.0, 40.0);
    EXPECT_NEAR(variance_position(g), second, 1e-12);
}

TEST(to_grid, normalized_and_accurate) {
    auto g = to_grid(position_gaussian(1.0, 0.0), -10.0, 10.0, 4096);
    EXPECT_NEAR(g.norm(), 1.0, 1e-10);
    EXPECT_NEAR(std::norm(g.interpolate(0.0)), 1.0 / std::sqrt(pi), 1e-10);
    EXPECT_DOUBLE_EQ(g.spacing(), 20.0 / 4095.0);
}

TEST(to_grid, validates_extent_and_size) {
    auto g = position_gaussian(1.0, 0.0);
    EXPECT_EQ(kind_of([&] { to_grid(g, -2.0, 2.0, 4096); }), ErrorKind::ExtentTooSmall);
    EXPECT_EQ(kind_of([&] { to_grid(g, -10.0, 10.0, 8); }), ErrorKind::BadGrid);
    EXPECT_EQ(kind_of([&] { to_grid(g, 10.0, -10.0, 64); }), ErrorKind::BadGrid);
    EXPECT_NO_THROW(to_grid(g, -8.0, 8.0, 64));
}

TEST(grid_fourier, matches_analytic_momentum_packet) {
    for (double sigma : {0.5, 1.0, 2.0, 10.0}) {
        for (double lambda : {-3.0, 0.0, 3.0}) {
            auto packet = position_gaussian(sigma, lambda);
            auto grid = to_grid(packet, -8.0 * sigma, 8.0 * sigma, 4096);
            auto spectrum = grid_fourier(grid);
            EXPECT_EQ(spectrum.representation(), Representation::Momentum);
            EXPECT_LT(l2_distance(spectrum, analytic_fourier(packet)), 1e-8)
                << "sigma " << sigma << " lambda " << lambda;
            EXPECT_NEAR(spectrum.norm(), grid.norm(), 1e-12);
        }
    }
}

TEST(grid_fourier, second_moment_gives_momentum_variance) {
    auto spectrum = grid_fourier(to_grid(position_gaussian(2.0, 0.0)));
    double second = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        double p = spectrum.coordinate(i);
        second += p * p * std::norm(spectrum.samples()[i]);
    }
    second *= spectrum.spacing();
    EXPECT_NEAR(second, 0.125, 1e-10);
}

TEST(grid_fourier, requires_power_of_two) {
    auto g = to_grid(position_gaussian(1.0, 0.0), -10.0, 10.0, 1000);
    EXPECT_EQ(kind_of([&] { grid_fourier(g); }), ErrorKind::BadGrid);
}

TEST(grid_window_probability, matches_closed_form) {
    auto wide = position_gaussian(100.0, 0.0);
    auto grid = to_grid(wide);
    DetectionWindow w(100.0, 1.0);
    EXPECT_NEAR(grid_window_probability(grid, w), detection_probability(wide, w), 1e-6);

    // Trapezoid error is about h²/12·|f'(b) - f'(a)| ≈ 2e-6 here.
    auto unit = to_grid(position_gaussian(1.0, 0.0), -10.0, 10.0, 4096);
    DetectionWindow centered(0.3, 0.77);
    EXPECT_NEAR(grid_window_probability(unit, centered), detection_probability(position_gaussian(1.0, 0.0), centered),
                1e-5);
}

TEST(grid_window_probability, clips_to_grid) {
    auto packet = position_gaussian(1.0, 0.0);
    auto grid = to_grid(packet, -8.0, 8.0, 4096);
    // [5, 11] is clipped to [5, 8].
    EXPECT_NEAR(grid_window_probability(grid, DetectionWindow(8.0, 3.0)),
                detection_probability(packet, DetectionWindow(6.5, 1.5)), 1e-9);
    EXPECT_NEAR(grid_window_probability(grid, DetectionWindow(0.0, 100.0)), 1.0, 1e-10);
    EXPECT_EQ(kind_of([&] { grid_window_probability(grid, DetectionWindow(20.0, 1.0)); }),
              ErrorKind::WindowOutsideGrid);
    EXPECT_EQ(kind_of([&] { grid_window_probability(grid_fourier(grid), DetectionWindow(0.0, 1.0)); }),
              ErrorKind::WrongRepresentation);
}
