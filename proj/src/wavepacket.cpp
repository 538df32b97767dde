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

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include <fftw3.h>

#include "qsignal/errors.hpp"

namespace qsignal {

using std::numbers::pi;

GaussianPacket::GaussianPacket(double width, double center, double phase_slope, Representation representation,
                               double global_phase)
    : width_(width),
      center_(center),
      phase_slope_(phase_slope),
      global_phase_(global_phase),
      representation_(representation) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw Error(ErrorKind::NonPositiveWidth, "packet width must be positive and finite, got " + std::to_string(width));
    }
}

double GaussianPacket::momentum_center() const noexcept {
    return representation_ == Representation::Position ? phase_slope_ : center_;
}

double GaussianPacket::position_center() const noexcept {
    return representation_ == Representation::Position ? center_ : -phase_slope_;
}

Complex GaussianPacket::amplitude(double q) const {
    double u = (q - center_) / width_;
    double magnitude = std::exp(-0.5 * u * u) / std::pow(pi * width_ * width_, 0.25);
    return std::polar(magnitude, global_phase_ + phase_slope_ * q);
}

double GaussianPacket::density(double q) const {
    double u = (q - center_) / width_;
    return std::exp(-u * u) / (std::sqrt(pi) * width_);
}

DetectionWindow::DetectionWindow(double d, double k) : d_(d), k_(k) {
    if (!(k > 0.0) || !std::isfinite(k) || !std::isfinite(d)) {
        throw Error(ErrorKind::InvalidParameter, "detector half-width k must be positive, got " + std::to_string(k));
    }
}

GaussianPacket position_gaussian(double sigma, double lambda, double center) {
    return GaussianPacket(sigma, center, lambda, Representation::Position);
}

GaussianPacket analytic_fourier(const GaussianPacket &packet) {
    // F[e^(iφ) g_w(q - q₀) e^(iκq)](s) = e^(i(φ + κq₀)) g_{1/w}(s - κ) e^(-i q₀ s)
    auto flipped = packet.representation() == Representation::Position ? Representation::Momentum
                                                                         : Representation::Position;
    return GaussianPacket(1.0 / packet.width(), packet.phase_slope(), -packet.center(), flipped,
                          packet.global_phase() + packet.phase_slope() * packet.center());
}

namespace {

void require_position(const GaussianPacket &packet, const char *what) {
    if (packet.representation() != Representation::Position) {
        throw Error(ErrorKind::WrongRepresentation, std::string(what) + " requires a position-space packet");
    }
}

// ½[erf(b) - erf(a)] without cancellation in either tail.
double gaussian_mass(double a, double b) {
    if (a >= 0.0) {
        return 0.5 * (std::erfc(a) - std::erfc(b));
    }
    if (b <= 0.0) {
        return 0.5 * (std::erfc(-b) - std::erfc(-a));
    }
    return 0.5 * (std::erf(b) - std::erf(a));
}

}  // namespace

double detection_probability(const GaussianPacket &packet, const DetectionWindow &window) {
    require_position(packet, "detection_probability");
    double a = (window.lower() - packet.center()) / packet.width();
    double b = (window.upper() - packet.center()) / packet.width();
    return std::clamp(gaussian_mass(a, b), 0.0, 1.0);
}

double sample_momentum(const GaussianPacket &packet, RandomStream &rng) {
    require_position(packet, "sample_momentum");
    std::normal_distribution<double> born(packet.momentum_center(), 1.0 / (packet.width() * std::numbers::sqrt2));
    return born(rng);
}

GaussianPacket momentum_collapse(const GaussianPacket &packet, double lambda, double sigma_bar) {
    require_position(packet, "momentum_collapse");
    if (!(sigma_bar > 0.0)) {
        throw Error(ErrorKind::NonPositiveWidth, "sigma_bar must be positive, got " + std::to_string(sigma_bar));
    }
    if (!(sigma_bar > packet.width())) {
        throw Error(ErrorKind::WidthNotIncreased, "sigma_bar (" + std::to_string(sigma_bar) +
                                                      ") must exceed the pre-measurement width (" +
                                                      std::to_string(packet.width()) + ")");
    }
    return position_gaussian(sigma_bar, lambda, packet.center());
}

double variance_position(const GaussianPacket &packet) {
    double w = packet.width();
    return packet.representation() == Representation::Position ? 0.5 * w * w : 0.5 / (w * w);
}

double variance_momentum(const GaussianPacket &packet) {
    double w = packet.width();
    return packet.representation() == Representation::Momentum ? 0.5 * w * w : 0.5 / (w * w);
}

GridWavefunction::GridWavefunction(std::vector<Complex> samples, double q_min, double q_max,
                                   Representation representation)
    : samples_(std::move(samples)), q_min_(q_min), q_max_(q_max), representation_(representation) {
    if (samples_.size() < 2 || !(q_max > q_min)) {
        throw Error(ErrorKind::BadGrid, "grid needs at least 2 samples and max > min");
    }
    spacing_ = (q_max_ - q_min_) / static_cast<double>(samples_.size() - 1);
}

double GridWavefunction::norm() const {
    double sum = 0.0;
    for (const auto &v : samples_) {
        sum += std::norm(v);
    }
    sum -= 0.5 * (std::norm(samples_.front()) + std::norm(samples_.back()));
    return sum * spacing_;
}

Complex GridWavefunction::interpolate(double q) const {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        double t = (q - coordinate(i)) / spacing_;
        double kernel = std::abs(t) < 1e-14 ? 1.0 : std::sin(pi * t) / (pi * t);
        sum += samples_[i] * kernel;
    }
    return sum;
}

GridWavefunction to_grid(const GaussianPacket &packet, double q_min, double q_max, std::size_t n) {
    if (n < kMinGridPoints || !(q_max > q_min)) {
        throw Error(ErrorKind::BadGrid, "grid needs n >= 16 and max > min");
    }
    // Relative slack so an extent of exactly 8 widths is accepted.
    double reach = kMinExtentWidths * packet.width() * (1.0 - 1e-12);
    if (packet.center() - reach < q_min || packet.center() + reach > q_max) {
        throw Error(ErrorKind::ExtentTooSmall, "grid must cover 8 widths on each side of the packet center");
    }
    double h = (q_max - q_min) / static_cast<double>(n - 1);
    std::vector<Complex> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples[i] = packet.amplitude(q_min + static_cast<double>(i) * h);
    }
    GridWavefunction raw(std::move(samples), q_min, q_max, packet.representation());
    double scale = 1.0 / std::sqrt(raw.norm());
    std::vector<Complex> normalized = raw.samples();
    for (auto &v : normalized) {
        v *= scale;
    }
    return GridWavefunction(std::move(normalized), q_min, q_max, packet.representation());
}

GridWavefunction to_grid(const GaussianPacket &packet, std::size_t n) {
    double half = kMinExtentWidths * packet.width();
    return to_grid(packet, packet.center() - half, packet.center() + half, n);
}

namespace {

// FFTW's planner is not re-entrant.
std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

GridWavefunction grid_fourier(const GridWavefunction &grid) {
    const std::size_t n = grid.size();
    if (!std::has_single_bit(n)) {
        throw Error(ErrorKind::BadGrid, "grid_fourier needs a power-of-two length, got " + std::to_string(n));
    }
    const double h = grid.spacing();
    const double dp = 2.0 * pi / (static_cast<double>(n) * h);
    const double half = static_cast<double>(n / 2);

    // Shifting the output to p_m = (m - n/2)dp multiplies input sample j by (-1)^j.
    std::vector<Complex> buffer(n);
    for (std::size_t j = 0; j < n; ++j) {
        buffer[j] = (j % 2 == 0) ? grid.samples()[j] : -grid.samples()[j];
    }
    auto *data = reinterpret_cast<fftw_complex *>(buffer.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    const double scale = h / std::sqrt(2.0 * pi);
    for (std::size_t m = 0; m < n; ++m) {
        double p = (static_cast<double>(m) - half) * dp;
        buffer[m] *= scale * std::polar(1.0, -p * grid.min());
    }
    auto flipped = grid.representation() == Representation::Position ? Representation::Momentum
                                                                       : Representation::Position;
    return GridWavefunction(std::move(buffer), -half * dp, (half - 1.0) * dp, flipped);
}

double grid_window_probability(const GridWavefunction &grid, const DetectionWindow &window) {
    if (grid.representation() != Representation::Position) {
        throw Error(ErrorKind::WrongRepresentation, "grid_window_probability requires a position-space grid");
    }
    double a = std::max(window.lower(), grid.min());
    double b = std::min(window.upper(), grid.max());
    if (a > b) {
        throw Error(ErrorKind::WindowOutsideGrid, "detection window does not intersect the grid");
    }
    const auto &s = grid.samples();
    const double h = grid.spacing();
    const std::size_t last = s.size() - 1;
    auto density_at = [&](double q) {
        double t = (q - grid.min()) / h;
        auto i = std::min(static_cast<std::size_t>(std::floor(t)), last - 1);
        double frac = t - static_cast<double>(i);
        return (1.0 - frac) * std::norm(s[i]) + frac * std::norm(s[i + 1]);
    };

    // First node at or after a, last node at or before b.
    auto first = static_cast<std::size_t>(std::ceil((a - grid.min()) / h));
    auto stop = std::min(static_cast<std::size_t>(std::floor((b - grid.min()) / h)), last);
    double fa = density_at(a);
    double fb = density_at(b);
    if (first > stop) {
        return 0.5 * (fa + fb) * (b - a);
    }
    double total = 0.5 * (fa + std::norm(s[first])) * (grid.coordinate(first) - a);
    for (std::size_t i = first; i < stop; ++i) {
        total += 0.5 * (std::norm(s[i]) + std::norm(s[i + 1])) * h;
    }
    total += 0.5 * (std::norm(s[stop]) + fb) * (b - grid.coordinate(stop));
    return total;
}

double l2_distance(const GridWavefunction &grid, const GaussianPacket &packet) {
    double sum = 0.0;
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum += w * std::norm(grid.samples()[i] - packet.amplitude(grid.coordinate(i)));
    }
    return std::sqrt(sum * grid.spacing());
}

}  // namespace qsignal
