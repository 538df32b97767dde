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
#include <vector>

#include "qsignal/random_stream.hpp"

// Gaussian wavepackets on a line, ħ = 1. Fourier convention throughout:
//   ψ̂(p) = (2π)^(-1/2) ∫ ψ(x) e^(-ipx) dx.

namespace qsignal {

using Complex = std::complex<double>;

enum class Representation { Position, Momentum };

/// ψ(q) = e^(iφ) (π w²)^(-1/4) exp(-(q - q₀)² / 2w²) exp(i κ q), where q is x
/// in the position representation and p in the momentum representation.
///
/// In the position representation κ is the momentum center λ; in the momentum
/// representation q₀ is λ and κ is minus the position center.
class GaussianPacket {
public:
    GaussianPacket(double width, double center, double phase_slope, Representation representation,
                   double global_phase = 0.0);

    double width() const noexcept {
        return width_;
    }
    /// Location of the peak in this packet's own coordinate.
    double center() const noexcept {
        return center_;
    }
    double phase_slope() const noexcept {
        return phase_slope_;
    }
    double global_phase() const noexcept {
        return global_phase_;
    }
    Representation representation() const noexcept {
        return representation_;
    }

    double momentum_center() const noexcept;
    double position_center() const noexcept;

    Complex amplitude(double q) const;
    double density(double q) const;

private:
    double width_;
    double center_;
    double phase_slope_;
    double global_phase_;
    Representation representation_;
};

/// Receiver's detector: the interval [d - k, d + k].
class DetectionWindow {
public:
    DetectionWindow(double d, double k);

    double d() const noexcept {
        return d_;
    }
    double k() const noexcept {
        return k_;
    }
    double lower() const noexcept {
        return d_ - k_;
    }
    double upper() const noexcept {
        return d_ + k_;
    }

private:
    double d_;
    double k_;
};

/// Position-space packet of width `sigma` carrying momentum `lambda`.
GaussianPacket position_gaussian(double sigma, double lambda, double center = 0.0);

/// Exact unitary Fourier transform. Applying it twice gives ψ(-x).
GaussianPacket analytic_fourier(const GaussianPacket &packet);

/// ∫_{d-k}^{d+k} |ψ(x)|² dx in closed form (erf/erfc). Independent of the
/// packet's momentum.
double detection_probability(const GaussianPacket &packet, const DetectionWindow &window);

/// Draws an outcome of an ideal momentum measurement: normal with mean λ and
/// standard deviation 1/(σ√2).
double sample_momentum(const GaussianPacket &packet, RandomStream &rng);

/// Post-measurement packet after a momentum measurement that returned `lambda`
/// with momentum resolution 1/sigma_bar. Requires sigma_bar > packet width.
GaussianPacket momentum_collapse(const GaussianPacket &packet, double lambda, double sigma_bar);

double variance_position(const GaussianPacket &packet);
double variance_momentum(const GaussianPacket &packet);

inline constexpr double kMinExtentWidths = 8.0;
inline constexpr std::size_t kMinGridPoints = 16;
inline constexpr std::size_t kDefaultGridPoints = 4096;

/// Uniform samples including both end points, so spacing = extent / (n - 1).
class GridWavefunction {
public:
    GridWavefunction(std::vector<Complex> samples, double q_min, double q_max, Representation representation);

    const std::vector<Complex> &samples() const noexcept {
        return samples_;
    }
    std::size_t size() const noexcept {
        return samples_.size();
    }
    double min() const noexcept {
        return q_min_;
    }
    double max() const noexcept {
        return q_max_;
    }
    double spacing() const noexcept {
        return spacing_;
    }
    Representation representation() const noexcept {
        return representation_;
    }
    double coordinate(std::size_t i) const noexcept {
        return q_min_ + static_cast<double>(i) * spacing_;
    }

    /// Trapezoid-rule ∫|ψ|².
    double norm() const;

    /// Band-limited (Whittaker-Shannon) reconstruction of ψ at an arbitrary
    /// coordinate. Accurate when the samples decay to ~0 at both ends.
    Complex interpolate(double q) const;

private:
    std::vector<Complex> samples_;
    double q_min_;
    double q_max_;
    double spacing_;
    Representation representation_;
};

/// Samples the packet on [q_min, q_max] with n points and renormalizes by the
/// trapezoid rule. The extent must cover kMinExtentWidths widths on each side
/// of the center.
GridWavefunction to_grid(const GaussianPacket &packet, double q_min, double q_max,
                         std::size_t n = kDefaultGridPoints);

/// Grid spanning ±kMinExtentWidths widths around the packet center.
GridWavefunction to_grid(const GaussianPacket &packet, std::size_t n = kDefaultGridPoints);

/// Discrete approximation of the unitary continuous transform. Output samples
/// sit at p_m = (m - n/2)·2π/(n h). Requires n to be a power of two.
GridWavefunction grid_fourier(const GridWavefunction &grid);

/// Trapezoid ∫|ψ|² over the window clipped to the grid.
double grid_window_probability(const GridWavefunction &grid, const DetectionWindow &window);

/// Trapezoid L² distance between grid samples and the packet evaluated at the
/// grid coordinates.
double l2_distance(const GridWavefunction &grid, const GaussianPacket &packet);

}  // namespace qsignal
