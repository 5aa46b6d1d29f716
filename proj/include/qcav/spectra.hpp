#pragma once

// Closed-form vacuum-field Rabi absorption spectra.
//
// Im χ(Ω) = cos²θ (Γ₋/π) / (Γ₋² + (Ω − ω₀ + Δ/2 − ½√(Δ² + 4Nλ²))²)
//         + sin²θ (Γ₊/π) / (Γ₊² + (Ω − ω₀ + Δ/2 + ½√(Δ² + 4Nλ²))²),   Δ = ω₀ − ω.
//
// The overall proportionality constant is 1; compare heights as ratios.

#include <optional>
#include <string>
#include <vector>

namespace qcav {

struct ProbeGrid {
    double omega_min = 0.0;
    double omega_max = 2.0;
    std::size_t samples = 2001;

    double step() const { return (omega_max - omega_min) / static_cast<double>(samples - 1); }
    double at(std::size_t i) const { return omega_min + static_cast<double>(i) * step(); }
};

struct SpectrumParams {
    double omega0 = 1.0;
    double omega = 1.0;
    double lambda = 0.05;
    int N = 1;
    double gamma_plus = 0.01;
    double gamma_minus = 0.01;
    /// Dressed-state mixing angle; unset means tan 2θ = 2λ√N / Δ.
    std::optional<double> theta;
    ProbeGrid grid;

    double detuning() const { return omega0 - omega; }
    double mixing_angle() const;

    /// Throws ConfigurationError on Γ± <= 0, N < 1, or a malformed grid.
    void validate() const;

    /// Grid invariant: both predicted peaks inside, >= 20 samples per linewidth.
    bool grid_adequate() const;
};

double susceptibility_im(const SpectrumParams& p, double Omega);

std::vector<double> evaluate_spectrum(const SpectrumParams& p);

/// Predicted peaks lighter than this are ignored by the grid check and the unresolved flag.
inline constexpr double significant_peak_weight = 1e-3;

struct PredictedPeak {
    double position = 0.0;
    double weight = 0.0;  ///< cos²θ (upper branch) or sin²θ (lower branch)
};

struct PeakPrediction {
    PredictedPeak upper;  ///< ω₀ − Δ/2 + ½√(Δ² + 4Nλ²)
    PredictedPeak lower;  ///< ω₀ − Δ/2 − ½√(Δ² + 4Nλ²)

    /// Dispersive-limit positions: emitter-like ω₀ + Nλ²/Δ, cavity-like ω − Nλ²/Δ.
    /// Unset when Δ = 0.
    std::optional<double> dispersive_emitter;
    std::optional<double> dispersive_cavity;
    double dispersive_shift = 0.0;  ///< Nλ²/|Δ|
    bool dispersive_valid = false;  ///< λ²N/Δ² < 0.01
};

PeakPrediction predicted_peaks(const SpectrumParams& p);

/// 2λ√N.
double rabi_frequency(double lambda, int N);

struct Peak {
    double position = 0.0;
    double height = 0.0;
    double width = 0.0;  ///< full width at half maximum, interpolated
};

/// Local maxima refined by a three-point parabola. A flat series yields no peaks.
std::vector<Peak> find_peaks(const std::vector<double>& omegas, const std::vector<double>& values);

struct SpectrumResult {
    std::vector<double> omegas;
    std::vector<double> imchi;
    std::vector<Peak> peaks;
    PeakPrediction predicted;
    /// Two significant peaks predicted but fewer found.
    bool unresolved = false;
};

SpectrumResult compute_spectrum(const SpectrumParams& p);

/// Area under each of two found peaks, splitting the grid at the minimum
/// between them (trapezoid rule). Throws unless exactly two peaks exist.
std::pair<double, double> peak_areas(const SpectrumResult& r);

}  // namespace qcav
