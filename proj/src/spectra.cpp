#include "qcav/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcav/errors.hpp"

namespace qcav {

double SpectrumParams::mixing_angle() const {
    if (theta) {
        return *theta;
    }
    return 0.5 * std::atan2(2.0 * lambda * std::sqrt(static_cast<double>(N)), detuning());
}

void SpectrumParams::validate() const {
    if (!(gamma_plus > 0.0) || !(gamma_minus > 0.0)) {
        throw ConfigurationError("spectrum damping factors Gamma_plus and Gamma_minus must be > 0");
    }
    if (N < 1) {
        throw ConfigurationError("spectrum needs N >= 1");
    }
    if (!(lambda >= 0.0)) {
        throw ConfigurationError("spectrum coupling lambda must be >= 0");
    }
    if (grid.samples < 3 || !(grid.omega_max > grid.omega_min)) {
        throw ConfigurationError("probe grid needs omega_max > omega_min and at least 3 samples");
    }
}

bool SpectrumParams::grid_adequate() const {
    const PeakPrediction pred = predicted_peaks(*this);
    for (const auto& pk : {pred.upper, pred.lower}) {
        if (pk.weight > significant_peak_weight && (pk.position < grid.omega_min || pk.position > grid.omega_max)) {
            return false;
        }
    }
    // FWHM of each Lorentzian is 2Γ.
    const double linewidth = 2.0 * std::min(gamma_plus, gamma_minus);
    return grid.step() <= linewidth / 20.0 * (1.0 + 1e-12);
}

double susceptibility_im(const SpectrumParams& p, double Omega) {
    const double delta = p.detuning();
    const double root = 0.5 * std::sqrt(delta * delta + 4.0 * p.N * p.lambda * p.lambda);
    const double th = p.mixing_angle();
    const double c2 = std::cos(th) * std::cos(th);
    const double s2 = std::sin(th) * std::sin(th);
    const double x_minus = Omega - p.omega0 + 0.5 * delta - root;
    const double x_plus = Omega - p.omega0 + 0.5 * delta + root;
    const double gm = p.gamma_minus;
    const double gp = p.gamma_plus;
    return c2 * (gm / std::numbers::pi) / (gm * gm + x_minus * x_minus) +
           s2 * (gp / std::numbers::pi) / (gp * gp + x_plus * x_plus);
}

std::vector<double> evaluate_spectrum(const SpectrumParams& p) {
    p.validate();
    std::vector<double> out(p.grid.samples);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = susceptibility_im(p, p.grid.at(i));
    }
    return out;
}

PeakPrediction predicted_peaks(const SpectrumParams& p) {
    const double delta = p.detuning();
    const double nl2 = p.N * p.lambda * p.lambda;
    const double root = 0.5 * std::sqrt(delta * delta + 4.0 * nl2);
    const double th = p.mixing_angle();

    PeakPrediction out;
    out.upper = {p.omega0 - 0.5 * delta + root, std::cos(th) * std::cos(th)};
    out.lower = {p.omega0 - 0.5 * delta - root, std::sin(th) * std::sin(th)};
    if (delta != 0.0) {
        out.dispersive_shift = nl2 / std::abs(delta);
        out.dispersive_emitter = p.omega0 + nl2 / delta;
        out.dispersive_cavity = p.omega - nl2 / delta;
        out.dispersive_valid = nl2 / (delta * delta) < 0.01;
    }
    return out;
}

double rabi_frequency(double lambda, int N) {
    if (N < 1) {
        throw ConfigurationError("rabi_frequency needs N >= 1");
    }
    return 2.0 * lambda * std::sqrt(static_cast<double>(N));
}

namespace {

double half_max_crossing(const std::vector<double>& x, const std::vector<double>& y, std::size_t i, double half,
                         int dir) {
    std::size_t j = i;
    while (true) {
        if ((dir < 0 && j == 0) || (dir > 0 && j + 1 >= y.size())) {
            return std::nan("");
        }
        const std::size_t k = dir < 0 ? j - 1 : j + 1;
        if (y[k] <= half) {
            const double frac = (y[j] - half) / (y[j] - y[k]);
            return x[j] + frac * (x[k] - x[j]);
        }
        j = k;
    }
}

}  // namespace

std::vector<Peak> find_peaks(const std::vector<double>& omegas, const std::vector<double>& values) {
    if (omegas.size() != values.size()) {
        throw ShapeError("find_peaks: abscissa and values differ in length");
    }
    std::vector<Peak> peaks;
    if (values.size() < 3) {
        return peaks;
    }
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        // Strict on both sides, so plateaus yield nothing.
        if (!(values[i] > values[i - 1] && values[i] > values[i + 1])) {
            continue;
        }
        const double y0 = values[i - 1];
        const double y1 = values[i];
        const double y2 = values[i + 1];
        const double h = omegas[i + 1] - omegas[i];
        const double denom = y0 - 2.0 * y1 + y2;
        double offset = 0.0;
        double height = y1;
        if (denom != 0.0) {
            offset = 0.5 * (y0 - y2) / denom;
            height = y1 - 0.25 * (y0 - y2) * offset;
        }
        Peak pk;
        pk.position = omegas[i] + offset * h;
        pk.height = height;
        const double half = 0.5 * height;
        const double left = half_max_crossing(omegas, values, i, half, -1);
        const double right = half_max_crossing(omegas, values, i, half, +1);
        if (std::isfinite(left) && std::isfinite(right)) {
            pk.width = right - left;
        } else if (std::isfinite(left)) {
            pk.width = 2.0 * (pk.position - left);
        } else if (std::isfinite(right)) {
            pk.width = 2.0 * (right - pk.position);
        }
        peaks.push_back(pk);
    }
    return peaks;
}

SpectrumResult compute_spectrum(const SpectrumParams& p) {
    p.validate();
    if (!p.grid_adequate()) {
        throw ConfigurationError(
            "probe grid must contain both predicted peaks with >= 20 samples per linewidth (2*Gamma)");
    }
    SpectrumResult r;
    r.omegas.resize(p.grid.samples);
    for (std::size_t i = 0; i < r.omegas.size(); ++i) {
        r.omegas[i] = p.grid.at(i);
    }
    r.imchi = evaluate_spectrum(p);
    r.peaks = find_peaks(r.omegas, r.imchi);
    r.predicted = predicted_peaks(p);
    const bool two_predicted = r.predicted.upper.weight > significant_peak_weight &&
                               r.predicted.lower.weight > significant_peak_weight &&
                               r.predicted.upper.position != r.predicted.lower.position;
    r.unresolved = two_predicted && r.peaks.size() < 2;
    return r;
}

std::pair<double, double> peak_areas(const SpectrumResult& r) {
    if (r.peaks.size() != 2) {
        throw ConfigurationError("peak_areas needs exactly two peaks, found " + std::to_string(r.peaks.size()));
    }
    const auto lo = std::lower_bound(r.omegas.begin(), r.omegas.end(), r.peaks[0].position);
    const auto hi = std::lower_bound(r.omegas.begin(), r.omegas.end(), r.peaks[1].position);
    const auto i0 = static_cast<std::size_t>(lo - r.omegas.begin());
    const auto i1 = static_cast<std::size_t>(hi - r.omegas.begin());
    std::size_t split = i0;
    for (std::size_t i = i0; i < i1; ++i) {
        if (r.imchi[i] < r.imchi[split]) {
            split = i;
        }
    }
    auto trapz = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t i = a; i < b; ++i) {
            s += 0.5 * (r.imchi[i] + r.imchi[i + 1]) * (r.omegas[i + 1] - r.omegas[i]);
        }
        return s;
    };
    return {trapz(0, split), trapz(split, r.omegas.size() - 1)};
}

}  // namespace qcav
