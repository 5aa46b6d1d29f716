#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcav/errors.hpp"
#include "qcav/spectra.hpp"

using namespace qcav;

namespace {

double lorentz(double gamma, double x) { return (gamma / std::numbers::pi) / (gamma * gamma + x * x); }

SpectrumParams resonant(double lambda, int N, double gamma, double half_span, std::size_t samples) {
    SpectrumParams p;
    p.omega0 = 1.0;
    p.omega = 1.0;
    p.lambda = lambda;
    p.N = N;
    p.gamma_plus = p.gamma_minus = gamma;
    p.grid = {1.0 - half_span, 1.0 + half_span, samples};
    return p;
}

}  // namespace

TEST_CASE("susceptibility matches a sum of two Lorentzians") {
    SpectrumParams p = resonant(0.07, 3, 0.02, 0.5, 101);
    p.omega0 = 1.3;
    p.gamma_plus = 0.015;
    const double delta = 0.3;
    const double root = 0.5 * std::sqrt(delta * delta + 4.0 * 3 * 0.07 * 0.07);
    const double th = 0.5 * std::atan2(2.0 * 0.07 * std::sqrt(3.0), delta);
    for (double W : {0.8, 1.0, 1.27, 1.6}) {
        const double want = std::pow(std::cos(th), 2) * lorentz(0.02, W - 1.3 + delta / 2 - root) +
                            std::pow(std::sin(th), 2) * lorentz(0.015, W - 1.3 + delta / 2 + root);
        CHECK(susceptibility_im(p, W) == doctest::Approx(want).epsilon(1e-13));
        CHECK(susceptibility_im(p, W) > 0.0);
    }
}

TEST_CASE("resonant doublet is symmetric") {
    SpectrumParams p = resonant(0.05, 4, 0.01, 0.3, 6001);
    p.theta = std::numbers::pi / 4;
    const double s = 0.05 * 2.0;
    CHECK(susceptibility_im(p, 1.0 + s) == doctest::Approx(susceptibility_im(p, 1.0 - s)).epsilon(1e-14));
    for (double x : {0.013, 0.07, 0.2}) {
        CHECK(susceptibility_im(p, 1.0 + x) == doctest::Approx(susceptibility_im(p, 1.0 - x)).epsilon(1e-12));
    }
    const SpectrumResult r = compute_spectrum(p);
    REQUIRE(r.peaks.size() == 2);
    const double step = p.grid.step();
    CHECK(std::abs((r.peaks[0].position - 1.0) + (r.peaks[1].position - 1.0)) < step);
    const auto mx = std::max_element(r.imchi.begin(), r.imchi.end());
    const auto idx = static_cast<std::size_t>(mx - r.imchi.begin());
    const std::size_t mirror = r.imchi.size() - 1 - idx;
    CHECK(r.imchi[mirror] == doctest::Approx(*mx).epsilon(1e-12));
}

TEST_CASE("uncoupled line is a single Lorentzian at ω₀") {
    SpectrumParams p = resonant(0.0, 1, 0.01, 0.2, 4001);
    p.theta = 0.0;
    CHECK(susceptibility_im(p, 1.0) == doctest::Approx(1.0 / (std::numbers::pi * 0.01)));
    const SpectrumResult r = compute_spectrum(p);
    REQUIRE(r.peaks.size() == 1);
    CHECK(std::abs(r.peaks[0].position - 1.0) < 0.5 * p.grid.step());
    CHECK(r.peaks[0].width == doctest::Approx(0.02).epsilon(1e-3));
    CHECK_FALSE(r.unresolved);
}

TEST_CASE("resonant example: maxima at 1 ± 0.1") {
    SpectrumParams p = resonant(0.05, 4, 0.01, 0.3, 6001);
    p.theta = std::numbers::pi / 4;
    const SpectrumResult r = compute_spectrum(p);
    REQUIRE(r.peaks.size() == 2);
    CHECK(std::abs(r.peaks[0].position - 0.9) < p.grid.step());
    CHECK(std::abs(r.peaks[1].position - 1.1) < p.grid.step());
    CHECK(r.peaks[0].height / r.peaks[1].height == doctest::Approx(1.0).epsilon(0.01));
    for (double v : r.imchi) {
        CHECK(v >= 0.0);
    }
}

TEST_CASE("predicted peaks") {
    SpectrumParams p = resonant(0.1, 1, 0.01, 0.5, 1001);
    const PeakPrediction a = predicted_peaks(p);
    CHECK(a.upper.position == doctest::Approx(1.1));
    CHECK(a.lower.position == doctest::Approx(0.9));
    CHECK(a.upper.weight == doctest::Approx(0.5));
    CHECK(a.lower.weight == doctest::Approx(0.5));
    CHECK_FALSE(a.dispersive_emitter.has_value());

    SpectrumParams q = p;
    q.lambda = 0.0;
    q.omega0 = 1.2;
    const PeakPrediction b = predicted_peaks(q);
    CHECK(b.upper.position == doctest::Approx(1.2));
    CHECK(b.lower.position == doctest::Approx(1.0));

    SpectrumParams d = p;
    d.lambda = 1e-3;
    d.N = 4;
    d.omega0 = 1.0 + 100.0 * 1e-3 * 2.0;
    const PeakPrediction c = predicted_peaks(d);
    const double delta = d.detuning();
    const double exact_shift = c.upper.position - d.omega0;
    REQUIRE(c.dispersive_emitter.has_value());
    const double approx_shift = *c.dispersive_emitter - d.omega0;
    CHECK(approx_shift == doctest::Approx(4e-6 / delta));
    CHECK(std::abs(exact_shift - approx_shift) < 0.01 * exact_shift);
    CHECK(*c.dispersive_cavity == doctest::Approx(c.lower.position).epsilon(1e-9));
    CHECK(c.dispersive_valid);
    CHECK(c.dispersive_shift == doctest::Approx(4e-6 / delta));
    CHECK(c.lower.weight < 1e-3);

    d.omega0 = 1.0 + 2.0 * 1e-3 * 2.0;
    CHECK_FALSE(predicted_peaks(d).dispersive_valid);
}

TEST_CASE("rabi frequency") {
    CHECK(rabi_frequency(0.3, 1) == 0.6);
    CHECK(rabi_frequency(0.05, 100) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rabi_frequency(0.05, 4) / rabi_frequency(0.05, 1) == 2.0);
    CHECK_THROWS_AS(rabi_frequency(0.1, 0), ConfigurationError);
}

TEST_CASE("find_peaks") {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i <= 1000; ++i) {
        x.push_back(0.5 + 0.001 * i + 0.0003);
        y.push_back(lorentz(0.02, x.back() - 1.0));
    }
    const auto pk = find_peaks(x, y);
    REQUIRE(pk.size() == 1);
    CHECK(std::abs(pk[0].position - 1.0) <= 0.0005);
    CHECK(find_peaks(x, std::vector<double>(x.size(), 2.0)).empty());
    CHECK(find_peaks({0.0, 1.0}, {0.0, 1.0}).empty());
    CHECK_THROWS_AS(find_peaks({0.0, 1.0, 2.0}, {0.0, 1.0}), ShapeError);
}

TEST_CASE("unresolved doublet is flagged") {
    SpectrumParams p = resonant(0.005, 1, 0.01, 0.2, 4001);
    const SpectrumResult r = compute_spectrum(p);
    CHECK(r.peaks.size() == 1);
    CHECK(r.unresolved);
    CHECK(std::abs(r.peaks[0].position - 1.0) < p.grid.step());
}

TEST_CASE("found peaks track predictions whenever the doublet is resolved") {
    for (double lambda : {0.02, 0.04, 0.08}) {
        for (int N : {1, 2, 5}) {
            for (double delta : {-0.05, 0.0, 0.03}) {
                SpectrumParams p;
                p.omega = 1.0;
                p.omega0 = 1.0 + delta;
                p.lambda = lambda;
                p.N = N;
                p.gamma_minus = 0.004;
                p.gamma_plus = 0.005;
                p.grid = {0.5, 1.5, 10001};
                if (!(lambda * std::sqrt(double(N)) > 3.0 * 0.005)) {
                    continue;
                }
                const SpectrumResult r = compute_spectrum(p);
                REQUIRE(r.peaks.size() == 2);
                CHECK(std::abs(r.peaks[0].position - r.predicted.lower.position) < p.grid.step());
                CHECK(std::abs(r.peaks[1].position - r.predicted.upper.position) < p.grid.step());
            }
        }
    }
}

TEST_CASE("√N enhancement of the splitting") {
    for (int N : {1, 4, 16, 64}) {
        SpectrumParams p = resonant(0.05, N, 0.002, 0.6, 12001);
        const SpectrumResult r = compute_spectrum(p);
        REQUIRE(r.peaks.size() == 2);
        const double split = r.peaks[1].position - r.peaks[0].position;
        CHECK(split == doctest::Approx(2.0 * 0.05 * std::sqrt(double(N))).epsilon(0.02));
    }
}

TEST_CASE("equal integrated weights at resonance") {
    SpectrumParams p = resonant(0.05, 4, 0.005, 0.45, 18001);
    p.theta = std::numbers::pi / 4;
    const auto [lo, hi] = peak_areas(compute_spectrum(p));
    CHECK(lo / hi >= 0.98);
    CHECK(lo / hi <= 1.02);
    CHECK_THROWS_AS(peak_areas(compute_spectrum(resonant(0.0, 1, 0.01, 0.2, 4001))), ConfigurationError);
}

TEST_CASE("parameter and grid validation") {
    SpectrumParams p = resonant(0.05, 1, 0.01, 0.3, 601);
    CHECK(p.grid_adequate());
    p.gamma_plus = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigurationError);
    p = resonant(0.05, 0, 0.01, 0.3, 601);
    CHECK_THROWS_AS(p.validate(), ConfigurationError);
    p = resonant(0.05, 1, 0.01, 0.3, 2);
    CHECK_THROWS_AS(evaluate_spectrum(p), ConfigurationError);
    p = resonant(0.05, 1, 0.01, 0.3, 200);
    CHECK_FALSE(p.grid_adequate());
    CHECK_THROWS_AS(compute_spectrum(p), ConfigurationError);
    p = resonant(0.05, 1, 0.01, 0.04, 2001);
    CHECK_FALSE(p.grid_adequate());
}
