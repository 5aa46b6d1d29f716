#include "qcav/decoherence.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qcav/errors.hpp"
#include "qcav/models.hpp"

namespace qcav {

StateVector coherent_state(Complex alpha, int n_max) {
    if (n_max < 0) {
        throw InvalidSpaceError("coherent state needs n_max >= 0");
    }
    StateVector v(n_max + 1);
    Complex term = std::exp(-0.5 * std::norm(alpha));
    v(0) = term;
    for (int n = 1; n <= n_max; ++n) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        v(n) = term;
    }
    return v / v.norm();
}

StateVector cat_state(double n, double phi, int n_max) {
    if (!(n >= 0.0)) {
        throw ConfigurationError("cat state needs n >= 0");
    }
    const double needed = n + 5.0 * std::sqrt(n);
    if (static_cast<double>(n_max) < needed) {
        std::ostringstream msg;
        msg << "boson cutoff " << n_max << " too small for a cat with n = " << n << " (need >= " << needed << ")";
        throw CutoffError(msg.str());
    }
    const double amp = std::sqrt(n);
    const StateVector plus = coherent_state(std::polar(amp, phi), n_max);
    const StateVector minus = coherent_state(std::polar(amp, -phi), n_max);
    const StateVector e = basis_state(2, 1);
    const StateVector g = basis_state(2, 0);
    StateVector psi = tensor_product(e, plus) + tensor_product(g, minus);
    return psi / psi.norm();
}

Complex coherent_overlap(Complex beta, Complex gamma) {
    return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(gamma) + std::conj(beta) * gamma);
}

PointerDistance pointer_distance(double n, double phi) { return {2.0 * std::sqrt(n) * std::sin(phi), std::nullopt}; }

double branch_phase(double n, double lambda, double t, double Delta) {
    if (Delta == 0.0) {
        throw ConfigurationError("branch phase needs a non-zero detuning");
    }
    return n * lambda * lambda * t / Delta;
}

PointerDistance pointer_distance(double n, double phi, double lambda, double t, double Delta) {
    PointerDistance d = pointer_distance(n, phi);
    d.small_phase = 2.0 * std::sqrt(n) * branch_phase(n, lambda, t, Delta);
    return d;
}

CollapseTime collapse_time(double T_r, double D) {
    if (!(T_r > 0.0)) {
        throw ConfigurationError("collapse time needs T_r > 0");
    }
    if (D == 0.0) {
        return {0.0, true};
    }
    return {2.0 * T_r / (D * D), false};
}

double distance_squared_for(double fraction) {
    if (!(fraction > 0.0)) {
        throw ConfigurationError("collapse fraction must be > 0");
    }
    return 2.0 / fraction;
}

MtCollapse mt_collapse_time(double T_r, double n, int N_sys, double lambda0, double t, double Delta,
                            CollapseMode mode) {
    if (!(T_r > 0.0) || !(n > 0.0) || N_sys < 1) {
        throw ConfigurationError("MT collapse time needs T_r, n, N > 0");
    }
    MtCollapse out;
    out.mode = mode;
    const double nN = n * static_cast<double>(N_sys);
    out.lower = T_r / (2.0 * nN);
    out.upper = T_r / nN;
    if (mode == CollapseMode::instantaneous) {
        if (!(lambda0 > 0.0) || !(t > 0.0) || Delta == 0.0) {
            throw ConfigurationError("instantaneous MT collapse time needs lambda0, t > 0 and Delta != 0");
        }
        const double s = std::sin(nN * lambda0 * lambda0 * t / Delta);
        if (std::abs(s) < 1e-12) {
            out.divergent = true;
        } else {
            out.instantaneous = T_r / (2.0 * nN * s * s);
        }
    }
    return out;
}

double branch_coherence(const DensityMatrix& rho, const ComplexMatrix& P_a, const ComplexMatrix& P_b) {
    if (P_a.rows() != rho.rows() || P_b.rows() != rho.rows()) {
        throw ShapeError("branch projectors do not match the state dimension");
    }
    return (P_a * rho * P_b).norm();
}

DecayFit coherence_decay_fit(const EvolutionRecord& record, const ComplexMatrix& P_a, const ComplexMatrix& P_b,
                             double min_r_squared) {
    const std::size_t n = record.times.size();
    if (n < 3) {
        throw ConfigurationError("decay fit needs at least three samples");
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = branch_coherence(record.states[i], P_a, P_b);
        if (!(c > 0.0)) {
            throw NumericalError("branch coherence vanished at t = " + std::to_string(record.times[i]));
        }
        y[i] = std::log(c);
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += record.times[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = record.times[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    DecayFit fit;
    fit.rate = -slope;
    fit.amplitude = std::exp(my - slope * mx);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (my + slope * (record.times[i] - mx));
        ss_res += r * r;
    }
    // A constant series is a perfect (zero-rate) fit.
    fit.r_squared = syy <= 1e-24 * static_cast<double>(n) ? 1.0 : 1.0 - ss_res / syy;
    if (fit.r_squared < min_r_squared) {
        std::ostringstream msg;
        msg << "exponential fit quality R^2 = " << fit.r_squared << " below " << min_r_squared;
        throw FitQualityError(msg.str(), fit.r_squared);
    }
    return fit;
}

CatDecay simulate_cat_decay(double n, double phi, double T_r, double window, int n_max, std::size_t samples) {
    if (!(T_r > 0.0) || !(window > 0.0) || samples < 3) {
        throw ConfigurationError("cat decay needs T_r > 0, window > 0 and at least three samples");
    }
    if (n_max == 0) {
        n_max = static_cast<int>(std::ceil(n + 5.0 * std::sqrt(n))) + 1;
    }
    const StateVector psi = cat_state(n, phi, n_max);
    const HilbertSpaceSpec space{1, n_max, SpinSector::collective};
    const OperatorSet ops = build_operator_set(space);
    const double kappa = 0.5 / T_r;
    const LindbladModel model =
        generic_lindblad(ComplexMatrix::Zero(space.dim(), space.dim()), {{ops.a, kappa, "a"}}, space);

    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::rk4;
    cfg.t_final = window * T_r;
    cfg.dt = cfg.t_final / static_cast<double>(samples);
    const EvolutionRecord rec = evolve(model, pure_density(psi), cfg);

    const ComplexMatrix id_b = ComplexMatrix::Identity(space.boson_dim(), space.boson_dim());
    const ComplexMatrix P_e = tensor_product(pure_density(basis_state(2, 1)), id_b);
    const ComplexMatrix P_g = tensor_product(pure_density(basis_state(2, 0)), id_b);
    CatDecay out;
    out.distance = std::abs(pointer_distance(n, phi).exact);
    out.predicted_rate = out.distance * out.distance / (2.0 * T_r);
    out.fit = coherence_decay_fit(rec, P_e, P_g);
    return out;
}

}  // namespace qcav
