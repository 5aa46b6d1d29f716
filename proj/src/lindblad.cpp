#include "qcav/lindblad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "qcav/errors.hpp"

namespace qcav {

namespace {

double inf_norm(const ComplexMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

LindbladGenerator::LindbladGenerator(const LindbladModel& model) {
    const ComplexMatrix& H = model.hamiltonian();
    h_eff_ = H;
    double dissipative_scale = 0.0;
    for (const auto& j : model.jumps()) {
        if (j.rate == 0.0) {
            continue;
        }
        const ComplexMatrix ldl = j.op.adjoint() * j.op;
        h_eff_ -= Complex(0.0, j.rate) * ldl;
        scaled_jumps_.push_back(std::sqrt(2.0 * j.rate) * j.op);
        dissipative_scale += 2.0 * j.rate * inf_norm(ldl);
    }
    frequency_scale_ = std::max(inf_norm(H), dissipative_scale);
}

void LindbladGenerator::apply(const DensityMatrix& rho, DensityMatrix& out) const {
    if (rho.rows() != h_eff_.rows() || rho.cols() != h_eff_.cols()) {
        throw ShapeError("density matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                         " but the model has dimension " + std::to_string(h_eff_.rows()));
    }
    out.noalias() = h_eff_ * rho;
    out *= Complex(0.0, -1.0);
    // RK stages need not be Hermitian, so both products are formed explicitly.
    out.noalias() += Complex(0.0, 1.0) * (rho * h_eff_.adjoint());
    for (const auto& b : scaled_jumps_) {
        out.noalias() += b * rho * b.adjoint();
    }
}

DensityMatrix LindbladGenerator::apply(const DensityMatrix& rho) const {
    DensityMatrix out(rho.rows(), rho.cols());
    apply(rho, out);
    return out;
}

DensityMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho) {
    return LindbladGenerator(model).apply(rho);
}

ComplexMatrix liouvillian_superoperator(const LindbladModel& model) {
    const auto d = static_cast<Eigen::Index>(model.dim());
    if (model.dim() > max_superoperator_dim) {
        throw ShapeError("superoperator only built for dim <= " + std::to_string(max_superoperator_dim) + ", got " +
                         std::to_string(model.dim()));
    }
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix h_eff = model.hamiltonian();
    for (const auto& j : model.jumps()) {
        h_eff -= Complex(0.0, j.rate) * (j.op.adjoint() * j.op);
    }
    // vec(AρB) = (Bᵀ ⊗ A) vec(ρ)
    ComplexMatrix S = Complex(0.0, -1.0) * Eigen::kroneckerProduct(id, h_eff).eval();
    S += Complex(0.0, 1.0) * Eigen::kroneckerProduct(h_eff.conjugate(), id).eval();
    for (const auto& j : model.jumps()) {
        const ComplexMatrix b = std::sqrt(2.0 * j.rate) * j.op;
        S += Eigen::kroneckerProduct(b.conjugate(), b).eval();
    }
    return S;
}

void IntegratorConfig::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw ConfigurationError("integrator t_final must be > 0");
    }
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw ConfigurationError("integrator dt must be >= 0 (0 selects the default)");
    }
    if (method == IntegrationMethod::rk45 && !(tolerance > 0.0 && tolerance < 1e-2)) {
        throw ConfigurationError("adaptive tolerance must lie in (0, 1e-2)");
    }
    if (sample_every == 0) {
        throw ConfigurationError("sample_every must be >= 1");
    }
}

double default_step(const LindbladModel& model) {
    const double scale = LindbladGenerator(model).frequency_scale();
    if (scale <= 0.0) {
        return 1e-2;
    }
    return 1.0 / (50.0 * scale);
}

namespace {

class Recorder {
public:
    Recorder(const LindbladModel& model, const std::map<std::string, ComplexMatrix>& observables,
             EvolutionRecord& record)
        : model_(model), observables_(observables), record_(record) {
        for (const auto& [name, op] : observables_) {
            if (static_cast<std::size_t>(op.rows()) != model.dim() || op.rows() != op.cols()) {
                throw ShapeError("observable '" + name + "' does not match the model dimension");
            }
            record_.observables[name];
        }
    }

    void sample(double t, const DensityMatrix& rho) {
        record_.times.push_back(t);
        record_.states.push_back(rho);
        for (const auto& [name, op] : observables_) {
            record_.observables[name].push_back(expectation(op, rho));
        }
        if (model_.space()) {
            const double tail = boson_tail_population(rho, *model_.space(), 2);
            record_.max_boson_tail = std::max(record_.max_boson_tail, tail);
            if (tail > cutoff_warning_threshold && !cutoff_warned_) {
                cutoff_warned_ = true;
                std::ostringstream msg;
                msg << "boson cutoff: top two levels hold population " << tail << " at t = " << t
                    << "; increase n_max";
                record_.warnings.push_back(msg.str());
            }
        }
    }

    // Renormalizes trace drift above threshold, recording the first occurrence.
    void check_trace(double t, DensityMatrix& rho) {
        const Complex tr = rho.trace();
        const double drift = std::abs(tr - Complex(1.0, 0.0));
        if (drift > trace_renormalization_threshold) {
            rho /= tr.real();
            if (record_.renormalizations == 0) {
                std::ostringstream msg;
                msg << "trace drift " << drift << " at t = " << t << " renormalized";
                record_.warnings.push_back(msg.str());
            }
            ++record_.renormalizations;
        }
    }

private:
    const LindbladModel& model_;
    const std::map<std::string, ComplexMatrix>& observables_;
    EvolutionRecord& record_;
    bool cutoff_warned_ = false;
};

void rk4_step(const LindbladGenerator& gen, DensityMatrix& rho, double h, std::array<DensityMatrix, 5>& work) {
    auto& [k1, k2, k3, k4, tmp] = work;
    gen.apply(rho, k1);
    tmp = rho + (0.5 * h) * k1;
    gen.apply(tmp, k2);
    tmp = rho + (0.5 * h) * k2;
    gen.apply(tmp, k3);
    tmp = rho + h * k3;
    gen.apply(tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void integrate_rk4(const LindbladGenerator& gen, DensityMatrix& rho, const IntegratorConfig& cfg, double dt,
                   Recorder& rec, EvolutionRecord& record) {
    const double exact_steps = cfg.t_final / dt;
    auto n_steps = static_cast<std::size_t>(std::ceil(exact_steps - 1e-9));
    n_steps = std::max<std::size_t>(n_steps, 1);

    const auto d = rho.rows();
    std::array<DensityMatrix, 5> work;
    for (auto& w : work) {
        w.resize(d, d);
    }
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double t_prev = static_cast<double>(step - 1) * dt;
        const double t_next = step == n_steps ? cfg.t_final : static_cast<double>(step) * dt;
        rk4_step(gen, rho, t_next - t_prev, work);
        ++record.steps_taken;
        rec.check_trace(t_next, rho);
        if (step % cfg.sample_every == 0 || step == n_steps) {
            rec.sample(t_next, rho);
        }
    }
}

// Dormand–Prince 5(4).
struct DopriTableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

void integrate_rk45(const LindbladGenerator& gen, DensityMatrix& rho, const IntegratorConfig& cfg, double dt,
                    Recorder& rec, EvolutionRecord& record) {
    using T = DopriTableau;
    const double sample_interval = dt * static_cast<double>(cfg.sample_every);
    const auto n_samples = static_cast<std::size_t>(std::max(1.0, std::ceil(cfg.t_final / sample_interval - 1e-9)));

    const auto d = rho.rows();
    DensityMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d), tmp(d, d), y5(d, d),
        err(d, d);
    gen.apply(rho, k1);

    double h = dt;
    double t = 0.0;
    const double tol = cfg.tolerance;
    for (std::size_t s = 1; s <= n_samples; ++s) {
        const double t_target = s == n_samples ? cfg.t_final : static_cast<double>(s) * sample_interval;
        while (t < t_target) {
            bool last = false;
            if (t + h >= t_target) {
                h = t_target - t;
                last = true;
            }
            const double min_step = 1e-14 * std::max(1.0, std::abs(t));
            if (h < min_step) {
                std::ostringstream msg;
                msg << "adaptive step underflow (h = " << h << ") at t = " << t;
                throw StiffnessError(msg.str(), t);
            }
            tmp = rho + h * (T::a21 * k1);
            gen.apply(tmp, k2);
            tmp = rho + h * (T::a31 * k1 + T::a32 * k2);
            gen.apply(tmp, k3);
            tmp = rho + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
            gen.apply(tmp, k4);
            tmp = rho + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
            gen.apply(tmp, k5);
            tmp = rho + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
            gen.apply(tmp, k6);
            y5 = rho + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
            gen.apply(y5, k7);
            err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);

            const double scale = tol * (1.0 + std::max(rho.cwiseAbs().maxCoeff(), y5.cwiseAbs().maxCoeff()));
            const double err_norm = err.cwiseAbs().maxCoeff() / scale;
            if (!std::isfinite(err_norm)) {
                std::ostringstream msg;
                msg << "non-finite error estimate at t = " << t;
                throw StiffnessError(msg.str(), t);
            }
            if (err_norm <= 1.0) {
                t = last ? t_target : t + h;
                rho = y5;
                k1 = k7;
                ++record.steps_taken;
                rec.check_trace(t, rho);
                const double grow = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
                if (!last) {
                    h *= grow;
                } else {
                    h = std::max(h, dt) * grow;
                }
            } else {
                ++record.steps_rejected;
                h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
            }
        }
        rec.sample(t, rho);
    }
}

}  // namespace

EvolutionRecord evolve(const LindbladModel& model, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                       const std::map<std::string, ComplexMatrix>& observables) {
    cfg.validate();
    if (static_cast<std::size_t>(rho0.rows()) != model.dim() || rho0.rows() != rho0.cols()) {
        throw ShapeError("initial state dimension does not match the model");
    }
    const DensityDiagnostics diag = validate_density_matrix(rho0, 1e-6);
    if (!diag.passes(1e-6)) {
        std::ostringstream msg;
        msg << "initial density matrix invalid: hermiticity " << diag.hermiticity_defect << ", trace "
            << diag.trace_defect << ", min eigenvalue " << diag.min_eigenvalue;
        throw ConfigurationError(msg.str());
    }

    const LindbladGenerator gen(model);
    const double dt = cfg.dt > 0.0 ? cfg.dt : default_step(model);

    EvolutionRecord record;
    Recorder rec(model, observables, record);
    DensityMatrix rho = rho0;
    rec.sample(0.0, rho);
    if (cfg.method == IntegrationMethod::rk4) {
        integrate_rk4(gen, rho, cfg, dt, rec, record);
    } else {
        integrate_rk45(gen, rho, cfg, dt, rec, record);
    }
    return record;
}

DensityMatrix phase_damping_oracle(const DensityMatrix& rho0, double kappa, double t) {
    DensityMatrix out = rho0;
    for (Eigen::Index n = 0; n < rho0.rows(); ++n) {
        for (Eigen::Index m = 0; m < rho0.cols(); ++m) {
            const double gap = static_cast<double>(n - m);
            out(n, m) *= std::exp(-kappa * gap * gap * t / 2.0);
        }
    }
    return out;
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& H) {
    if (H.rows() != H.cols()) {
        throw ShapeError("eigensystem needs a square matrix");
    }
    if (hermiticity_defect(H) > hamiltonian_hermiticity_tol) {
        throw ModelError("eigensystem requested for a non-Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (H + H.adjoint()));
    return {es.eigenvalues(), es.eigenvectors()};
}

DensityMatrix secular_evolve(const Eigensystem& eig, const Eigen::MatrixXd& gammas, const DensityMatrix& rho0,
                             double t) {
    const auto d = eig.energies.size();
    if (gammas.rows() != d || gammas.cols() != d || rho0.rows() != d || rho0.cols() != d) {
        throw ShapeError("secular evolution operands differ in dimension");
    }
    const double g_scale = std::max(1.0, gammas.cwiseAbs().maxCoeff());
    if ((gammas - gammas.transpose()).cwiseAbs().maxCoeff() > 1e-12 * g_scale) {
        throw ModelError("damping matrix Gamma must be symmetric");
    }
    if (gammas.minCoeff() < 0.0) {
        throw ModelError("damping matrix Gamma must be non-negative");
    }
    DensityMatrix r = eig.vectors.adjoint() * rho0 * eig.vectors;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double phase = -(eig.energies(i) - eig.energies(j)) * t;
            r(i, j) *= std::exp(Complex(-gammas(i, j) * t, phase));
        }
    }
    return eig.vectors * r * eig.vectors.adjoint();
}

}  // namespace qcav
