#pragma once

// Deterministic master-equation integration.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qcav/models.hpp"
#include "qcav/qstate.hpp"

namespace qcav {

/// Precomputed pieces of the generator:
///     L[ρ] = −i(H_eff ρ − ρ H_eff†) + Σ_m B_m ρ B_m†,
///     H_eff = H − i Σ r_m L_m†L_m,   B_m = √(2 r_m) L_m.
class LindbladGenerator {
public:
    explicit LindbladGenerator(const LindbladModel& model);

    DensityMatrix apply(const DensityMatrix& rho) const;
    void apply(const DensityMatrix& rho, DensityMatrix& out) const;

    std::size_t dim() const { return static_cast<std::size_t>(h_eff_.rows()); }

    /// Largest characteristic frequency: max(‖H‖∞, Σ 2 r_m ‖L_m†L_m‖∞).
    double frequency_scale() const { return frequency_scale_; }

private:
    ComplexMatrix h_eff_;
    std::vector<ComplexMatrix> scaled_jumps_;
    double frequency_scale_ = 0.0;
};

/// −i[H,ρ] + Σ r_m (2 L_m ρ L_m† − {L_m†L_m, ρ}). Throws ShapeError on mismatch.
DensityMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);

/// Largest dimension for which the explicit superoperator is built.
inline constexpr std::size_t max_superoperator_dim = 64;

/// Column-stacked Liouvillian, vec(L[ρ]) = S · vec(ρ). Only for dim <= 64.
ComplexMatrix liouvillian_superoperator(const LindbladModel& model);

enum class IntegrationMethod { rk4, rk45 };

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::rk4;
    /// Fixed step for rk4. For rk45 it is the sampling quantum and first-step
    /// guess. Zero selects default_step().
    double dt = 0.0;
    double tolerance = 1e-8;  ///< rk45 local error tolerance
    double t_final = 1.0;
    /// Record a sample every `sample_every` multiples of dt.
    std::size_t sample_every = 1;

    void validate() const;
};

/// (50 · frequency_scale)⁻¹, resolving the fastest rotation with 50 steps per cycle.
double default_step(const LindbladModel& model);

struct EvolutionRecord {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::map<std::string, std::vector<double>> observables;
    std::vector<std::string> warnings;
    std::size_t steps_taken = 0;
    std::size_t steps_rejected = 0;
    std::size_t renormalizations = 0;
    double max_boson_tail = 0.0;
};

/// Trace drift above which the state is renormalized (with a warning).
inline constexpr double trace_renormalization_threshold = 1e-8;

EvolutionRecord evolve(const LindbladModel& model, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                       const std::map<std::string, ComplexMatrix>& observables = {});

/// ρ_nm(t) = exp(−κ (n−m)² t / 2) ρ_nm(0) in the number basis.
DensityMatrix phase_damping_oracle(const DensityMatrix& rho0, double kappa, double t);

struct Eigensystem {
    Eigen::VectorXd energies;
    ComplexMatrix vectors;  ///< columns are eigenvectors
};

Eigensystem hermitian_eigensystem(const ComplexMatrix& H);

/// ρ_ij(t) = exp(−i(E_i − E_j)t − Γ_ij t) ρ_ij(0) in the eigenbasis of H,
/// returned in the original basis. Γ must be symmetric and non-negative.
DensityMatrix secular_evolve(const Eigensystem& eig, const Eigen::MatrixXd& gammas, const DensityMatrix& rho0,
                             double t);

}  // namespace qcav
