#pragma once

// Stochastic (Ito) state-vector unraveling of the Lindblad dynamics:
//
//   |dψ⟩ = −iH|ψ⟩dt + Σ_m (⟨B_m†⟩B_m − ½B_m†B_m − ½⟨B_m†⟩⟨B_m⟩)|ψ⟩dt
//          + Σ_m (B_m − ⟨B_m⟩)|ψ⟩ dξ_m
//
// with B_m = √(2 r_m) L_m, matching the dissipator convention of models.hpp,
// and independent complex Wiener increments E[dξ] = 0, E[|dξ|²] = dt.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qcav/models.hpp"
#include "qcav/qstate.hpp"

namespace qcav {

struct ItoConfig {
    double dt = 1e-3;
    std::size_t steps = 1000;
    std::size_t ensemble_size = 1;
    std::uint64_t base_seed = 0;
    std::size_t record_every = 1;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned workers = 0;

    void validate() const;
};

/// Upper bound on dt · (fastest dissipative rate).
inline constexpr double ito_stability_bound = 0.05;

/// Norm below which a trajectory is declared collapsed.
inline constexpr double ito_norm_floor = 1e-12;

/// Orthogonal resolution of the identity into channel projectors.
class ChannelProjectors {
public:
    /// Throws ModelError unless each P_k is Hermitian and idempotent, the set is
    /// mutually orthogonal, and Σ P_k = 1 (all to 1e-10).
    explicit ChannelProjectors(std::vector<ComplexMatrix> projectors);

    /// One projector per basis state |k⟩ of a `dim`-dimensional space.
    static ChannelProjectors basis_channels(std::size_t dim);

    /// Channels of fixed boson number n on a spin ⊗ boson space.
    static ChannelProjectors boson_number_channels(const HilbertSpaceSpec& space);

    const std::vector<ComplexMatrix>& projectors() const { return projectors_; }
    std::size_t size() const { return projectors_.size(); }
    std::size_t dim() const;

private:
    std::vector<ComplexMatrix> projectors_;
};

/// Precomputed operators of the Ito step for one model.
class ItoStepper {
public:
    explicit ItoStepper(const LindbladModel& model);

    std::size_t channels() const { return b_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(h_.rows()); }

    /// max_m ‖B_m†B_m‖∞, the rate the dt bound is checked against.
    double max_rate() const { return max_rate_; }

    const std::vector<ComplexMatrix>& noise_operators() const { return b_; }

    /// One Euler–Maruyama update of a normalized ψ in place, followed by
    /// renormalization. Returns the norm divided out. Throws NumericalError
    /// (naming `step_index`) when the norm falls below ito_norm_floor.
    double step(StateVector& psi, std::span<const Complex> noise, double dt, std::size_t step_index = 0) const;

private:
    ComplexMatrix h_;
    std::vector<ComplexMatrix> b_;
    std::vector<ComplexMatrix> bdb_;
    double max_rate_ = 0.0;
    mutable StateVector drift_;
    mutable StateVector work_;
};

struct ItoStepResult {
    StateVector psi;
    double renormalization = 1.0;
};

ItoStepResult ito_step(const StateVector& psi, const LindbladModel& model, std::span<const Complex> noise,
                       double dt, std::size_t step_index = 0);

/// Complex Wiener increment with independent real and imaginary parts of variance dt/2.
Complex wiener_increment(std::mt19937_64& rng, double dt);

/// Generator for trajectory `index` of an ensemble seeded by `base_seed`.
std::mt19937_64 trajectory_rng(std::uint64_t base_seed, std::size_t index);

/// K = −Σ_k ⟨P_k⟩ ln⟨P_k⟩ with ⟨P_k⟩ <= 1e-15 contributing nothing.
double dispersion_entropy(const StateVector& psi, const ChannelProjectors& channels);

/// −Σ_k ((1 − ⟨P_k⟩)/⟨P_k⟩) R_k with R_k = Σ_j |⟨P_k L_j P_k⟩|²; channels with
/// ⟨P_k⟩ <= 1e-15 are skipped. Always <= 0.
double entropy_production_rate(const StateVector& psi, const ChannelProjectors& channels,
                               std::span<const ComplexMatrix> jump_ops);

/// Same, with the model's scaled operators B_m as L_j.
double entropy_production_rate(const StateVector& psi, const ChannelProjectors& channels,
                               const LindbladModel& model);

struct TrajectoryFailure {
    std::size_t index = 0;
    std::string message;
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<DensityMatrix> mean_rho;
    /// entropy[i][s]: dispersion entropy of trajectory i at sample s.
    /// Empty when no projectors were given; empty row for failed trajectories.
    std::vector<std::vector<double>> entropy;
    std::vector<double> entropy_mean;
    std::vector<double> entropy_median;
    std::vector<double> entropy_stddev;
    std::vector<TrajectoryFailure> failures;
    std::size_t succeeded = 0;
};

/// Largest tolerated fraction of failed trajectories.
inline constexpr double max_failure_fraction = 0.01;

/// Runs cfg.ensemble_size independent trajectories from psi0. The mean state
/// is reduced in a fixed order of trajectory index, so output is bit-exact for
/// a given base_seed regardless of the worker count.
EnsembleResult run_ensemble(const LindbladModel& model, const StateVector& psi0, const ItoConfig& cfg,
                            const std::optional<ChannelProjectors>& projectors = std::nullopt);

}  // namespace qcav
