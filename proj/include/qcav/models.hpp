#pragma once

// Hamiltonians and dissipators of the cavity-QED models.
//
// Units: ħ = 1, every frequency and rate in rad/s.
// Dissipator convention, shared by every constructor and by the integrators:
//     D[ρ] = Σ_m r_m (2 L_m ρ L_m† − L_m† L_m ρ − ρ L_m† L_m)

#include <optional>
#include <string>
#include <vector>

#include "qcav/qstate.hpp"

namespace qcav {

struct JumpOperator {
    ComplexMatrix op;
    double rate = 0.0;
    std::string label;
};

class LindbladModel {
public:
    LindbladModel() = default;

    const ComplexMatrix& hamiltonian() const { return H_; }
    const std::vector<JumpOperator>& jumps() const { return jumps_; }
    std::size_t dim() const { return static_cast<std::size_t>(H_.rows()); }

    /// Composite-space layout, present when the model lives on spin ⊗ boson.
    const std::optional<HilbertSpaceSpec>& space() const { return space_; }

    bool is_closed() const;

    friend LindbladModel generic_lindblad(ComplexMatrix H, std::vector<JumpOperator> jumps,
                                          std::optional<HilbertSpaceSpec> space);

private:
    ComplexMatrix H_;
    std::vector<JumpOperator> jumps_;
    std::optional<HilbertSpaceSpec> space_;
};

/// Hermiticity tolerance for H.
inline constexpr double hamiltonian_hermiticity_tol = 1e-10;

/// Validating constructor. Throws ModelError on non-Hermitian H, negative or
/// non-finite rates, or jump operators of the wrong shape.
LindbladModel generic_lindblad(ComplexMatrix H, std::vector<JumpOperator> jumps,
                               std::optional<HilbertSpaceSpec> space = std::nullopt);

struct RabiModelParams {
    double omega0 = 1.0;  ///< emitter frequency
    double omega = 1.0;   ///< cavity frequency
    double lambda = 0.1;  ///< atom-field coupling
    int N = 1;
    double kappa = 0.0;  ///< cavity leak

    double detuning() const { return omega0 - omega; }
    void validate() const;
};

struct PhaseDampingParams {
    double omega = 0.0;
    double kappa_phi = 1.0;

    void validate() const;
};

/// H = ω₀ Sᶻ + ω a†a + λ (S⁺ a + a† S⁻).
ComplexMatrix tavis_cummings_hamiltonian(const RabiModelParams& p, const HilbertSpaceSpec& space);

/// Tavis–Cummings H plus cavity leakage
///     ∂ρ = −i[H,ρ] − κ(a†aρ − 2aρa† + ρa†a),
/// i.e. jump operator a with rate κ in the shared convention.
LindbladModel cavity_decay_model(const RabiModelParams& p, const HilbertSpaceSpec& space);

/// Oscillator with H = ω a†a and
///     ∂ρ = (κ/2)(2 a†a ρ a†a − ρ(a†a)² − (a†a)²ρ),
/// i.e. jump operator a†a with rate κ/2. Number populations are conserved and
/// ρ_nm decays as exp(−κ(n−m)² t / 2).
LindbladModel phase_damping_model(const PhaseDampingParams& p, int n_max);

/// Number operator of a bare oscillator truncated at n_max.
ComplexMatrix number_operator(int n_max);

}  // namespace qcav
