#pragma once

// Phase-entangled cat states and the collapse-time laws.

#include <optional>

#include "qcav/lindblad.hpp"
#include "qcav/qstate.hpp"

namespace qcav {

struct CatParams {
    double n = 10.0;         ///< mean quanta, |α|² = n
    double phi = 0.0;        ///< branch phase
    double T_r = 1e-4;       ///< cavity damping time (s)
    double lambda0 = 0.0;    ///< single-emitter coupling (rad/s)
    double Delta = 0.0;      ///< detuning (rad/s)
    int N_sys = 1;
    double t = 0.0;          ///< interaction time (s)
};

/// Truncated coherent state |α⟩ on levels 0..n_max, renormalized after truncation.
StateVector coherent_state(Complex alpha, int n_max);

/// (|e, αe^{iφ}⟩ + |g, αe^{−iφ}⟩)/norm on qubit ⊗ boson, |α| = √n.
/// Qubit index 0 is |g⟩, 1 is |e⟩ (the N = 1 Dicke ordering).
/// Throws CutoffError unless n_max >= n + 5√n.
StateVector cat_state(double n, double phi, int n_max);

/// ⟨β|γ⟩ for untruncated coherent states.
Complex coherent_overlap(Complex beta, Complex gamma);

struct PointerDistance {
    double exact = 0.0;                 ///< 2√n sin φ
    std::optional<double> small_phase;  ///< 2 n^{3/2} λ² t / Δ, when λ, t, Δ are given
};

PointerDistance pointer_distance(double n, double phi);
PointerDistance pointer_distance(double n, double phi, double lambda, double t, double Delta);

/// Branch phase φ = n λ² t / Δ (proportionality constant taken as 1).
double branch_phase(double n, double lambda, double t, double Delta);

struct CollapseTime {
    double seconds = 0.0;
    bool infinite = false;  ///< D = 0: the branches never decohere
};

/// t_collapse = 2 T_r / D².
CollapseTime collapse_time(double T_r, double D);

/// D² that yields t_collapse = fraction · T_r.
double distance_squared_for(double fraction);

enum class CollapseMode { instantaneous, bounds };

struct MtCollapse {
    CollapseMode mode = CollapseMode::bounds;
    double instantaneous = 0.0;  ///< valid in instantaneous mode unless divergent
    bool divergent = false;      ///< sin argument at a multiple of π
    double lower = 0.0;          ///< T_r / (2nN), sin² = 1
    double upper = 0.0;          ///< T_r / (nN), sin² = ½ (time average)
};

/// t_collapse = T_r / (2 n N sin²(N n λ₀² t / Δ)).
MtCollapse mt_collapse_time(double T_r, double n, int N_sys, double lambda0, double t, double Delta,
                            CollapseMode mode);

/// ‖P_a ρ P_b‖_F: magnitude of the coherence between two branches.
double branch_coherence(const DensityMatrix& rho, const ComplexMatrix& P_a, const ComplexMatrix& P_b);

struct DecayFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
};

inline constexpr double min_fit_r_squared = 0.99;

/// Least-squares fit of ln‖P_a ρ(t) P_b‖ = ln A − rate·t over the record.
/// Throws FitQualityError when R² < min_r_squared.
DecayFit coherence_decay_fit(const EvolutionRecord& record, const ComplexMatrix& P_a, const ComplexMatrix& P_b,
                             double min_r_squared = min_fit_r_squared);

struct CatDecay {
    DecayFit fit;
    double distance = 0.0;        ///< D = 2√n |sin φ|
    double predicted_rate = 0.0;  ///< D² / (2 T_r)
};

/// Evolves cat_state(n, phi) under pure cavity leakage (H = 0, jump I ⊗ a with
/// κ = 1/(2 T_r), so photon number decays as e^{−t/T_r}) over [0, window·T_r]
/// and fits the branch coherence ‖P_e ρ P_g‖. n_max = 0 picks the smallest
/// adequate cutoff.
CatDecay simulate_cat_decay(double n, double phi, double T_r, double window = 0.02, int n_max = 0,
                            std::size_t samples = 200);

}  // namespace qcav
