#pragma once

// Order-of-magnitude estimation chain for a microtubule treated as a
// dielectric cavity: dimer dipole → vacuum amplitude → Rabi coupling →
// damping time → collapse window → feasibility against kink transport.
//
// Everything here is SI. Each chained quantity is reported next to the
// rounded literature value it is meant to reproduce.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcav::mt {

/// CODATA 2018 exact/recommended values.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;      // J s
    double c = 299792458.0;             // m/s
    double e_charge = 1.602176634e-19;  // C
    double eps0 = 8.8541878128e-12;     // F/m
    double k_B = 1.380649e-23;          // J/K
};

inline constexpr PhysicalConstants codata{};

double ev_to_joule(double ev);
double joule_to_ev(double j);
double mev_to_joule(double mev);
double joule_to_mev(double j);

/// g_s solved from a 1e-10 s pumping time with the default kink energy;
/// see calibrate_string_coupling().
inline constexpr double default_string_coupling = 1.5112432772290414e-4;

struct MtParameterSet {
    double L = 1e-6;                               // m, MT length
    double dimer_length = 8e-9;                    // m
    double q_mobile = 36.0;                        // multiples of e
    double d_min = 4e-9;                           // m
    double eps_r_water = 80.0;
    double eps_r_protein = 10.0;
    double V = 5e-22;                              // m^3
    double hbar_omega_c = 4e-3 * 1.602176634e-19;  // J (4 meV)
    double d_ej = 2.0 * 1.602176634e-19 * 0.2e-10;  // C m (2e x 0.2 Å)
    double N_w = 1e8;
    double I_water = 1e-47;                        // kg m^2
    double v0 = 1000.0;                            // m/s
    double omega0_dimer = 1e12;                    // rad/s
    double T = 300.0;                              // K
    double t_kink = 5e-7;                          // s
    double g_s = default_string_coupling;
    double E_kin = 5e-8 * 1.602176634e-19;         // J (5e-8 eV)
    int n_quanta_min = 1;
    int n_quanta_max = 10;
    /// Cavity damping time override; unset chains it from the super-radiance lifetime.
    std::optional<double> T_r;

    /// Throws ConfigurationError on non-positive physical inputs
    /// (q_mobile and t_kink may be zero).
    void validate() const;
};

enum class EstimateMode { raw, anchored };

std::string to_string(EstimateMode mode);
EstimateMode parse_estimate_mode(const std::string& s);

/// q e d_min / ε_r(water).
double dimer_dipole(const MtParameterSet& set, const PhysicalConstants& k = codata);

double cavity_volume(const MtParameterSet& set);

/// ħω_c / ħ.
double water_mode_frequency(const MtParameterSet& set, const PhysicalConstants& k = codata);

/// (2π ħ ω_c / (ε_r ε₀ V))^½.
double vacuum_amplitude(double omega_c, double V, double eps_r, const PhysicalConstants& k = codata);

struct RabiCouplingMt {
    double lambda0 = 0.0;     // rad/s, d_dimer E_ow / ħ
    double N = 0.0;           // dimers per chain
    double lambda_MT = 0.0;   // rad/s, √N λ₀
    double hbar_lambda_mev = 0.0;
    double detuning = 0.0;    // rad/s, ω_c − ω₀(dimer)
    double detuning_ratio = 0.0;  // Δ / λ₀
    double d_dimer = 0.0;
    double E_ow = 0.0;
    double omega_c = 0.0;
};

RabiCouplingMt rabi_coupling_mt(const MtParameterSet& set, EstimateMode mode, const PhysicalConstants& k = codata);

struct EnergyScale {
    double joule = 0.0;
    double ev = 0.0;
};

/// ħ v₀ / d_min.
EnergyScale string_scale(const MtParameterSet& set, const PhysicalConstants& k = codata);

/// 16π g_s ħ / (v_d² M_s) with v_d² = E_kin / M_s.
double pumping_time(const MtParameterSet& set, const PhysicalConstants& k = codata);

/// g_s for which pumping_time(set) equals target.
double calibrate_string_coupling(const MtParameterSet& set, double target_seconds = 1e-10,
                                 const PhysicalConstants& k = codata);

/// c ħ² V / (4π d_ej² ε N_w L), ε being the water two-level gap ħω_c (J).
double superradiance_lifetime(const MtParameterSet& set, const PhysicalConstants& k = codata);

/// 2π / ω₀ with ω₀ = ħ / I.
double water_coherence_time(const MtParameterSet& set, const PhysicalConstants& k = codata);

/// ω_c T_r. Throws ConfigurationError unless both are > 0.
double quality_factor(double omega_c, double T_r);

enum class DipoleGeometry { parallel_transverse, collinear };

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// −(1/4πε) (3(η̂·d_i)(η̂·d_j) − d_i·d_j) / |r|³ for arbitrary vectors.
double dipole_dipole_energy(const Vec3& d_i, const Vec3& d_j, const Vec3& r, double eps_r,
                            const PhysicalConstants& k = codata);

/// Magnitudes d_i, d_j in a fixed geometry: +1 (transverse) or −2 (collinear) times d_i d_j / (4πε r³).
double dipole_dipole_energy(double d_i, double d_j, double r, DipoleGeometry geometry, double eps_r,
                            const PhysicalConstants& k = codata);

/// Largest r with |E_dd| >= k_B T.
double thermal_isolation_radius(double d_i, double d_j, DipoleGeometry geometry, double eps_r, double T,
                                const PhysicalConstants& k = codata);

struct DielectricValue {
    double value = 0.0;
    bool pole = false;  ///< ω² = ω_T²
};

/// ε(ω) = ε(∞) + Ω_p² / (ω_T² − ω²).
DielectricValue ferroelectric_epsilon(double omega, double Omega_p2, double omega_T2, double eps_inf);

/// √(Ω_p²/ε(∞) − |ω_T²|) when ω_T² < 0 and the radicand is positive.
/// The band 0 <= ω < ω* is opaque (ε < 0).
std::optional<double> critical_frequency(double Omega_p2, double omega_T2, double eps_inf);

struct Quantity {
    std::string name;
    double value = 0.0;
    std::string unit;
    std::optional<double> target;  ///< rounded reference value
    EstimateMode mode = EstimateMode::raw;  ///< anchored: value snapped to the target
    std::string formula;

    std::optional<double> log10_deviation() const;
};

enum class WindowStatus { exceeds, overlaps, below };

std::string to_string(WindowStatus s);

struct CollapseWindow {
    int n = 1;
    double lower = 0.0;
    double upper = 0.0;
    WindowStatus status = WindowStatus::below;
    bool holds() const { return status != WindowStatus::below; }
};

struct EstimateReport {
    EstimateMode mode = EstimateMode::anchored;
    std::vector<Quantity> quantities;
    std::vector<CollapseWindow> windows;
    double t_collapse_lower = 0.0;  ///< lower bound at the smallest n
    double t_kink = 0.0;
    bool verdict = false;
    std::optional<double> margin;  ///< log10(t_collapse_lower / t_kink)

    const Quantity& at(const std::string& name) const;
    int largest_n_holding() const;  ///< 0 if none
};

/// Relative slack in the t_collapse >= t_kink comparison.
inline constexpr double verdict_rel_tol = 1e-9;

EstimateReport feasibility_report(const MtParameterSet& set, EstimateMode mode, const PhysicalConstants& k = codata);

/// Stable key order: {mode, quantities{...}, collapse_windows[...], t_kink, verdict, margin}.
nlohmann::ordered_json report_to_json(const EstimateReport& report);

}  // namespace qcav::mt
