#include "qcav/mtparams.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <numbers>

#include "qcav/decoherence.hpp"
#include "qcav/errors.hpp"

namespace qcav::mt {

double ev_to_joule(double ev) { return ev * codata.e_charge; }
double joule_to_ev(double j) { return j / codata.e_charge; }
double mev_to_joule(double mev) { return mev * 1e-3 * codata.e_charge; }
double joule_to_mev(double j) { return j / codata.e_charge * 1e3; }

void MtParameterSet::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigurationError(std::string("MT parameter '") + name + "' must be > 0");
        }
    };
    auto non_negative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigurationError(std::string("MT parameter '") + name + "' must be >= 0");
        }
    };
    positive(L, "L");
    positive(dimer_length, "dimer_length");
    non_negative(q_mobile, "q_mobile");
    positive(d_min, "d_min");
    positive(eps_r_water, "eps_r_water");
    positive(eps_r_protein, "eps_r_protein");
    positive(V, "V");
    positive(hbar_omega_c, "hbar_omega_c");
    positive(d_ej, "d_ej");
    positive(N_w, "N_w");
    positive(I_water, "I_water");
    positive(v0, "v0");
    positive(omega0_dimer, "omega0_dimer");
    positive(T, "T");
    non_negative(t_kink, "t_kink");
    positive(g_s, "g_s");
    positive(E_kin, "E_kin");
    if (n_quanta_min < 1 || n_quanta_max < n_quanta_min) {
        throw ConfigurationError("MT parameter n_quanta range must satisfy 1 <= min <= max");
    }
    if (T_r) {
        positive(*T_r, "T_r");
    }
}

std::string to_string(EstimateMode mode) { return mode == EstimateMode::raw ? "raw" : "anchored"; }

EstimateMode parse_estimate_mode(const std::string& s) {
    if (s == "raw") {
        return EstimateMode::raw;
    }
    if (s == "anchored") {
        return EstimateMode::anchored;
    }
    throw ConfigurationError("estimate mode must be 'raw' or 'anchored', got '" + s + "'");
}

double dimer_dipole(const MtParameterSet& set, const PhysicalConstants& k) {
    return set.q_mobile * k.e_charge * set.d_min / set.eps_r_water;
}

double cavity_volume(const MtParameterSet& set) { return set.V; }

double water_mode_frequency(const MtParameterSet& set, const PhysicalConstants& k) {
    return set.hbar_omega_c / k.hbar;
}

double vacuum_amplitude(double omega_c, double V, double eps_r, const PhysicalConstants& k) {
    if (!(omega_c > 0.0) || !(V > 0.0) || !(eps_r > 0.0)) {
        throw ConfigurationError("vacuum amplitude needs omega_c, V, eps_r > 0");
    }
    return std::sqrt(2.0 * std::numbers::pi * k.hbar * omega_c / (eps_r * k.eps0 * V));
}

namespace {

// Rounded reference values the anchored mode snaps to.
struct Anchors {
    static constexpr double d_dimer = 3e-28;
    static constexpr double V = 5e-22;
    static constexpr double omega_c = 6e12;
    static constexpr double E_ow = 1e4;
    static constexpr double N = 100.0;
    static constexpr double lambda_MT = 3e11;
    static constexpr double hbar_lambda_mev = 0.1;
    static constexpr double M_s_ev = 1.5e-4;
    static constexpr double pumping = 1e-10;
    static constexpr double t_superradiance = 1e-4;
    static constexpr double t_water = 1e-14;
    static constexpr double T_r = 1e-4;
    static constexpr double Q = 1e8;
    static constexpr double collapse_lower = 1e-7;
    static constexpr double collapse_upper = 1e-6;
    static constexpr double t_kink = 5e-7;
};

}  // namespace

RabiCouplingMt rabi_coupling_mt(const MtParameterSet& set, EstimateMode mode, const PhysicalConstants& k) {
    set.validate();
    const bool anchored = mode == EstimateMode::anchored;
    RabiCouplingMt r;
    r.d_dimer = anchored ? Anchors::d_dimer : dimer_dipole(set, k);
    r.omega_c = anchored ? Anchors::omega_c : water_mode_frequency(set, k);
    r.E_ow = anchored ? Anchors::E_ow : vacuum_amplitude(water_mode_frequency(set, k), set.V, set.eps_r_water, k);
    r.N = anchored ? Anchors::N : std::round(set.L / set.dimer_length);
    r.lambda0 = r.d_dimer * r.E_ow / k.hbar;
    r.lambda_MT = std::sqrt(r.N) * r.lambda0;
    r.hbar_lambda_mev = joule_to_mev(k.hbar * r.lambda_MT);
    r.detuning = r.omega_c - set.omega0_dimer;
    r.detuning_ratio = r.detuning / r.lambda0;
    return r;
}

EnergyScale string_scale(const MtParameterSet& set, const PhysicalConstants& k) {
    if (!(set.v0 > 0.0) || !(set.d_min > 0.0)) {
        throw ConfigurationError("string scale needs v0, d_min > 0");
    }
    const double j = k.hbar * set.v0 / set.d_min;
    return {j, j / k.e_charge};
}

namespace {

double pumping_time_with(double g_s, double E_kin, double M_s, const PhysicalConstants& k) {
    const double vd2 = E_kin / M_s;
    return 16.0 * std::numbers::pi * g_s * k.hbar / (vd2 * M_s);
}

}  // namespace

double pumping_time(const MtParameterSet& set, const PhysicalConstants& k) {
    if (!(set.g_s > 0.0)) {
        throw ConfigurationError("pumping time needs g_s > 0");
    }
    return pumping_time_with(set.g_s, set.E_kin, string_scale(set, k).joule, k);
}

double calibrate_string_coupling(const MtParameterSet& set, double target_seconds, const PhysicalConstants& k) {
    const double unit = pumping_time_with(1.0, set.E_kin, string_scale(set, k).joule, k);
    return target_seconds / unit;
}

double superradiance_lifetime(const MtParameterSet& set, const PhysicalConstants& k) {
    return k.c * k.hbar * k.hbar * set.V /
           (4.0 * std::numbers::pi * set.d_ej * set.d_ej * set.hbar_omega_c * set.N_w * set.L);
}

double water_coherence_time(const MtParameterSet& set, const PhysicalConstants& k) {
    const double omega0 = k.hbar / set.I_water;
    return 2.0 * std::numbers::pi / omega0;
}

double quality_factor(double omega_c, double T_r) {
    if (!(omega_c > 0.0) || !(T_r > 0.0)) {
        throw ConfigurationError("quality factor needs omega_c > 0 and T_r > 0");
    }
    return omega_c * T_r;
}

double dipole_dipole_energy(const Vec3& d_i, const Vec3& d_j, const Vec3& r, double eps_r,
                            const PhysicalConstants& k) {
    const double dist = std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z);
    if (!(dist > 0.0)) {
        throw ConfigurationError("dipole-dipole separation must be > 0");
    }
    const Vec3 eta{r.x / dist, r.y / dist, r.z / dist};
    auto dot = [](const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; };
    const double angular = 3.0 * dot(eta, d_i) * dot(eta, d_j) - dot(d_i, d_j);
    return -angular / (4.0 * std::numbers::pi * eps_r * k.eps0 * dist * dist * dist);
}

namespace {

double geometry_factor(DipoleGeometry g) { return g == DipoleGeometry::parallel_transverse ? 1.0 : -2.0; }

}  // namespace

double dipole_dipole_energy(double d_i, double d_j, double r, DipoleGeometry geometry, double eps_r,
                            const PhysicalConstants& k) {
    if (!(r > 0.0)) {
        throw ConfigurationError("dipole-dipole separation must be > 0");
    }
    return geometry_factor(geometry) * d_i * d_j / (4.0 * std::numbers::pi * eps_r * k.eps0 * r * r * r);
}

double thermal_isolation_radius(double d_i, double d_j, DipoleGeometry geometry, double eps_r, double T,
                                const PhysicalConstants& k) {
    if (!(T > 0.0)) {
        throw ConfigurationError("thermal isolation radius needs T > 0");
    }
    const double strength = std::abs(geometry_factor(geometry) * d_i * d_j) / (4.0 * std::numbers::pi * eps_r * k.eps0);
    return std::cbrt(strength / (k.k_B * T));
}

DielectricValue ferroelectric_epsilon(double omega, double Omega_p2, double omega_T2, double eps_inf) {
    if (!(eps_inf > 0.0)) {
        throw ConfigurationError("eps_inf must be > 0");
    }
    const double denom = omega_T2 - omega * omega;
    if (denom == 0.0) {
        return {std::numeric_limits<double>::quiet_NaN(), true};
    }
    return {eps_inf + Omega_p2 / denom, false};
}

std::optional<double> critical_frequency(double Omega_p2, double omega_T2, double eps_inf) {
    if (!(eps_inf > 0.0)) {
        throw ConfigurationError("eps_inf must be > 0");
    }
    if (!(omega_T2 < 0.0)) {
        return std::nullopt;
    }
    const double radicand = Omega_p2 / eps_inf - std::abs(omega_T2);
    if (!(radicand > 0.0)) {
        return std::nullopt;
    }
    return std::sqrt(radicand);
}

std::optional<double> Quantity::log10_deviation() const {
    if (!target || !(*target > 0.0) || !(value > 0.0)) {
        return std::nullopt;
    }
    return std::log10(value / *target);
}

std::string to_string(WindowStatus s) {
    switch (s) {
        case WindowStatus::exceeds:
            return "exceeds";
        case WindowStatus::overlaps:
            return "overlaps";
        case WindowStatus::below:
            break;
    }
    return "below";
}

const Quantity& EstimateReport::at(const std::string& name) const {
    for (const auto& q : quantities) {
        if (q.name == name) {
            return q;
        }
    }
    throw ConfigurationError("report has no quantity '" + name + "'");
}

int EstimateReport::largest_n_holding() const {
    int best = 0;
    for (const auto& w : windows) {
        if (w.holds()) {
            best = std::max(best, w.n);
        }
    }
    return best;
}

EstimateReport feasibility_report(const MtParameterSet& set, EstimateMode mode, const PhysicalConstants& k) {
    set.validate();
    const bool anchored = mode == EstimateMode::anchored;
    const EstimateMode snapped = anchored ? EstimateMode::anchored : EstimateMode::raw;

    EstimateReport rep;
    rep.mode = mode;
    auto add = [&](std::string name, double value, std::string unit, std::optional<double> target, EstimateMode m,
                   std::string formula) {
        rep.quantities.push_back({std::move(name), value, std::move(unit), target, m, std::move(formula)});
    };

    const RabiCouplingMt rc = rabi_coupling_mt(set, mode, k);
    add("d_dimer", rc.d_dimer, "C*m", Anchors::d_dimer, snapped, "q*e*d_min/eps_r_water");
    add("V", cavity_volume(set), "m3", Anchors::V, EstimateMode::raw, "configured cavity volume");
    add("omega_c", rc.omega_c, "rad/s", Anchors::omega_c, snapped, "hbar_omega_c/hbar");
    add("E_ow", rc.E_ow, "V/m", Anchors::E_ow, snapped, "sqrt(2*pi*hbar*omega_c/(eps_r_water*eps0*V))");
    add("N_dimers", rc.N, "1", Anchors::N, snapped, "L/dimer_length");
    add("lambda0", rc.lambda0, "rad/s", std::nullopt, EstimateMode::raw, "d_dimer*E_ow/hbar");
    add("lambda_MT", rc.lambda_MT, "rad/s", Anchors::lambda_MT, EstimateMode::raw, "sqrt(N_dimers)*lambda0");
    add("hbar_lambda_MT", rc.hbar_lambda_mev, "meV", Anchors::hbar_lambda_mev, EstimateMode::raw, "hbar*lambda_MT");
    add("detuning", rc.detuning, "rad/s", std::nullopt, EstimateMode::raw, "omega_c - omega0_dimer");
    add("detuning_ratio", rc.detuning_ratio, "1", std::nullopt, EstimateMode::raw, "detuning/lambda0");

    const EnergyScale ms = string_scale(set, k);
    const double ms_ev = anchored ? Anchors::M_s_ev : ms.ev;
    add("M_s", ms_ev, "eV", Anchors::M_s_ev, snapped, "hbar*v0/d_min");
    add("E_kin_over_M_s", joule_to_ev(set.E_kin) / ms_ev, "1", std::nullopt, EstimateMode::raw, "E_kin/M_s");
    add("pumping_time", pumping_time_with(set.g_s, set.E_kin, ev_to_joule(ms_ev), k), "s", Anchors::pumping,
        EstimateMode::raw, "16*pi*g_s*hbar/(v_d^2*M_s), v_d^2 = E_kin/M_s");
    add("g_s", set.g_s, "1", std::nullopt, EstimateMode::raw, "calibration constant");

    const double t_sr = anchored ? Anchors::t_superradiance : superradiance_lifetime(set, k);
    add("t_superradiance", t_sr, "s", Anchors::t_superradiance, snapped,
        "c*hbar^2*V/(4*pi*d_ej^2*hbar_omega_c*N_w*L)");
    add("t_water_coherence", water_coherence_time(set, k), "s", Anchors::t_water, EstimateMode::raw,
        "2*pi/omega0, omega0 = hbar/I_water");

    const double T_r = set.T_r ? *set.T_r : t_sr;
    add("T_r", T_r, "s", Anchors::T_r, set.T_r ? EstimateMode::raw : snapped,
        set.T_r ? "configured override" : "t_superradiance");
    add("Q", quality_factor(rc.omega_c, T_r), "1", Anchors::Q, EstimateMode::raw, "omega_c*T_r");

    const int N_sys = static_cast<int>(rc.N);
    for (int n = set.n_quanta_min; n <= set.n_quanta_max; ++n) {
        const MtCollapse mc = mt_collapse_time(T_r, n, N_sys, rc.lambda0, 0.0, rc.detuning, CollapseMode::bounds);
        CollapseWindow w;
        w.n = n;
        w.lower = mc.lower;
        w.upper = mc.upper;
        const double threshold = set.t_kink * (1.0 - verdict_rel_tol);
        if (w.lower >= threshold) {
            w.status = WindowStatus::exceeds;
        } else if (w.upper >= threshold) {
            w.status = WindowStatus::overlaps;
        } else {
            w.status = WindowStatus::below;
        }
        rep.windows.push_back(w);
    }
    add("collapse_lower", rep.windows.back().lower, "s", Anchors::collapse_lower, EstimateMode::raw,
        "T_r/(2*n_max*N_dimers)");
    add("collapse_upper", rep.windows.front().upper, "s", Anchors::collapse_upper, EstimateMode::raw,
        "T_r/(n_min*N_dimers)");
    add("t_kink", set.t_kink, "s", Anchors::t_kink, EstimateMode::raw, "configured kink transfer time");

    const double water_dipole = set.d_ej;
    add("thermal_isolation_radius",
        thermal_isolation_radius(water_dipole, rc.d_dimer, DipoleGeometry::parallel_transverse, set.eps_r_protein,
                                 set.T, k),
        "m", std::nullopt, EstimateMode::raw, "(d_ej*d_dimer/(4*pi*eps_r_protein*eps0*k_B*T))^(1/3)");

    rep.t_collapse_lower = rep.windows.front().lower;
    rep.t_kink = set.t_kink;
    rep.verdict = set.t_kink == 0.0 || rep.t_collapse_lower >= set.t_kink * (1.0 - verdict_rel_tol);
    if (set.t_kink > 0.0) {
        rep.margin = std::log10(rep.t_collapse_lower / set.t_kink);
    }
    return rep;
}

nlohmann::ordered_json report_to_json(const EstimateReport& report) {
    nlohmann::ordered_json j;
    j["mode"] = to_string(report.mode);
    nlohmann::ordered_json qs = nlohmann::ordered_json::object();
    for (const auto& q : report.quantities) {
        nlohmann::ordered_json e;
        e["value_si"] = q.value;
        e["unit"] = q.unit;
        e["paper_target"] = q.target ? nlohmann::ordered_json(*q.target) : nlohmann::ordered_json(nullptr);
        const auto dev = q.log10_deviation();
        e["log10_dev"] = dev ? nlohmann::ordered_json(*dev) : nlohmann::ordered_json(nullptr);
        e["mode"] = to_string(q.mode);
        e["formula_anchor"] = q.formula;
        qs[q.name] = std::move(e);
    }
    j["quantities"] = std::move(qs);
    nlohmann::ordered_json windows = nlohmann::ordered_json::array();
    for (const auto& w : report.windows) {
        nlohmann::ordered_json e;
        e["n"] = w.n;
        e["lower_s"] = w.lower;
        e["upper_s"] = w.upper;
        e["status"] = to_string(w.status);
        windows.push_back(std::move(e));
    }
    j["collapse_windows"] = std::move(windows);
    j["largest_n_holding"] = report.largest_n_holding();
    j["t_kink"] = report.t_kink;
    j["verdict"] = report.verdict;
    j["margin"] = report.margin ? nlohmann::ordered_json(*report.margin) : nlohmann::ordered_json(nullptr);
    return j;
}

}  // namespace qcav::mt
