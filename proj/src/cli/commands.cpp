#include "qcav/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "qcav/decoherence.hpp"
#include "qcav/holography.hpp"
#include "qcav/lindblad.hpp"
#include "qcav/models.hpp"
#include "qcav/qstate.hpp"
#include "qcav/spectra.hpp"
#include "qcav/trajectories.hpp"

namespace qcav::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string dump(const OrderedJson& j) { return j.dump(2) + "\n"; }

void write_table(const CommandContext& ctx, const std::string& stem, const Table& t) {
    if (ctx.format == OutputFormat::json) {
        write_file(ctx.out_dir, stem + ".json", dump(table_to_json(t)));
    } else {
        write_file(ctx.out_dir, stem + ".csv", table_to_csv(t));
    }
}

OrderedJson number_or_null(std::optional<double> v) { return v ? OrderedJson(*v) : OrderedJson(nullptr); }

// ---- shared model / state block -------------------------------------------

struct ModelSetup {
    LindbladModel model;
    std::optional<HilbertSpaceSpec> space;
    std::size_t spin_dim = 1;
    int n_max = 1;
    std::map<std::string, ComplexMatrix> observables;
    StateVector psi0;
};

ModelSetup read_model_and_state(BlockReader& r) {
    ModelSetup m;
    std::string type;
    RabiModelParams rabi;
    PhaseDampingParams pd;
    HilbertSpaceSpec space;
    r.nested("model", [&](BlockReader& b) {
        type = b.choice("type", {"cavity_decay", "phase_damping"});
        if (type == "cavity_decay") {
            rabi.omega0 = b.quantity("omega0", Dimension::frequency);
            rabi.omega = b.quantity("omega", Dimension::frequency);
            rabi.lambda = b.quantity("lambda", Dimension::frequency);
            rabi.kappa = b.quantity("kappa", Dimension::frequency, 0.0);
            rabi.N = static_cast<int>(b.integer("N", 1, 1));
            space.n_emitters = rabi.N;
            space.boson_cutoff = static_cast<int>(b.integer("boson_cutoff", 1));
            space.sector = b.choice("sector", {"collective", "single"}, "collective") == "single"
                               ? SpinSector::single
                               : SpinSector::collective;
        } else {
            pd.omega = b.quantity("omega", Dimension::frequency, 0.0);
            pd.kappa_phi = b.quantity("kappa_phi", Dimension::frequency);
            space.boson_cutoff = static_cast<int>(b.integer("boson_cutoff", 1));
        }
    });

    if (type == "cavity_decay") {
        space.validate();
        m.model = cavity_decay_model(rabi, space);
        m.space = space;
        m.spin_dim = space.spin_dim();
        const OperatorSet ops = build_operator_set(space);
        m.observables["n"] = ops.a_dag * ops.a;
        m.observables["Sz"] = ops.Sz;
    } else {
        m.model = phase_damping_model(pd, space.boson_cutoff);
        m.observables["n"] = number_operator(space.boson_cutoff);
    }
    m.n_max = space.boson_cutoff;

    r.nested("initial_state", [&](BlockReader& b) {
        const std::string kind = b.choice("type", {"basis", "coherent"});
        const auto spin = static_cast<std::size_t>(b.integer("spin", 0, 0));
        if (spin >= m.spin_dim) {
            throw ConfigurationError("'" + b.path() + ".spin' must be < " + std::to_string(m.spin_dim));
        }
        StateVector boson;
        if (kind == "basis") {
            const auto n = b.integer("boson", 0, 0);
            if (n > m.n_max) {
                throw ConfigurationError("'" + b.path() + ".boson' exceeds the boson cutoff " +
                                         std::to_string(m.n_max));
            }
            boson = basis_state(static_cast<std::size_t>(m.n_max) + 1, static_cast<std::size_t>(n));
        } else {
            const double re = b.number("alpha_re");
            const double im = b.number("alpha_im", 0.0);
            boson = coherent_state({re, im}, m.n_max);
        }
        m.psi0 = tensor_product(basis_state(m.spin_dim, spin), boson);
    });
    return m;
}

IntegratorConfig read_integrator(BlockReader& b) {
    IntegratorConfig cfg;
    cfg.method = b.choice("method", {"rk4", "rk45"}, "rk4") == "rk45" ? IntegrationMethod::rk45 : IntegrationMethod::rk4;
    cfg.dt = b.optional_quantity("dt", Dimension::time).value_or(0.0);
    cfg.tolerance = b.number("tolerance", cfg.tolerance);
    cfg.t_final = b.quantity("t_final", Dimension::time);
    cfg.sample_every = static_cast<std::size_t>(b.integer("sample_every", 1, 1));
    cfg.validate();
    return cfg;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-15) {
            s -= p * std::log(p);
        }
    }
    return s;
}

Table observable_table(const std::vector<double>& times, const std::vector<DensityMatrix>& states,
                       const std::map<std::string, ComplexMatrix>& obs) {
    Table t;
    t.columns.push_back("time_s");
    for (const auto& [name, op] : obs) {
        t.columns.push_back(name);
    }
    t.columns.push_back("purity");
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (const auto& [name, op] : obs) {
            row.push_back(expectation(op, states[i]));
        }
        row.push_back(purity(states[i]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---- MT parameter table ----------------------------------------------------

struct MtField {
    const char* name;
    Dimension dim;
    double mt::MtParameterSet::*member;
};

constexpr MtField mt_fields[] = {
    {"L", Dimension::length, &mt::MtParameterSet::L},
    {"dimer_length", Dimension::length, &mt::MtParameterSet::dimer_length},
    {"q_mobile", Dimension::dimensionless, &mt::MtParameterSet::q_mobile},
    {"d_min", Dimension::length, &mt::MtParameterSet::d_min},
    {"eps_r_water", Dimension::dimensionless, &mt::MtParameterSet::eps_r_water},
    {"eps_r_protein", Dimension::dimensionless, &mt::MtParameterSet::eps_r_protein},
    {"V", Dimension::volume, &mt::MtParameterSet::V},
    {"hbar_omega_c", Dimension::energy, &mt::MtParameterSet::hbar_omega_c},
    {"d_ej", Dimension::dipole, &mt::MtParameterSet::d_ej},
    {"N_w", Dimension::dimensionless, &mt::MtParameterSet::N_w},
    {"I_water", Dimension::inertia, &mt::MtParameterSet::I_water},
    {"v0", Dimension::velocity, &mt::MtParameterSet::v0},
    {"omega0_dimer", Dimension::frequency, &mt::MtParameterSet::omega0_dimer},
    {"T", Dimension::temperature, &mt::MtParameterSet::T},
    {"t_kink", Dimension::time, &mt::MtParameterSet::t_kink},
    {"g_s", Dimension::dimensionless, &mt::MtParameterSet::g_s},
    {"E_kin", Dimension::energy, &mt::MtParameterSet::E_kin},
};

const MtField* find_mt_field(const std::string& name) {
    for (const auto& f : mt_fields) {
        if (name == f.name) {
            return &f;
        }
    }
    return nullptr;
}

}  // namespace

mt::MtParameterSet read_mt_parameters(BlockReader& r) {
    mt::MtParameterSet set;
    for (const auto& f : mt_fields) {
        set.*f.member = f.dim == Dimension::dimensionless ? r.number(f.name, set.*f.member)
                                                         : r.quantity(f.name, f.dim, set.*f.member);
    }
    set.n_quanta_min = static_cast<int>(r.integer("n_quanta_min", set.n_quanta_min, 1));
    set.n_quanta_max = static_cast<int>(r.integer("n_quanta_max", set.n_quanta_max, 1));
    set.T_r = r.optional_quantity("T_r", Dimension::time);
    set.validate();
    return set;
}

std::string table_to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out += (i ? "," : "") + t.columns[i];
    }
    out += '\n';
    char buf[64];
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.12g", row[i]);
            if (i) {
                out += ',';
            }
            out += buf;
        }
        out += '\n';
    }
    return out;
}

OrderedJson table_to_json(const Table& t) {
    OrderedJson j;
    j["columns"] = t.columns;
    OrderedJson rows = OrderedJson::array();
    for (const auto& row : t.rows) {
        OrderedJson r = OrderedJson::array();
        for (double v : row) {
            r.push_back(std::isfinite(v) ? OrderedJson(v) : OrderedJson(nullptr));
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

void write_file(const std::filesystem::path& out_dir, const std::string& name, const std::string& contents) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    }
    const auto path = out_dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    f << contents;
    f.close();
    if (!f) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

// ---- spectrum ---------------------------------------------------------------

void cmd_spectrum(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "spectrum");
    SpectrumParams base;
    base.omega0 = r.quantity("omega0", Dimension::frequency);
    base.omega = r.quantity("omega", Dimension::frequency);
    base.lambda = r.quantity("lambda", Dimension::frequency);
    base.gamma_plus = r.quantity("gamma_plus", Dimension::frequency);
    base.gamma_minus = r.quantity("gamma_minus", Dimension::frequency);
    base.theta = r.optional_number("theta");
    std::vector<long long> Ns;
    if (r.has("N_values")) {
        if (r.has("N")) {
            throw ConfigurationError("'spectrum.N' and 'spectrum.N_values' are mutually exclusive");
        }
        Ns = r.integer_list("N_values", 1);
    } else {
        Ns = {r.integer("N", 1, 1)};
    }
    r.nested("grid", [&](BlockReader& g) {
        base.grid.omega_min = g.quantity("omega_min", Dimension::frequency);
        base.grid.omega_max = g.quantity("omega_max", Dimension::frequency);
        base.grid.samples = static_cast<std::size_t>(g.integer("samples", 3));
    });
    r.finish();
    for (long long N : Ns) {
        SpectrumParams p = base;
        p.N = static_cast<int>(N);
        p.validate();
    }
    ctx.on_resolved(r.resolved());

    Table table{{"N", "omega", "imchi"}, {}};
    OrderedJson runs = OrderedJson::array();
    std::vector<std::pair<int, std::optional<double>>> splittings;
    for (long long N : Ns) {
        SpectrumParams p = base;
        p.N = static_cast<int>(N);
        const SpectrumResult res = compute_spectrum(p);
        for (std::size_t i = 0; i < res.omegas.size(); ++i) {
            table.rows.push_back({static_cast<double>(N), res.omegas[i], res.imchi[i]});
        }
        const double predicted_split = res.predicted.upper.position - res.predicted.lower.position;
        OrderedJson run;
        run["N"] = N;
        run["grid_step"] = p.grid.step();
        run["predicted"] = {
            {"upper", {{"position", res.predicted.upper.position}, {"weight", res.predicted.upper.weight}}},
            {"lower", {{"position", res.predicted.lower.position}, {"weight", res.predicted.lower.weight}}},
            {"splitting", predicted_split},
            {"rabi_frequency", rabi_frequency(p.lambda, p.N)},
        };
        run["dispersive"] = {
            {"valid", res.predicted.dispersive_valid},
            {"shift", res.predicted.dispersive_shift},
            {"emitter_peak", number_or_null(res.predicted.dispersive_emitter)},
            {"cavity_peak", number_or_null(res.predicted.dispersive_cavity)},
        };
        OrderedJson found = OrderedJson::array();
        for (const auto& pk : res.peaks) {
            found.push_back({{"position", pk.position}, {"height", pk.height}, {"width", pk.width}});
        }
        run["found"] = std::move(found);
        std::optional<double> found_split;
        if (res.peaks.size() == 2) {
            found_split = res.peaks[1].position - res.peaks[0].position;
        }
        run["found_splitting"] = number_or_null(found_split);
        run["splitting_within_grid_step"] =
            found_split ? OrderedJson(std::abs(*found_split - predicted_split) <= p.grid.step()) : OrderedJson(nullptr);
        run["single_peak"] = res.peaks.size() == 1;
        run["unresolved"] = res.unresolved;
        runs.push_back(std::move(run));
        splittings.emplace_back(p.N, found_split);
    }

    OrderedJson report;
    report["runs"] = std::move(runs);
    OrderedJson check = nullptr;
    if (splittings.size() > 1 && splittings.front().second) {
        check = OrderedJson::array();
        const auto [N_ref, s_ref] = splittings.front();
        for (const auto& [N, s] : splittings) {
            const double expected = std::sqrt(static_cast<double>(N) / N_ref);
            check.push_back({{"N", N},
                             {"ratio", s ? OrderedJson(*s / *s_ref) : OrderedJson(nullptr)},
                             {"expected_sqrt_ratio", expected}});
        }
    }
    report["sqrt_n_check"] = std::move(check);
    write_table(ctx, "spectrum", table);
    write_file(ctx.out_dir, "peaks.json", dump(report));
}

// ---- evolve -------------------------------------------------------------------

void cmd_evolve(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "evolve");
    ModelSetup m = read_model_and_state(r);
    IntegratorConfig cfg;
    r.nested("integrator", [&](BlockReader& b) { cfg = read_integrator(b); });
    r.finish();
    ctx.on_resolved(r.resolved());

    const EvolutionRecord rec = evolve(m.model, pure_density(m.psi0), cfg);
    write_table(ctx, "observables", observable_table(rec.times, rec.states, m.observables));
    Table ent{{"time_s", "von_neumann_entropy"}, {}};
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        ent.rows.push_back({rec.times[i], von_neumann_entropy(rec.states[i])});
    }
    write_table(ctx, "entropy", ent);

    const DensityDiagnostics diag = validate_density_matrix(rec.states.back(), 1.0);
    OrderedJson s;
    s["steps_taken"] = rec.steps_taken;
    s["steps_rejected"] = rec.steps_rejected;
    s["renormalizations"] = rec.renormalizations;
    s["max_boson_tail"] = rec.max_boson_tail;
    s["warnings"] = rec.warnings;
    s["final"] = {{"time_s", rec.times.back()},
                  {"trace_defect", diag.trace_defect},
                  {"hermiticity_defect", diag.hermiticity_defect},
                  {"min_eigenvalue", diag.min_eigenvalue},
                  {"purity", purity(rec.states.back())}};
    write_file(ctx.out_dir, "summary.json", dump(s));
}

// ---- trajectories --------------------------------------------------------------

void cmd_trajectories(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "trajectories");
    ModelSetup m = read_model_and_state(r);
    ItoConfig cfg;
    r.nested("ito", [&](BlockReader& b) {
        cfg.dt = b.quantity("dt", Dimension::time);
        cfg.steps = static_cast<std::size_t>(b.integer("steps", 1));
        cfg.ensemble_size = static_cast<std::size_t>(b.integer("ensemble_size", 1));
        cfg.record_every = static_cast<std::size_t>(b.integer("record_every", 1, 1));
        cfg.workers = static_cast<unsigned>(b.integer("workers", 0, 0));
    });
    const std::string channels = r.choice("channels", {"auto", "basis", "boson_number"}, "auto");
    const bool cross_check = r.boolean("cross_check", false);
    r.finish();
    cfg.base_seed = ctx.seed;
    cfg.validate();
    if (channels == "boson_number" && !m.space) {
        throw ConfigurationError("'trajectories.channels' = boson_number needs a spin-boson model");
    }
    ctx.on_resolved(r.resolved());

    const ChannelProjectors proj = (channels == "basis" || (channels == "auto" && !m.space))
                                       ? ChannelProjectors::basis_channels(m.model.dim())
                                       : ChannelProjectors::boson_number_channels(*m.space);
    const EnsembleResult res = run_ensemble(m.model, m.psi0, cfg, proj);

    write_table(ctx, "observables", observable_table(res.times, res.mean_rho, m.observables));
    Table ent{{"time_s", "entropy_mean", "entropy_median", "entropy_stddev"}, {}};
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        ent.rows.push_back({res.times[i], res.entropy_mean[i], res.entropy_median[i], res.entropy_stddev[i]});
    }
    write_table(ctx, "entropy", ent);

    OrderedJson s;
    s["ensemble_size"] = cfg.ensemble_size;
    s["succeeded"] = res.succeeded;
    OrderedJson failures = OrderedJson::array();
    for (const auto& f : res.failures) {
        failures.push_back({{"index", f.index}, {"message", f.message}});
    }
    s["failures"] = std::move(failures);
    OrderedJson cc = nullptr;
    if (cross_check) {
        IntegratorConfig ic;
        ic.method = IntegrationMethod::rk4;
        ic.dt = cfg.dt;
        ic.t_final = cfg.dt * static_cast<double>(cfg.steps);
        ic.sample_every = cfg.record_every;
        const EvolutionRecord rec = evolve(m.model, pure_density(m.psi0), ic);
        OrderedJson dists = OrderedJson::array();
        double worst = 0.0;
        for (std::size_t i = 0; i < res.times.size(); ++i) {
            const auto it = std::min_element(rec.times.begin(), rec.times.end(), [&](double a, double b) {
                return std::abs(a - res.times[i]) < std::abs(b - res.times[i]);
            });
            const double d = trace_distance(res.mean_rho[i], rec.states[static_cast<std::size_t>(it - rec.times.begin())]);
            worst = std::max(worst, d);
            dists.push_back({{"time_s", res.times[i]}, {"trace_distance", d}});
        }
        cc = {{"max_trace_distance", worst}, {"samples", std::move(dists)}};
    }
    s["cross_check"] = std::move(cc);
    write_file(ctx.out_dir, "summary.json", dump(s));
}

// ---- cat -----------------------------------------------------------------------

void cmd_cat(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "cat");
    const double T_r = r.quantity("T_r", Dimension::time);
    const bool simulate = r.boolean("simulate", false);
    const double window = r.number("fit_window", 0.02);
    const int cutoff = static_cast<int>(r.integer("boson_cutoff", 0, 0));
    std::vector<std::pair<double, double>> cases;
    r.nested_list("cases", [&](BlockReader& c) {
        const double n = c.number("n");
        const double phi = c.number("phi");
        if (!(n >= 0.0)) {
            throw ConfigurationError("'" + c.path() + ".n' must be >= 0");
        }
        cases.emplace_back(n, phi);
    });
    r.finish();
    if (!(T_r > 0.0)) {
        throw ConfigurationError("'cat.T_r' must be > 0");
    }
    if (!(window > 0.0)) {
        throw ConfigurationError("'cat.fit_window' must be > 0");
    }
    ctx.on_resolved(r.resolved());

    Table t{{"n", "phi", "D", "D2", "t_collapse_s", "predicted_rate_per_s", "fitted_rate_per_s", "r_squared"}, {}};
    for (const auto& [n, phi] : cases) {
        const double D = pointer_distance(n, phi).exact;
        const CollapseTime ct = collapse_time(T_r, D);
        const double t_c = ct.infinite ? std::numeric_limits<double>::infinity() : ct.seconds;
        double fitted = nan;
        double r2 = nan;
        if (simulate) {
            const CatDecay cd = simulate_cat_decay(n, phi, T_r, window, cutoff);
            fitted = cd.fit.rate;
            r2 = cd.fit.r_squared;
        }
        t.rows.push_back({n, phi, D, D * D, t_c, D * D / (2.0 * T_r), fitted, r2});
    }
    write_table(ctx, "collapse", t);
}

// ---- estimate / sweep ------------------------------------------------------------

void cmd_estimate(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "estimate");
    const auto mode = mt::parse_estimate_mode(r.choice("mode", {"raw", "anchored"}, "anchored"));
    mt::MtParameterSet set;
    r.nested("parameters", [&](BlockReader& b) { set = read_mt_parameters(b); }, false);
    r.finish();
    ctx.on_resolved(r.resolved());
    write_file(ctx.out_dir, "estimate_report.json", dump(mt::report_to_json(mt::feasibility_report(set, mode))));
}

void cmd_sweep(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "sweep");
    const auto mode = mt::parse_estimate_mode(r.choice("mode", {"raw", "anchored"}, "anchored"));
    std::vector<std::string> names{"T_r"};
    for (const auto& f : mt_fields) {
        names.emplace_back(f.name);
    }
    const std::string param = r.choice("parameter", names);
    const MtField* field = find_mt_field(param);
    const Dimension dim = field ? field->dim : Dimension::time;
    const std::vector<double> values = r.quantity_list("values", dim);
    if (values.empty()) {
        throw ConfigurationError("'sweep.values' must not be empty");
    }
    const std::vector<std::string> quantities = r.has("quantities") ? r.string_list("quantities") : std::vector<std::string>{};
    mt::MtParameterSet base;
    r.nested("parameters", [&](BlockReader& b) { base = read_mt_parameters(b); }, false);
    r.finish();

    auto with_value = [&](double v) {
        mt::MtParameterSet s = base;
        if (field) {
            s.*field->member = v;
        } else {
            s.T_r = v;
        }
        return s;
    };
    const mt::EstimateReport probe = mt::feasibility_report(with_value(values.front()), mode);
    for (const auto& q : quantities) {
        try {
            (void)probe.at(q);
        } catch (const ConfigurationError&) {
            throw ConfigurationError("'sweep.quantities': unknown report quantity '" + q + "'");
        }
    }
    ctx.on_resolved(r.resolved());

    const std::string unit = canonical_unit(dim);
    Table t;
    t.columns.push_back(unit.empty() ? param : param + " [" + unit + "]");
    t.columns.emplace_back("verdict");
    t.columns.emplace_back("margin");
    t.columns.emplace_back("largest_n_holding");
    for (const auto& q : quantities) {
        t.columns.push_back(q);
    }
    for (double v : values) {
        const mt::EstimateReport rep = mt::feasibility_report(with_value(v), mode);
        std::vector<double> row{v, rep.verdict ? 1.0 : 0.0, rep.margin.value_or(nan),
                                static_cast<double>(rep.largest_n_holding())};
        for (const auto& q : quantities) {
            row.push_back(rep.at(q).value);
        }
        t.rows.push_back(std::move(row));
    }
    write_table(ctx, "sweep", t);
}

// ---- hologram ----------------------------------------------------------------------

namespace {

Eigen::Vector3d read_position(BlockReader& b, const std::string& key) {
    const std::vector<double> v = b.quantity_list(key, Dimension::length);
    if (v.size() != 3) {
        throw ConfigurationError("'" + b.path() + "." + key + "' must have three components");
    }
    return {v[0], v[1], v[2]};
}

}  // namespace

void cmd_hologram(const Json& block, const CommandContext& ctx) {
    BlockReader r(block, "hologram");
    HoloScene scene;
    if (r.has("k") == r.has("wavelength")) {
        throw ConfigurationError("'hologram' needs exactly one of 'k' or 'wavelength'");
    }
    if (r.has("k")) {
        scene.k = r.quantity("k", Dimension::inverse_length);
    } else {
        const double lambda = r.quantity("wavelength", Dimension::length);
        if (!(lambda > 0.0)) {
            throw ConfigurationError("'hologram.wavelength' must be > 0");
        }
        scene.k = 2.0 * std::numbers::pi / lambda;
    }
    scene.source = read_position(r, "source");
    r.nested_list(
        "scatterers",
        [&](BlockReader& b) {
            Scatterer s;
            s.position = read_position(b, "position");
            s.f = {b.number("f_re"), b.number("f_im", 0.0)};
            scene.scatterers.push_back(s);
        },
        false);
    r.nested("detector", [&](BlockReader& b) {
        scene.detector_distance = b.quantity("distance", Dimension::length);
        scene.extent = b.quantity("extent", Dimension::length);
        scene.nx = static_cast<int>(b.integer("nx", 1));
        scene.ny = static_cast<int>(b.integer("ny", scene.nx, 1));
    });
    std::optional<WavelengthEcho> echo;
    if (r.has("wavelength_echo")) {
        r.nested("wavelength_echo", [&](BlockReader& b) {
            const double v = b.quantity("phase_velocity", Dimension::velocity);
            const double w = b.quantity("omega", Dimension::frequency);
            const double spacing = b.quantity("spacing", Dimension::length, 4e-9);
            echo = wavelength_echo(v, w, spacing);
        });
    }
    r.finish();
    scene.validate();
    ctx.on_resolved(r.resolved());

    const Eigen::MatrixXd grid = far_field_intensity(scene);
    if (ctx.format == OutputFormat::json) {
        Table t{{"iy", "ix", "x_m", "y_m", "intensity"}, {}};
        for (int iy = 0; iy < scene.ny; ++iy) {
            for (int ix = 0; ix < scene.nx; ++ix) {
                const Eigen::Vector3d p = scene.pixel(ix, iy);
                t.rows.push_back({double(iy), double(ix), p.x(), p.y(), grid(iy, ix)});
            }
        }
        write_file(ctx.out_dir, "intensity.json", dump(table_to_json(t)));
    } else {
        std::ostringstream csv;
        write_intensity_csv(csv, scene, grid);
        write_file(ctx.out_dir, "intensity.csv", csv.str());
    }
    std::ostringstream svg;
    write_intensity_svg(svg, grid);
    write_file(ctx.out_dir, "hologram.svg", svg.str());

    OrderedJson s;
    s["contrast"] = fringe_contrast(grid);
    s["intensity_min"] = grid.minCoeff();
    s["intensity_max"] = grid.maxCoeff();
    OrderedJson period = nullptr;
    if (scene.scatterers.size() == 1) {
        const Eigen::Vector3d d = scene.scatterers[0].position - scene.source;
        const double transverse = std::hypot(d.x(), d.y());
        if (transverse > 0.0) {
            period = two_source_fringe_period(scene.k, transverse, scene.detector_distance);
        }
    }
    s["predicted_fringe_period_m"] = std::move(period);
    s["wavelength_echo"] =
        echo ? OrderedJson{{"wavelength_m", echo->wavelength}, {"spacing_m", echo->spacing}, {"ratio", echo->ratio}}
             : OrderedJson(nullptr);
    write_file(ctx.out_dir, "summary.json", dump(s));
}

const std::vector<std::pair<std::string, CommandFn>>& command_table() {
    static const std::vector<std::pair<std::string, CommandFn>> table{
        {"spectrum", &cmd_spectrum}, {"evolve", &cmd_evolve}, {"trajectories", &cmd_trajectories},
        {"cat", &cmd_cat},           {"estimate", &cmd_estimate}, {"hologram", &cmd_hologram},
        {"sweep", &cmd_sweep},
    };
    return table;
}

}  // namespace qcav::cli
