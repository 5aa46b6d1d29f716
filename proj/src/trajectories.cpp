#include "qcav/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "qcav/errors.hpp"

namespace qcav {

void ItoConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigurationError("ito dt must be > 0");
    }
    if (steps == 0) {
        throw ConfigurationError("ito steps must be >= 1");
    }
    if (ensemble_size == 0) {
        throw ConfigurationError("ensemble_size must be >= 1");
    }
    if (record_every == 0) {
        throw ConfigurationError("record_every must be >= 1");
    }
}

ChannelProjectors::ChannelProjectors(std::vector<ComplexMatrix> projectors) : projectors_(std::move(projectors)) {
    constexpr double tol = 1e-10;
    if (projectors_.empty()) {
        throw ModelError("channel projector list is empty");
    }
    const auto d = projectors_.front().rows();
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < projectors_.size(); ++k) {
        const auto& p = projectors_[k];
        if (p.rows() != d || p.cols() != d) {
            throw ModelError("projector " + std::to_string(k) + " has the wrong shape");
        }
        if (hermiticity_defect(p) > tol) {
            throw ModelError("projector " + std::to_string(k) + " is not Hermitian");
        }
        if ((p * p - p).cwiseAbs().maxCoeff() > tol) {
            throw ModelError("projector " + std::to_string(k) + " is not idempotent");
        }
        for (std::size_t l = 0; l < k; ++l) {
            if ((p * projectors_[l]).cwiseAbs().maxCoeff() > tol) {
                throw ModelError("projectors " + std::to_string(l) + " and " + std::to_string(k) +
                                 " are not orthogonal");
            }
        }
        total += p;
    }
    if ((total - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
        throw ModelError("projectors do not resolve the identity");
    }
}

std::size_t ChannelProjectors::dim() const { return static_cast<std::size_t>(projectors_.front().rows()); }

ChannelProjectors ChannelProjectors::basis_channels(std::size_t dim) {
    std::vector<ComplexMatrix> ps;
    ps.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const StateVector e = basis_state(dim, k);
        ps.push_back(e * e.adjoint());
    }
    return ChannelProjectors(std::move(ps));
}

ChannelProjectors ChannelProjectors::boson_number_channels(const HilbertSpaceSpec& space) {
    space.validate();
    const auto d = static_cast<Eigen::Index>(space.dim());
    std::vector<ComplexMatrix> ps;
    for (std::size_t n = 0; n < space.boson_dim(); ++n) {
        ComplexMatrix p = ComplexMatrix::Zero(d, d);
        for (std::size_t s = 0; s < space.spin_dim(); ++s) {
            const auto i = static_cast<Eigen::Index>(space.index(s, n));
            p(i, i) = 1.0;
        }
        ps.push_back(std::move(p));
    }
    return ChannelProjectors(std::move(ps));
}

ItoStepper::ItoStepper(const LindbladModel& model) : h_(model.hamiltonian()) {
    for (const auto& j : model.jumps()) {
        if (j.rate == 0.0) {
            continue;
        }
        ComplexMatrix b = std::sqrt(2.0 * j.rate) * j.op;
        ComplexMatrix bdb = b.adjoint() * b;
        max_rate_ = std::max(max_rate_, bdb.cwiseAbs().rowwise().sum().maxCoeff());
        b_.push_back(std::move(b));
        bdb_.push_back(std::move(bdb));
    }
    drift_.resize(h_.rows());
    work_.resize(h_.rows());
}

double ItoStepper::step(StateVector& psi, std::span<const Complex> noise, double dt, std::size_t step_index) const {
    if (psi.size() != h_.rows()) {
        throw ShapeError("state dimension does not match the model");
    }
    if (noise.size() != b_.size()) {
        throw ShapeError("expected " + std::to_string(b_.size()) + " noise increments, got " +
                         std::to_string(noise.size()));
    }
    drift_.noalias() = Complex(0.0, -dt) * (h_ * psi);
    StateVector update = drift_;
    for (std::size_t m = 0; m < b_.size(); ++m) {
        work_.noalias() = b_[m] * psi;
        const Complex mean_b = psi.dot(work_);
        const Complex mean_bd = std::conj(mean_b);
        // drift: ⟨B†⟩Bψ − ½B†Bψ − ½⟨B†⟩⟨B⟩ψ
        update += (dt * mean_bd) * work_;
        update.noalias() -= (0.5 * dt) * (bdb_[m] * psi);
        update -= (0.5 * dt * std::norm(mean_b)) * psi;
        // noise: (B − ⟨B⟩)ψ dξ
        update += noise[m] * (work_ - mean_b * psi);
    }
    psi += update;
    const double norm = psi.norm();
    if (!(norm >= ito_norm_floor) || !std::isfinite(norm)) {
        std::ostringstream msg;
        msg << "state norm collapsed to " << norm << " at step " << step_index;
        throw NumericalError(msg.str());
    }
    psi /= norm;
    return norm;
}

ItoStepResult ito_step(const StateVector& psi, const LindbladModel& model, std::span<const Complex> noise, double dt,
                       std::size_t step_index) {
    const ItoStepper stepper(model);
    ItoStepResult out{psi, 1.0};
    out.renormalization = stepper.step(out.psi, noise, dt, step_index);
    return out;
}

Complex wiener_increment(std::mt19937_64& rng, double dt) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * dt));
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re, im};
}

std::mt19937_64 trajectory_rng(std::uint64_t base_seed, std::size_t index) {
    const auto idx = static_cast<std::uint64_t>(index);
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    return std::mt19937_64(seq);
}

namespace {

constexpr double channel_floor = 1e-15;

std::vector<double> channel_weights(const StateVector& psi, const ChannelProjectors& channels) {
    if (static_cast<std::size_t>(psi.size()) != channels.dim()) {
        throw ShapeError("state dimension does not match the channel projectors");
    }
    const double n2 = psi.squaredNorm();
    std::vector<double> w;
    w.reserve(channels.size());
    for (const auto& p : channels.projectors()) {
        w.push_back(psi.dot(p * psi).real() / n2);
    }
    return w;
}

}  // namespace

double dispersion_entropy(const StateVector& psi, const ChannelProjectors& channels) {
    double k = 0.0;
    for (const double p : channel_weights(psi, channels)) {
        if (p > channel_floor) {
            k -= p * std::log(p);
        }
    }
    return std::max(k, 0.0);
}

double entropy_production_rate(const StateVector& psi, const ChannelProjectors& channels,
                               std::span<const ComplexMatrix> jump_ops) {
    const auto weights = channel_weights(psi, channels);
    const StateVector unit = psi / psi.norm();
    double rate = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const double p = weights[k];
        if (p <= channel_floor) {
            continue;
        }
        const ComplexMatrix& proj = channels.projectors()[k];
        const StateVector projected = proj * unit;
        double r_k = 0.0;
        for (const auto& l : jump_ops) {
            // ⟨ψ|P L P|ψ⟩
            r_k += std::norm(projected.dot(l * projected));
        }
        rate -= std::max(0.0, 1.0 - p) / p * r_k;
    }
    return rate;
}

double entropy_production_rate(const StateVector& psi, const ChannelProjectors& channels,
                               const LindbladModel& model) {
    const ItoStepper stepper(model);
    return entropy_production_rate(psi, channels, stepper.noise_operators());
}

namespace {

constexpr std::size_t chunk_size = 32;

struct ChunkSums {
    std::vector<DensityMatrix> rho;  // per sample
};

double median_of(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace

EnsembleResult run_ensemble(const LindbladModel& model, const StateVector& psi0, const ItoConfig& cfg,
                            const std::optional<ChannelProjectors>& projectors) {
    cfg.validate();
    if (static_cast<std::size_t>(psi0.size()) != model.dim()) {
        throw ShapeError("initial state dimension does not match the model");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        throw ConfigurationError("initial state vector must be normalized");
    }
    if (projectors && projectors->dim() != model.dim()) {
        throw ShapeError("channel projectors do not match the model dimension");
    }
    {
        const ItoStepper probe(model);
        if (cfg.dt * probe.max_rate() >= ito_stability_bound) {
            std::ostringstream msg;
            msg << "ito stability bound violated: dt * max_rate = " << cfg.dt * probe.max_rate() << " >= "
                << ito_stability_bound << "; reduce dt below " << ito_stability_bound / probe.max_rate();
            throw NumericalError(msg.str());
        }
    }

    EnsembleResult result;
    std::vector<std::size_t> sample_steps;
    for (std::size_t s = 0; s <= cfg.steps; s += cfg.record_every) {
        sample_steps.push_back(s);
    }
    if (sample_steps.back() != cfg.steps) {
        sample_steps.push_back(cfg.steps);
    }
    for (const auto s : sample_steps) {
        result.times.push_back(static_cast<double>(s) * cfg.dt);
    }
    const std::size_t n_samples = sample_steps.size();
    const auto d = static_cast<Eigen::Index>(model.dim());

    const std::size_t n_traj = cfg.ensemble_size;
    const std::size_t n_chunks = (n_traj + chunk_size - 1) / chunk_size;
    std::vector<ChunkSums> chunks(n_chunks);
    std::vector<std::string> errors(n_traj);
    std::vector<char> failed(n_traj, 0);
    if (projectors) {
        result.entropy.resize(n_traj);
    }

    std::atomic<std::size_t> next_chunk{0};
    auto worker = [&]() {
        ItoStepper stepper(model);
        std::vector<Complex> noise(stepper.channels());
        for (;;) {
            const std::size_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks) {
                return;
            }
            auto& sums = chunks[c].rho;
            sums.assign(n_samples, DensityMatrix::Zero(d, d));
            const std::size_t first = c * chunk_size;
            const std::size_t last = std::min(first + chunk_size, n_traj);
            std::vector<DensityMatrix> local(n_samples);
            for (std::size_t i = first; i < last; ++i) {
                auto rng = trajectory_rng(cfg.base_seed, i);
                StateVector psi = psi0;
                std::vector<double> k_series;
                try {
                    std::size_t next_sample = 0;
                    for (std::size_t step = 0;; ++step) {
                        if (next_sample < n_samples && sample_steps[next_sample] == step) {
                            local[next_sample] = psi * psi.adjoint();
                            if (projectors) {
                                k_series.push_back(dispersion_entropy(psi, *projectors));
                            }
                            ++next_sample;
                        }
                        if (step == cfg.steps) {
                            break;
                        }
                        for (auto& xi : noise) {
                            xi = wiener_increment(rng, cfg.dt);
                        }
                        stepper.step(psi, noise, cfg.dt, step);
                    }
                } catch (const std::exception& e) {
                    failed[i] = 1;
                    errors[i] = e.what();
                    continue;
                }
                for (std::size_t s = 0; s < n_samples; ++s) {
                    sums[s] += local[s];
                }
                if (projectors) {
                    result.entropy[i] = std::move(k_series);
                }
            }
        }
    };

    unsigned n_workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, n_chunks));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (std::size_t i = 0; i < n_traj; ++i) {
        if (failed[i]) {
            result.failures.push_back({i, errors[i]});
        }
    }
    result.succeeded = n_traj - result.failures.size();
    if (static_cast<double>(result.failures.size()) > max_failure_fraction * static_cast<double>(n_traj) ||
        result.succeeded == 0) {
        std::ostringstream msg;
        msg << result.failures.size() << " of " << n_traj << " trajectories failed; first: trajectory "
            << result.failures.front().index << ": " << result.failures.front().message;
        throw NumericalError(msg.str());
    }

    result.mean_rho.assign(n_samples, DensityMatrix::Zero(d, d));
    for (const auto& chunk : chunks) {
        for (std::size_t s = 0; s < n_samples; ++s) {
            result.mean_rho[s] += chunk.rho[s];
        }
    }
    for (auto& rho : result.mean_rho) {
        rho /= static_cast<double>(result.succeeded);
    }

    if (projectors) {
        result.entropy_mean.resize(n_samples);
        result.entropy_median.resize(n_samples);
        result.entropy_stddev.resize(n_samples);
        std::vector<double> column;
        for (std::size_t s = 0; s < n_samples; ++s) {
            column.clear();
            for (const auto& row : result.entropy) {
                if (!row.empty()) {
                    column.push_back(row[s]);
                }
            }
            double mean = 0.0;
            for (const double k : column) {
                mean += k;
            }
            mean /= static_cast<double>(column.size());
            double var = 0.0;
            for (const double k : column) {
                var += (k - mean) * (k - mean);
            }
            var = column.size() > 1 ? var / static_cast<double>(column.size() - 1) : 0.0;
            result.entropy_mean[s] = mean;
            result.entropy_stddev[s] = std::sqrt(var);
            result.entropy_median[s] = median_of(column);
        }
    }
    return result;
}

}  // namespace qcav
