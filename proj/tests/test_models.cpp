#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qcav/errors.hpp"
#include "qcav/lindblad.hpp"
#include "qcav/models.hpp"

using namespace qcav;

namespace {

DensityMatrix random_density(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> g;
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    DensityMatrix rho = m * m.adjoint();
    return rho / rho.trace().real();
}

// Smallest gap in the one-excitation block {|g...,1⟩, |one excitation, 0⟩}.
double one_excitation_gap(const RabiModelParams& p, int n_max) {
    const HilbertSpaceSpec space{p.N, n_max, SpinSector::collective};
    const ComplexMatrix H = tavis_cummings_hamiltonian(p, space);
    ComplexMatrix block(2, 2);
    const std::size_t idx[2] = {space.index(0, 1), space.index(1, 0)};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            block(i, j) = H(idx[i], idx[j]);
        }
    }
    const Eigensystem e = hermitian_eigensystem(block);
    return e.energies(1) - e.energies(0);
}

}  // namespace

TEST_CASE("decoupled Hamiltonian is diagonal with ω₀m + ωn") {
    const RabiModelParams p{1.3, 0.7, 0.0, 3, 0.0};
    const HilbertSpaceSpec space{3, 4, SpinSector::collective};
    const ComplexMatrix H = tavis_cummings_hamiltonian(p, space);
    const ComplexMatrix off = H - ComplexMatrix(H.diagonal().asDiagonal());
    CHECK(off.norm() == 0.0);
    for (std::size_t j = 0; j < space.spin_dim(); ++j) {
        for (std::size_t n = 0; n < space.boson_dim(); ++n) {
            const double m = double(j) - 1.5;
            CHECK(H(space.index(j, n), space.index(j, n)).real() == doctest::Approx(1.3 * m + 0.7 * n));
        }
    }
}

TEST_CASE("one-excitation splitting follows 2λ√N") {
    for (int N : {1, 2, 4, 9, 16}) {
        const RabiModelParams p{1.0, 1.0, 0.03, N, 0.0};
        const double gap = one_excitation_gap(p, 2);
        CHECK(std::abs(gap / (2.0 * 0.03 * std::sqrt(double(N))) - 1.0) < 1e-8);
    }
    // Full-spectrum check for N = 1: the dressed doublet in the full matrix.
    const RabiModelParams p{1.0, 1.0, 0.1, 1, 0.0};
    const HilbertSpaceSpec space{1, 3, SpinSector::collective};
    const Eigensystem e = hermitian_eigensystem(tavis_cummings_hamiltonian(p, space));
    std::vector<double> E(e.energies.data(), e.energies.data() + e.energies.size());
    // Levels of the one-excitation manifold sit at 0.5 ± 0.1.
    CHECK(std::count_if(E.begin(), E.end(), [](double x) { return std::abs(x - 0.6) < 1e-12; }) == 1);
    CHECK(std::count_if(E.begin(), E.end(), [](double x) { return std::abs(x - 0.4) < 1e-12; }) == 1);
}

TEST_CASE("N mismatch and invalid parameters") {
    const RabiModelParams p{1.0, 1.0, 0.1, 2, 0.0};
    CHECK_THROWS_AS(tavis_cummings_hamiltonian(p, {3, 2, SpinSector::collective}), ConfigurationError);
    RabiModelParams neg = p;
    neg.kappa = -1.0;
    CHECK_THROWS_AS(neg.validate(), ConfigurationError);
}

TEST_CASE("single-sector Hamiltonian matches collective spectrum in the symmetric block") {
    const RabiModelParams p{1.0, 1.0, 0.07, 2, 0.0};
    const double gap_c = one_excitation_gap(p, 2);
    const HilbertSpaceSpec single{2, 2, SpinSector::single};
    const Eigensystem e = hermitian_eigensystem(tavis_cummings_hamiltonian(p, single));
    // Bright one-excitation states at ω₀(−½) + ... ± λ√2; the collective gap must appear.
    bool found = false;
    for (Eigen::Index i = 0; i < e.energies.size(); ++i) {
        for (Eigen::Index j = 0; j < e.energies.size(); ++j) {
            if (std::abs(e.energies(j) - e.energies(i) - gap_c) < 1e-10) {
                found = true;
            }
        }
    }
    CHECK(found);
}

TEST_CASE("generic_lindblad validation") {
    ComplexMatrix H = ComplexMatrix::Zero(2, 2);
    CHECK(generic_lindblad(H, {}).is_closed());
    H(0, 1) = 1.0;
    CHECK_THROWS_AS(generic_lindblad(H, {}), ModelError);
    const ComplexMatrix sm = [] {
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        m(0, 1) = 1.0;
        return m;
    }();
    CHECK_THROWS_AS(generic_lindblad(ComplexMatrix::Zero(2, 2), {{sm, -1.0, "bad"}}), ModelError);
    CHECK_THROWS_AS(generic_lindblad(ComplexMatrix::Zero(2, 2), {{ComplexMatrix::Zero(3, 3), 1.0, "x"}}), ModelError);
}

TEST_CASE("amplitude damping relaxes σz to −1") {
    // Basis |g⟩ = 0, |e⟩ = 1; σ⁻ = |g⟩⟨e|.
    ComplexMatrix sm = ComplexMatrix::Zero(2, 2);
    sm(0, 1) = 1.0;
    const LindbladModel m = generic_lindblad(ComplexMatrix::Zero(2, 2), {{sm, 0.5, "sigma-"}});
    ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    IntegratorConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 20.0;
    const auto rec = evolve(m, pure_density(basis_state(2, 1)), cfg, {{"sz", sz}});
    // With rate r the excited population decays as e^{−2rt}.
    CHECK(rec.observables.at("sz").back() == doctest::Approx(-1.0 + 2.0 * std::exp(-20.0)).epsilon(1e-8));
}

TEST_CASE("cavity decay ⟨n⟩ = 3 e^{−2κt} with H = 0") {
    const double kappa = 0.3;
    const RabiModelParams p{0.0, 0.0, 0.0, 1, kappa};
    const HilbertSpaceSpec space{1, 5, SpinSector::collective};
    const LindbladModel m = cavity_decay_model(p, space);
    const OperatorSet ops = build_operator_set(space);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 2.0;
    cfg.sample_every = 100;
    const auto rec = evolve(m, pure_density(basis_state(space.dim(), space.index(0, 3))), cfg,
                            {{"n", ops.a_dag * ops.a}});
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        CHECK(std::abs(rec.observables.at("n")[i] - 3.0 * std::exp(-2.0 * kappa * rec.times[i])) < 1e-5);
    }
}

TEST_CASE("vacuum is a dark state and κ = 0 conserves purity") {
    const HilbertSpaceSpec space{1, 4, SpinSector::collective};
    const LindbladModel leak = cavity_decay_model({1.0, 1.0, 0.2, 1, 0.5}, space);
    const DensityMatrix vac = pure_density(basis_state(space.dim(), space.index(0, 0)));
    CHECK(lindblad_rhs(leak, vac).norm() < 1e-14);

    const LindbladModel closed = cavity_decay_model({1.0, 1.0, 0.2, 1, 0.0}, space);
    CHECK(closed.is_closed());
    IntegratorConfig cfg;
    cfg.t_final = 10.0 * 2.0 * 3.141592653589793;
    cfg.dt = 1e-3;
    cfg.sample_every = 1000;
    const auto rec = evolve(closed, pure_density(basis_state(space.dim(), space.index(1, 2))), cfg);
    for (const auto& rho : rec.states) {
        CHECK(std::abs(purity(rho) - 1.0) < 1e-8);
    }
}

TEST_CASE("phase damping preserves populations and matches the coherence law") {
    const LindbladModel m = phase_damping_model({0.0, 1.0}, 4);
    std::mt19937_64 rng(99);
    const DensityMatrix rho = random_density(rng, 5);
    const DensityMatrix d = lindblad_rhs(m, rho);
    for (int n = 0; n < 5; ++n) {
        CHECK(std::abs(d(n, n)) < 1e-14);
    }
    // dρ_20/dt = −κ·4/2 ρ_20.
    CHECK(std::abs(d(2, 0) + 2.0 * rho(2, 0)) < 1e-13);
    CHECK(std::exp(-1.0 * 4.0 * 0.5 / 2.0) == doctest::Approx(0.367879).epsilon(1e-6));
}

TEST_CASE("generators preserve trace and Hermiticity on random inputs") {
    std::mt19937_64 rng(4242);
    const HilbertSpaceSpec space{2, 3, SpinSector::collective};
    const std::vector<LindbladModel> models{
        cavity_decay_model({1.1, 0.9, 0.3, 2, 0.4}, space),
        phase_damping_model({0.5, 0.8}, 5),
    };
    for (const auto& m : models) {
        for (int trial = 0; trial < 20; ++trial) {
            const DensityMatrix rho = random_density(rng, static_cast<Eigen::Index>(m.dim()));
            const DensityMatrix d = lindblad_rhs(m, rho);
            CHECK(std::abs(d.trace()) < 1e-10);
            CHECK(hermiticity_defect(d) < 1e-10);
        }
    }
}
