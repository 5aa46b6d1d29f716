#include "qcav/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "qcav/errors.hpp"

namespace qcav {

std::size_t HilbertSpaceSpec::spin_dim() const {
    if (sector == SpinSector::collective) {
        return static_cast<std::size_t>(n_emitters) + 1;
    }
    return std::size_t{1} << n_emitters;
}

void HilbertSpaceSpec::validate() const {
    if (n_emitters < 1) {
        throw InvalidSpaceError("invalid space: n_emitters must be >= 1, got " + std::to_string(n_emitters));
    }
    if (boson_cutoff < 1) {
        throw InvalidSpaceError("invalid space: boson_cutoff must be >= 1, got " + std::to_string(boson_cutoff));
    }
    if (sector == SpinSector::single && n_emitters > max_single_emitters) {
        throw InvalidSpaceError("invalid space: single-spin sector limited to N <= " +
                                std::to_string(max_single_emitters) + ", got " + std::to_string(n_emitters));
    }
}

ComplexMatrix annihilation(int n_max) {
    const auto d = static_cast<Eigen::Index>(n_max) + 1;
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

ComplexMatrix dicke_raising(int n_emitters) {
    const double S = 0.5 * n_emitters;
    const auto d = static_cast<Eigen::Index>(n_emitters) + 1;
    ComplexMatrix sp = ComplexMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j + 1 < d; ++j) {
        const double m = static_cast<double>(j) - S;
        sp(j + 1, j) = std::sqrt(S * (S + 1.0) - m * (m + 1.0));
    }
    return sp;
}

ComplexMatrix dicke_sz(int n_emitters) {
    const double S = 0.5 * n_emitters;
    const auto d = static_cast<Eigen::Index>(n_emitters) + 1;
    ComplexMatrix sz = ComplexMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        sz(j, j) = static_cast<double>(j) - S;
    }
    return sz;
}

namespace {

// Σ_i (single-spin operator on site i); site 0 is the most significant bit.
ComplexMatrix sum_over_sites(int n_spins, const ComplexMatrix& single) {
    const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_spins);
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (int site = 0; site < n_spins; ++site) {
        ComplexMatrix term = ComplexMatrix::Identity(1, 1);
        for (int k = 0; k < n_spins; ++k) {
            term = tensor_product(term, k == site ? single : id2);
        }
        total += term;
    }
    return total;
}

}  // namespace

OperatorSet build_operator_set(const HilbertSpaceSpec& space) {
    space.validate();

    ComplexMatrix sz;
    ComplexMatrix sp;
    if (space.sector == SpinSector::collective) {
        sz = dicke_sz(space.n_emitters);
        sp = dicke_raising(space.n_emitters);
    } else {
        // Single spin basis: index 0 = |g>, 1 = |e>.
        ComplexMatrix sz1 = ComplexMatrix::Zero(2, 2);
        sz1(0, 0) = -0.5;
        sz1(1, 1) = 0.5;
        ComplexMatrix sp1 = ComplexMatrix::Zero(2, 2);
        sp1(1, 0) = 1.0;
        sz = sum_over_sites(space.n_emitters, sz1);
        sp = sum_over_sites(space.n_emitters, sp1);
    }

    const auto spin_d = static_cast<Eigen::Index>(space.spin_dim());
    const auto bos_d = static_cast<Eigen::Index>(space.boson_dim());
    const ComplexMatrix id_spin = ComplexMatrix::Identity(spin_d, spin_d);
    const ComplexMatrix id_bos = ComplexMatrix::Identity(bos_d, bos_d);
    const ComplexMatrix a_b = annihilation(space.boson_cutoff);

    OperatorSet ops;
    ops.a = tensor_product(id_spin, a_b);
    ops.a_dag = ops.a.adjoint();
    ops.Sz = tensor_product(sz, id_bos);
    ops.Splus = tensor_product(sp, id_bos);
    ops.Sminus = ops.Splus.adjoint();
    ops.identity = ComplexMatrix::Identity(spin_d * bos_d, spin_d * bos_d);
    return ops;
}

ComplexMatrix tensor_product(const ComplexMatrix& A, const ComplexMatrix& B) {
    return Eigen::kroneckerProduct(A, B).eval();
}

StateVector tensor_product(const StateVector& x, const StateVector& y) {
    return Eigen::kroneckerProduct(x, y).eval();
}

double hermiticity_defect(const ComplexMatrix& op) {
    if (op.rows() != op.cols()) {
        throw ShapeError("hermiticity check needs a square matrix");
    }
    if (op.size() == 0) {
        return 0.0;
    }
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

DensityDiagnostics validate_density_matrix(const DensityMatrix& rho, double /*tol*/) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw ShapeError("density matrix must be square and non-empty, got " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()));
    }
    DensityDiagnostics d;
    d.hermiticity_defect = hermiticity_defect(rho);
    d.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

DensityMatrix pure_density(const StateVector& psi) { return psi * psi.adjoint(); }

double expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
    if (op.rows() != rho.rows() || op.cols() != rho.cols()) {
        throw ShapeError("observable and state dimensions differ");
    }
    // tr(Oρ) = Σ_ij O_ij ρ_ji
    return (op.cwiseProduct(rho.transpose())).sum().real();
}

Complex expectation(const ComplexMatrix& op, const StateVector& psi) {
    if (op.cols() != psi.size()) {
        throw ShapeError("operator and state dimensions differ");
    }
    return psi.dot(op * psi);
}

double purity(const DensityMatrix& rho) { return (rho.cwiseProduct(rho.transpose())).sum().real(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("trace distance operands differ in shape");
    }
    const ComplexMatrix diff = a - b;
    const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

StateVector basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw ShapeError("basis index " + std::to_string(index) + " outside dimension " + std::to_string(dim));
    }
    StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

std::vector<double> boson_populations(const DensityMatrix& rho, const HilbertSpaceSpec& space) {
    if (static_cast<std::size_t>(rho.rows()) != space.dim()) {
        throw ShapeError("state dimension does not match the Hilbert space");
    }
    std::vector<double> pops(space.boson_dim(), 0.0);
    for (std::size_t s = 0; s < space.spin_dim(); ++s) {
        for (std::size_t n = 0; n < space.boson_dim(); ++n) {
            const auto i = static_cast<Eigen::Index>(space.index(s, n));
            pops[n] += rho(i, i).real();
        }
    }
    return pops;
}

double boson_tail_population(const DensityMatrix& rho, const HilbertSpaceSpec& space, int levels) {
    const auto pops = boson_populations(rho, space);
    double tail = 0.0;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(levels, 0)), pops.size());
    for (std::size_t k = pops.size() - count; k < pops.size(); ++k) {
        tail += pops[k];
    }
    return tail;
}

}  // namespace qcav
