#include "qcav/models.hpp"

#include <cmath>
#include <string>

#include "qcav/errors.hpp"

namespace qcav {

bool LindbladModel::is_closed() const {
    for (const auto& j : jumps_) {
        if (j.rate > 0.0) {
            return false;
        }
    }
    return true;
}

LindbladModel generic_lindblad(ComplexMatrix H, std::vector<JumpOperator> jumps, std::optional<HilbertSpaceSpec> space) {
    if (H.rows() != H.cols() || H.rows() == 0) {
        throw ModelError("Hamiltonian must be square and non-empty");
    }
    if (!H.allFinite()) {
        throw ModelError("Hamiltonian has non-finite entries");
    }
    const double defect = hermiticity_defect(H);
    if (defect > hamiltonian_hermiticity_tol) {
        throw ModelError("Hamiltonian is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    for (std::size_t m = 0; m < jumps.size(); ++m) {
        const auto& j = jumps[m];
        if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) {
            throw ModelError("jump operator " + std::to_string(m) + " has invalid rate " + std::to_string(j.rate));
        }
        if (j.op.rows() != H.rows() || j.op.cols() != H.cols()) {
            throw ModelError("jump operator " + std::to_string(m) + " does not match the Hamiltonian dimension");
        }
        if (!j.op.allFinite()) {
            throw ModelError("jump operator " + std::to_string(m) + " has non-finite entries");
        }
    }
    if (space && space->dim() != static_cast<std::size_t>(H.rows())) {
        throw ModelError("Hilbert space dimension does not match the Hamiltonian");
    }

    LindbladModel model;
    // Symmetrize away round-off below the tolerance.
    model.H_ = 0.5 * (H + H.adjoint());
    model.jumps_ = std::move(jumps);
    model.space_ = space;
    return model;
}

void RabiModelParams::validate() const {
    if (!(omega0 >= 0.0) || !(omega >= 0.0) || !(lambda >= 0.0) || !(kappa >= 0.0)) {
        throw ConfigurationError("Rabi model frequencies and rates must be >= 0");
    }
    if (N < 1) {
        throw ConfigurationError("Rabi model needs N >= 1");
    }
}

void PhaseDampingParams::validate() const {
    if (!(omega >= 0.0) || !(kappa_phi >= 0.0)) {
        throw ConfigurationError("phase damping omega and kappa must be >= 0");
    }
}

ComplexMatrix tavis_cummings_hamiltonian(const RabiModelParams& p, const HilbertSpaceSpec& space) {
    p.validate();
    if (space.n_emitters != p.N) {
        throw ConfigurationError("model N = " + std::to_string(p.N) + " but space has N = " +
                                 std::to_string(space.n_emitters));
    }
    const OperatorSet ops = build_operator_set(space);
    ComplexMatrix H = p.omega0 * ops.Sz + p.omega * (ops.a_dag * ops.a) +
                      p.lambda * (ops.Splus * ops.a + ops.a_dag * ops.Sminus);
    return H;
}

LindbladModel cavity_decay_model(const RabiModelParams& p, const HilbertSpaceSpec& space) {
    ComplexMatrix H = tavis_cummings_hamiltonian(p, space);
    const OperatorSet ops = build_operator_set(space);
    std::vector<JumpOperator> jumps;
    if (p.kappa > 0.0) {
        jumps.push_back({ops.a, p.kappa, "cavity_leak"});
    }
    return generic_lindblad(std::move(H), std::move(jumps), space);
}

ComplexMatrix number_operator(int n_max) {
    const ComplexMatrix a = annihilation(n_max);
    return a.adjoint() * a;
}

LindbladModel phase_damping_model(const PhaseDampingParams& p, int n_max) {
    p.validate();
    if (n_max < 1) {
        throw InvalidSpaceError("phase damping needs n_max >= 1");
    }
    const ComplexMatrix n_op = number_operator(n_max);
    std::vector<JumpOperator> jumps;
    jumps.push_back({n_op, 0.5 * p.kappa_phi, "phase_damping"});
    return generic_lindblad(p.omega * n_op, std::move(jumps));
}

}  // namespace qcav
