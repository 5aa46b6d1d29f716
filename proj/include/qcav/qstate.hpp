#pragma once

// Dense complex linear algebra on the composite space
// (collective spin of N two-level emitters) ⊗ (boson mode truncated at n_max).
// Basis ordering: spin factor outermost, boson innermost.
// Dicke states are indexed j = 0..N with m = j - N/2 (ascending).

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qcav {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

enum class SpinSector { collective, single };

struct HilbertSpaceSpec {
    int n_emitters = 1;
    int boson_cutoff = 1;
    SpinSector sector = SpinSector::collective;

    /// Largest N accepted in the single (2^N) representation.
    static constexpr int max_single_emitters = 10;

    std::size_t spin_dim() const;
    std::size_t boson_dim() const { return static_cast<std::size_t>(boson_cutoff) + 1; }
    std::size_t dim() const { return spin_dim() * boson_dim(); }

    /// Throws InvalidSpaceError unless N >= 1, n_max >= 1 and the sector fits.
    void validate() const;

    std::size_t index(std::size_t spin_index, std::size_t n) const { return spin_index * boson_dim() + n; }
};

struct OperatorSet {
    ComplexMatrix a;
    ComplexMatrix a_dag;
    ComplexMatrix Sz;
    ComplexMatrix Splus;
    ComplexMatrix Sminus;
    ComplexMatrix identity;
};

OperatorSet build_operator_set(const HilbertSpaceSpec& space);

/// Boson-only ladder operator on levels 0..n_max.
ComplexMatrix annihilation(int n_max);

/// Collective spin-S ladder (S = N/2) in the ascending Dicke basis.
ComplexMatrix dicke_raising(int n_emitters);
ComplexMatrix dicke_sz(int n_emitters);

ComplexMatrix tensor_product(const ComplexMatrix& A, const ComplexMatrix& B);
StateVector tensor_product(const StateVector& x, const StateVector& y);

struct DensityDiagnostics {
    double hermiticity_defect = 0.0;  ///< max |ρ_ij − conj(ρ_ji)|
    double trace_defect = 0.0;        ///< |tr ρ − 1|
    double min_eigenvalue = 0.0;      ///< of the Hermitian part

    bool passes(double tol) const {
        return hermiticity_defect <= tol && trace_defect <= tol && min_eigenvalue >= -tol;
    }
};

DensityDiagnostics validate_density_matrix(const DensityMatrix& rho, double tol);

DensityMatrix pure_density(const StateVector& psi);

/// Re tr(O ρ).
double expectation(const ComplexMatrix& op, const DensityMatrix& rho);
Complex expectation(const ComplexMatrix& op, const StateVector& psi);

double purity(const DensityMatrix& rho);

/// ½ Σ |eigenvalues of (a − b)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Max absolute entry of O − O†.
double hermiticity_defect(const ComplexMatrix& op);

bool all_finite(const ComplexMatrix& m);

StateVector basis_state(std::size_t dim, std::size_t index);

/// Probability per boson level, summed over the spin factor.
std::vector<double> boson_populations(const DensityMatrix& rho, const HilbertSpaceSpec& space);

/// Population of the top `levels` boson levels; the cutoff-warning metric.
double boson_tail_population(const DensityMatrix& rho, const HilbertSpaceSpec& space, int levels = 2);

/// Threshold above which the top two boson levels count as populated.
inline constexpr double cutoff_warning_threshold = 1e-6;

}  // namespace qcav
