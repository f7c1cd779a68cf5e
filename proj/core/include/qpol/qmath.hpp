#pragma once

#include "qpol/complex_matrix.hpp"
#include "qpol/eigh.hpp"
#include "qpol/rng.hpp"

#include <string>

namespace qpol {

struct PhysicalityReport {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;       // |Tr - 1|
    double min_eigenvalue = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string summary() const;
};

// Diagnostic check that a matrix is a valid density matrix within tol:
// Hermitian, unit trace, positive semidefinite.
PhysicalityReport check_physical(const ComplexMatrix& m, double tol = 1e-10);

// Hermitian, unit-trace, positive-semidefinite matrix of dimension 2 or 4.
// Construction validates; instances are immutable.
class DensityMatrix {
public:
    static constexpr double kDefaultTol = 1e-10;

    explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol);

    static DensityMatrix from_pure(const PureState& psi);

    int dim() const { return mat_.rows(); }
    const ComplexMatrix& matrix() const { return mat_; }
    const cd& operator()(int r, int c) const { return mat_(r, c); }

    double purity() const;  // Tr(rho^2)

private:
    ComplexMatrix mat_;
};

// Principal square root of a Hermitian PSD matrix; eigenvalues below zero
// (numerical artifacts) are clamped before the sqrt.
ComplexMatrix sqrt_psd(const ComplexMatrix& h);

// Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, the *squared*
// convention. Symmetric; 1 iff rho == sigma; equals |<psi|phi>|^2 on pure
// inputs.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Same, with sqrt(rho) precomputed by the caller (hot loops scanning many
// sigma against one rho).
double fidelity_given_sqrt(const ComplexMatrix& sqrt_rho, const ComplexMatrix& sigma);

// Wootters two-qubit concurrence: max(0, l1-l2-l3-l4) with l_i the descending
// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const DensityMatrix& rho);

// Ginibre-ensemble random state: G has i.i.d. standard complex normal
// entries, rho = G G^dagger / Tr(G G^dagger).
DensityMatrix random_density(int dim, Rng& rng);

}  // namespace qpol
