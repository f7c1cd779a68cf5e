#include "qpol/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qpol {

std::string PhysicalityReport::summary() const {
    std::ostringstream os;
    os << (pass ? "physical" : "NOT physical") << " (tol " << tolerance
       << "): hermiticity defect " << hermiticity_defect << ", trace defect " << trace_defect
       << ", min eigenvalue " << min_eigenvalue;
    return os.str();
}

PhysicalityReport check_physical(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) throw std::invalid_argument("check_physical: matrix not square");
    PhysicalityReport r;
    r.tolerance = tol;
    r.hermiticity_defect = m.hermiticity_defect();
    r.trace_defect = std::abs(m.trace() - cd{1.0, 0.0});
    // spectrum of the Hermitian part, so the check is meaningful even for
    // slightly (or badly) non-Hermitian inputs
    const ComplexMatrix herm = (m + m.adjoint()) * cd{0.5, 0.0};
    const EighResult eig = eigh_hermitian(herm, 1e300);
    r.min_eigenvalue = eig.eigenvalues.front();
    r.pass = r.hermiticity_defect <= tol && r.trace_defect <= tol && r.min_eigenvalue >= -tol;
    return r;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : mat_(std::move(m)) {
    if (!mat_.is_square()) throw std::invalid_argument("DensityMatrix: matrix not square");
    const PhysicalityReport r = check_physical(mat_, tol);
    if (!r.pass) throw std::invalid_argument("DensityMatrix: " + r.summary());
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.projector());
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

ComplexMatrix sqrt_psd(const ComplexMatrix& h) {
    const EighResult eig = eigh_hermitian(h);
    const int n = h.rows();
    ComplexMatrix scaled(n, n);
    for (int j = 0; j < n; ++j) {
        const double lam = std::max(0.0, eig.eigenvalues[static_cast<size_t>(j)]);
        const double s = std::sqrt(lam);
        for (int i = 0; i < n; ++i) scaled(i, j) = eig.eigenvectors(i, j) * s;
    }
    return scaled * eig.eigenvectors.adjoint();
}

double fidelity_given_sqrt(const ComplexMatrix& sqrt_rho, const ComplexMatrix& sigma) {
    const ComplexMatrix m = sqrt_rho * sigma * sqrt_rho;
    const EighResult eig = eigh_hermitian(m, 1e-8);
    double t = 0.0;
    for (double lam : eig.eigenvalues) t += std::sqrt(std::max(0.0, lam));
    const double f = t * t;
    return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    return fidelity_given_sqrt(sqrt_psd(rho.matrix()), sigma.matrix());
}

double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("concurrence: requires a two-qubit (4x4) state");
    // spin flip; note (-sy)x(-sy) == sy x sy, so this is independent of the
    // circular-basis handedness used elsewhere
    ComplexMatrix yy(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const ComplexMatrix rho_tilde = yy * rho.matrix().conjugate() * yy;
    const ComplexMatrix s = sqrt_psd(rho.matrix());
    const ComplexMatrix m = s * rho_tilde * s;  // Hermitian PSD, same spectrum as rho*rho_tilde
    EighResult eig = eigh_hermitian(m, 1e-8);
    std::vector<double> lam;
    lam.reserve(4);
    for (double mu : eig.eigenvalues) lam.push_back(std::sqrt(std::max(0.0, mu)));
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

DensityMatrix random_density(int dim, Rng& rng) {
    if (dim < 2) throw std::invalid_argument("random_density: dim must be >= 2");
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    ComplexMatrix m = g * g.adjoint();
    const double tr = m.trace().real();
    m = m * cd{1.0 / tr, 0.0};
    return DensityMatrix(std::move(m));
}

}  // namespace qpol
