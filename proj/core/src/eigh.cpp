#include "qpol/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qpol {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EighResult eigh_hermitian(const ComplexMatrix& h, double hermitian_tol) {
    if (!h.is_square()) throw std::invalid_argument("eigh: matrix not square");
    const double defect = h.hermiticity_defect();
    if (defect > hermitian_tol)
        throw std::invalid_argument("eigh: input not Hermitian, ||H - H^dagger||_max = " +
                                    std::to_string(defect));

    const int n = h.rows();
    // symmetrize to kill the sub-tolerance asymmetry before iterating
    ComplexMatrix a = (h + h.adjoint()) * cd{0.5, 0.0};
    ComplexMatrix v = ComplexMatrix::identity(n);

    double scale = a.max_abs();
    if (scale == 0.0) scale = 1.0;
    const double stop = 1e-15 * scale * n;

    for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cd apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= stop / (n * n)) continue;

                // Phase rotation makes the (p,q) entry real, then a classical
                // Jacobi rotation annihilates it.
                const cd phase = std::conj(apq) / mag;  // a_pq * phase = |a_pq|
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                ComplexMatrix j = ComplexMatrix::identity(n);
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -s * phase;
                j(q, q) = c * phase;

                a = j.adjoint() * a * j;
                v = v * j;
            }
        }
    }

    // eigenvalues ascending, columns permuted along
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EighResult res;
    res.eigenvalues.resize(static_cast<size_t>(n));
    res.eigenvectors = ComplexMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        res.eigenvalues[static_cast<size_t>(k)] = a(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]).real();
        for (int r = 0; r < n; ++r) res.eigenvectors(r, k) = v(r, order[static_cast<size_t>(k)]);
    }
    return res;
}

}  // namespace qpol
