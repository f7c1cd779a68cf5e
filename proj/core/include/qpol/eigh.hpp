#pragma once

#include "qpol/complex_matrix.hpp"

#include <vector>

namespace qpol {

struct EighResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, eigenvectors[:,i] <-> eigenvalues[i]
};

// Hermitian eigendecomposition by cyclic complex Jacobi rotations. Intended
// for the 2x2/4x4 matrices this project deals in; accuracy is near machine
// precision there. Rejects inputs whose hermiticity defect exceeds
// hermitian_tol (the defect is reported in the exception message).
EighResult eigh_hermitian(const ComplexMatrix& h, double hermitian_tol = 1e-10);

}  // namespace qpol
