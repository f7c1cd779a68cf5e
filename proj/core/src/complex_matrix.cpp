#include "qpol/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace qpol {

ComplexMatrix::ComplexMatrix(int rows, int cols, std::initializer_list<cd> entries)
    : rows_(rows), cols_(cols), data_(entries) {
    if (static_cast<int>(data_.size()) != rows * cols)
        throw std::invalid_argument("ComplexMatrix: initializer size does not match dimensions");
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add: shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sub: shape mismatch");
    ComplexMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix mul: shape mismatch");
    ComplexMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const cd aik = (*this)(i, k);
            if (aik == cd{}) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

ComplexMatrix ComplexMatrix::operator*(cd s) const {
    ComplexMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * s;
    return r;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix r(rows_, cols_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = std::conj(data_[i]);
    return r;
}

cd ComplexMatrix::trace() const {
    if (!is_square()) throw std::invalid_argument("trace: matrix not square");
    cd t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cd& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) throw std::invalid_argument("hermiticity_defect: matrix not square");
    double d = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

std::vector<cd> ComplexMatrix::apply(const std::vector<cd>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("apply: vector size mismatch");
    std::vector<cd> r(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
        cd acc = 0.0;
        for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[static_cast<size_t>(j)];
        r[static_cast<size_t>(i)] = acc;
    }
    return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja) {
            const cd f = a(ia, ja);
            if (f == cd{}) continue;
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
        }
    return r;
}

ComplexMatrix outer(const std::vector<cd>& psi, const std::vector<cd>& phi) {
    ComplexMatrix r(static_cast<int>(psi.size()), static_cast<int>(phi.size()));
    for (size_t i = 0; i < psi.size(); ++i)
        for (size_t j = 0; j < phi.size(); ++j)
            r(static_cast<int>(i), static_cast<int>(j)) = psi[i] * std::conj(phi[j]);
    return r;
}

cd inner(const std::vector<cd>& a, const std::vector<cd>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
    cd acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm(const std::vector<cd>& v) {
    double acc = 0.0;
    for (const cd& z : v) acc += std::norm(z);
    return std::sqrt(acc);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

PureState::PureState(std::vector<cd> amplitudes, double norm_tol) : amps_(std::move(amplitudes)) {
    const double n = norm(amps_);
    if (std::abs(n - 1.0) > norm_tol)
        throw std::invalid_argument("PureState: amplitudes not unit norm, |norm-1| = " +
                                    std::to_string(std::abs(n - 1.0)));
}

}  // namespace qpol
