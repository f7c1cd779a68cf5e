#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace qpol {

using cd = std::complex<double>;

// Dense row-major complex matrix. Everything in this project is 2x2 or 4x4;
// no attempt is made to be clever about storage or blocking.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}
    ComplexMatrix(int rows, int cols, std::initializer_list<cd> entries);

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cd& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const cd& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(cd s) const;
    friend ComplexMatrix operator*(cd s, const ComplexMatrix& m) { return m * s; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;

    cd trace() const;
    double max_abs() const;               // entrywise max modulus
    double hermiticity_defect() const;    // ||M - M^dagger||_max

    std::vector<cd> apply(const std::vector<cd>& v) const;  // M v

    const std::vector<cd>& data() const { return data_; }
    std::vector<cd>& data() { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cd> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// |psi><phi|
ComplexMatrix outer(const std::vector<cd>& psi, const std::vector<cd>& phi);

// <a|b> = sum conj(a_i) b_i
cd inner(const std::vector<cd>& a, const std::vector<cd>& b);

double norm(const std::vector<cd>& v);

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Unit-norm state vector of dimension 2 or 4.
class PureState {
public:
    PureState(std::vector<cd> amplitudes, double norm_tol = 1e-12);

    int dim() const { return static_cast<int>(amps_.size()); }
    const std::vector<cd>& amplitudes() const { return amps_; }
    const cd& operator[](int i) const { return amps_[static_cast<size_t>(i)]; }

    ComplexMatrix projector() const { return outer(amps_, amps_); }

private:
    std::vector<cd> amps_;
};

}  // namespace qpol
