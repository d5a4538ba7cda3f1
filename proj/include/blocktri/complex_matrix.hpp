#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace blocktri {

using cplx = std::complex<double>;

// Dense row-major complex matrix. The workhorse value type for K-by-K blocks,
// assembled N-by-N matrices, and eigenvector matrices. Multiplication runs
// on the kernel backend (axpy over rows), so it picks up SIMD when available.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* row(std::size_t i) { return data_.data() + i * cols_; }
    const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate_transpose() const;

    double frobenius_norm() const;
    // Maximum absolute row sum.
    double inf_norm() const;
    double max_abs() const;
    bool all_finite() const;

    // Columns [first, first + count) as a new matrix.
    ComplexMatrix columns(std::size_t first, std::size_t count) const;
    void set_column(std::size_t j, const std::vector<cplx>& v);
    std::vector<cplx> column(std::size_t j) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);

// y = M x
std::vector<cplx> operator*(const ComplexMatrix& m, const std::vector<cplx>& x);

double vector_norm(const std::vector<cplx>& v);
// x + a y
std::vector<cplx> vector_add_scaled(std::vector<cplx> x, cplx a, const std::vector<cplx>& y);

}  // namespace blocktri
