#include "blocktri/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "blocktri/kernels.hpp"

namespace blocktri {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix addition: shape mismatch");
    kernels::active().axpy_z(1.0, rhs.data_.data(), data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix subtraction: shape mismatch");
    kernels::active().axpy_z(-1.0, rhs.data_.data(), data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

ComplexMatrix ComplexMatrix::conjugate_transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double rowsum = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) rowsum += std::abs((*this)(i, j));
        best = std::max(best, rowsum);
    }
    return best;
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& v : data_) best = std::max(best, std::abs(v));
    return best;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix ComplexMatrix::columns(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw std::invalid_argument("columns: range out of bounds");
    ComplexMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

void ComplexMatrix::set_column(std::size_t j, const std::vector<cplx>& v) {
    if (v.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

std::vector<cplx> ComplexMatrix::column(std::size_t j) const {
    std::vector<cplx> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows())
        throw std::invalid_argument("matrix product: inner dimension mismatch");
    ComplexMatrix out(lhs.rows(), rhs.cols());
    const auto& k = kernels::active();
    // out.row(i) += lhs(i, p) * rhs.row(p): unit-stride axpy over the result row.
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t p = 0; p < lhs.cols(); ++p) {
            cplx a = lhs(i, p);
            if (a != cplx{}) k.axpy_z(a, rhs.row(p), out.row(i), rhs.cols());
        }
    return out;
}

ComplexMatrix operator*(cplx s, ComplexMatrix m) {
    m *= s;
    return m;
}

std::vector<cplx> operator*(const ComplexMatrix& m, const std::vector<cplx>& x) {
    if (m.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<cplx> y(m.rows());
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < m.rows(); ++i) y[i] = k.dotu_z(m.row(i), x.data(), m.cols());
    return y;
}

double vector_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& e : v) s += std::norm(e);
    return std::sqrt(s);
}

std::vector<cplx> vector_add_scaled(std::vector<cplx> x, cplx a, const std::vector<cplx>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vector_add_scaled: length mismatch");
    kernels::active().axpy_z(a, y.data(), x.data(), x.size());
    return x;
}

}  // namespace blocktri
