#include "blocktri/dense_linalg.hpp"

#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace blocktri {
namespace {

using EMat = Eigen::MatrixXcd;
using EVec = Eigen::VectorXcd;

EMat to_eigen(const ComplexMatrix& m) {
    EMat e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

ComplexMatrix from_eigen(const EMat& e) {
    ComplexMatrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

EVec to_eigen_vec(const std::vector<cplx>& v) {
    EVec e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e(i) = v[i];
    return e;
}

std::vector<cplx> from_eigen_vec(const EVec& e) {
    return {e.data(), e.data() + e.size()};
}

}  // namespace

SvdResult svd(const ComplexMatrix& m) {
    Eigen::JacobiSVD<EMat> dec(to_eigen(m), Eigen::ComputeFullV);
    SvdResult out;
    out.singular_values.assign(dec.singularValues().data(),
                               dec.singularValues().data() + dec.singularValues().size());
    out.right_vectors = from_eigen(dec.matrixV());
    return out;
}

ComplexMatrix inverse(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    Eigen::PartialPivLU<EMat> lu(to_eigen(m));
    return from_eigen(lu.inverse());
}

std::vector<cplx> solve(const ComplexMatrix& m, const std::vector<cplx>& rhs) {
    if (m.rows() != m.cols() || m.rows() != rhs.size())
        throw std::invalid_argument("solve: dimension mismatch");
    Eigen::PartialPivLU<EMat> lu(to_eigen(m));
    return from_eigen_vec(lu.solve(to_eigen_vec(rhs)));
}

cplx determinant(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    if (m.rows() == 0) return 1.0;
    return to_eigen(m).partialPivLu().determinant();
}

std::vector<cplx> least_squares(const ComplexMatrix& a, const std::vector<cplx>& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("least_squares: dimension mismatch");
    Eigen::CompleteOrthogonalDecomposition<EMat> cod(to_eigen(a));
    return from_eigen_vec(cod.solve(to_eigen_vec(b)));
}

std::vector<cplx> dense_eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
    Eigen::ComplexEigenSolver<EMat> es(to_eigen(m), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration failed");
    return from_eigen_vec(es.eigenvalues());
}

DenseEigenResult dense_eigen(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
    Eigen::ComplexEigenSolver<EMat> es(to_eigen(m), /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration failed");
    return {from_eigen_vec(es.eigenvalues()), from_eigen(es.eigenvectors())};
}

std::vector<double> symmetric_tridiagonal_eigenvalues(const std::vector<double>& diag,
                                                      const std::vector<double>& offdiag) {
    if (offdiag.size() + 1 != diag.size())
        throw std::invalid_argument("tridiagonal eigenvalues: off-diagonal length must be n-1");
    Eigen::VectorXd d(diag.size()), e(offdiag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) d(i) = diag[i];
    for (std::size_t i = 0; i < offdiag.size(); ++i) e(i) = offdiag[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigenvalue iteration failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

ComplexMatrix orthonormal_columns(const ComplexMatrix& m) {
    EMat e = to_eigen(m);
    Eigen::HouseholderQR<EMat> qr(e);
    EMat q = qr.householderQ() * EMat::Identity(e.rows(), e.cols());
    return from_eigen(q);
}

}  // namespace blocktri
