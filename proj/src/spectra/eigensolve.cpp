#include "mjsc/spectra.hpp"

#include <complex>

#ifdef MJSC_HAVE_LAPACK
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

#include <Eigen/Eigenvalues>

namespace mjsc {

namespace {

template <class Scalar>
[[maybe_unused]] EigenDecomposition<Scalar> eigen_fallback(const DenseMatrix<Scalar>& A, bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(A, want_vectors ? Eigen::ComputeEigenvectors
                                                                        : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::NumericalFailure, "Hermitian eigensolver did not converge");
  EigenDecomposition<Scalar> out;
  out.values = es.eigenvalues();
  if (want_vectors) out.vectors = es.eigenvectors();
  return out;
}

}  // namespace

template <class Scalar>
EigenDecomposition<Scalar> hermitian_eigensolve(const DenseMatrix<Scalar>& A, bool want_vectors) {
  if (A.rows() != A.cols()) throw Error(Errc::InvalidArgument, "eigensolve needs a square matrix");
  if (A.rows() == 0) return {};
#ifdef MJSC_HAVE_LAPACK
  const lapack_int n = lapack_int(A.rows());
  EigenDecomposition<Scalar> out;
  DenseMatrix<Scalar> work = A;
  out.values.resize(n);
  const char jobz = want_vectors ? 'V' : 'N';
  lapack_int info;
  if constexpr (std::is_same_v<Scalar, double>)
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n, work.data(), n, out.values.data());
  else
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'U', n, work.data(), n, out.values.data());
  if (info != 0) throw Error(Errc::NumericalFailure, "LAPACK eigensolver info = " + std::to_string(info));
  if (want_vectors) out.vectors = std::move(work);
  return out;
#else
  return eigen_fallback(A, want_vectors);
#endif
}

template EigenDecomposition<double> hermitian_eigensolve(const DenseMatrix<double>&, bool);
template EigenDecomposition<std::complex<double>> hermitian_eigensolve(const DenseMatrix<std::complex<double>>&,
                                                                       bool);

}  // namespace mjsc
