#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace irhm {

using cplx = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar>;

// A quantum state on the system register.  Density matrices and operators
// are plain Eigen matrices; invariants are checked by the free functions below.
using DensityMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

// An input or an intermediate object broke a documented contract
// (non-commuting Hamiltonian, unlabeled spectrum, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical procedure could not reach its stated accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename A::Scalar, typename B::Scalar>::ReturnType;
  Matrix<Scalar> out = a * b;
  out.noalias() -= b * a;
  return out;
}

template <typename A, typename B>
double commutator_norm(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return max_abs(commutator(a, b));
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

// Throws std::invalid_argument naming the first broken invariant:
// Hermitian (1e-12), unit trace (1e-12), min eigenvalue >= -1e-10.
void check_density_matrix(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

// G G^dag / Tr(G G^dag) with G a complex Gaussian matrix drawn from mt19937_64(seed).
DensityMatrix random_density_matrix(Index dim, std::uint64_t seed);

}  // namespace irhm
