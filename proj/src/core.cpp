#include "irhm/core.hpp"

#include <random>

#include <Eigen/Eigenvalues>

namespace irhm {

void check_density_matrix(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw std::invalid_argument("density matrix must be square and non-empty");
  if (!is_hermitian(rho, 1e-12)) throw std::invalid_argument("density matrix is not Hermitian to 1e-12");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-12) throw std::invalid_argument("density matrix trace differs from 1 by more than 1e-12");
  const Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("density matrix has an eigenvalue below -1e-10");
}

double purity(const DensityMatrix& rho) { return (rho * rho).trace().real(); }

DensityMatrix random_density_matrix(Index dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  DensityMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace irhm
