#include "irhm/rvb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace irhm {

void validate_pairing(const SpinBasis& basis, const Pairing& pairing) {
  const int n = basis.n_sites();
  if (n % 2 != 0) throw std::invalid_argument("valence-bond states need an even number of sites");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : pairing) {
    basis.check_site(i);
    basis.check_site(j);
    if (i == j) throw std::invalid_argument("dimer must join two distinct sites");
    ++seen[static_cast<std::size_t>(i)];
    ++seen[static_cast<std::size_t>(j)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw std::invalid_argument("pairing is not a perfect matching");
}

StateVector build_vb_state(const SpinBasis& basis, const Pairing& pairing) {
  validate_pairing(basis, pairing);
  const double amp = 1.0 / std::sqrt(2.0);
  StateVector psi = StateVector::Zero(basis.dimension());
  for (Index s = 0; s < basis.dimension(); ++s) {
    double value = 1.0;
    for (const auto& [i, j] : pairing) {
      const bool ui = SpinBasis::is_up(s, i);
      const bool uj = SpinBasis::is_up(s, j);
      if (ui == uj) {
        value = 0.0;
        break;
      }
      value *= ui ? amp : -amp;
    }
    psi(s) = value;
  }
  return psi;
}

namespace {

cplx root_of_unity(int order, int power) {
  return std::polar(1.0, 2.0 * std::numbers::pi * power / order);
}

void require_sites(const SpinBasis& basis, int n) {
  if (basis.n_sites() != n)
    throw std::invalid_argument("this resonating valence-bond state is defined for " + std::to_string(n) + " sites");
}

}  // namespace

StateVector rvb4_unnormalized(const SpinBasis& basis) {
  require_sites(basis, 4);
  return root_of_unity(3, 1) * build_vb_state(basis, {{0, 1}, {2, 3}}) +
         root_of_unity(3, 2) * build_vb_state(basis, {{0, 3}, {1, 2}});
}

StateVector rvb6_unnormalized(const SpinBasis& basis) {
  require_sites(basis, 6);
  return root_of_unity(4, 1) * build_vb_state(basis, {{0, 1}, {2, 5}, {3, 4}}) +
         root_of_unity(4, 2) * build_vb_state(basis, {{1, 2}, {0, 3}, {4, 5}}) +
         root_of_unity(4, 3) * build_vb_state(basis, {{0, 5}, {1, 4}, {2, 3}});
}

StateVector build_rvb4(const SpinBasis& basis) { return rvb4_unnormalized(basis).normalized(); }
StateVector build_rvb6(const SpinBasis& basis) { return rvb6_unnormalized(basis).normalized(); }

Eigen::MatrixXcd reduced_density_matrix(const StateVector& psi, const SpinBasis& basis, const std::vector<int>& part_a) {
  if (psi.size() != basis.dimension()) throw std::invalid_argument("state dimension does not match the basis");
  const int n = basis.n_sites();
  std::vector<int> a = part_a;
  std::sort(a.begin(), a.end());
  if (a.empty() || static_cast<int>(a.size()) >= n || std::adjacent_find(a.begin(), a.end()) != a.end())
    throw std::invalid_argument("subsystem must be a nonempty proper subset of distinct sites");
  for (int s : a) basis.check_site(s);
  std::vector<int> b;
  for (int s = 0; s < n; ++s)
    if (!std::binary_search(a.begin(), a.end(), s)) b.push_back(s);

  // psi as a (dim_A x dim_B) matrix; rho_A = M M^dagger.
  const Index dim_a = Index{1} << a.size();
  const Index dim_b = Index{1} << b.size();
  Eigen::MatrixXcd m(dim_a, dim_b);
  for (Index s = 0; s < basis.dimension(); ++s) {
    Index ia = 0, ib = 0;
    for (std::size_t k = 0; k < a.size(); ++k) ia |= static_cast<Index>(SpinBasis::is_up(s, a[k])) << k;
    for (std::size_t k = 0; k < b.size(); ++k) ib |= static_cast<Index>(SpinBasis::is_up(s, b[k])) << k;
    m(ia, ib) = psi(s);
  }
  return m * m.adjoint();
}

double entanglement_entropy(const StateVector& psi, const SpinBasis& basis, const std::vector<int>& part_a,
                            EntropyUnit unit) {
  const Eigen::MatrixXcd rho = reduced_density_matrix(psi, basis, part_a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : solver.eigenvalues())
    if (p > 0.0) s -= p * std::log(p);
  return unit == EntropyUnit::bits ? s / std::numbers::ln2 : s;
}

}  // namespace irhm
