#include "irhm/hilbert.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace irhm {

SpinBasis::SpinBasis(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites)
    throw std::invalid_argument("n_sites must lie in [1, " + std::to_string(kMaxSites) + "], got " +
                                std::to_string(n_sites));
}

void SpinBasis::check_site(int site) const {
  if (site < 0 || site >= n_sites_)
    throw std::invalid_argument("site " + std::to_string(site) + " out of range for " +
                                std::to_string(n_sites_) + " sites");
}

bool is_half_integer(double x, double tol) {
  const double twice = 2.0 * x;
  return std::abs(twice - std::round(twice)) <= tol;
}

void SectorLabel::validate(int n_sites) const {
  const double smax = 0.5 * n_sites;
  // sz_total + N/2 counts up spins: it must be an integer in [0, N].
  const double n_up = sz_total + smax;
  if (std::abs(n_up - std::round(n_up)) > 1e-9 || n_up < -1e-9 || n_up > n_sites + 1e-9)
    throw std::invalid_argument("sz_total=" + std::to_string(sz_total) + " invalid for " +
                                std::to_string(n_sites) + " sites");
  if (s_total) {
    const double s = *s_total;
    const double gap = smax - s;
    if (s < std::abs(sz_total) - 1e-9 || gap < -1e-9 || std::abs(gap - std::round(gap)) > 1e-9)
      throw std::invalid_argument("s_total=" + std::to_string(s) + " invalid for sz_total=" +
                                  std::to_string(sz_total) + " and " + std::to_string(n_sites) + " sites");
  }
}

std::string SectorLabel::to_string() const {
  std::ostringstream os;
  os << "(sz=" << sz_total;
  if (s_total) os << ", s=" << *s_total;
  os << ')';
  return os.str();
}

Eigen::VectorXd total_sz_diagonal(const SpinBasis& basis) {
  Eigen::VectorXd d(basis.dimension());
  for (Index s = 0; s < basis.dimension(); ++s) d(s) = basis.sz(s);
  return d;
}

SparseMatrix<double> total_s_squared_sparse(const SpinBasis& basis) {
  SparseMatrix<double> splus(basis.dimension(), basis.dimension());
  for (int site = 0; site < basis.n_sites(); ++site)
    splus += detail::spin_operator_sparse<double>(basis, site, SpinOp::Splus);
  SparseMatrix<double> s2 = SparseMatrix<double>(splus.transpose()) * splus;
  const Eigen::VectorXd sz = total_sz_diagonal(basis);
  for (Index s = 0; s < basis.dimension(); ++s) s2.coeffRef(s, s) += sz(s) * sz(s) + sz(s);
  s2.prune(0.0);
  s2.makeCompressed();
  return s2;
}

std::vector<Index> sz_sector_states(const SpinBasis& basis, int n_up) {
  std::vector<Index> states;
  for (Index s = 0; s < basis.dimension(); ++s)
    if (SpinBasis::n_up(s) == n_up) states.push_back(s);
  return states;
}

Eigen::MatrixXd total_spin_subspace(const SpinBasis& basis, int n_up, double s_total) {
  const auto states = sz_sector_states(basis, n_up);
  const auto block_dim = static_cast<Index>(states.size());
  if (block_dim == 0) return Eigen::MatrixXd(basis.dimension(), 0);
  const Eigen::MatrixXd s2 = Eigen::MatrixXd(total_s_squared_sparse(basis));
  Eigen::MatrixXd block(block_dim, block_dim);
  for (Index a = 0; a < block_dim; ++a)
    for (Index b = 0; b < block_dim; ++b) block(a, b) = s2(states[a], states[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
  const double target = s_total * (s_total + 1.0);
  std::vector<Index> keep;
  for (Index k = 0; k < block_dim; ++k)
    if (std::abs(solver.eigenvalues()(k) - target) < 0.25) keep.push_back(k);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(basis.dimension(), static_cast<Index>(keep.size()));
  for (Index c = 0; c < static_cast<Index>(keep.size()); ++c)
    for (Index a = 0; a < block_dim; ++a) out(states[a], c) = solver.eigenvectors()(a, keep[c]);
  return out;
}

Eigen::MatrixXcd sector_projector(const SpinBasis& basis, const SectorLabel& label) {
  label.validate(basis.n_sites());
  const int n_up = static_cast<int>(std::lround(label.sz_total + 0.5 * basis.n_sites()));
  if (!label.s_total) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension());
    for (Index s : sz_sector_states(basis, n_up)) p(s, s) = 1.0;
    return p;
  }
  const Eigen::MatrixXd q = total_spin_subspace(basis, n_up, *label.s_total);
  return (q * q.transpose()).cast<cplx>();
}

}  // namespace irhm
