#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irhm/core.hpp"

namespace irhm {

// Many-spin computational basis.  Site 0 is the least-significant bit of the
// basis index; a set bit means spin up (equivalently, an occupied hard-core boson).
class SpinBasis {
 public:
  static constexpr int kMaxSites = 14;

  explicit SpinBasis(int n_sites);

  int n_sites() const { return n_sites_; }
  Index dimension() const { return Index{1} << n_sites_; }

  static bool is_up(Index state, int site) { return ((state >> site) & 1) != 0; }
  static int n_up(Index state) { return std::popcount(static_cast<std::uint64_t>(state)); }
  double sz(Index state) const { return n_up(state) - 0.5 * n_sites_; }

  void check_site(int site) const;

  friend bool operator==(const SpinBasis&, const SpinBasis&) = default;

 private:
  int n_sites_;
};

enum class SpinOp { Sx, Sy, Sz, Splus, Sminus };
enum class HcbOp { b, bdag, n };

// Quantum numbers of a symmetry sector.  Both are half-integers in units of hbar.
struct SectorLabel {
  double sz_total = 0.0;
  std::optional<double> s_total;

  // Throws std::invalid_argument when the label cannot occur for `n_sites` spins-1/2.
  void validate(int n_sites) const;
  std::string to_string() const;
};

bool is_half_integer(double x, double tol = 1e-9);

namespace detail {

template <typename Scalar>
SparseMatrix<Scalar> spin_operator_sparse(const SpinBasis& basis, int site, SpinOp kind) {
  basis.check_site(site);
  const Index dim = basis.dimension();
  const Index bit = Index{1} << site;
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim));
  for (Index s = 0; s < dim; ++s) {
    const bool up = (s & bit) != 0;
    switch (kind) {
      case SpinOp::Sz:
        triplets.emplace_back(s, s, Scalar(up ? 0.5 : -0.5));
        break;
      case SpinOp::Splus:
        if (!up) triplets.emplace_back(s | bit, s, Scalar(1.0));
        break;
      case SpinOp::Sminus:
        if (up) triplets.emplace_back(s & ~bit, s, Scalar(1.0));
        break;
      case SpinOp::Sx:
        triplets.emplace_back(s ^ bit, s, Scalar(0.5));
        break;
      case SpinOp::Sy:
        if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
          // Sy = (S+ - S-)/(2i)
          triplets.emplace_back(s ^ bit, s, up ? Scalar(0.0, 0.5) : Scalar(0.0, -0.5));
        } else {
          throw std::invalid_argument("Sy requires a complex scalar type");
        }
        break;
    }
  }
  SparseMatrix<Scalar> out(dim, dim);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

template <typename Scalar>
SparseMatrix<Scalar> hcb_operator_sparse(const SpinBasis& basis, int site, HcbOp kind) {
  switch (kind) {
    case HcbOp::b:
      return spin_operator_sparse<Scalar>(basis, site, SpinOp::Sminus);
    case HcbOp::bdag:
      return spin_operator_sparse<Scalar>(basis, site, SpinOp::Splus);
    case HcbOp::n:
      break;
  }
  basis.check_site(site);
  SparseMatrix<Scalar> out(basis.dimension(), basis.dimension());
  std::vector<Eigen::Triplet<Scalar>> triplets;
  for (Index s = 0; s < basis.dimension(); ++s)
    if (SpinBasis::is_up(s, site)) triplets.emplace_back(s, s, Scalar(1.0));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace detail

// Single-site spin operator embedded at `site`, identity elsewhere.
template <typename Scalar = cplx>
Matrix<Scalar> spin_operator(const SpinBasis& basis, int site, SpinOp kind) {
  return Matrix<Scalar>(detail::spin_operator_sparse<Scalar>(basis, site, kind));
}

// Hard-core boson operators: b† = S+, b = S-, n = b†b = Sz + 1/2.
template <typename Scalar = cplx>
Matrix<Scalar> hcb_operator(const SpinBasis& basis, int site, HcbOp kind) {
  return Matrix<Scalar>(detail::hcb_operator_sparse<Scalar>(basis, site, kind));
}

// Diagonal of Sz_Total in the computational basis.
Eigen::VectorXd total_sz_diagonal(const SpinBasis& basis);

template <typename Scalar = cplx>
Matrix<Scalar> total_sz(const SpinBasis& basis) {
  return total_sz_diagonal(basis).cast<Scalar>().asDiagonal();
}

// (sum_i S_i)^2 = S- S+ + Sz^2 + Sz with S+- the collective ladder operators.
SparseMatrix<double> total_s_squared_sparse(const SpinBasis& basis);

template <typename Scalar = cplx>
Matrix<Scalar> total_s_squared(const SpinBasis& basis) {
  return Matrix<Scalar>(total_s_squared_sparse(basis).cast<Scalar>());
}

// Basis indices with exactly `n_up` spins up, ascending.
std::vector<Index> sz_sector_states(const SpinBasis& basis, int n_up);

// Orthogonal projector onto the simultaneous (Sz_Total, S^2_Total) eigenspace.
// An empty sector yields the zero matrix.
Eigen::MatrixXcd sector_projector(const SpinBasis& basis, const SectorLabel& label);

// Orthonormal basis (columns) of the total-spin-s subspace inside the sector
// with `n_up` up spins.  Columns are real.
Eigen::MatrixXd total_spin_subspace(const SpinBasis& basis, int n_up, double s_total);

}  // namespace irhm
