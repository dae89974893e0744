#pragma once

#include <vector>

#include "irhm/hilbert.hpp"

namespace irhm {

// Infinite-range XXZ model.  The pair coupling is J = J*/(N-1) so that the
// energy per site stays finite as N grows.
struct ModelParams {
  double j_star = 1.0;
  double delta = 1.0;
  int n_sites = 2;

  double pair_coupling() const { return j_star / (n_sites - 1); }
  // Throws std::invalid_argument: N < 2, J* <= 0 or Delta < 0.
  void validate() const;
  void check_basis(const SpinBasis& basis) const;
};

// sum_{i<j} [ transverse (Sx_i Sx_j + Sy_i Sy_j) + longitudinal Sz_i Sz_j ],
// assembled directly in the computational basis.
template <typename Scalar = cplx>
Matrix<Scalar> xxz_pair_sum(const SpinBasis& basis, double transverse, double longitudinal) {
  const Index dim = basis.dimension();
  const int n = basis.n_sites();
  Matrix<Scalar> h = Matrix<Scalar>::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool ui = SpinBasis::is_up(s, i);
        const bool uj = SpinBasis::is_up(s, j);
        diag += longitudinal * (ui == uj ? 0.25 : -0.25);
        // (S+_i S-_j + S-_i S+_j)/2 swaps an antiparallel pair
        if (ui != uj) h(s ^ ((Index{1} << i) | (Index{1} << j)), s) += Scalar(0.5 * transverse);
      }
    }
    h(s, s) += Scalar(diag);
  }
  return h;
}

// J sum_{i<j} [ S_i.S_j + (Delta-1) Sz_i Sz_j ].
template <typename Scalar = cplx>
Matrix<Scalar> build_hirhm(const SpinBasis& basis, const ModelParams& params) {
  params.validate();
  params.check_basis(basis);
  const double j = params.pair_coupling();
  return xxz_pair_sum<Scalar>(basis, j, j * params.delta);
}

// The same Hamiltonian through collective operators:
// (J/2) [ S_T^2 - 3N/4 + (Delta-1) (Sz_T^2 - N/4) ].
Eigen::MatrixXcd build_hirhm_collective(const SpinBasis& basis, const ModelParams& params);

// Closed-form eigenenergy of the (S_T, S_T^z) multiplet.
double closed_form_energy(const ModelParams& params, double s_total, double sz_total);

struct LabeledSpectrum {
  Eigen::VectorXd energies;            // ascending
  Eigen::MatrixXcd vectors;            // orthonormal columns
  std::vector<SectorLabel> labels;     // s_total always set

  Index size() const { return energies.size(); }
  // Eigenbasis representation V^dagger rho V.
  Eigen::MatrixXcd to_eigenbasis(const Eigen::MatrixXcd& op) const { return vectors.adjoint() * op * vectors; }
  Eigen::MatrixXcd from_eigenbasis(const Eigen::MatrixXcd& op) const { return vectors * op * vectors.adjoint(); }
};

// Simultaneous eigenbasis of (H, S_T^2, S_T^z).  H must commute with both
// collective operators to 1e-10 (relative to max(1, max|H|)), otherwise
// ContractViolation.  Ordering: ascending energy; within an energy cluster
// (1e-9 relative) by (S_T, S_T^z).
LabeledSpectrum labeled_spectrum(const Eigen::MatrixXcd& h, const SpinBasis& basis);

// max_k |E_k - closed_form_energy(label_k)|.
double closed_form_deviation(const LabeledSpectrum& spectrum, const ModelParams& params);

}  // namespace irhm
