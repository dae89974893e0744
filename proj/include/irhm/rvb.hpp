#pragma once

#include <utility>
#include <vector>

#include "irhm/irhm.hpp"

namespace irhm {

using StateVector = Eigen::VectorXcd;

// Disjoint site pairs covering every site exactly once.  Each dimer (i, j)
// is the singlet (|up_i down_j> - |down_i up_j>)/sqrt(2): the first site of
// the pair carries the positive |up> amplitude.
using Pairing = std::vector<std::pair<int, int>>;

void validate_pairing(const SpinBasis& basis, const Pairing& pairing);

// Tensor product of singlet dimers over `pairing` (unit norm).
StateVector build_vb_state(const SpinBasis& basis, const Pairing& pairing);

// w3 (D01 D23) + w3^2 (D03 D12), w3 = e^{2 pi i/3}, normalized after summation.
StateVector build_rvb4(const SpinBasis& basis);
// w4 (D01 D25 D34) + w4^2 (D12 D03 D45) + w4^3 (D05 D14 D23), w4 = i, normalized.
StateVector build_rvb6(const SpinBasis& basis);

// Unnormalized superpositions, exposed for overlap bookkeeping.
StateVector rvb4_unnormalized(const SpinBasis& basis);
StateVector rvb6_unnormalized(const SpinBasis& basis);

enum class EntropyUnit { bits, nats };

// Reduced density matrix Tr_B |psi><psi| on the sites of `part_a` (ascending
// order defines the reduced basis bit order).
Eigen::MatrixXcd reduced_density_matrix(const StateVector& psi, const SpinBasis& basis, const std::vector<int>& part_a);

// von Neumann entropy of the reduced state on `part_a`; eigenvalues below
// zero are clipped and 0 log 0 = 0.
double entanglement_entropy(const StateVector& psi, const SpinBasis& basis, const std::vector<int>& part_a,
                            EntropyUnit unit = EntropyUnit::bits);

}  // namespace irhm
