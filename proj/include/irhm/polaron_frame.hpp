#pragma once

#include <span>
#include <string>
#include <vector>

#include "irhm/effective.hpp"

namespace irhm {

// Two local phonon modes, each truncated at occupation n_max.  Boson index
// = m_0 + (n_max + 1) m_1.
struct BosonFockSpace {
  int n_modes = 2;
  int n_max = 10;

  Index mode_dimension() const { return n_max + 1; }
  Index dimension() const;
  void validate() const;
  void check_mode(int mode) const;

  // ceil(g^2 + 6 g) + 5
  static int default_n_max(double g);
};

// Composite space: two-site spin register (dimension 4) tensored with the
// boson space; composite index = spin_index * boson_dim + boson_index.
Index composite_dimension(const BosonFockSpace& fock);

// Boson annihilation operator of `mode` on the boson factor.
Eigen::MatrixXd boson_annihilation(const BosonFockSpace& fock, int mode);

Eigen::MatrixXd embed_spin(const Eigen::MatrixXd& spin_op, const BosonFockSpace& fock);
Eigen::MatrixXd embed_boson(const Eigen::MatrixXd& boson_op);

// Two-site hard-core bosons with local optical phonons:
// J [ (b_1^dag b_2 + h.c.)/2 + Delta (n_1 - 1/2)(n_2 - 1/2) ] + omega sum a^dag a
//   + g omega sum_j (n_j - 1/2)(a_j + a_j^dag).
Eigen::MatrixXd build_total_hamiltonian(const CouplingParams& params, const BosonFockSpace& fock);

// Warns when n_max < 4 g^2.
std::vector<std::string> truncation_warnings(const CouplingParams& params, const BosonFockSpace& fock);

// X = exp[(g/2)(a - a^dag)] for `mode`, on the boson factor.
Eigen::MatrixXd displacement_x(const BosonFockSpace& fock, int mode, double g);

// Conditional displacement e^{-S} = prod_i [ n_i X_i + (1 - n_i) X_i^dag ] on the composite space.
Eigen::MatrixXd lf_frame_operator(const BosonFockSpace& fock, double g);

// Ground energy of build_total_hamiltonian (block diagonalization by particle number).
double total_ground_energy(const CouplingParams& params, const BosonFockSpace& fock);

// Singlet (|10> - |01>)/sqrt2 and triplet (|10> + |01>)/sqrt2 in the spin register.
Eigen::Vector4d singlet_state();
Eigen::Vector4d triplet_state();

// <s| Tr_ph[e^{S} rho_T e^{-S}] |t> for a composite density matrix.
cplx lf_frame_singlet_triplet(const Eigen::MatrixXcd& rho_t, const BosonFockSpace& fock, double g);

// The same element as the explicit polaron-dressed trace
// (1/2) sum_m <m| (<10| X2 X1^dag - <01| X1 X2^dag) rho_T (X1 X2^dag |10> + X2 X1^dag |01>) |m>.
cplx dressed_singlet_triplet(const Eigen::MatrixXcd& rho_t, const BosonFockSpace& fock, double g);

// Phonon part of the initial state: the vacuum of the displaced (polaron)
// modes, e^{-S}(rho_s0 (x) |0,0><0,0|)e^{S}, or the bare vacuum rho_s0 (x) |0,0><0,0|.
enum class PhononVacuum { polaron, bare };

struct PolaronCoherence {
  std::vector<double> times;
  std::vector<cplx> dressed;  // <s| Tr_ph[e^{S} rho_T e^{-S}] |t>
  std::vector<cplx> bare;     // <s| Tr_ph[rho_T] |t>
  double max_top_population = 0.0;
};

// Exact composite evolution from rho_s0 with the chosen phonon vacuum, reporting
// the singlet-triplet element with and without polaron dressing.
// Throws AccuracyError when the top Fock level of either mode holds more than
// 1e-6 population at a sampled time.
PolaronCoherence original_frame_coherence(const CouplingParams& params, const BosonFockSpace& fock,
                                          const Eigen::Matrix4cd& rho_s0, std::span<const double> times,
                                          PhononVacuum vacuum = PhononVacuum::polaron);

}  // namespace irhm
