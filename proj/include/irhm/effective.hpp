#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "irhm/irhm.hpp"

namespace irhm {

// Spin-phonon coupling g (dimensionless) and optical phonon frequency omega.
struct CouplingParams {
  double g = 1.0;
  double omega = 1.0;
  ModelParams model;

  // g >= 0 (g = 0 is the decoupled limit), omega > 0, plus ModelParams::validate.
  void validate() const;
};

// Strong-coupling non-adiabatic regime: g > 1 and J*/omega <= 1.  Returns one
// human-readable line per violated condition; never throws.
std::vector<std::string> regime_warnings(const CouplingParams& params);

// Polaron-narrowed system Hamiltonian in hard-core-boson form:
// J sum_{i<j} [ (e^{-g^2}/2) b_i^dag b_j + h.c. + Delta (n_i - 1/2)(n_j - 1/2) ].
Eigen::MatrixXcd build_hs(const SpinBasis& basis, const CouplingParams& params);

// Only the hopping part of build_hs.
Eigen::MatrixXcd build_hs_hopping(const SpinBasis& basis, const CouplingParams& params);

// Max-norm of hopping(H_s) - [ (J*/2)(N/(N-1)) e^{-g^2} n_0 - (J/2) e^{-g^2} N_p ],
// with n_0 = (1/N) sum_ij b_i^dag b_j the zero-momentum occupation.
double hopping_spectrum_identity(const SpinBasis& basis, const CouplingParams& params);

// Zero-momentum occupation operator (1/N) sum_{ij} b_i^dag b_j.
Eigen::MatrixXcd zero_momentum_occupation(const SpinBasis& basis);

// f1(g) = sum_{n>=1} g^{2n}/(n! n),  f2(g) = sum_{n,m>=1} g^{2(n+m)}/(n! m! (n+m)).
// Terms are summed in ascending order in long double; truncation when the
// term falls below 1e-15 of the partial sum (index cap 300).  Throws
// std::range_error when the series does not converge in range.
double f1(double g);
double f2(double g);

struct SecondOrderCouplings {
  double j_perp = 0.0;  // -(N-2) f1 J^2 e^{-2g^2} / (2 omega)
  double j_par = 0.0;   // [2 f1 + f2] J^2 e^{-2g^2} / (2 omega)
};

SecondOrderCouplings second_order_couplings(const CouplingParams& params);

// sum_{i<j} [ (j_perp/2) b_i^dag b_j + h.c. - (j_par/2) { n_i (1 - n_j) + n_j (1 - n_i) } ].
Eigen::MatrixXcd build_h2(const SpinBasis& basis, const SecondOrderCouplings& couplings);
Eigen::MatrixXcd build_h2(const SpinBasis& basis, const CouplingParams& params);

// Third-order hopping/interaction processes.
enum class ThirdOrderTerm { T1, T2, T3, T4, T5, T6, V1, V2, V3, TC1, TC2, TC3 };

inline constexpr std::array<ThirdOrderTerm, 12> kThirdOrderTerms = {
    ThirdOrderTerm::T1, ThirdOrderTerm::T2,  ThirdOrderTerm::T3,  ThirdOrderTerm::T4,
    ThirdOrderTerm::T5, ThirdOrderTerm::T6,  ThirdOrderTerm::V1,  ThirdOrderTerm::V2,
    ThirdOrderTerm::V3, ThirdOrderTerm::TC1, ThirdOrderTerm::TC2, ThirdOrderTerm::TC3};

std::string_view to_string(ThirdOrderTerm term);
ThirdOrderTerm third_order_term_from_string(std::string_view name);
bool is_closed_loop(ThirdOrderTerm term);  // V1..V3: single-site, l is ignored

// Literal operator-product sum of one third-order process at (l, i).
// For V terms only `i` is used.
Eigen::MatrixXd third_order_process(const SpinBasis& basis, ThirdOrderTerm term, int l, int i);

// Closed form of the same process in terms of the total number operator.
Eigen::MatrixXd third_order_closed_form(const SpinBasis& basis, ThirdOrderTerm term, int l, int i);

struct IdentityCheck {
  Eigen::MatrixXd lhs;
  Eigen::MatrixXd rhs;
  double residual = 0.0;
};

// Preconditions: l != i for T/TC; N >= 4 for T1..T6; N >= 3 for V and TC.
IdentityCheck third_order_identity(const SpinBasis& basis, ThirdOrderTerm term, int l, int i);

// All admissible (l, i) for `term` on `basis` (l == i for V terms).
std::vector<std::pair<int, int>> admissible_sites(const SpinBasis& basis, ThirdOrderTerm term);

struct ThirdOrderCoefficients {
  std::array<double, 6> t{};
  std::array<double, 3> tc{};
  std::array<double, 3> v{};

  // Order-of-magnitude scalings only:
  // t_n ~ J^3 e^{-g^2}/(g^2 omega)^2, t_cn ~ J^3 e^{-g^2}/(g omega)^2, v_n ~ J^3/(g^2 omega)^2.
  static ThirdOrderCoefficients scaling_defaults(const CouplingParams& params);
};

// sum_{i, l != i} [ sum_n t_n T_n^{li} + sum_n tc_n TC_n^{li} ] + sum_i sum_n v_n V_n^i,
// Hermitized as (A + A^dag)/2.  Built from the literal operator products.
Eigen::MatrixXcd build_h3(const SpinBasis& basis, const ThirdOrderCoefficients& coeffs);

struct SpinFormCouplings {
  double transverse = 0.0;    // J_tr = J e^{-g^2} + j_perp
  double longitudinal = 0.0;  // J_lng = J Delta + j_par
  double shift = 0.0;         // constant: -j_par N (N-1) / 8
};

SpinFormCouplings spin_form_couplings(const CouplingParams& params);

// sum_{i<j} [ J_tr (Sx Sx + Sy Sy) + J_lng Sz Sz ]  (no constant shift).
Eigen::MatrixXcd build_spin_form_heff(const SpinBasis& basis, const CouplingParams& params);

}  // namespace irhm
