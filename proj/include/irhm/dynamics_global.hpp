#pragma once

#include <span>
#include <variant>
#include <vector>

#include "irhm/dynamics_local.hpp"

namespace irhm {

// One bath oscillator: coupling g_k and frequency omega_k > 0.
struct BathMode {
  cplx g{1.0, 0.0};
  double omega = 1.0;
};

// Continuum limit sum_k |g_k|^2 omega_k^2 (.) -> int_0^inf d omega  lambda omega e^{-omega/omega_c} (.).
struct OhmicDensity {
  double lambda = 0.1;
  double omega_c = 1.0;
};

struct BathSpec {
  std::variant<std::vector<BathMode>, OhmicDensity> kind = std::vector<BathMode>{BathMode{}};
  double temperature = 0.0;  // k_B T in energy units; 0 means zero temperature

  void validate() const;
  bool is_ohmic() const { return std::holds_alternative<OhmicDensity>(kind); }
};

// alpha(tau) = eta(tau) + i nu(tau) with
//   eta = sum |g|^2 w^2 coth(w / 2T) cos(w tau),  nu = -sum |g|^2 w^2 sin(w tau).
// The Ohmic continuum is integrated by adaptive Gauss-Kronrod quadrature.
cplx bath_correlation(const BathSpec& bath, double tau);

// F(t) = int_0^t alpha(s) ds,  X = int_0^t Re F,  Y = int_0^t Im F on a uniform grid.
struct MemoryKernels {
  std::vector<double> times;
  Eigen::VectorXd f_real, f_imag, x, y;

  double spacing() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  // Grid index of t; throws ContractViolation when t is not a grid point.
  std::size_t index_of(double t) const;
};

// Composite Simpson on the grid, refined by doubling until successive
// refinements agree to 1e-9 (relative to max(1, |kernel|)); AccuracyError otherwise.
MemoryKernels memory_kernels(const BathSpec& bath, double t_end, std::size_t n_grid);

// Closed-form collective-dephasing evolution in the labeled eigenbasis of H_IRHM:
// rho_nm(t) = exp(-i[(E_n - E_m) t + (Sz_n^2 - Sz_m^2) Y(t)]) exp(-(Sz_n - Sz_m)^2 X(t)) rho_nm(0).
// Every time must be a kernel grid point.
Trajectory evolve_global_closed_form(const DensityMatrix& rho0, const LabeledSpectrum& spectrum,
                                     const MemoryKernels& kernels, std::span<const double> times);

// max |[Sz_Total, H_IRHM]|.
double l_operator_check(const SpinBasis& basis, const ModelParams& params);

// RK4 integration of
//   d rho/dt = -i[H, rho] + F(t)[L rho, L] + F*(t)[L, rho L],  L = Sz_Total,
// with step 2h (h = kernel spacing) so that stage times land on grid points.
Trajectory integrate_collective_master_equation(const DensityMatrix& rho0, const Eigen::MatrixXcd& h,
                                                const Eigen::MatrixXcd& l, const MemoryKernels& kernels,
                                                std::span<const double> times);

struct MasterEquationCrossCheck {
  Trajectory integrated;
  Trajectory closed_form;
  double max_deviation = 0.0;
  bool consistent = false;  // max_deviation <= tolerance; false flags a reading mismatch
};

// Compares the integrated master equation with the closed form on `times`.
MasterEquationCrossCheck cross_check_master_equation(const DensityMatrix& rho0, const SpinBasis& basis,
                                                     const ModelParams& params, const MemoryKernels& kernels,
                                                     std::span<const double> times, double tolerance = 1e-6);

}  // namespace irhm
