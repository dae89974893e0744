#pragma once

#include <span>
#include <utility>
#include <vector>

#include "irhm/effective.hpp"

namespace irhm {

// Density matrices sampled at ascending times (units of 1/omega).
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;

  std::size_t size() const { return times.size(); }
};

// Labeled simultaneous eigenbasis of H_s + H^(2).  Throws ContractViolation
// when [H_s, H^(2)] exceeds 1e-10.
LabeledSpectrum local_effective_spectrum(const SpinBasis& basis, const CouplingParams& params);

// Phase-only evolution rho_nm(t) = e^{-i (E_n - E_m) t} rho_nm(0) in the
// eigenbasis of `spectrum`, returned in the computational basis.
Trajectory evolve_local_closed_form(const DensityMatrix& rho0, const LabeledSpectrum& spectrum,
                                    std::span<const double> times);

// Interaction-picture RK4 integration of d rho~/dt = -i [H2, rho~] from 0 to
// each of `times` with steps no longer than dt.
Trajectory integrate_interaction_picture(const DensityMatrix& rho0, const Eigen::MatrixXcd& h2,
                                         std::span<const double> times, double dt);

struct Tcl2Options {
  double t_end = 100.0;
  double dt = 1e-3;
  std::size_t n_samples = 101;          // uniform in [0, t_end]
  double richardson_tolerance = 1e-6;   // step-halving self-check
};

// RK4 in the interaction picture followed by the rotation e^{-i H_s t}.
// Throws AccuracyError when a half-step rerun differs by more than
// richardson_tolerance anywhere on the sample grid.
Trajectory evolve_local_tcl2_numeric(const DensityMatrix& rho0, const SpinBasis& basis, const CouplingParams& params,
                                     const Tcl2Options& options);

// Largest stable step for the second-order generator: 0.01 / max|E(H2)|.
double tcl2_step_bound(const SpinBasis& basis, const CouplingParams& params);

// |rho_nm| in the eigenbasis for every n < m, one row per time.
struct CoherenceSeries {
  std::vector<std::pair<Index, Index>> pairs;
  Eigen::MatrixXd magnitudes;  // rows: times, cols: pairs
};

CoherenceSeries coherence_norms(const Trajectory& trajectory, const LabeledSpectrum& spectrum);

std::vector<double> uniform_times(double t_end, std::size_t n_samples);

}  // namespace irhm
