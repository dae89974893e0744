#include "irhm/dynamics_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "irhm/parallel.hpp"
#include "irhm/rk4.hpp"

namespace irhm {

std::vector<double> uniform_times(double t_end, std::size_t n_samples) {
  if (n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  std::vector<double> t(n_samples, 0.0);
  if (n_samples == 1) return t;
  for (std::size_t k = 0; k < n_samples; ++k)
    t[k] = t_end * static_cast<double>(k) / static_cast<double>(n_samples - 1);
  return t;
}

namespace {

void check_times(std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0)) throw std::invalid_argument("times must be >= 0");
    if (k > 0 && times[k] < times[k - 1]) throw std::invalid_argument("times must be ascending");
  }
}

void check_spectrum(const LabeledSpectrum& spectrum, Index dim) {
  if (spectrum.size() != dim || spectrum.vectors.rows() != dim || spectrum.vectors.cols() != dim)
    throw ContractViolation("spectrum dimension does not match the density matrix");
  if (static_cast<Index>(spectrum.labels.size()) != dim) throw ContractViolation("spectrum is not fully labeled");
}

}  // namespace

LabeledSpectrum local_effective_spectrum(const SpinBasis& basis, const CouplingParams& params) {
  const Eigen::MatrixXcd hs = build_hs(basis, params);
  const Eigen::MatrixXcd h2 = build_h2(basis, params);
  const double scale = std::max(1.0, max_abs(hs));
  if (commutator_norm(hs, h2) > 1e-10 * scale) throw ContractViolation("H_s and H^(2) do not commute");
  return labeled_spectrum(hs + h2, basis);
}

Trajectory evolve_local_closed_form(const DensityMatrix& rho0, const LabeledSpectrum& spectrum,
                                    std::span<const double> times) {
  check_density_matrix(rho0);
  check_spectrum(spectrum, rho0.rows());
  check_times(times);
  const Eigen::MatrixXcd rho_eigen = spectrum.to_eigenbasis(rho0);
  const Eigen::VectorXd& e = spectrum.energies;
  Trajectory out;
  out.times.assign(times.begin(), times.end());
  out.states.resize(times.size());
  parallel_for(times.size(), [&](std::size_t k) {
    const Eigen::VectorXcd phase = (-kI * times[k] * e.cast<cplx>()).array().exp();
    const Eigen::MatrixXcd evolved = phase.asDiagonal() * rho_eigen * phase.conjugate().asDiagonal();
    out.states[k] = spectrum.from_eigenbasis(evolved);
  });
  if (!times.empty() && times.front() == 0.0) out.states.front() = rho0;
  return out;
}

Trajectory integrate_interaction_picture(const DensityMatrix& rho0, const Eigen::MatrixXcd& h2,
                                         std::span<const double> times, double dt) {
  check_times(times);
  const auto rhs = [&h2](double, const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd out = h2 * rho;
    out.noalias() -= rho * h2;
    return -kI * out;
  };
  Trajectory out;
  out.times.assign(times.begin(), times.end());
  Eigen::MatrixXcd rho = rho0;
  double t = 0.0;
  for (double target : times) {
    rho = rk4_advance(rhs, t, target, rho, dt);
    t = target;
    out.states.push_back(rho);
  }
  return out;
}

double tcl2_step_bound(const SpinBasis& basis, const CouplingParams& params) {
  const Eigen::MatrixXcd h2 = build_h2(basis, params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h2, Eigen::EigenvaluesOnly);
  const double largest = solver.eigenvalues().cwiseAbs().maxCoeff();
  return largest > 0.0 ? 0.01 / largest : std::numeric_limits<double>::infinity();
}

Trajectory evolve_local_tcl2_numeric(const DensityMatrix& rho0, const SpinBasis& basis, const CouplingParams& params,
                                     const Tcl2Options& options) {
  check_density_matrix(rho0);
  if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const Eigen::MatrixXcd hs = build_hs(basis, params);
  const Eigen::MatrixXcd h2 = build_h2(basis, params);
  if (rho0.rows() != basis.dimension()) throw std::invalid_argument("rho0 dimension does not match the basis");
  const double scale = std::max(1.0, max_abs(hs));
  if (commutator_norm(hs, h2) > 1e-10 * scale) throw ContractViolation("H_s and H^(2) do not commute");

  const auto times = uniform_times(options.t_end, options.n_samples);
  const Trajectory coarse = integrate_interaction_picture(rho0, h2, times, options.dt);
  const Trajectory fine = integrate_interaction_picture(rho0, h2, times, 0.5 * options.dt);
  double richardson = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    richardson = std::max(richardson, max_abs(coarse.states[k] - fine.states[k]));
  if (richardson > options.richardson_tolerance)
    throw AccuracyError("RK4 step-halving check failed: difference " + std::to_string(richardson) + " exceeds " +
                        std::to_string(options.richardson_tolerance) + "; reduce dt");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs_eigen(hs);
  const Eigen::MatrixXcd& v = hs_eigen.eigenvectors();
  Trajectory out;
  out.times = times;
  out.states.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::VectorXcd phase = (-kI * times[k] * hs_eigen.eigenvalues().cast<cplx>()).array().exp();
    const Eigen::MatrixXcd u = v * phase.asDiagonal() * v.adjoint();
    out.states[k] = u * fine.states[k] * u.adjoint();
  }
  return out;
}

CoherenceSeries coherence_norms(const Trajectory& trajectory, const LabeledSpectrum& spectrum) {
  CoherenceSeries out;
  const Index dim = spectrum.size();
  for (Index n = 0; n < dim; ++n)
    for (Index m = n + 1; m < dim; ++m) out.pairs.emplace_back(n, m);
  out.magnitudes.resize(static_cast<Index>(trajectory.size()), static_cast<Index>(out.pairs.size()));
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    if (trajectory.states[k].rows() != dim) throw std::invalid_argument("trajectory and spectrum dimensions differ");
    const Eigen::MatrixXcd r = spectrum.to_eigenbasis(trajectory.states[k]);
    for (std::size_t p = 0; p < out.pairs.size(); ++p)
      out.magnitudes(static_cast<Index>(k), static_cast<Index>(p)) = std::abs(r(out.pairs[p].first, out.pairs[p].second));
  }
  return out;
}

}  // namespace irhm
