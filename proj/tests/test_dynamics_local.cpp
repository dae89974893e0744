#include "doctest.h"
#include "irhm/dynamics_local.hpp"

using namespace irhm;

namespace {

CouplingParams coupling(int n, double j_star, double delta, double g, double omega = 1.0) {
  CouplingParams c;
  c.model = {j_star, delta, n};
  c.g = g;
  c.omega = omega;
  return c;
}

double max_magnitude_drift(const Trajectory& traj, const LabeledSpectrum& spec) {
  const Eigen::MatrixXd m0 = spec.to_eigenbasis(traj.states.front()).cwiseAbs();
  double worst = 0.0;
  for (const auto& rho : traj.states) worst = std::max(worst, (spec.to_eigenbasis(rho).cwiseAbs() - m0).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("density matrix checks") {
  CHECK_NOTHROW(check_density_matrix(random_density_matrix(5, 3)));
  DensityMatrix bad = random_density_matrix(3, 1);
  bad(0, 1) += 0.1;
  CHECK_THROWS_AS(check_density_matrix(bad), std::invalid_argument);
  CHECK_THROWS_AS(check_density_matrix(2.0 * random_density_matrix(3, 1)), std::invalid_argument);
  DensityMatrix neg = DensityMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(check_density_matrix(neg), std::invalid_argument);
  CHECK(random_density_matrix(4, 11).isApprox(random_density_matrix(4, 11)));
}

TEST_CASE("effective spectrum is a simultaneous eigenbasis") {
  for (int n = 2; n <= 6; ++n) {
    const SpinBasis b(n);
    const auto c = coupling(n, 0.5, 1.2, 2.0);
    const auto spec = local_effective_spectrum(b, c);
    const Eigen::MatrixXcd h = build_hs(b, c) + build_h2(b, c);
    CHECK(max_abs(h * spec.vectors - spec.vectors * spec.energies.cast<cplx>().asDiagonal()) <= 1e-10);
  }
}

TEST_CASE("closed-form evolution is phase only") {
  const SpinBasis b(4);
  const auto c = coupling(4, 0.5, 1, 2.0);
  const auto spec = local_effective_spectrum(b, c);
  const auto times = uniform_times(100.0, 201);
  const auto rho0 = random_density_matrix(16, 5);
  const auto traj = evolve_local_closed_form(rho0, spec, times);
  CHECK(traj.size() == times.size());
  CHECK(max_abs(traj.states.front() - rho0) == 0.0);
  CHECK(max_magnitude_drift(traj, spec) <= 1e-12);
  for (const auto& rho : traj.states) {
    CHECK(std::abs(rho.trace() - cplx(1.0)) <= 1e-12);
    CHECK(purity(rho) == doctest::Approx(purity(rho0)).epsilon(1e-9));
    CHECK(is_hermitian(rho, 1e-12));
  }
}

TEST_CASE("eigenbasis-diagonal state is stationary") {
  const SpinBasis b(3);
  const auto spec = local_effective_spectrum(b, coupling(3, 0.5, 1, 2.0));
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(8);
  p << 0.3, 0.1, 0.05, 0.15, 0.1, 0.1, 0.1, 0.1;
  const DensityMatrix rho0 = spec.from_eigenbasis(Eigen::MatrixXcd(p.asDiagonal()));
  const auto traj = evolve_local_closed_form(rho0, spec, uniform_times(50.0, 11));
  for (const auto& rho : traj.states) CHECK(max_abs(rho - rho0) <= 1e-14);
}

TEST_CASE("coherence norms") {
  const SpinBasis b(2);
  const auto c = coupling(2, 0.5, 1, 2.0);
  const auto spec = local_effective_spectrum(b, c);
  const auto times = uniform_times(30.0, 31);

  const Eigen::VectorXcd eig = spec.vectors.col(2);
  const auto pure = coherence_norms(evolve_local_closed_form(eig * eig.adjoint(), spec, times), spec);
  CHECK(pure.pairs.size() == 6);
  CHECK(pure.magnitudes.maxCoeff() <= 1e-14);

  const Eigen::VectorXcd sup = (spec.vectors.col(0) + spec.vectors.col(3)) / std::sqrt(2.0);
  const auto two = coherence_norms(evolve_local_closed_form(sup * sup.adjoint(), spec, times), spec);
  for (Eigen::Index t = 0; t < two.magnitudes.rows(); ++t)
    for (std::size_t k = 0; k < two.pairs.size(); ++k) {
      const bool tracked = two.pairs[k] == std::pair<Index, Index>{0, 3};
      CHECK(two.magnitudes(t, static_cast<Index>(k)) == doctest::Approx(tracked ? 0.5 : 0.0).epsilon(1e-10));
    }
}

TEST_CASE("numeric second-order integration agrees with the closed form") {
  const SpinBasis b(2);
  const auto c = coupling(2, 0.5, 1, 2.0);
  const auto spec = local_effective_spectrum(b, c);
  // singlet/triplet superposition |10>
  DensityMatrix rho0 = DensityMatrix::Zero(4, 4);
  rho0(1, 1) = 1.0;
  Tcl2Options opt;
  opt.t_end = 50.0;
  opt.n_samples = 51;
  const auto numeric = evolve_local_tcl2_numeric(rho0, b, c, opt);
  const auto exact = evolve_local_closed_form(rho0, spec, numeric.times);
  double worst = 0.0;
  for (std::size_t k = 0; k < numeric.size(); ++k) {
    worst = std::max(worst, max_abs(numeric.states[k] - exact.states[k]));
    CHECK(std::abs(numeric.states[k].trace() - cplx(1.0)) <= 1e-10);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("numeric integration at the default step over the full window") {
  for (int n = 2; n <= 4; ++n) {
    const SpinBasis b(n);
    const auto c = coupling(n, 0.5, 1, 2.0);
    const auto spec = local_effective_spectrum(b, c);
    const auto rho0 = random_density_matrix(b.dimension(), 100 + n);
    Tcl2Options opt;  // dt = 1e-3, t in [0, 100]
    const auto numeric = evolve_local_tcl2_numeric(rho0, b, c, opt);
    const auto exact = evolve_local_closed_form(rho0, spec, numeric.times);
    double worst = 0.0;
    for (std::size_t k = 0; k < numeric.size(); ++k) worst = std::max(worst, max_abs(numeric.states[k] - exact.states[k]));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("interaction picture is frozen without the second-order term") {
  const auto rho0 = random_density_matrix(8, 9);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(8, 8);
  const auto traj = integrate_interaction_picture(rho0, zero, uniform_times(10.0, 6), 0.01);
  for (const auto& rho : traj.states) CHECK(max_abs(rho - rho0) == 0.0);
}

TEST_CASE("interaction and original pictures share eigenbasis magnitudes") {
  const SpinBasis b(3);
  const auto c = coupling(3, 0.5, 1, 2.0);
  const auto spec = local_effective_spectrum(b, c);
  const auto rho0 = random_density_matrix(8, 21);
  const auto times = uniform_times(20.0, 5);
  const auto tilde = integrate_interaction_picture(rho0, build_h2(b, c), times, 1e-2);
  const auto full = evolve_local_closed_form(rho0, spec, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK((spec.to_eigenbasis(tilde.states[k]).cwiseAbs() - spec.to_eigenbasis(full.states[k]).cwiseAbs())
              .cwiseAbs()
              .maxCoeff() <= 1e-9);
}

TEST_CASE("step bound and option validation") {
  const SpinBasis b(4);
  const auto c = coupling(4, 0.5, 1, 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_h2(b, c), Eigen::EigenvaluesOnly);
  CHECK(tcl2_step_bound(b, c) == doctest::Approx(0.01 / es.eigenvalues().cwiseAbs().maxCoeff()));
  Tcl2Options bad;
  bad.dt = -1.0;
  CHECK_THROWS_AS(evolve_local_tcl2_numeric(random_density_matrix(16, 1), b, c, bad), std::invalid_argument);
  CHECK_THROWS_AS(evolve_local_closed_form(random_density_matrix(8, 1), local_effective_spectrum(b, c),
                                           uniform_times(1.0, 3)),
                  ContractViolation);
  // steps are capped at the sample spacing, so sample sparsely
  const auto strong = coupling(4, 4.0, 1, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(build_h2(b, strong), Eigen::EigenvaluesOnly);
  Tcl2Options coarse;
  coarse.t_end = 100.0;
  coarse.n_samples = 2;
  coarse.dt = 2.0 / (es2.eigenvalues().maxCoeff() - es2.eigenvalues().minCoeff());
  CHECK(coarse.dt < 100.0);
  CHECK_THROWS_AS(evolve_local_tcl2_numeric(random_density_matrix(16, 1), b, strong, coarse), AccuracyError);
}

TEST_CASE("uniform time grid") {
  const auto t = uniform_times(2.0, 5);
  CHECK(t.size() == 5);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 2.0);
  CHECK(t[1] == 0.5);
}
