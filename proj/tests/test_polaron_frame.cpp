#include <algorithm>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "irhm/dynamics_local.hpp"
#include "irhm/polaron_frame.hpp"
#include "oracles/brute_force.hpp"

using namespace irhm;

namespace {

CouplingParams pair_params(double j_star, double delta, double g, double omega = 1.0) {
  CouplingParams c;
  c.model = {j_star, delta, 2};
  c.g = g;
  c.omega = omega;
  return c;
}

BosonFockSpace fock(int n_max) {
  BosonFockSpace f;
  f.n_max = n_max;
  return f;
}

Eigen::MatrixXd spin_number(int site) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(4, 4);
  for (int s = 0; s < 4; ++s) n(s, s) = (s >> site) & 1;
  return n;
}

double drift(const std::vector<cplx>& series) {
  double worst = 0.0;
  for (const auto& z : series) worst = std::max(worst, std::abs(std::abs(z) - std::abs(series.front())));
  return worst;
}

Eigen::Matrix4cd pure(const Eigen::Vector4cd& v) { return v * v.adjoint(); }

}  // namespace

TEST_CASE("boson space bookkeeping") {
  const auto f = fock(4);
  CHECK(f.mode_dimension() == 5);
  CHECK(f.dimension() == 25);
  CHECK(composite_dimension(f) == 100);
  CHECK(BosonFockSpace::default_n_max(2.0) == 21);
  CHECK(BosonFockSpace::default_n_max(0.0) == 5);
  CHECK_THROWS_AS(fock(0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(fock(201).validate(), std::invalid_argument);
  BosonFockSpace three;
  three.n_modes = 3;
  CHECK_THROWS_AS(three.validate(), std::invalid_argument);
  CHECK_THROWS_AS(boson_annihilation(f, 2), std::invalid_argument);
  CHECK(truncation_warnings(pair_params(0.2, 1, 2.0), fock(10)).size() == 1);
  CHECK(truncation_warnings(pair_params(0.2, 1, 2.0), fock(21)).empty());
}

TEST_CASE("boson ladder operators") {
  const auto f = fock(6);
  const Eigen::MatrixXd a0 = boson_annihilation(f, 0);
  const Eigen::MatrixXd a1 = boson_annihilation(f, 1);
  CHECK(max_abs(a0 * a1 - a1 * a0) == 0.0);
  CHECK(max_abs(a0 * a1.transpose() - a1.transpose() * a0) == 0.0);
  // [a, a^dag] = 1 away from the top level; index = m0 + 7 m1
  const Eigen::MatrixXd c = a0 * a0.transpose() - a0.transpose() * a0;
  for (Index m1 = 0; m1 < 7; ++m1)
    for (Index m0 = 0; m0 < 6; ++m0) CHECK(c(m0 + 7 * m1, m0 + 7 * m1) == doctest::Approx(1.0));
  CHECK(a0(2, 3) == doctest::Approx(std::sqrt(3.0)));
  CHECK(a1(0, 7) == doctest::Approx(1.0));
}

TEST_CASE("composite Hamiltonian") {
  auto three_sites = pair_params(1.0, 1.0, 1.0);
  three_sites.model.n_sites = 3;
  CHECK_THROWS_AS(build_total_hamiltonian(three_sites, fock(3)), std::invalid_argument);
  const auto f = fock(8);
  const Eigen::MatrixXd h = build_total_hamiltonian(pair_params(0.4, 1.3, 1.5), f);
  CHECK(h.rows() == composite_dimension(f));
  CHECK(max_abs(h - h.transpose()) == 0.0);
  // conserves the particle number
  const Eigen::MatrixXd n_tot = embed_spin(spin_number(0) + spin_number(1), f);
  CHECK(max_abs(h * n_tot - n_tot * h) <= 1e-14);
}

TEST_CASE("decoupled spectrum at zero coupling") {
  const auto f = fock(3);
  const auto c = pair_params(0.7, 1.4, 0.0, 1.3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_total_hamiltonian(c, f), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> spin(oracle::hcb_pair_model(2, 0.35, 0.7 * 1.4),
                                                       Eigen::EigenvaluesOnly);
  std::vector<double> expect;
  for (double e : spin.eigenvalues())
    for (int m0 = 0; m0 <= 3; ++m0)
      for (int m1 = 0; m1 <= 3; ++m1) expect.push_back(e + 1.3 * (m0 + m1));
  std::sort(expect.begin(), expect.end());
  for (std::size_t k = 0; k < expect.size(); ++k) CHECK(es.eigenvalues()(static_cast<Index>(k)) == doctest::Approx(expect[k]).epsilon(1e-12));
  CHECK(total_ground_energy(c, f) == doctest::Approx(expect.front()).epsilon(1e-12));
}

TEST_CASE("ground energy converges with the truncation") {
  const auto c = pair_params(0.2, 1.0, 1.5);
  double previous = total_ground_energy(c, fock(6));
  double last_step = 0.0;
  for (int n_max : {9, 12, 15, 18}) {
    const double e = total_ground_energy(c, fock(n_max));
    CHECK(e <= previous + 1e-12);
    last_step = previous - e;
    previous = e;
  }
  CHECK(last_step <= 1e-10);
  // polaron shift -g^2 omega / 4 per site, plus terms of order J
  CHECK(std::abs(previous + 2 * 0.25 * 1.5 * 1.5) <= 0.2);
}

TEST_CASE("displacement operator") {
  const auto f = fock(20);
  for (int mode : {0, 1}) {
    const Eigen::MatrixXd x = displacement_x(f, mode, 1.2);
    CHECK(max_abs(x * x.transpose() - Eigen::MatrixXd::Identity(f.dimension(), f.dimension())) <= 1e-12);
    CHECK(x(0, 0) == doctest::Approx(std::exp(-1.2 * 1.2 / 8.0)).epsilon(1e-12));
    CHECK(max_abs(displacement_x(f, mode, 0.0) - Eigen::MatrixXd::Identity(f.dimension(), f.dimension())) == 0.0);
  }
  // Poisson occupation of the displaced vacuum, |alpha| = g/2
  const Eigen::MatrixXd x = displacement_x(f, 0, 1.2);
  double factorial = 1.0;
  for (int m = 0; m < 6; ++m) {
    if (m > 0) factorial *= m;
    const double p = std::exp(-0.36) * std::pow(0.36, m) / factorial;
    CHECK(x(m, 0) * x(m, 0) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("frame operator is the exponential of the polaron generator") {
  const auto f = fock(6);
  const double g = 0.9;
  // S = -g sum_i (n_i - 1/2)(a_i - a_i^dag)
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(composite_dimension(f), composite_dimension(f));
  for (int i : {0, 1}) {
    const Eigen::MatrixXd a = boson_annihilation(f, i);
    s -= g * embed_spin(spin_number(i) - 0.5 * Eigen::MatrixXd::Identity(4, 4), f) *
         embed_boson(a - a.transpose());
  }
  const Eigen::MatrixXd u = lf_frame_operator(f, g);
  CHECK(max_abs(u - Eigen::MatrixXd((-s).exp())) <= 1e-12);
  CHECK(max_abs(u * u.transpose() - Eigen::MatrixXd::Identity(u.rows(), u.cols())) <= 1e-12);
}

TEST_CASE("dressed spin states are eigenstates without hopping") {
  const double g = 1.0;
  const auto f = fock(24);
  const auto c = pair_params(1e-9, 1.0, g);
  const Eigen::MatrixXd h = build_total_hamiltonian(c, f);
  const Eigen::MatrixXd u = lf_frame_operator(f, g);
  for (Index sigma = 0; sigma < 4; ++sigma) {
    Eigen::VectorXd bare = Eigen::VectorXd::Zero(composite_dimension(f));
    bare(sigma * f.dimension()) = 1.0;
    const Eigen::VectorXd psi = u * bare;
    const double e = psi.dot(h * psi);
    CHECK((h * psi - e * psi).norm() <= 1e-7);
    CHECK(e == doctest::Approx(-0.5 * g * g).epsilon(1e-6));
  }
}

TEST_CASE("explicit dressed trace equals the frame rotation") {
  const auto f = fock(5);
  for (double g : {0.0, 0.6, 1.7}) {
    const auto rho = random_density_matrix(composite_dimension(f), 31);
    const cplx a = lf_frame_singlet_triplet(rho, f, g);
    const cplx b = dressed_singlet_triplet(rho, f, g);
    CHECK(std::abs(a - b) <= 1e-10);
  }
  CHECK_THROWS_AS(lf_frame_singlet_triplet(random_density_matrix(10, 1), f, 1.0), std::invalid_argument);
}

TEST_CASE("singlet and triplet conventions") {
  const auto s = singlet_state();
  const auto t = triplet_state();
  CHECK(s.dot(t) == 0.0);
  CHECK(s(1) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(s(2) == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK(t(1) == t(2));
}

TEST_CASE("zero coupling: the coherence only rotates at the hopping gap") {
  const double j = 0.3;
  const auto c = pair_params(j, 1.5, 0.0);
  Eigen::Vector4cd site = Eigen::Vector4cd::Zero();
  site(1) = 1.0;  // site 0 occupied
  const auto times = uniform_times(20.0, 41);
  const auto r = original_frame_coherence(c, fock(2), pure(site), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const cplx expect = 0.5 * std::exp(kI * j * times[k]);
    CHECK(std::abs(r.dressed[k] - expect) <= 1e-10);
    CHECK(std::abs(r.bare[k] - expect) <= 1e-10);
  }
}

TEST_CASE("bare trace of the polaron vacuum is suppressed by the phonon overlap") {
  const double g = 1.0;
  const auto c = pair_params(0.1, 1.0, g);
  const Eigen::Vector4cd psi = (singlet_state().cast<cplx>() + kI * triplet_state().cast<cplx>()) / std::sqrt(2.0);
  const std::vector<double> t0{0.0};
  const auto f = fock(BosonFockSpace::default_n_max(g));
  const auto r = original_frame_coherence(c, f, pure(psi), t0);
  CHECK(std::abs(r.dressed[0] - cplx(0.0, -0.5)) <= 1e-10);
  CHECK(std::abs(r.bare[0] - cplx(0.0, -0.5 * std::exp(-g * g))) <= 1e-10);
  // a bare phonon vacuum is the undressed state
  const auto rb = original_frame_coherence(c, f, pure(psi), t0, PhononVacuum::bare);
  CHECK(std::abs(rb.bare[0] - cplx(0.0, -0.5)) <= 1e-10);
}

TEST_CASE("dressed coherence drift shrinks with the hopping") {
  const double g = 1.0;
  const auto f = fock(BosonFockSpace::default_n_max(g));
  Eigen::Vector4cd site = Eigen::Vector4cd::Zero();
  site(1) = 1.0;
  const auto times = uniform_times(40.0, 161);
  const double d1 = drift(original_frame_coherence(pair_params(0.1, 1.0, g), f, pure(site), times).dressed);
  const double d2 = drift(original_frame_coherence(pair_params(0.05, 1.0, g), f, pure(site), times).dressed);
  CHECK(d1 < 1e-2);
  CHECK(d1 / d2 >= 3.0);
  CHECK(d1 / d2 <= 5.0);
  const auto bare = original_frame_coherence(pair_params(0.1, 1.0, g), f, pure(site), times, PhononVacuum::bare);
  CHECK(drift(bare.dressed) > 10 * d1);
}

TEST_CASE("truncation leak is reported") {
  Eigen::Vector4cd site = Eigen::Vector4cd::Zero();
  site(1) = 1.0;
  const auto times = uniform_times(10.0, 11);
  CHECK_THROWS_AS(original_frame_coherence(pair_params(0.2, 1.0, 2.0), fock(3), pure(site), times), AccuracyError);
  CHECK_THROWS_AS(original_frame_coherence(pair_params(0.2, 1.0, 2.0, 1.0), fock(3), pure(site),
                                           std::vector<double>{-1.0}),
                  std::invalid_argument);
}
