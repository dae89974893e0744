#include <algorithm>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "irhm/rvb.hpp"
#include "oracles/brute_force.hpp"
#include "oracles/frozen_constants.hpp"

using namespace irhm;

namespace {

ModelParams model(int n, double delta) {
  ModelParams p;
  p.n_sites = n;
  p.j_star = 1.0;
  p.delta = delta;
  return p;
}

std::vector<int> complement(const std::vector<int>& a, int n) {
  std::vector<int> out;
  for (int s = 0; s < n; ++s)
    if (std::find(a.begin(), a.end(), s) == a.end()) out.push_back(s);
  return out;
}

}  // namespace

TEST_CASE("two-site singlet amplitudes") {
  const auto psi = build_vb_state(SpinBasis(2), {{0, 1}});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi(0)) == 0.0);
  CHECK(std::abs(psi(1) - cplx(r)) <= 1e-15);
  CHECK(std::abs(psi(2) + cplx(r)) <= 1e-15);
  CHECK(std::abs(psi(3)) == 0.0);
  // reversed orientation flips the sign
  CHECK(max_abs(build_vb_state(SpinBasis(2), {{1, 0}}) + psi) <= 1e-15);
}

TEST_CASE("pairing validation") {
  CHECK_THROWS_AS(build_vb_state(SpinBasis(3), {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(build_vb_state(SpinBasis(4), {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(build_vb_state(SpinBasis(4), {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(build_vb_state(SpinBasis(4), {{0, 0}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(build_vb_state(SpinBasis(4), {{0, 1}, {2, 7}}), std::invalid_argument);
  CHECK_THROWS_AS(build_rvb4(SpinBasis(6)), std::invalid_argument);
  CHECK_THROWS_AS(build_rvb6(SpinBasis(4)), std::invalid_argument);
}

TEST_CASE("valence-bond states are total singlets") {
  const std::vector<Pairing> four{{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  const SpinBasis b4(4);
  for (const auto& p : four) {
    const auto psi = build_vb_state(b4, p);
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);
    CHECK((total_s_squared(b4) * psi).norm() <= 1e-12);
    CHECK((total_sz(b4) * psi).norm() <= 1e-12);
  }
  const SpinBasis b6(6);
  const auto psi6 = build_vb_state(b6, {{0, 5}, {1, 4}, {2, 3}});
  CHECK((total_s_squared(b6) * psi6).norm() <= 1e-12);
}

TEST_CASE("overlap of the two four-site matchings") {
  const SpinBasis b(4);
  const auto a = build_vb_state(b, {{0, 1}, {2, 3}});
  const auto c = build_vb_state(b, {{0, 3}, {1, 2}});
  CHECK(std::abs(a.dot(c) - cplx(-0.5)) <= 1e-14);
  // direct inner product over the explicit Kronecker form
  Eigen::VectorXcd s(4);
  s << 0, 1, -1, 0;
  s /= std::sqrt(2.0);
  Eigen::VectorXcd a_kron = Eigen::kroneckerProduct(s, s);  // site 0 is least significant: D23 (x) D01
  CHECK(max_abs(a_kron - a) <= 1e-15);
}

TEST_CASE("resonating valence-bond states") {
  const SpinBasis b4(4), b6(6);
  CHECK(rvb4_unnormalized(b4).norm() == doctest::Approx(frozen::kRvbUnnormalizedNorm).epsilon(1e-14));
  CHECK(std::abs(rvb4_unnormalized(b4).norm() - 1.0) > 0.1);
  CHECK(std::abs(rvb6_unnormalized(b6).norm() - 1.0) > 0.1);
  for (const auto& [basis, psi] : {std::pair{b4, build_rvb4(b4)}, std::pair{b6, build_rvb6(b6)}}) {
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-12);
    CHECK((total_s_squared(basis) * psi).norm() <= 1e-12);
    CHECK((total_sz(basis) * psi).norm() <= 1e-12);
    for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const auto p = model(basis.n_sites(), delta);
      const Eigen::MatrixXcd h = build_hirhm<cplx>(basis, p);
      const double e = closed_form_energy(p, 0.0, 0.0);
      CHECK((h * psi - e * psi).norm() <= 1e-10);
    }
  }
  const double w3 = 2.0 * M_PI / 3.0;
  const Eigen::VectorXcd manual = std::polar(1.0, w3) * build_vb_state(b4, {{0, 1}, {2, 3}}) +
                                  std::polar(1.0, 2 * w3) * build_vb_state(b4, {{0, 3}, {1, 2}});
  CHECK(max_abs(manual.normalized() - build_rvb4(b4)) <= 1e-14);
}

TEST_CASE("reduced density matrix matches index bookkeeping") {
  const SpinBasis b(6);
  const auto psi = build_rvb6(b);
  for (const std::vector<int>& a : {std::vector<int>{0}, {0, 2}, {1, 3, 5}, {0, 1, 2}, {2, 4, 5}}) {
    const auto rho = reduced_density_matrix(psi, b, a);
    CHECK(max_abs(rho - oracle::partial_trace(psi, 6, a)) <= 1e-14);
    CHECK(std::abs(rho.trace() - cplx(1.0)) <= 1e-12);
  }
}

TEST_CASE("entanglement entropies") {
  const SpinBasis b4(4), b6(6);
  const auto psi4 = build_rvb4(b4);
  const auto psi6 = build_rvb6(b6);
  CHECK(entanglement_entropy(psi4, b4, {0, 1}) == doctest::Approx(frozen::kRvb4Entropy01).epsilon(1e-10));
  CHECK(entanglement_entropy(psi4, b4, {0, 2}) == doctest::Approx(frozen::kRvb4Entropy02).epsilon(1e-10));
  CHECK(entanglement_entropy(psi4, b4, {0}) == doctest::Approx(frozen::kRvb4Entropy0).epsilon(1e-10));
  CHECK(entanglement_entropy(psi6, b6, {0, 1, 2}) == doctest::Approx(frozen::kRvb6Entropy012).epsilon(1e-10));
  CHECK(entanglement_entropy(psi6, b6, {0, 2, 4}) == doctest::Approx(frozen::kRvb6Entropy024).epsilon(1e-10));
  CHECK(entanglement_entropy(psi6, b6, {0}) == doctest::Approx(frozen::kRvb6Entropy0).epsilon(1e-10));
  CHECK(entanglement_entropy(psi4, b4, {0, 1}, EntropyUnit::nats) ==
        doctest::Approx(frozen::kRvb4Entropy01 * std::log(2.0)).epsilon(1e-12));

  for (int n : {4, 6}) {
    const SpinBasis b(n);
    const auto psi = n == 4 ? psi4 : psi6;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<int> a;
      for (int s = 0; s < n; ++s)
        if (mask >> s & 1) a.push_back(s);
      const auto rest = complement(a, n);
      const double sa = entanglement_entropy(psi, b, a);
      CHECK(sa == doctest::Approx(entanglement_entropy(psi, b, rest)).epsilon(1e-10));
      CHECK(sa == doctest::Approx(oracle::von_neumann_bits(oracle::partial_trace(psi, n, a))).epsilon(1e-10));
      CHECK(sa >= -1e-12);
      CHECK(sa <= std::min(a.size(), rest.size()) + 1e-12);
    }
  }
}

TEST_CASE("entropy of simple states") {
  const SpinBasis b(4);
  Eigen::VectorXcd product = Eigen::VectorXcd::Zero(16);
  product(0b0101) = 1.0;
  CHECK(std::abs(entanglement_entropy(product, b, {0, 1})) <= 1e-14);
  const auto dimers = build_vb_state(b, {{0, 2}, {1, 3}});
  CHECK(entanglement_entropy(dimers, b, {0, 1}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(entanglement_entropy(dimers, b, {0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(entanglement_entropy(dimers, b, {0, 2})) <= 1e-12);
  CHECK_THROWS_AS(entanglement_entropy(dimers, b, {}), std::invalid_argument);
  CHECK_THROWS_AS(entanglement_entropy(dimers, b, {0, 1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(entanglement_entropy(dimers, b, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(entanglement_entropy(dimers, b, {4}), std::invalid_argument);
}
