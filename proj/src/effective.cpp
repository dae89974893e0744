#include "irhm/effective.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <sstream>

namespace irhm {

void CouplingParams::validate() const {
  model.validate();
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("g must be a finite value >= 0");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be > 0");
}

std::vector<std::string> regime_warnings(const CouplingParams& params) {
  std::vector<std::string> out;
  if (!(params.g > 1.0)) {
    std::ostringstream os;
    os << "g = " << params.g << " is not in the strong-coupling regime (g > 1)";
    out.push_back(os.str());
  }
  if (params.model.j_star / params.omega > 1.0) {
    std::ostringstream os;
    os << "J*/omega = " << params.model.j_star / params.omega << " exceeds 1 (not non-adiabatic)";
    out.push_back(os.str());
  }
  // Markov condition J* e^{-g^2} << omega, flagged when g^2 <= ln(100 J*/omega).
  if (params.g * params.g <= std::log(100.0 * params.model.j_star / params.omega)) {
    std::ostringstream os;
    os << "J* e^{-g^2}/omega = " << params.model.j_star * std::exp(-params.g * params.g) / params.omega
       << " is not << 1 (Markov separation of time scales is weak)";
    out.push_back(os.str());
  }
  return out;
}

namespace {

bool occupied(Index s, int site) { return SpinBasis::is_up(s, site); }

// Pairwise hard-core-boson Hamiltonian:
// sum_{i<j} [ hop (b_i^dag b_j + h.c.) + pair_energy(n_i, n_j) ].
Eigen::MatrixXcd hcb_pair_sum(const SpinBasis& basis, double hop, const std::function<double(int, int)>& pair_energy) {
  const Index dim = basis.dimension();
  const int n = basis.n_sites();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const int ni = occupied(s, i) ? 1 : 0;
        const int nj = occupied(s, j) ? 1 : 0;
        diag += pair_energy(ni, nj);
        if (ni != nj && hop != 0.0) h(s ^ ((Index{1} << i) | (Index{1} << j)), s) += hop;
      }
    }
    h(s, s) += diag;
  }
  return h;
}

void check_model(const SpinBasis& basis, const CouplingParams& params) {
  params.validate();
  params.model.check_basis(basis);
}

}  // namespace

Eigen::MatrixXcd build_hs(const SpinBasis& basis, const CouplingParams& params) {
  check_model(basis, params);
  const double j = params.model.pair_coupling();
  const double delta = params.model.delta;
  return hcb_pair_sum(basis, 0.5 * j * std::exp(-params.g * params.g),
                      [&](int ni, int nj) { return j * delta * (ni - 0.5) * (nj - 0.5); });
}

Eigen::MatrixXcd build_hs_hopping(const SpinBasis& basis, const CouplingParams& params) {
  check_model(basis, params);
  const double j = params.model.pair_coupling();
  return hcb_pair_sum(basis, 0.5 * j * std::exp(-params.g * params.g), [](int, int) { return 0.0; });
}

Eigen::MatrixXcd zero_momentum_occupation(const SpinBasis& basis) {
  const int n = basis.n_sites();
  SparseMatrix<double> total(basis.dimension(), basis.dimension());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      total += detail::hcb_operator_sparse<double>(basis, i, HcbOp::bdag) *
               detail::hcb_operator_sparse<double>(basis, j, HcbOp::b);
  return Eigen::MatrixXcd(Eigen::MatrixXd(total) / n);
}

double hopping_spectrum_identity(const SpinBasis& basis, const CouplingParams& params) {
  check_model(basis, params);
  const int n = basis.n_sites();
  const double j = params.model.pair_coupling();
  const double narrowing = std::exp(-params.g * params.g);
  Eigen::MatrixXcd rhs = 0.5 * params.model.j_star * (static_cast<double>(n) / (n - 1)) * narrowing *
                         zero_momentum_occupation(basis);
  Eigen::VectorXd particles(basis.dimension());
  for (Index s = 0; s < basis.dimension(); ++s) particles(s) = SpinBasis::n_up(s);
  rhs.diagonal() -= (0.5 * j * narrowing * particles).cast<cplx>();
  return max_abs(build_hs_hopping(basis, params) - rhs);
}

namespace {

// Sums positive terms smallest-first in extended precision.
double sum_ascending(std::vector<long double>& terms) {
  std::sort(terms.begin(), terms.end());
  long double acc = 0.0L;
  for (long double t : terms) acc += t;
  return static_cast<double>(acc);
}

constexpr int kSeriesCap = 300;
constexpr long double kSeriesRelTol = 1e-15L;

// sum_{n>=1} weight(n) x^n / (n! n), weight(n) >= 0.
double polylog_like_series(long double x, const std::function<long double(int, long double)>& term_of, const char* name) {
  std::vector<long double> terms;
  long double partial = 0.0L;
  long double power = 1.0L;  // x^n / n!
  for (int n = 1; n <= kSeriesCap; ++n) {
    power *= x / n;
    const long double term = term_of(n, power);
    if (!std::isfinite(static_cast<double>(term)))
      throw std::range_error(std::string(name) + ": series terms overflow");
    terms.push_back(term);
    partial += term;
    if (n > x && partial > 0.0L && term <= kSeriesRelTol * partial) return sum_ascending(terms);
  }
  throw std::range_error(std::string(name) + ": series did not converge within " + std::to_string(kSeriesCap) + " terms");
}

}  // namespace

double f1(double g) {
  if (!(g >= 0.0)) throw std::invalid_argument("f1: g must be >= 0");
  if (g == 0.0) return 0.0;
  const long double x = static_cast<long double>(g) * g;
  return polylog_like_series(x, [](int n, long double p) { return p / n; }, "f1");
}

double f2(double g) {
  if (!(g >= 0.0)) throw std::invalid_argument("f2: g must be >= 0");
  if (g == 0.0) return 0.0;
  // Grouping n + m = s:  sum_{n=1}^{s-1} 1/(n!(s-n)!) = (2^s - 2)/s!.
  const long double x = static_cast<long double>(g) * g;
  return polylog_like_series(
      x, [](int s, long double p) { return (std::pow(2.0L, s) - 2.0L) * p / s; }, "f2");
}

SecondOrderCouplings second_order_couplings(const CouplingParams& params) {
  params.validate();
  const double n = params.model.n_sites;
  const double j = params.model.pair_coupling();
  const double a = f1(params.g);
  const double b = f2(params.g);
  const double scale = j * j * std::exp(-2.0 * params.g * params.g) / (2.0 * params.omega);
  return {-(n - 2.0) * a * scale, (2.0 * a + b) * scale};
}

Eigen::MatrixXcd build_h2(const SpinBasis& basis, const SecondOrderCouplings& c) {
  return hcb_pair_sum(basis, 0.5 * c.j_perp,
                      [&](int ni, int nj) { return -0.5 * c.j_par * (ni * (1 - nj) + nj * (1 - ni)); });
}

Eigen::MatrixXcd build_h2(const SpinBasis& basis, const CouplingParams& params) {
  check_model(basis, params);
  return build_h2(basis, second_order_couplings(params));
}

std::string_view to_string(ThirdOrderTerm term) {
  switch (term) {
    case ThirdOrderTerm::T1: return "T1";
    case ThirdOrderTerm::T2: return "T2";
    case ThirdOrderTerm::T3: return "T3";
    case ThirdOrderTerm::T4: return "T4";
    case ThirdOrderTerm::T5: return "T5";
    case ThirdOrderTerm::T6: return "T6";
    case ThirdOrderTerm::V1: return "V1";
    case ThirdOrderTerm::V2: return "V2";
    case ThirdOrderTerm::V3: return "V3";
    case ThirdOrderTerm::TC1: return "TC1";
    case ThirdOrderTerm::TC2: return "TC2";
    case ThirdOrderTerm::TC3: return "TC3";
  }
  return "?";
}

ThirdOrderTerm third_order_term_from_string(std::string_view name) {
  for (auto t : kThirdOrderTerms)
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown third-order term '" + std::string(name) + "'");
}

bool is_closed_loop(ThirdOrderTerm term) {
  return term == ThirdOrderTerm::V1 || term == ThirdOrderTerm::V2 || term == ThirdOrderTerm::V3;
}

namespace {

struct HcbOperators {
  std::vector<SparseMatrix<double>> b, bd;
  Eigen::VectorXd number;  // diagonal of the total number operator

  explicit HcbOperators(const SpinBasis& basis) : number(basis.dimension()) {
    for (int s = 0; s < basis.n_sites(); ++s) {
      b.push_back(detail::hcb_operator_sparse<double>(basis, s, HcbOp::b));
      bd.push_back(detail::hcb_operator_sparse<double>(basis, s, HcbOp::bdag));
    }
    for (Index s = 0; s < basis.dimension(); ++s) number(s) = SpinBasis::n_up(s);
  }
};

SparseMatrix<double> chain(std::initializer_list<const SparseMatrix<double>*> factors) {
  auto it = factors.begin();
  SparseMatrix<double> acc = **it;
  for (++it; it != factors.end(); ++it) acc = (acc * **it).pruned();
  return acc;
}

bool in(int x, std::initializer_list<int> set) { return std::find(set.begin(), set.end(), x) != set.end(); }

SparseMatrix<double> process_sum(const HcbOperators& op, int n, ThirdOrderTerm term, int l, int i) {
  const auto& b = op.b;
  const auto& d = op.bd;
  const auto dim = op.number.size();
  SparseMatrix<double> acc(dim, dim);
  auto u = [](int s) { return static_cast<std::size_t>(s); };
  switch (term) {
    case ThirdOrderTerm::T1:
    case ThirdOrderTerm::T2:
    case ThirdOrderTerm::T3:
    case ThirdOrderTerm::T6:
      for (int j = 0; j < n; ++j) {
        if (in(j, {i, l})) continue;
        for (int k = 0; k < n; ++k) {
          if (in(k, {i, l, j})) continue;
          const auto J = u(j), K = u(k), L = u(l), I = u(i);
          if (term == ThirdOrderTerm::T1) acc += chain({&d[L], &b[K], &d[K], &b[J], &d[J], &b[I]});
          if (term == ThirdOrderTerm::T2) acc += chain({&d[J], &b[I], &d[L], &b[K], &d[K], &b[J]});
          if (term == ThirdOrderTerm::T3) acc += chain({&d[L], &b[K], &d[J], &b[I], &d[K], &b[J]});
          if (term == ThirdOrderTerm::T6) acc += chain({&d[J], &b[I], &d[K], &b[J], &d[L], &b[K]});
        }
      }
      break;
    case ThirdOrderTerm::T4:
    case ThirdOrderTerm::T5:
      for (int k = 0; k < n; ++k) {
        if (in(k, {i, l})) continue;
        for (int j = 0; j < n; ++j) {
          if (in(j, {i, l, k})) continue;
          const auto J = u(j), K = u(k), L = u(l), I = u(i);
          if (term == ThirdOrderTerm::T4) acc += chain({&d[K], &b[J], &d[J], &b[I], &d[L], &b[K]});
          if (term == ThirdOrderTerm::T5) acc += chain({&d[K], &b[J], &d[L], &b[K], &d[J], &b[I]});
        }
      }
      break;
    case ThirdOrderTerm::V1:
    case ThirdOrderTerm::V2:
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        for (int k = 0; k < n; ++k) {
          if (in(k, {i, j})) continue;
          const auto J = u(j), K = u(k), I = u(i);
          if (term == ThirdOrderTerm::V1) acc += chain({&d[I], &b[K], &d[K], &b[J], &d[J], &b[I]});
          if (term == ThirdOrderTerm::V2) acc += chain({&d[I], &b[K], &d[J], &b[I], &d[K], &b[J]});
        }
      }
      break;
    case ThirdOrderTerm::V3:
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        for (int j = 0; j < n; ++j) {
          if (in(j, {i, k})) continue;
          const auto J = u(j), K = u(k), I = u(i);
          acc += chain({&d[K], &b[J], &d[I], &b[K], &d[J], &b[I]});
        }
      }
      break;
    case ThirdOrderTerm::TC1:
      for (int j = 0; j < n; ++j) {
        if (in(j, {i, l})) continue;
        const auto J = u(j), L = u(l), I = u(i);
        acc += chain({&d[L], &b[I], &d[I], &b[J], &d[J], &b[I]});
      }
      break;
    case ThirdOrderTerm::TC2:
      for (int k = 0; k < n; ++k) {
        if (in(k, {i, l})) continue;
        const auto K = u(k), L = u(l), I = u(i);
        acc += chain({&d[L], &b[K], &d[K], &b[L], &d[L], &b[I]});
      }
      break;
    case ThirdOrderTerm::TC3: {
      const auto L = u(l), I = u(i);
      acc += chain({&d[L], &b[I], &d[I], &b[L], &d[L], &b[I]});
      break;
    }
  }
  return acc;
}

void check_sites(const SpinBasis& basis, ThirdOrderTerm term, int l, int i) {
  basis.check_site(i);
  if (is_closed_loop(term)) return;
  basis.check_site(l);
  if (l == i) throw std::invalid_argument(std::string(to_string(term)) + " requires l != i");
}

}  // namespace

Eigen::MatrixXd third_order_process(const SpinBasis& basis, ThirdOrderTerm term, int l, int i) {
  check_sites(basis, term, l, i);
  const HcbOperators op(basis);
  return Eigen::MatrixXd(process_sum(op, basis.n_sites(), term, l, i));
}

Eigen::MatrixXd third_order_closed_form(const SpinBasis& basis, ThirdOrderTerm term, int l, int i) {
  check_sites(basis, term, l, i);
  const HcbOperators op(basis);
  const double n = basis.n_sites();
  const Eigen::ArrayXd nh = op.number.array();
  const auto ones = Eigen::ArrayXd::Ones(nh.size());
  Eigen::ArrayXd weight;
  switch (term) {
    case ThirdOrderTerm::T1: weight = ((n - 1) * ones - nh) * ((n - 2) * ones - nh); break;
    case ThirdOrderTerm::T2:
    case ThirdOrderTerm::T3:
    case ThirdOrderTerm::T4:
    case ThirdOrderTerm::T5: weight = (nh - 1) * ((n - 1) * ones - nh); break;
    case ThirdOrderTerm::T6: weight = (nh - 1) * (nh - 2); break;
    case ThirdOrderTerm::V1: weight = (n * ones - nh) * ((n - 1) * ones - nh); break;
    case ThirdOrderTerm::V2:
    case ThirdOrderTerm::V3: weight = (nh - 1) * (n * ones - nh); break;
    case ThirdOrderTerm::TC1:
    case ThirdOrderTerm::TC2: weight = (n - 1) * ones - nh; break;
    case ThirdOrderTerm::TC3: weight = ones; break;
  }
  const auto I = static_cast<std::size_t>(i);
  const SparseMatrix<double> right =
      is_closed_loop(term) ? SparseMatrix<double>(op.bd[I] * op.b[I])
                           : SparseMatrix<double>(op.bd[static_cast<std::size_t>(l)] * op.b[I]);
  return weight.matrix().asDiagonal() * Eigen::MatrixXd(right);
}

std::vector<std::pair<int, int>> admissible_sites(const SpinBasis& basis, ThirdOrderTerm term) {
  const int n = basis.n_sites();
  std::vector<std::pair<int, int>> out;
  const bool is_open = !is_closed_loop(term) && term != ThirdOrderTerm::TC1 && term != ThirdOrderTerm::TC2 &&
                       term != ThirdOrderTerm::TC3;
  if (n < (is_open ? 4 : 3)) return out;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i) {
      if (is_closed_loop(term) ? l != i : l == i) continue;
      out.emplace_back(l, i);
    }
  return out;
}

IdentityCheck third_order_identity(const SpinBasis& basis, ThirdOrderTerm term, int l, int i) {
  check_sites(basis, term, l, i);
  const bool is_open = term <= ThirdOrderTerm::T6;
  const int min_sites = is_open ? 4 : 3;
  if (basis.n_sites() < min_sites)
    throw std::invalid_argument(std::string(to_string(term)) + " identity needs at least " + std::to_string(min_sites) +
                                " sites");
  IdentityCheck out;
  out.lhs = third_order_process(basis, term, l, i);
  out.rhs = third_order_closed_form(basis, term, l, i);
  out.residual = max_abs(out.lhs - out.rhs);
  return out;
}

ThirdOrderCoefficients ThirdOrderCoefficients::scaling_defaults(const CouplingParams& params) {
  params.validate();
  if (params.g == 0.0) throw std::invalid_argument("third-order scalings are undefined at g = 0");
  const double j = params.model.pair_coupling();
  const double j3 = j * j * j;
  const double narrowing = std::exp(-params.g * params.g);
  const double g2w = params.g * params.g * params.omega;
  const double gw = params.g * params.omega;
  ThirdOrderCoefficients c;
  c.t.fill(j3 * narrowing / (g2w * g2w));
  c.tc.fill(j3 * narrowing / (gw * gw));
  c.v.fill(j3 / (g2w * g2w));
  return c;
}

Eigen::MatrixXcd build_h3(const SpinBasis& basis, const ThirdOrderCoefficients& coeffs) {
  const HcbOperators op(basis);
  const int n = basis.n_sites();
  const Index dim = basis.dimension();
  SparseMatrix<double> acc(dim, dim);
  constexpr std::array<ThirdOrderTerm, 6> t_terms = {ThirdOrderTerm::T1, ThirdOrderTerm::T2, ThirdOrderTerm::T3,
                                                     ThirdOrderTerm::T4, ThirdOrderTerm::T5, ThirdOrderTerm::T6};
  constexpr std::array<ThirdOrderTerm, 3> tc_terms = {ThirdOrderTerm::TC1, ThirdOrderTerm::TC2, ThirdOrderTerm::TC3};
  constexpr std::array<ThirdOrderTerm, 3> v_terms = {ThirdOrderTerm::V1, ThirdOrderTerm::V2, ThirdOrderTerm::V3};
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      for (std::size_t k = 0; k < t_terms.size(); ++k)
        if (coeffs.t[k] != 0.0) acc += coeffs.t[k] * process_sum(op, n, t_terms[k], l, i);
      for (std::size_t k = 0; k < tc_terms.size(); ++k)
        if (coeffs.tc[k] != 0.0) acc += coeffs.tc[k] * process_sum(op, n, tc_terms[k], l, i);
    }
    for (std::size_t k = 0; k < v_terms.size(); ++k)
      if (coeffs.v[k] != 0.0) acc += coeffs.v[k] * process_sum(op, n, v_terms[k], i, i);
  }
  const Eigen::MatrixXd dense(acc);
  return (0.5 * (dense + dense.transpose())).cast<cplx>();
}

SpinFormCouplings spin_form_couplings(const CouplingParams& params) {
  params.validate();
  const auto second = second_order_couplings(params);
  const double j = params.model.pair_coupling();
  const double n = params.model.n_sites;
  return {j * std::exp(-params.g * params.g) + second.j_perp, j * params.model.delta + second.j_par,
          -second.j_par * n * (n - 1.0) / 8.0};
}

Eigen::MatrixXcd build_spin_form_heff(const SpinBasis& basis, const CouplingParams& params) {
  check_model(basis, params);
  const auto c = spin_form_couplings(params);
  return xxz_pair_sum<cplx>(basis, c.transverse, c.longitudinal);
}

}  // namespace irhm
