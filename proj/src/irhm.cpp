#include "irhm/irhm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace irhm {

void ModelParams::validate() const {
  if (n_sites < 2) throw std::invalid_argument("n_sites must be >= 2, got " + std::to_string(n_sites));
  if (!(j_star > 0.0)) throw std::invalid_argument("j_star must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
}

void ModelParams::check_basis(const SpinBasis& basis) const {
  if (basis.n_sites() != n_sites)
    throw std::invalid_argument("basis has " + std::to_string(basis.n_sites()) + " sites but model has " +
                                std::to_string(n_sites));
}

Eigen::MatrixXcd build_hirhm_collective(const SpinBasis& basis, const ModelParams& params) {
  params.validate();
  params.check_basis(basis);
  const double j = params.pair_coupling();
  const double n = params.n_sites;
  const Eigen::VectorXd sz = total_sz_diagonal(basis);
  Eigen::MatrixXcd h = total_s_squared<cplx>(basis);
  h.diagonal().array() -= 0.75 * n;
  h.diagonal().array() += (params.delta - 1.0) * (sz.array().square() - 0.25 * n);
  return 0.5 * j * h;
}

double closed_form_energy(const ModelParams& params, double s_total, double sz_total) {
  params.validate();
  SectorLabel{sz_total, s_total}.validate(params.n_sites);
  const double n = params.n_sites;
  return 0.5 * params.pair_coupling() *
         (s_total * (s_total + 1.0) - 0.75 * n + (params.delta - 1.0) * (sz_total * sz_total - 0.25 * n));
}

namespace {

struct Eigenpair {
  double energy;
  SectorLabel label;
  Eigen::VectorXcd vector;
};

double spin_from_casimir(double casimir, int n_up, int n_sites) {
  // S(S+1) = casimir; S must share the parity of N/2 and be >= |Sz|.
  const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(casimir, 0.0)));
  const double smax = 0.5 * n_sites;
  const double rounded = smax - std::round(smax - s);
  const double sz = n_up - smax;
  if (rounded < std::abs(sz) - 1e-9 || std::abs(rounded * (rounded + 1.0) - casimir) > 1e-6)
    throw ContractViolation("S^2 eigenvalue " + std::to_string(casimir) + " does not match any total spin");
  return rounded;
}

}  // namespace

LabeledSpectrum labeled_spectrum(const Eigen::MatrixXcd& h, const SpinBasis& basis) {
  const Index dim = basis.dimension();
  if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("Hamiltonian dimension does not match basis");
  const double scale = std::max(1.0, max_abs(h));
  if (!is_hermitian(h, 1e-12 * scale)) throw ContractViolation("Hamiltonian is not Hermitian");

  const Eigen::VectorXd sz = total_sz_diagonal(basis);
  double sz_residual = 0.0;
  for (Index b = 0; b < dim; ++b)
    for (Index a = 0; a < dim; ++a) sz_residual = std::max(sz_residual, std::abs(h(a, b)) * std::abs(sz(a) - sz(b)));
  const SparseMatrix<double> s2 = total_s_squared_sparse(basis);
  const SparseMatrix<cplx> s2c = s2.cast<cplx>();
  Eigen::MatrixXcd comm = h * s2c;
  comm -= s2c * h;
  const double s2_residual = max_abs(comm);
  if (sz_residual > 1e-10 * scale || s2_residual > 1e-10 * scale)
    throw ContractViolation("Hamiltonian does not commute with the collective spin: |[H,Sz]|=" +
                            std::to_string(sz_residual) + ", |[H,S^2]|=" + std::to_string(s2_residual));

  std::vector<Eigenpair> pairs;
  pairs.reserve(static_cast<std::size_t>(dim));
  for (int n_up = 0; n_up <= basis.n_sites(); ++n_up) {
    const auto states = sz_sector_states(basis, n_up);
    const auto bdim = static_cast<Index>(states.size());
    Eigen::MatrixXd s2_block(bdim, bdim);
    Eigen::MatrixXcd h_block(bdim, bdim);
    for (Index a = 0; a < bdim; ++a)
      for (Index b = 0; b < bdim; ++b) {
        s2_block(a, b) = s2.coeff(states[a], states[b]);
        h_block(a, b) = h(states[a], states[b]);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> casimir(s2_block);
    const Eigen::VectorXd& c = casimir.eigenvalues();
    Index start = 0;
    while (start < bdim) {
      Index stop = start + 1;
      while (stop < bdim && std::abs(c(stop) - c(start)) < 0.5) ++stop;
      const double s_total = spin_from_casimir(c.segment(start, stop - start).mean(), n_up, basis.n_sites());
      const Eigen::MatrixXd q = casimir.eigenvectors().middleCols(start, stop - start);
      const Eigen::MatrixXcd hq = q.transpose().cast<cplx>() * h_block * q.cast<cplx>();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(0.5 * (hq + hq.adjoint()));
      const Eigen::MatrixXcd local = q.cast<cplx>() * inner.eigenvectors();
      for (Index k = 0; k < local.cols(); ++k) {
        Eigenpair p{inner.eigenvalues()(k), SectorLabel{n_up - 0.5 * basis.n_sites(), s_total},
                    Eigen::VectorXcd::Zero(dim)};
        for (Index a = 0; a < bdim; ++a) p.vector(states[a]) = local(a, k);
        pairs.push_back(std::move(p));
      }
      start = stop;
    }
  }

  std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  const double tie = 1e-9 * scale;
  for (std::size_t begin = 0; begin < pairs.size();) {
    std::size_t end = begin + 1;
    while (end < pairs.size() && pairs[end].energy - pairs[begin].energy <= tie) ++end;
    std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(begin), pairs.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Eigenpair& a, const Eigenpair& b) {
                       if (*a.label.s_total != *b.label.s_total) return *a.label.s_total < *b.label.s_total;
                       return a.label.sz_total < b.label.sz_total;
                     });
    begin = end;
  }

  LabeledSpectrum out;
  out.energies.resize(dim);
  out.vectors.resize(dim, dim);
  out.labels.reserve(pairs.size());
  for (Index k = 0; k < dim; ++k) {
    auto& p = pairs[static_cast<std::size_t>(k)];
    out.energies(k) = p.energy;
    out.vectors.col(k) = p.vector;
    out.labels.push_back(p.label);
  }
  return out;
}

double closed_form_deviation(const LabeledSpectrum& spectrum, const ModelParams& params) {
  double worst = 0.0;
  for (Index k = 0; k < spectrum.size(); ++k) {
    const auto& label = spectrum.labels[static_cast<std::size_t>(k)];
    if (!label.s_total) throw ContractViolation("spectrum entry without total-spin label");
    worst = std::max(worst, std::abs(spectrum.energies(k) - closed_form_energy(params, *label.s_total, label.sz_total)));
  }
  return worst;
}

}  // namespace irhm
