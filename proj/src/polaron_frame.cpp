#include "irhm/polaron_frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "irhm/parallel.hpp"

namespace irhm {

namespace {

constexpr Index kSpinDim = 4;
constexpr double kTopPopulationTolerance = 1e-6;

int hcb_number(Index spin) { return static_cast<int>((spin & 1) + ((spin >> 1) & 1)); }

Eigen::MatrixXd single_mode_annihilation(Index dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (Index m = 1; m < dim; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return a;
}

Eigen::MatrixXd embed_mode(const BosonFockSpace& fock, const Eigen::MatrixXd& op, int mode) {
  fock.check_mode(mode);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int k = fock.n_modes - 1; k >= 0; --k) {
    const Eigen::MatrixXd factor =
        k == mode ? op : Eigen::MatrixXd::Identity(fock.mode_dimension(), fock.mode_dimension());
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

// Boson-factor displacement attached to spin basis state `spin`:
// prod_i (X_i if site i occupied else X_i^dag).
std::vector<Eigen::MatrixXd> conditional_displacements(const BosonFockSpace& fock, double g) {
  std::vector<Eigen::MatrixXd> x;
  for (int i = 0; i < 2; ++i) x.push_back(displacement_x(fock, i, g));
  std::vector<Eigen::MatrixXd> out;
  for (Index s = 0; s < kSpinDim; ++s) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(fock.dimension(), fock.dimension());
    for (int i = 0; i < 2; ++i) d = (((s >> i) & 1) ? x[static_cast<std::size_t>(i)]
                                                    : Eigen::MatrixXd(x[static_cast<std::size_t>(i)].transpose())) *
                                    d;
    out.push_back(std::move(d));
  }
  return out;
}

// Eigensystem of one particle-number block of the composite Hamiltonian.
struct NumberBlock {
  std::vector<Index> spins;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  // rows: spins.size() * boson_dim, local ordering by spins
};

std::vector<NumberBlock> number_blocks(const Eigen::MatrixXd& h, Index boson_dim) {
  std::vector<NumberBlock> blocks(3);
  for (Index s = 0; s < kSpinDim; ++s) blocks[static_cast<std::size_t>(hcb_number(s))].spins.push_back(s);
  for (auto& block : blocks) {
    const Index dim = static_cast<Index>(block.spins.size()) * boson_dim;
    Eigen::MatrixXd sub(dim, dim);
    for (std::size_t a = 0; a < block.spins.size(); ++a)
      for (std::size_t b = 0; b < block.spins.size(); ++b)
        sub.block(static_cast<Index>(a) * boson_dim, static_cast<Index>(b) * boson_dim, boson_dim, boson_dim) =
            h.block(block.spins[a] * boson_dim, block.spins[b] * boson_dim, boson_dim, boson_dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub);
    if (solver.info() != Eigen::Success) throw AccuracyError("composite eigensolver did not converge");
    block.energies = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
  }
  return blocks;
}

}  // namespace

Index BosonFockSpace::dimension() const {
  Index d = 1;
  for (int k = 0; k < n_modes; ++k) d *= mode_dimension();
  return d;
}

void BosonFockSpace::validate() const {
  if (n_modes != 2) throw std::invalid_argument("the phonon register has exactly two modes");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (n_max > 200) throw std::invalid_argument("n_max above 200 is not supported");
}

void BosonFockSpace::check_mode(int mode) const {
  if (mode < 0 || mode >= n_modes) throw std::invalid_argument("phonon mode index out of range");
}

int BosonFockSpace::default_n_max(double g) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("g must be finite and nonnegative");
  return static_cast<int>(std::ceil(g * g + 6.0 * g)) + 5;
}

Index composite_dimension(const BosonFockSpace& fock) { return kSpinDim * fock.dimension(); }

Eigen::MatrixXd boson_annihilation(const BosonFockSpace& fock, int mode) {
  fock.validate();
  return embed_mode(fock, single_mode_annihilation(fock.mode_dimension()), mode);
}

Eigen::MatrixXd embed_spin(const Eigen::MatrixXd& spin_op, const BosonFockSpace& fock) {
  if (spin_op.rows() != kSpinDim || spin_op.cols() != kSpinDim)
    throw std::invalid_argument("spin operator must be 4x4");
  return Eigen::kroneckerProduct(spin_op, Eigen::MatrixXd::Identity(fock.dimension(), fock.dimension()));
}

Eigen::MatrixXd embed_boson(const Eigen::MatrixXd& boson_op) {
  return Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(kSpinDim, kSpinDim), boson_op);
}

Eigen::MatrixXd build_total_hamiltonian(const CouplingParams& params, const BosonFockSpace& fock) {
  params.validate();
  fock.validate();
  if (params.model.n_sites != 2) throw std::invalid_argument("the phonon-resolved model is defined for two sites");
  const SpinBasis basis(2);
  CouplingParams bare = params;
  bare.g = 0.0;
  const Eigen::MatrixXd hs = build_hs(basis, bare).real();

  Eigen::MatrixXd h = embed_spin(hs, fock);
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXd a = boson_annihilation(fock, i);
    const Eigen::MatrixXd n_shift =
        hcb_operator<double>(basis, i, HcbOp::n) - 0.5 * Eigen::MatrixXd::Identity(kSpinDim, kSpinDim);
    h += params.omega * embed_boson(a.transpose() * a);
    h += params.g * params.omega * Eigen::MatrixXd(Eigen::kroneckerProduct(n_shift, a + a.transpose()));
  }
  return h;
}

std::vector<std::string> truncation_warnings(const CouplingParams& params, const BosonFockSpace& fock) {
  std::vector<std::string> out;
  const double need = 4.0 * params.g * params.g;
  if (fock.n_max < need) {
    std::ostringstream msg;
    msg << "n_max = " << fock.n_max << " is below 4 g^2 = " << need << "; phonon truncation may be inaccurate";
    out.push_back(msg.str());
  }
  return out;
}

Eigen::MatrixXd displacement_x(const BosonFockSpace& fock, int mode, double g) {
  fock.validate();
  const Eigen::MatrixXd a = single_mode_annihilation(fock.mode_dimension());
  const Eigen::MatrixXd gen = (0.5 * g) * (a - a.transpose());
  return embed_mode(fock, gen.exp(), mode);
}

Eigen::MatrixXd lf_frame_operator(const BosonFockSpace& fock, double g) {
  const auto d = conditional_displacements(fock, g);
  const Index bd = fock.dimension();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(kSpinDim * bd, kSpinDim * bd);
  for (Index s = 0; s < kSpinDim; ++s) out.block(s * bd, s * bd, bd, bd) = d[static_cast<std::size_t>(s)];
  return out;
}

double total_ground_energy(const CouplingParams& params, const BosonFockSpace& fock) {
  const auto blocks = number_blocks(build_total_hamiltonian(params, fock), fock.dimension());
  double e = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) e = std::min(e, b.energies.minCoeff());
  return e;
}

Eigen::Vector4d singlet_state() { return Eigen::Vector4d(0.0, 1.0, -1.0, 0.0) / std::sqrt(2.0); }
Eigen::Vector4d triplet_state() { return Eigen::Vector4d(0.0, 1.0, 1.0, 0.0) / std::sqrt(2.0); }

cplx lf_frame_singlet_triplet(const Eigen::MatrixXcd& rho_t, const BosonFockSpace& fock, double g) {
  const Index bd = fock.dimension();
  if (rho_t.rows() != composite_dimension(fock) || rho_t.cols() != composite_dimension(fock))
    throw std::invalid_argument("composite density matrix has the wrong dimension");
  const Eigen::MatrixXd u = lf_frame_operator(fock, g);
  const Eigen::MatrixXcd lf = u.transpose() * rho_t * u;
  Eigen::Matrix4cd reduced = Eigen::Matrix4cd::Zero();
  for (Index a = 0; a < kSpinDim; ++a)
    for (Index b = 0; b < kSpinDim; ++b) reduced(a, b) = lf.block(a * bd, b * bd, bd, bd).trace();
  return singlet_state().cast<cplx>().dot(reduced * triplet_state().cast<cplx>());
}

cplx dressed_singlet_triplet(const Eigen::MatrixXcd& rho_t, const BosonFockSpace& fock, double g) {
  if (rho_t.rows() != composite_dimension(fock) || rho_t.cols() != composite_dimension(fock))
    throw std::invalid_argument("composite density matrix has the wrong dimension");
  const Eigen::MatrixXd x1 = displacement_x(fock, 0, g);
  const Eigen::MatrixXd x2 = displacement_x(fock, 1, g);
  const Eigen::MatrixXd x1d = x1.transpose(), x2d = x2.transpose();
  // spin |10> (site 1 occupied) is index 1, |01> is index 2
  const Eigen::MatrixXd eye4 = Eigen::MatrixXd::Identity(kSpinDim, kSpinDim);
  const Eigen::MatrixXd p10 = eye4.col(1), p01 = eye4.col(2);
  const Eigen::MatrixXd ket =
      Eigen::kroneckerProduct(p10, x1 * x2d) + Eigen::MatrixXd(Eigen::kroneckerProduct(p01, x2 * x1d));
  const Eigen::MatrixXd bra = Eigen::kroneckerProduct(p10.transpose(), x2 * x1d) -
                              Eigen::MatrixXd(Eigen::kroneckerProduct(p01.transpose(), x1 * x2d));
  return 0.5 * (bra * rho_t * ket).trace();
}

PolaronCoherence original_frame_coherence(const CouplingParams& params, const BosonFockSpace& fock,
                                          const Eigen::Matrix4cd& rho_s0, std::span<const double> times,
                                          PhononVacuum vacuum) {
  check_density_matrix(rho_s0);
  for (double t : times)
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("times must be finite and nonnegative");

  const Index bd = fock.dimension();
  const Index top = fock.n_max;
  const auto blocks = number_blocks(build_total_hamiltonian(params, fock), bd);
  const auto disp = conditional_displacements(fock, params.g);
  const Eigen::Vector4d sv = singlet_state();
  const Eigen::Vector4d tv = triplet_state();

  // Boson indices with either mode at the top level.
  std::vector<Index> top_rows;
  for (Index m = 0; m < bd; ++m)
    if (m % (top + 1) == top || m / (top + 1) == top) top_rows.push_back(m);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> mixture(rho_s0);

  struct Component {
    std::size_t block;
    double weight;
    Eigen::VectorXcd coeffs;  // in the block eigenbasis
  };
  std::vector<Component> components;
  for (int k = 0; k < 4; ++k) {
    const double p = mixture.eigenvalues()(k);
    if (p <= 1e-15) continue;
    const Eigen::Vector4cd phi = mixture.eigenvectors().col(k);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      const auto& b = blocks[bi];
      // polaron vacuum: displaced phonon vacuum attached to each spin component
      Eigen::VectorXcd psi(static_cast<Index>(b.spins.size()) * bd);
      double norm = 0.0;
      for (std::size_t a = 0; a < b.spins.size(); ++a) {
        const cplx amp = phi(b.spins[a]);
        norm += std::norm(amp);
        if (vacuum == PhononVacuum::polaron)
          psi.segment(static_cast<Index>(a) * bd, bd) = amp * disp[static_cast<std::size_t>(b.spins[a])].col(0);
        else
          psi.segment(static_cast<Index>(a) * bd, bd) = amp * Eigen::VectorXd::Unit(bd, 0);
      }
      if (norm <= 1e-30) continue;
      components.push_back({bi, p, b.vectors.transpose() * psi});
    }
  }

  // Singlet/triplet projections of the eigenvectors, with and without e^{S}.
  struct Projections {
    Eigen::MatrixXd s_bare, t_bare, s_dressed, t_dressed;
  };
  std::vector<Projections> proj(blocks.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    const Index d = b.vectors.cols();
    Projections& p = proj[bi];
    p.s_bare = p.t_bare = p.s_dressed = p.t_dressed = Eigen::MatrixXd::Zero(bd, d);
    for (std::size_t a = 0; a < b.spins.size(); ++a) {
      const Index s = b.spins[a];
      if (sv(s) == 0.0 && tv(s) == 0.0) continue;
      const auto rows = b.vectors.middleRows(static_cast<Index>(a) * bd, bd);
      const Eigen::MatrixXd dressed = disp[static_cast<std::size_t>(s)].transpose() * rows;
      p.s_bare += sv(s) * rows;
      p.t_bare += tv(s) * rows;
      p.s_dressed += sv(s) * dressed;
      p.t_dressed += tv(s) * dressed;
    }
  }

  PolaronCoherence out;
  out.times.assign(times.begin(), times.end());
  out.dressed.assign(times.size(), cplx{});
  out.bare.assign(times.size(), cplx{});
  std::vector<double> top_pop(times.size(), 0.0);

  parallel_for(times.size(), [&](std::size_t ti) {
    const double t = times[ti];
    cplx dressed{}, bare{};
    double leak = 0.0;
    for (const auto& c : components) {
      const auto& b = blocks[c.block];
      const Eigen::VectorXcd amp =
          (b.energies.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix().cwiseProduct(c.coeffs);
      const auto& p = proj[c.block];
      bare += c.weight * (p.t_bare * amp).dot(p.s_bare * amp);
      dressed += c.weight * (p.t_dressed * amp).dot(p.s_dressed * amp);
      const Eigen::VectorXcd psi = b.vectors * amp;
      for (std::size_t a = 0; a < b.spins.size(); ++a)
        for (Index m : top_rows) leak += c.weight * std::norm(psi(static_cast<Index>(a) * bd + m));
    }
    out.dressed[ti] = dressed;
    out.bare[ti] = bare;
    top_pop[ti] = leak;
  });

  out.max_top_population = top_pop.empty() ? 0.0 : *std::max_element(top_pop.begin(), top_pop.end());
  if (out.max_top_population > kTopPopulationTolerance) {
    std::ostringstream msg;
    msg << "phonon truncation leak: top Fock level population " << out.max_top_population << " exceeds "
        << kTopPopulationTolerance << " at n_max = " << fock.n_max;
    throw AccuracyError(msg.str());
  }
  return out;
}

}  // namespace irhm
