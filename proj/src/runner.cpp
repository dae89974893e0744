#include "irhm/runner.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "irhm/rvb.hpp"

#ifndef IRHM_VERSION
#define IRHM_VERSION "unknown"
#endif

namespace irhm {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != columns_.size()) throw ContractViolation("CSV row width does not match the header");
    rows_.push_back(std::move(row));
  }

  void meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }

  std::string render(const RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& tolerances,
                     const std::vector<std::string>& warnings) const {
    std::ostringstream out;
    out << "# irhm " << version() << "\n";
    for (const auto& [k, v] : cfg.resolved) out << "# config " << k << " = " << v << "\n";
    for (const auto& [k, v] : tolerances) out << "# tolerance " << k << " = " << v << "\n";
    for (const auto& [k, v] : meta_) out << "# result " << k << " = " << v << "\n";
    for (const auto& w : warnings) out << "# warning " << w << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << "\n";
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << "\n";
    }
    return out.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

struct Report {
  Table table;
  std::vector<std::pair<std::string, std::string>> tolerances;
  std::vector<std::string> warnings;
};

double reference_sz(const LabeledSpectrum& spectrum) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& l : spectrum.labels)
    if (l.sz_total >= -1e-9) best = std::min(best, l.sz_total);
  return best;
}

std::vector<Index> states_with_sz(const LabeledSpectrum& spectrum, double sz) {
  std::vector<Index> out;
  for (Index k = 0; k < spectrum.size(); ++k)
    if (std::abs(spectrum.labels[static_cast<std::size_t>(k)].sz_total - sz) < 1e-9) out.push_back(k);
  return out;
}

DensityMatrix from_amplitudes(const std::vector<cplx>& amplitudes) {
  Eigen::VectorXcd psi(static_cast<Index>(amplitudes.size()));
  for (std::size_t k = 0; k < amplitudes.size(); ++k) psi(static_cast<Index>(k)) = amplitudes[k];
  psi.normalize();
  return psi * psi.adjoint();
}

// Eigenbasis table: either one tracked element or every n < m pair.
Table evolution_table(const Trajectory& traj, const LabeledSpectrum& spectrum,
                      const std::optional<std::pair<Index, Index>>& element) {
  Table table(element ? std::vector<std::string>{"t", "re", "im", "abs"}
                      : std::vector<std::string>{"t", "n", "m", "re", "im", "abs"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Eigen::MatrixXcd rho = spectrum.to_eigenbasis(traj.states[k]);
    if (element) {
      const cplx v = rho(element->first, element->second);
      table.add({num(traj.times[k]), num(v.real()), num(v.imag()), num(std::abs(v))});
      continue;
    }
    for (Index n = 0; n < rho.rows(); ++n)
      for (Index m = n + 1; m < rho.cols(); ++m) {
        const cplx v = rho(n, m);
        table.add({num(traj.times[k]), std::to_string(n), std::to_string(m), num(v.real()), num(v.imag()),
                   num(std::abs(v))});
      }
  }
  if (element) {
    table.meta("element.n", spectrum.labels[static_cast<std::size_t>(element->first)].to_string());
    table.meta("element.m", spectrum.labels[static_cast<std::size_t>(element->second)].to_string());
  }
  return table;
}

Report run_spectrum(const RunConfig& cfg) {
  const SpinBasis basis(cfg.model.n_sites);
  const LabeledSpectrum spec = labeled_spectrum(build_hirhm<cplx>(basis, cfg.model), basis);
  Report r{Table({"index", "energy", "s_total", "sz_total", "closed_form", "deviation"}), {}, {}};
  for (Index k = 0; k < spec.size(); ++k) {
    const auto& l = spec.labels[static_cast<std::size_t>(k)];
    const double exact = closed_form_energy(cfg.model, *l.s_total, l.sz_total);
    r.table.add({std::to_string(k), num(spec.energies(k)), num(*l.s_total), num(l.sz_total), num(exact),
                 num(std::abs(spec.energies(k) - exact))});
  }
  r.table.meta("max_deviation", num(closed_form_deviation(spec, cfg.model)));
  r.tolerances = {{"commutation", "1e-10"}, {"degeneracy_cluster", "1e-9"}};
  return r;
}

Report run_effective(const RunConfig& cfg) {
  const CouplingParams& p = *cfg.coupling;
  const SpinBasis basis(p.model.n_sites);
  const auto second = second_order_couplings(p);
  const auto spin = spin_form_couplings(p);
  const Eigen::MatrixXcd h = build_hirhm<cplx>(basis, p.model);
  Report r{Table({"quantity", "value"}), {}, regime_warnings(p)};
  r.table.add({"f1", num(f1(p.g))});
  r.table.add({"f2", num(f2(p.g))});
  r.table.add({"narrowed_hopping", num(p.model.pair_coupling() * std::exp(-p.g * p.g))});
  r.table.add({"j_perp", num(second.j_perp)});
  r.table.add({"j_par", num(second.j_par)});
  r.table.add({"j_transverse", num(spin.transverse)});
  r.table.add({"j_longitudinal", num(spin.longitudinal)});
  r.table.add({"constant_shift", num(spin.shift)});
  r.table.add({"commutator_h2_hirhm", num(commutator_norm(build_h2(basis, p), h))});
  r.table.add({"commutator_hs_hirhm", num(commutator_norm(build_hs(basis, p), h))});
  r.tolerances = {{"series_relative", "1e-15"}};
  return r;
}

Report run_appendix(const RunConfig& cfg) {
  const SpinBasis basis(cfg.model.n_sites);
  Report r{Table({"identity", "l", "i", "residual"}), {}, {}};
  double worst = 0.0;
  for (ThirdOrderTerm term : kThirdOrderTerms) {
    std::vector<std::pair<int, int>> sites = admissible_sites(basis, term);
    if (sites.empty()) {
      r.warnings.push_back(std::string(to_string(term)) + " needs more sites; skipped");
      continue;
    }
    if (!cfg.all_pairs) sites = {is_closed_loop(term) ? std::make_pair(0, 0) : std::make_pair(0, 1)};
    for (const auto& [l, i] : sites) {
      const double res = third_order_identity(basis, term, l, i).residual;
      worst = std::max(worst, res);
      r.table.add({std::string(to_string(term)), std::to_string(l), std::to_string(i), num(res)});
    }
  }
  r.table.meta("max_residual", num(worst));
  r.tolerances = {{"identity_residual", "1e-12"}};
  return r;
}

Report run_local(const RunConfig& cfg) {
  const CouplingParams& p = *cfg.coupling;
  const SpinBasis basis(p.model.n_sites);
  const LabeledSpectrum spec = local_effective_spectrum(basis, p);
  const InitialState init = build_initial_state(cfg.state, spec);
  const auto element = cfg.element ? cfg.element : init.element;
  Trajectory traj;
  Report r{Table({}), {}, regime_warnings(p)};
  if (cfg.local_method == LocalMethod::closed_form) {
    const auto times = uniform_times(cfg.times.t_end, cfg.times.n_samples);
    traj = evolve_local_closed_form(init.rho, spec, times);
  } else {
    Tcl2Options opt;
    opt.t_end = cfg.times.t_end;
    opt.n_samples = cfg.times.n_samples;
    opt.dt = cfg.local_dt;
    traj = evolve_local_tcl2_numeric(init.rho, basis, p, opt);
    r.tolerances.emplace_back("richardson", num(opt.richardson_tolerance));
  }
  r.table = evolution_table(traj, spec, element);
  r.tolerances.emplace_back("commutation", "1e-10");
  return r;
}

Report run_global(const RunConfig& cfg) {
  const BathSpec& bath = *cfg.bath;
  const SpinBasis basis(cfg.model.n_sites);
  const Eigen::MatrixXcd h = build_hirhm<cplx>(basis, cfg.model);
  const LabeledSpectrum spec = labeled_spectrum(h, basis);
  const InitialState init = build_initial_state(cfg.state, spec);
  const auto element = cfg.element ? cfg.element : init.element;

  // Kernel grid: an even number of steps per sample interval, spacing <= kernel_spacing.
  const std::size_t intervals = cfg.times.n_samples - 1;
  const double sample_dt = cfg.times.t_end / static_cast<double>(intervals);
  std::size_t per = 2 * static_cast<std::size_t>(std::ceil(sample_dt / (2.0 * cfg.kernel_spacing)));
  per = std::max<std::size_t>(per, 2);
  while (intervals * per + 1 < 100) per += 2;
  const MemoryKernels kernels = memory_kernels(bath, cfg.times.t_end, intervals * per + 1);
  std::vector<double> times;
  for (std::size_t k = 0; k <= intervals; ++k) times.push_back(kernels.times[k * per]);

  Report r{Table({}), {{"kernel_refinement", "1e-9"}}, {}};
  Trajectory traj;
  if (cfg.global_method == GlobalMethod::closed_form) {
    traj = evolve_global_closed_form(init.rho, spec, kernels, times);
  } else {
    const auto check = cross_check_master_equation(init.rho, basis, cfg.model, kernels, times);
    traj = check.integrated;
    r.tolerances.emplace_back("master_equation_agreement", "1e-6");
    if (!check.consistent)
      r.warnings.push_back("master equation and closed form disagree by " + num(check.max_deviation));
    r.table = evolution_table(traj, spec, element);
    r.table.meta("master_equation_deviation", num(check.max_deviation));
    r.table.meta("master_equation_consistent", check.consistent ? "true" : "false");
    r.table.meta("kernel_grid_points", std::to_string(kernels.times.size()));
    return r;
  }
  r.table = evolution_table(traj, spec, element);
  r.table.meta("kernel_grid_points", std::to_string(kernels.times.size()));
  return r;
}

Report run_rvb(const RunConfig& cfg) {
  const int n = cfg.model.n_sites;
  const SpinBasis basis(n);
  const StateVector raw = n == 4 ? rvb4_unnormalized(basis) : rvb6_unnormalized(basis);
  const StateVector psi = raw.normalized();
  const Eigen::MatrixXcd h = build_hirhm<cplx>(basis, cfg.model);
  const Eigen::VectorXcd hpsi = h * psi;
  const double energy = psi.dot(hpsi).real();
  const double exact = closed_form_energy(cfg.model, 0.0, 0.0);

  Report r{Table({"quantity", "subsystem", "value"}), {{"eigen_residual", "1e-10"}, {"entropy", "1e-10"}}, {}};
  r.table.add({"norm_before_normalization", "", num(raw.norm())});
  r.table.add({"s_squared_residual", "", num((total_s_squared_sparse(basis).cast<cplx>() * psi).norm())});
  r.table.add({"sz_residual", "", num((total_sz_diagonal(basis).cast<cplx>().asDiagonal() * psi).norm())});
  r.table.add({"energy", "", num(energy)});
  r.table.add({"closed_form_energy", "", num(exact)});
  r.table.add({"eigen_residual", "", num((hpsi - exact * psi).norm())});
  // Every subsystem containing site 0 with at most n/2 sites.
  for (unsigned mask = 1; mask < (1u << n); mask += 2) {
    std::vector<int> part;
    for (int s = 0; s < n; ++s)
      if (mask & (1u << s)) part.push_back(s);
    if (static_cast<int>(part.size()) > n / 2) continue;
    std::string label;
    for (int s : part) label += (label.empty() ? "" : " ") + std::to_string(s);
    r.table.add({"entropy_bits", label, num(entanglement_entropy(psi, basis, part))});
  }
  return r;
}

DensityMatrix polaron_initial_state(const StateSpec& state) {
  switch (state.preset) {
    case StatePreset::site_one_occupied: {
      DensityMatrix rho = DensityMatrix::Zero(4, 4);
      rho(1, 1) = 1.0;
      return rho;
    }
    case StatePreset::random: return random_density_matrix(4, state.seed);
    case StatePreset::amplitudes: return from_amplitudes(state.amplitudes);
    default: throw std::invalid_argument("state preset not available for the polaron experiment");
  }
}

Report run_polaron(const RunConfig& cfg) {
  const CouplingParams& p = *cfg.coupling;
  BosonFockSpace fock;
  fock.n_max = cfg.n_max;
  const auto times = uniform_times(cfg.times.t_end, cfg.times.n_samples);
  const Eigen::Matrix4cd rho = polaron_initial_state(cfg.state);
  const PolaronCoherence c = original_frame_coherence(p, fock, rho, times, cfg.phonon_vacuum);
  Report r{Table({"t", "dressed_re", "dressed_im", "dressed_abs", "bare_re", "bare_im", "bare_abs"}),
           {{"top_fock_population", "1e-6"}},
           truncation_warnings(p, fock)};
  for (const auto& w : regime_warnings(p)) r.warnings.push_back(w);
  for (std::size_t k = 0; k < times.size(); ++k)
    r.table.add({num(times[k]), num(c.dressed[k].real()), num(c.dressed[k].imag()), num(std::abs(c.dressed[k])),
                 num(c.bare[k].real()), num(c.bare[k].imag()), num(std::abs(c.bare[k]))});
  r.table.meta("max_top_population", num(c.max_top_population));
  return r;
}

}  // namespace

std::string_view version() { return IRHM_VERSION; }

InitialState build_initial_state(const StateSpec& state, const LabeledSpectrum& spectrum) {
  InitialState out;
  const Index dim = spectrum.size();
  switch (state.preset) {
    case StatePreset::dsz1:
    case StatePreset::same_sector: {
      const double sz0 = reference_sz(spectrum);
      const auto lower = states_with_sz(spectrum, sz0);
      const auto upper = state.preset == StatePreset::dsz1 ? states_with_sz(spectrum, sz0 + 1.0) : lower;
      if (lower.empty() || upper.size() < (state.preset == StatePreset::dsz1 ? 1u : 2u))
        throw std::invalid_argument("state preset needs two eigenstates that this system does not have");
      const Index a = lower[0];
      const Index b = state.preset == StatePreset::dsz1 ? upper[0] : lower[1];
      const Eigen::VectorXcd psi = (spectrum.vectors.col(a) + spectrum.vectors.col(b)) / std::sqrt(2.0);
      out.rho = psi * psi.adjoint();
      out.element = std::make_pair(std::min(a, b), std::max(a, b));
      break;
    }
    case StatePreset::random: out.rho = random_density_matrix(dim, state.seed); break;
    case StatePreset::amplitudes:
      if (static_cast<Index>(state.amplitudes.size()) != dim)
        throw std::invalid_argument("amplitude list length does not match the Hilbert space");
      out.rho = from_amplitudes(state.amplitudes);
      break;
    case StatePreset::site_one_occupied:
      throw std::invalid_argument("site_one_occupied applies only to the polaron experiment");
  }
  return out;
}

RunResult run_experiment(const RunConfig& cfg) {
  Report r = [&] {
    switch (cfg.experiment) {
      case Experiment::spectrum: return run_spectrum(cfg);
      case Experiment::effective: return run_effective(cfg);
      case Experiment::verify_appendix_a: return run_appendix(cfg);
      case Experiment::evolve_local: return run_local(cfg);
      case Experiment::evolve_global: return run_global(cfg);
      case Experiment::rvb: return run_rvb(cfg);
      case Experiment::polaron: return run_polaron(cfg);
    }
    throw ContractViolation("unhandled experiment");
  }();
  RunResult out;
  out.csv = r.table.render(cfg, r.tolerances, r.warnings);
  out.warnings = std::move(r.warnings);
  return out;
}

int exit_code_for(const std::exception_ptr& error) {
  if (!error) return kExitOk;
  try {
    std::rethrow_exception(error);
  } catch (const ContractViolation&) {
    return kExitContract;
  } catch (const AccuracyError&) {
    return kExitAccuracy;
  } catch (const std::range_error&) {
    return kExitAccuracy;
  } catch (const std::invalid_argument&) {
    return kExitConfig;
  } catch (const std::out_of_range&) {
    return kExitConfig;
  } catch (...) {
    return kExitFailure;
  }
}

}  // namespace irhm
