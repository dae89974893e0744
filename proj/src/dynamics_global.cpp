#include "irhm/dynamics_global.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "irhm/parallel.hpp"
#include "irhm/rk4.hpp"

namespace irhm {

void BathSpec::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw std::invalid_argument("temperature must be >= 0");
  if (const auto* modes = std::get_if<std::vector<BathMode>>(&kind)) {
    if (modes->empty()) throw std::invalid_argument("bath needs at least one mode");
    for (const auto& m : *modes)
      if (!(m.omega > 0.0)) throw std::invalid_argument("bath mode frequencies must be > 0");
  } else {
    const auto& o = std::get<OhmicDensity>(kind);
    if (!(o.omega_c > 0.0)) throw std::invalid_argument("ohmic cutoff omega_c must be > 0");
    if (!(o.lambda > 0.0)) throw std::invalid_argument("ohmic strength lambda must be > 0");
  }
}

namespace {

// coth(w / 2T), -> 1 at T = 0.
double thermal_factor(double w, double temperature) {
  if (temperature == 0.0) return 1.0;
  return 1.0 / std::tanh(w / (2.0 * temperature));
}

// Bisects until the Gauss-Kronrod error estimate of every piece is below its
// share of `abs_tol`; returns false when max_depth is exhausted first.
template <class F>
bool adaptive_gk(const F& f, double a, double b, double abs_tol, double floor, int max_depth, cplx& sum) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const cplx piece = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  if (err <= std::max(abs_tol, floor)) {
    sum += piece;
    return true;
  }
  if (max_depth == 0) return false;
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, 0.5 * abs_tol, floor, max_depth - 1, sum) &&
         adaptive_gk(f, mid, b, 0.5 * abs_tol, floor, max_depth - 1, sum);
}

cplx ohmic_correlation(const OhmicDensity& o, double temperature, double tau) {
  // e^{-w/w_c} w < 1e-300 well before 800 w_c; 60 w_c leaves a 1e-24 tail.
  const double w_max = 60.0 * o.omega_c;
  const auto integrand = [&](double w) {
    const double weight = o.lambda * w * std::exp(-w / o.omega_c);
    return cplx(weight * thermal_factor(w, temperature) * std::cos(w * tau), -weight * std::sin(w * tau));
  };
  // Absolute target against alpha(0), the largest value the correlation takes.
  const double scale = o.lambda * o.omega_c * o.omega_c * (1.0 + 2.0 * temperature / o.omega_c);
  const double abs_tol = 1e-10 * scale;
  const double floor = 1e-15 * scale;  // roundoff level of a single piece
  // Panels of a few oscillation periods keep the bisection shallow.
  const double period = tau > 0.0 ? 2.0 * M_PI / tau : w_max;
  const int panels = std::clamp(static_cast<int>(std::ceil(w_max / (4.0 * period))), 1, 200000);
  cplx sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = w_max * p / panels;
    const double b = w_max * (p + 1) / panels;
    if (!adaptive_gk(integrand, a, b, abs_tol / panels, floor, 12, sum))
      throw AccuracyError("ohmic bath correlation quadrature did not converge at tau=" + std::to_string(tau));
  }
  return sum;
}

}  // namespace

cplx bath_correlation(const BathSpec& bath, double tau) {
  bath.validate();
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
  if (const auto* modes = std::get_if<std::vector<BathMode>>(&bath.kind)) {
    double eta = 0.0, nu = 0.0;
    for (const auto& m : *modes) {
      const double w2 = std::norm(m.g) * m.omega * m.omega;
      eta += w2 * thermal_factor(m.omega, bath.temperature) * std::cos(m.omega * tau);
      nu -= w2 * std::sin(m.omega * tau);
    }
    return {eta, nu};
  }
  return ohmic_correlation(std::get<OhmicDensity>(bath.kind), bath.temperature, tau);
}

std::size_t MemoryKernels::index_of(double t) const {
  const double h = spacing();
  if (times.empty()) throw ContractViolation("empty kernel grid");
  if (h == 0.0) {
    if (std::abs(t - times.front()) <= 1e-12) return 0;
    throw ContractViolation("time not on kernel grid");
  }
  const double k = std::round(t / h);
  if (k < 0 || k >= static_cast<double>(times.size()) || std::abs(t - k * h) > 1e-9 * std::max(1.0, std::abs(t)))
    throw ContractViolation("time " + std::to_string(t) + " is not a kernel grid point");
  return static_cast<std::size_t>(k);
}

namespace {

struct KernelValues {
  Eigen::VectorXd f_real, f_imag, x, y;
};

KernelValues integrate_kernels(const BathSpec& bath, double h, std::size_t n_grid, int refine) {
  const auto fine_intervals = static_cast<std::size_t>(refine) * (n_grid - 1);
  const double delta = h / refine;
  std::vector<cplx> nodes(fine_intervals + 1), mids(fine_intervals);
  parallel_for(fine_intervals + 1, [&](std::size_t j) {
    nodes[j] = bath_correlation(bath, static_cast<double>(j) * delta);
    if (j < fine_intervals) mids[j] = bath_correlation(bath, (static_cast<double>(j) + 0.5) * delta);
  });
  std::vector<cplx> f(fine_intervals + 1);
  f[0] = 0.0;
  for (std::size_t j = 0; j < fine_intervals; ++j)
    f[j + 1] = f[j] + (delta / 6.0) * (nodes[j] + 4.0 * mids[j] + nodes[j + 1]);

  KernelValues out{Eigen::VectorXd(static_cast<Index>(n_grid)), Eigen::VectorXd(static_cast<Index>(n_grid)),
                   Eigen::VectorXd(static_cast<Index>(n_grid)), Eigen::VectorXd(static_cast<Index>(n_grid))};
  cplx cumulative = 0.0;
  for (std::size_t k = 0; k < n_grid; ++k) {
    const auto j = k * static_cast<std::size_t>(refine);
    if (k > 0) {
      // Simpson panels of width 2 delta spanning [t_{k-1}, t_k]; refine is even.
      for (auto p = j - static_cast<std::size_t>(refine); p < j; p += 2)
        cumulative += (2.0 * delta / 6.0) * (f[p] + 4.0 * f[p + 1] + f[p + 2]);
    }
    const auto K = static_cast<Index>(k);
    out.f_real(K) = f[j].real();
    out.f_imag(K) = f[j].imag();
    out.x(K) = cumulative.real();
    out.y(K) = cumulative.imag();
  }
  return out;
}

double kernel_difference(const KernelValues& a, const KernelValues& b) {
  const double scale = std::max({1.0, max_abs(b.f_real), max_abs(b.f_imag), max_abs(b.x), max_abs(b.y)});
  return std::max({max_abs(a.f_real - b.f_real), max_abs(a.f_imag - b.f_imag), max_abs(a.x - b.x),
                   max_abs(a.y - b.y)}) /
         scale;
}

}  // namespace

MemoryKernels memory_kernels(const BathSpec& bath, double t_end, std::size_t n_grid) {
  bath.validate();
  if (n_grid < 100) throw std::invalid_argument("memory kernels need n_grid >= 100");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  const double h = t_end / static_cast<double>(n_grid - 1);
  constexpr int kMaxRefine = 256;
  int refine = 2;
  KernelValues previous = integrate_kernels(bath, h, n_grid, refine);
  for (;;) {
    refine *= 2;
    KernelValues current = integrate_kernels(bath, h, n_grid, refine);
    const double diff = kernel_difference(previous, current);
    if (diff <= 1e-9) {
      MemoryKernels out;
      out.times = uniform_times(t_end, n_grid);
      out.f_real = std::move(current.f_real);
      out.f_imag = std::move(current.f_imag);
      out.x = std::move(current.x);
      out.y = std::move(current.y);
      return out;
    }
    if (refine >= kMaxRefine)
      throw AccuracyError("memory kernel quadrature did not converge (last refinement difference " +
                          std::to_string(diff) + ")");
    previous = std::move(current);
  }
}

namespace {

Eigen::VectorXd definite_sz(const LabeledSpectrum& spectrum) {
  const Index dim = spectrum.size();
  const int n_sites = static_cast<int>(std::lround(std::log2(static_cast<double>(dim))));
  const SpinBasis basis(n_sites);
  const Eigen::VectorXd sz_diag = total_sz_diagonal(basis);
  Eigen::VectorXd sz(dim);
  for (Index k = 0; k < dim; ++k) {
    if (static_cast<Index>(spectrum.labels.size()) != dim) throw ContractViolation("spectrum is not labeled");
    sz(k) = spectrum.labels[static_cast<std::size_t>(k)].sz_total;
    const Eigen::VectorXcd v = spectrum.vectors.col(k);
    const double residual = (sz_diag.cast<cplx>().cwiseProduct(v) - sz(k) * v).norm();
    if (residual > 1e-10) throw ContractViolation("eigenvector " + std::to_string(k) + " has no definite Sz_Total");
  }
  return sz;
}

}  // namespace

Trajectory evolve_global_closed_form(const DensityMatrix& rho0, const LabeledSpectrum& spectrum,
                                     const MemoryKernels& kernels, std::span<const double> times) {
  check_density_matrix(rho0);
  if (spectrum.size() != rho0.rows()) throw ContractViolation("spectrum dimension does not match the density matrix");
  const Eigen::VectorXd sz = definite_sz(spectrum);
  const Eigen::VectorXd& e = spectrum.energies;
  const Eigen::MatrixXcd r0 = spectrum.to_eigenbasis(rho0);
  std::vector<std::size_t> grid_index;
  for (double t : times) grid_index.push_back(kernels.index_of(t));

  const Index dim = spectrum.size();
  Trajectory out;
  out.times.assign(times.begin(), times.end());
  out.states.resize(times.size());
  parallel_for(times.size(), [&](std::size_t k) {
    const double t = times[k];
    const double x = kernels.x(static_cast<Index>(grid_index[k]));
    const double y = kernels.y(static_cast<Index>(grid_index[k]));
    Eigen::MatrixXcd r(dim, dim);
    for (Index m = 0; m < dim; ++m)
      for (Index n = 0; n < dim; ++n) {
        const double phase = (e(n) - e(m)) * t + (sz(n) * sz(n) - sz(m) * sz(m)) * y;
        const double dsz = sz(n) - sz(m);
        r(n, m) = std::exp(cplx(-dsz * dsz * x, -phase)) * r0(n, m);
      }
    out.states[k] = spectrum.from_eigenbasis(r);
  });
  return out;
}

double l_operator_check(const SpinBasis& basis, const ModelParams& params) {
  return commutator_norm(total_sz<cplx>(basis), build_hirhm<cplx>(basis, params));
}

Trajectory integrate_collective_master_equation(const DensityMatrix& rho0, const Eigen::MatrixXcd& h,
                                                const Eigen::MatrixXcd& l, const MemoryKernels& kernels,
                                                std::span<const double> times) {
  check_density_matrix(rho0);
  const double step = 2.0 * kernels.spacing();
  const Eigen::MatrixXcd l2 = l * l;
  const auto rhs = [&](double t, const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
    const auto k = static_cast<Index>(kernels.index_of(t));
    const cplx f(kernels.f_real(k), kernels.f_imag(k));
    const Eigen::MatrixXcd lrl = l * rho * l;
    Eigen::MatrixXcd out = -kI * (h * rho - rho * h);
    out += f * (lrl - l2 * rho);
    out += std::conj(f) * (lrl - rho * l2);
    return out;
  };
  Trajectory out;
  out.times.assign(times.begin(), times.end());
  Eigen::MatrixXcd rho = rho0;
  double t = 0.0;
  for (double target : times) {
    const auto k = kernels.index_of(target);
    if (k % 2 != 0) throw ContractViolation("master-equation sample times must be even grid points");
    const auto steps = static_cast<long>(std::llround((target - t) / step));
    for (long s = 0; s < steps; ++s) rho = rk4_step(rhs, t + static_cast<double>(s) * step, rho, step);
    t = target;
    out.states.push_back(rho);
  }
  return out;
}

MasterEquationCrossCheck cross_check_master_equation(const DensityMatrix& rho0, const SpinBasis& basis,
                                                     const ModelParams& params, const MemoryKernels& kernels,
                                                     std::span<const double> times, double tolerance) {
  const Eigen::MatrixXcd h = build_hirhm<cplx>(basis, params);
  const Eigen::MatrixXcd l = total_sz<cplx>(basis);
  MasterEquationCrossCheck out;
  out.integrated = integrate_collective_master_equation(rho0, h, l, kernels, times);
  out.closed_form = evolve_global_closed_form(rho0, labeled_spectrum(h, basis), kernels, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    out.max_deviation = std::max(out.max_deviation, max_abs(out.integrated.states[k] - out.closed_form.states[k]));
  out.consistent = out.max_deviation <= tolerance;
  return out;
}

}  // namespace irhm
