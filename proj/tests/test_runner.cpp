#include <sstream>

#include "doctest.h"
#include "irhm/runner.hpp"

using namespace irhm;

namespace {

RunConfig config(const std::string& text) {
  const auto r = parse_config(text);
  REQUIRE_MESSAGE(r.ok(), (r.errors.empty() ? std::string() : r.errors.front()));
  return *r.config;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::vector<double> fields(const std::string& row) {
  std::vector<double> out;
  std::istringstream in(row);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::strtod(cell.c_str(), nullptr));
  return out;
}

}  // namespace

TEST_CASE("spectrum table") {
  const auto result = run_experiment(config("experiment = spectrum\n[model]\nn_sites = 2\n"));
  const auto rows = data_rows(result.csv);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "index,energy,s_total,sz_total,closed_form,deviation");
  CHECK(fields(rows[1])[1] == doctest::Approx(-0.75));
  for (int k = 2; k <= 4; ++k) CHECK(fields(rows[static_cast<std::size_t>(k)])[1] == doctest::Approx(0.25));
  CHECK(result.csv.rfind("# irhm ", 0) == 0);
}

TEST_CASE("output is deterministic") {
  const std::string text =
      "experiment = evolve-local\n[model]\nn_sites = 3\n[coupling]\ng = 2\nomega = 1\n[state]\npreset = random\nseed = 4\n"
      "[times]\nt_end = 10\nn_samples = 11\n";
  CHECK(run_experiment(config(text)).csv == run_experiment(config(text)).csv);
}

TEST_CASE("appendix identities vanish") {
  const auto rows = data_rows(run_experiment(config("experiment = verify-appendix-a\n[model]\nn_sites = 4\n")).csv);
  REQUIRE(rows.size() == 13);
  CHECK(rows[0] == "identity,l,i,residual");
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(fields(rows[k]).back() <= 1e-12);
}

TEST_CASE("global dephasing envelope for a one-step Sz superposition") {
  const auto rows = data_rows(run_experiment(config("experiment = evolve-global\n[model]\nn_sites = 4\n[bath]\n"
                                                    "kind = single_mode\ng = 1\nomega = 1\n[times]\n"
                                                    "t_end = 6.283185307179586\nn_samples = 9\n"))
                                  .csv);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "t,re,im,abs");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto f = fields(rows[k]);
    CHECK(f[3] == doctest::Approx(0.5 * std::exp(-(1.0 - std::cos(f[0])))).epsilon(1e-8));
  }
}

TEST_CASE("rvb table") {
  const auto rows = data_rows(run_experiment(config("experiment = rvb\n[model]\nn_sites = 4\n")).csv);
  CHECK(rows[0] == "quantity,subsystem,value");
  CHECK(rows.size() > 5);
}

TEST_CASE("exit codes") {
  const auto code = [](auto thrower) {
    try {
      thrower();
    } catch (...) {
      return exit_code_for(std::current_exception());
    }
    return -1;
  };
  CHECK(code([] { throw ContractViolation("x"); }) == kExitContract);
  CHECK(code([] { throw AccuracyError("x"); }) == kExitAccuracy);
  CHECK(code([] { throw std::range_error("x"); }) == kExitAccuracy);
  CHECK(code([] { throw std::invalid_argument("x"); }) == kExitConfig);
  CHECK(code([] { throw std::runtime_error("x"); }) == kExitFailure);
}

TEST_CASE("initial state presets") {
  const SpinBasis b(4);
  ModelParams p;
  p.n_sites = 4;
  const auto spec = labeled_spectrum(build_hirhm<cplx>(b, p), b);
  const auto dsz1 = build_initial_state(StateSpec{StatePreset::dsz1, {}, 1}, spec);
  CHECK_NOTHROW(check_density_matrix(dsz1.rho));
  REQUIRE(dsz1.element.has_value());
  const auto [a, c] = *dsz1.element;
  CHECK(std::abs(spec.labels[static_cast<std::size_t>(a)].sz_total - spec.labels[static_cast<std::size_t>(c)].sz_total) == 1.0);
  const auto same = build_initial_state(StateSpec{StatePreset::same_sector, {}, 1}, spec);
  REQUIRE(same.element.has_value());
  CHECK(spec.labels[static_cast<std::size_t>(same.element->first)].sz_total ==
        spec.labels[static_cast<std::size_t>(same.element->second)].sz_total);
  const auto rnd = build_initial_state(StateSpec{StatePreset::random, {}, 9}, spec);
  CHECK(rnd.rho.isApprox(build_initial_state(StateSpec{StatePreset::random, {}, 9}, spec).rho));
}
