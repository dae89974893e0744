#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irhm/dynamics_global.hpp"
#include "irhm/polaron_frame.hpp"

namespace irhm {

enum class Experiment { spectrum, effective, verify_appendix_a, evolve_local, evolve_global, rvb, polaron };

std::string_view to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);

enum class StatePreset { dsz1, same_sector, random, site_one_occupied, amplitudes };

struct StateSpec {
  StatePreset preset = StatePreset::dsz1;
  std::vector<cplx> amplitudes;  // computational basis, for StatePreset::amplitudes
  std::uint64_t seed = 1;
};

struct TimeGrid {
  double t_end = 100.0;
  std::size_t n_samples = 101;
};

enum class LocalMethod { closed_form, tcl2 };
enum class GlobalMethod { closed_form, master_equation };

struct RunConfig {
  Experiment experiment = Experiment::spectrum;
  ModelParams model;
  std::optional<CouplingParams> coupling;
  std::optional<BathSpec> bath;
  StateSpec state;
  TimeGrid times;
  std::string output_path;
  std::optional<std::pair<Index, Index>> element;  // eigenbasis element to report

  LocalMethod local_method = LocalMethod::closed_form;
  double local_dt = 1e-3;
  GlobalMethod global_method = GlobalMethod::closed_form;
  double kernel_spacing = 0.01;  // upper bound on the kernel grid spacing (times 1/omega scale)
  bool all_pairs = false;
  int n_max = 0;  // 0 selects the default truncation rule
  PhononVacuum phonon_vacuum = PhononVacuum::polaron;

  // Every key with its resolved value, in section order, for the output echo.
  std::vector<std::pair<std::string, std::string>> resolved;
};

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;

  bool ok() const { return config.has_value(); }
};

// Parses the flat-section key/value grammar documented in docs/config.md.
// `experiment` (when given) overrides or must agree with the file's
// top-level `experiment` key.  All errors are collected.
ConfigResult parse_config(std::string_view text, std::optional<Experiment> experiment = std::nullopt);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace irhm
