#pragma once

#include <exception>
#include <string>
#include <vector>

#include "irhm/config.hpp"

namespace irhm {

std::string_view version();

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitAccuracy = 3,
  kExitContract = 4,
};

struct RunResult {
  std::string csv;
  std::vector<std::string> warnings;
};

// Runs one experiment and renders its CSV table (metadata block, header, rows).
// Module errors propagate as exceptions; see exit_code_for.
RunResult run_experiment(const RunConfig& config);

// ContractViolation -> 4; AccuracyError, std::range_error -> 3;
// std::invalid_argument, std::out_of_range -> 2; anything else -> 1.
int exit_code_for(const std::exception_ptr& error);

// Initial density matrix of `state` in the computational basis; `spectrum`
// resolves the eigenbasis presets.  Returns the preset's tracked element, if any.
struct InitialState {
  DensityMatrix rho;
  std::optional<std::pair<Index, Index>> element;
};
InitialState build_initial_state(const StateSpec& state, const LabeledSpectrum& spectrum);

}  // namespace irhm
