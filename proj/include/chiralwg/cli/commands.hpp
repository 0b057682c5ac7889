#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chiralwg/fano.hpp"
#include "chiralwg/params.hpp"

namespace chiralwg::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kFitUnconverged = 3, kIoError = 4 };

struct CommonOptions {
  std::optional<std::filesystem::path> config;  // default parameters when absent
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
  std::vector<std::string> argv;  // recorded verbatim in the manifest
};

struct SpectrumOptions {
  CommonOptions common;
  std::optional<Direction> direction;
  std::optional<double> power_W;
  bool differential = false;
  std::size_t mc_samples = 0;  // > 0 adds a seeded Monte-Carlo oracle column
};

struct PowerGrid {
  double start = 1e-13;
  double stop = 1e-6;
  int points = 61;
};

struct SaturationOptions {
  CommonOptions common;
  std::optional<Direction> direction;
  PowerGrid powers;
};

struct FitOptions {
  CommonOptions common;
  std::vector<std::filesystem::path> inputs;
  // First window is the σ⁺ branch, second σ⁻. When empty, ±kDefaultHalfWindow
  // around each configured branch resonance.
  std::vector<FitWindow> windows;
};

inline constexpr double kDefaultHalfWindow = 40.0;  // μeV

struct PhaseOptions {
  CommonOptions common;
  std::optional<Direction> direction;
  std::vector<double> scan_beta;
  std::vector<double> scan_tau_d;
};

// Each command writes its outputs plus manifest.json into `out` and returns
// an ExitCode. Diagnostics go to `log`.
int cmd_spectrum(const SpectrumOptions& options, std::ostream& log);
int cmd_saturation(const SaturationOptions& options, std::ostream& log);
int cmd_fit(const FitOptions& options, std::ostream& log);
int cmd_phase(const PhaseOptions& options, std::ostream& log);

// Argument parsing and dispatch for the `sim` executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace chiralwg::cli
