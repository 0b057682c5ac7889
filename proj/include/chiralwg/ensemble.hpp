#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chiralwg/cavity.hpp"
#include "chiralwg/kernels.hpp"
#include "chiralwg/params.hpp"
#include "chiralwg/quadrature.hpp"
#include "chiralwg/scattering.hpp"
#include "chiralwg/spectrum.hpp"

namespace chiralwg {

// Gaussian wandering average of fn(offset) with the method and order the
// ensemble selects. σ = 0 passes fn(0) through exactly.
double wandering_average(const OffsetFunction& fn, double sigma, const EnsembleConfig& ensemble);

// Set when the central Gauss-Hermite node spacing (μeV) is wider than the
// weak-drive homogeneous half-width, where the rule visibly under-resolves
// the line.
std::optional<std::string> quadrature_resolution_warning(const EmitterConfig& emitter,
                                                         const EnsembleConfig& ensemble);

struct MonteCarloEstimate {
  double mean = 0;
  double standard_error = 0;
};

// Oracle for the deterministic averages: mean of fn(σZ) over `samples`
// draws from a seeded 64-bit Mersenne Twister.
MonteCarloEstimate monte_carlo_average(const OffsetFunction& fn, double sigma, std::size_t samples,
                                       std::uint64_t seed);

// Pointwise (1 − p_dark)·bright + p_dark·dark.
Spectrum apply_blinking(const Spectrum& bright, const Spectrum& dark_baseline, double p_dark);

// (on − off)/off; throws DegenerateInput on a non-positive baseline.
Spectrum differential_transmission(const Spectrum& on, const Spectrum& off);

// (r_on − r_off)/t_off. The denominator is the transmitted baseline.
Spectrum differential_reflectivity(const Spectrum& r_on, const Spectrum& r_off,
                                   const Spectrum& t_off);

// Single-emitter response for one drive, both Zeeman branches included. With
// a cavity the linear-response amplitudes are composed with the mirrors and
// the drive power is not used.
class EmitterResponseModel {
 public:
  EmitterResponseModel(const EmitterConfig& emitter, Direction direction, double power_watts,
                       std::optional<CavityConfig> cavity = std::nullopt);

  // Homogeneous response with the emitter centre displaced by `offset` μeV.
  kernels::PointValue displaced(double delta, double offset) const;

  // Emitter-absent system response (bare waveguide or bare cavity).
  kernels::PointValue dark(double delta) const;

  // Wandering-averaged bright-state response (no blinking).
  kernels::PointValue averaged(double delta, const EnsembleConfig& ensemble) const;

  const DirectionalRates& rates(Branch branch) const;
  double offset(Branch branch) const;
  double flux() const noexcept { return flux_; }
  bool linear() const noexcept { return cavity_.has_value(); }

  // Saturation parameter Ω²/(Γγ⊥) of the forward-coupled branch on resonance.
  double saturation_parameter() const;

 private:
  EmitterConfig emitter_;
  Direction direction_;
  double flux_;
  std::optional<CavityConfig> cavity_;
  std::array<DirectionalRates, 2> rates_;
  std::array<double, 2> offsets_;
};

// Above this on-resonance saturation parameter the linear cavity path is
// flagged as inaccurate.
inline constexpr double kCavitySaturationThreshold = 0.05;

struct SpectrumSet {
  Spectrum transmission;  // blinking-mixed, QD-active
  Spectrum reflection;
  Spectrum delta_t;
  Spectrum delta_r;
  std::vector<std::string> warnings;
};

// Rates per branch, scatter, branch composition, wandering average, blinking,
// then differential signals against the emitter-absent baseline.
SpectrumSet simulate_spectrum(const EmitterConfig& emitter, const EnsembleConfig& ensemble,
                              const DriveConfig& drive,
                              const std::optional<CavityConfig>& cavity = std::nullopt,
                              kernels::Execution execution = kernels::Execution::Parallel);

struct SaturationPoint {
  double power_W = 0;
  double dip_depth = 0;  // |ΔT| at the forward-coupled branch resonance
};

std::vector<SaturationPoint> simulate_saturation(
    const EmitterConfig& emitter, const EnsembleConfig& ensemble, Direction direction,
    std::span<const double> powers, kernels::Execution execution = kernels::Execution::Parallel);

// Peak |ΔR| (or |ΔT| with `transmission = true`) on each branch resonance,
// full pipeline, for a single drive. Returned as {σ⁺, σ⁻}.
std::array<double, 2> branch_peak_signals(const EmitterConfig& emitter,
                                          const EnsembleConfig& ensemble, Direction direction,
                                          double power_watts, bool transmission);

// Log-spaced grid, `points` ≥ 2, endpoints included.
std::vector<double> log_grid(double start, double stop, int points);
std::vector<double> linear_grid(double start, double stop, int points);

}  // namespace chiralwg
