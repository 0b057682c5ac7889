#pragma once

#include <string_view>
#include <vector>

namespace chiralwg {

enum class Branch { SigmaPlus, SigmaMinus };
enum class Direction { LtoR, RtoL };

// Which Zeeman component sits at higher energy among the pair: the one that is
// forward-coupled for L→R drive (σ⁻) is placed on the `strong_branch` side.
enum class SpectralSide { HighEnergy, LowEnergy };

// Coherence-decay convention for pure dephasing. HalfRate: γ⊥ = Γ/2 + 1/(2τ_d);
// FullRate: γ⊥ = Γ/2 + 1/τ_d.
enum class DephasingConvention { HalfRate, FullRate };
inline constexpr DephasingConvention kDephasingConvention = DephasingConvention::HalfRate;

struct EmitterConfig {
  double beta = 0.7;
  double beta_d_LR = 0.95;
  double beta_d_RL = 0.95;
  double lifetime_tau = 1.0;      // ns
  double dephasing_tau_d = 0.8;   // ns
  double center_energy = 1.3;     // eV
  double zeeman_splitting = 160;  // μeV
  SpectralSide strong_branch = SpectralSide::HighEnergy;

  bool operator==(const EmitterConfig&) const = default;
};

enum class QuadratureMethod { Adaptive, GaussHermite };

struct EnsembleConfig {
  double wandering_sigma = 4.0;  // μeV, standard deviation
  double p_dark = 0.25;
  int quadrature_order = 1001;   // Gauss-Hermite order, odd
  QuadratureMethod quadrature_method = QuadratureMethod::GaussHermite;

  bool operator==(const EnsembleConfig&) const = default;
};

struct DriveConfig {
  Direction direction = Direction::LtoR;
  double power_in_waveguide = 1e-12;  // W
  std::vector<double> laser_detuning_grid;  // μeV relative to center_energy

  bool operator==(const DriveConfig&) const = default;
};

struct DirectionalRates {
  double gamma_total = 0;  // Γ = 1/τ
  double gamma_f = 0;      // into the co-propagating mode
  double gamma_b = 0;      // into the counter-propagating mode
  double gamma_loss = 0;   // free space
  double gamma_perp = 0;   // coherence decay γ⊥

  bool operator==(const DirectionalRates&) const = default;
};

// Each throws InvalidParameter naming the offending field.
void validate(const EmitterConfig& emitter);
void validate(const EnsembleConfig& ensemble);
void validate(const DriveConfig& drive);

// Coherence decay rate under kDephasingConvention (or an explicit convention).
double coherence_decay(double gamma_total, double dephasing_tau_d,
                       DephasingConvention convention = kDephasingConvention);

DirectionalRates derive_rates(const EmitterConfig& emitter, Branch branch, Direction direction);

// The transition preferentially coupled to the drive's propagation direction.
constexpr Branch forward_coupled_branch(Direction direction) {
  return direction == Direction::LtoR ? Branch::SigmaMinus : Branch::SigmaPlus;
}

constexpr Branch other(Branch branch) {
  return branch == Branch::SigmaPlus ? Branch::SigmaMinus : Branch::SigmaPlus;
}

constexpr Direction reversed(Direction direction) {
  return direction == Direction::LtoR ? Direction::RtoL : Direction::LtoR;
}

// Resonance position of a branch relative to center_energy, μeV.
double branch_offset(const EmitterConfig& emitter, Branch branch);

// Photon flux in photons·ns⁻¹ for a power in W at the given photon energy (eV).
double power_to_flux(double power_watts, double photon_energy_ev);

// Rabi frequency Ω = 2·sqrt(γ_f·Φ), ns⁻¹.
double rabi_from_flux(double flux, double gamma_f);

// Directional PL contrast implied by a directionality β_d: β_d − (1 − β_d).
double predicted_pl_contrast(double beta_d);

std::string_view to_string(Branch branch);
std::string_view to_string(Direction direction);
std::string_view to_string(SpectralSide side);
std::string_view to_string(QuadratureMethod method);

}  // namespace chiralwg
