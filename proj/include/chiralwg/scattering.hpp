#pragma once

#include <complex>
#include <optional>
#include <string>

#include "chiralwg/params.hpp"

namespace chiralwg {

using Complex = std::complex<double>;

// Steady-state expectation values of the driven two-level system.
struct BlochState {
  Complex sigma_minus;  // ⟨σ⁻⟩
  double population = 0;  // ⟨σ⁺σ⁻⟩ ∈ [0, 1/2]
  double inversion = -1;  // ⟨σ_z⟩ ∈ [−1, 0]
};

// Power fractions for a drive of one propagation direction. T counts coherent
// and incoherent forward emission, R all backward emission, L free-space loss.
struct ScatterResult {
  Complex t_coherent{1.0, 0.0};
  double T = 1;
  double R = 0;
  double L = 0;
  double phase = 0;  // arg t_coherent
};

// Detunings are laser minus transition, μeV. Rabi frequency Ω in ns⁻¹.
//
// Sign conventions are pinned by observables rather than a Hamiltonian:
// t(0) = 1 − γ_f/γ⊥ is real, and t(−Δ) = conj t(Δ).
BlochState bloch_steady_state(double delta, double omega, const DirectionalRates& rates);

// Linear-response (Ω → 0) amplitudes.
Complex weak_transmission_amplitude(double delta, const DirectionalRates& rates);
Complex weak_reflection_amplitude(double delta, const DirectionalRates& rates);

// Full saturating response at Rabi frequency Ω. The incident flux is
// Φ = Ω²/(4γ_f); Ω = 0 gives the linear-response limit. Throws
// DegenerateInput for Ω > 0 with γ_f = 0 (no flux can produce that drive).
ScatterResult scatter(double delta, double omega, const DirectionalRates& rates);

// Same response parameterised by the incident photon flux (photons·ns⁻¹);
// well-defined for any Φ ≥ 0 including Φ = 0.
ScatterResult scatter_at_flux(double delta, double flux, const DirectionalRates& rates);

// Composition of the two Zeeman branches seen by one drive. Amplitudes
// multiply, transmitted powers multiply, reflected powers add; L is the
// complement.
ScatterResult compose_transitions(const ScatterResult& sigma_plus, const ScatterResult& sigma_minus);

// Returns a warning when the Zeeman splitting is below 10× the larger
// homogeneous FWHM of the two branches (composition assumption degraded).
std::optional<std::string> branch_separation_warning(const EmitterConfig& emitter,
                                                     Direction direction);

struct PhaseShift {
  double delta_phi = 0;  // rad
  double detuning = 0;   // μeV at the maximiser (0 for the limiting cases)
  double abs_t = 0;      // |t| at the maximiser
};

// Maximum |arg t(Δ)| of the weak-drive transmission amplitude.
PhaseShift max_phase_shift(const DirectionalRates& rates);

}  // namespace chiralwg
