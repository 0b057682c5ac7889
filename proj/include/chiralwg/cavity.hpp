#pragma once

#include <span>
#include <vector>

#include "chiralwg/scattering.hpp"

namespace chiralwg {

// Weak Fabry-Pérot cavity formed by the two out-couplers. Both mirrors share
// (r_m, t_m) and present +r_m towards the cavity interior, so the bare cavity
// transmits maximally when the round-trip phase is a multiple of 2π.
struct CavityConfig {
  double mirror_reflectivity = 0;    // amplitude r_m ∈ [0, 1)
  double mirror_transmissivity = 1;  // amplitude t_m, r_m² + t_m² ≤ 1
  double round_trip_phase_at_center = 0;  // θ₀, rad
  double round_trip_time = 0;        // dθ/dω, ns
  double emitter_position_phase = 0; // one-way phase from the input mirror to the emitter, rad

  bool operator==(const CavityConfig&) const = default;
};

void validate(const CavityConfig& cavity);

// Scattering matrix of a lossy two-port, named from the drive's point of view:
// "forward" runs from the input side to the output side.
struct TwoPort {
  Complex t_forward{1, 0};
  Complex t_backward{1, 0};
  Complex r_input{0, 0};   // incident from the input side
  Complex r_output{0, 0};  // incident from the output side
};

// Redheffer star product: `first` on the input side, then `second`.
TwoPort cascade(const TwoPort& first, const TwoPort& second);

// Weak-drive emitter two-port built from the directional rates of one branch.
TwoPort emitter_two_port(double delta, const DirectionalRates& rates);

// Both Zeeman branches at one point, composed at amplitude level.
TwoPort compose_branches(const TwoPort& sigma_plus, const TwoPort& sigma_minus);

struct SystemAmplitudes {
  Complex t{1, 0};
  Complex r{0, 0};
};

// Mirror, propagation, emitter, propagation, mirror. Output phases are
// referenced to the empty waveguide (t) and to the emitter plane (r), so with
// r_m = 0 and t_m = 1 the emitter amplitudes come back unchanged. Throws
// DegenerateInput if the composed |t|² exceeds 1 + 1e-9.
SystemAmplitudes fp_compose_point(const TwoPort& emitter, const CavityConfig& cavity, double delta);

std::vector<SystemAmplitudes> fp_compose(std::span<const TwoPort> emitter,
                                         const CavityConfig& cavity, std::span<const double> grid);

// Cavity with no emitter present.
SystemAmplitudes bare_cavity(const CavityConfig& cavity, double delta);

// Same cavity seen by a drive entering from the other end.
CavityConfig mirrored(const CavityConfig& cavity);

}  // namespace chiralwg
