#include "chiralwg/cavity.hpp"

#include <cmath>
#include <sstream>

#include "chiralwg/errors.hpp"
#include "chiralwg/units.hpp"

namespace chiralwg {

void validate(const CavityConfig& c) {
  const double r = c.mirror_reflectivity;
  const double t = c.mirror_transmissivity;
  if (!(std::isfinite(r) && r >= 0 && r < 1)) {
    throw InvalidParameter("cavity.mirror_reflectivity", "must lie in [0, 1)");
  }
  if (!(std::isfinite(t) && t > 0 && t <= 1)) {
    throw InvalidParameter("cavity.mirror_transmissivity", "must lie in (0, 1]");
  }
  if (r * r + t * t > 1.0 + 1e-12) {
    throw InvalidParameter("cavity.mirror_transmissivity", "r_m^2 + t_m^2 must not exceed 1");
  }
  for (const auto& [value, field] :
       {std::pair{c.round_trip_phase_at_center, "cavity.round_trip_phase_at_center"},
        std::pair{c.round_trip_time, "cavity.round_trip_time"},
        std::pair{c.emitter_position_phase, "cavity.emitter_position_phase"}}) {
    if (!std::isfinite(value)) throw InvalidParameter(field, "must be finite");
  }
}

TwoPort cascade(const TwoPort& a, const TwoPort& b) {
  const Complex loop = 1.0 / (1.0 - a.r_output * b.r_input);
  TwoPort out;
  out.t_forward = a.t_forward * b.t_forward * loop;
  out.t_backward = b.t_backward * a.t_backward * loop;
  out.r_input = a.r_input + a.t_backward * b.r_input * a.t_forward * loop;
  out.r_output = b.r_output + b.t_forward * a.r_output * b.t_backward * loop;
  return out;
}

TwoPort emitter_two_port(double delta, const DirectionalRates& rates) {
  TwoPort e;
  const Complex chi = 1.0 / Complex(rates.gamma_perp, units::energy_to_rate(delta));
  e.t_forward = 1.0 - rates.gamma_f * chi;
  e.t_backward = 1.0 - rates.gamma_b * chi;
  e.r_input = e.r_output = -std::sqrt(rates.gamma_f * rates.gamma_b) * chi;
  return e;
}

TwoPort compose_branches(const TwoPort& plus, const TwoPort& minus) {
  // Both dipoles sit at the same point; the star product of two co-located
  // scatterers is exact for linear response.
  return cascade(plus, minus);
}

namespace {

TwoPort propagation(double phase) {
  TwoPort p;
  p.t_forward = p.t_backward = std::polar(1.0, phase);
  return p;
}

TwoPort input_mirror(const CavityConfig& c) {
  TwoPort m;
  m.t_forward = m.t_backward = c.mirror_transmissivity;
  m.r_input = -c.mirror_reflectivity;
  m.r_output = c.mirror_reflectivity;
  return m;
}

TwoPort output_mirror(const CavityConfig& c) {
  TwoPort m;
  m.t_forward = m.t_backward = c.mirror_transmissivity;
  m.r_input = c.mirror_reflectivity;
  m.r_output = -c.mirror_reflectivity;
  return m;
}

struct Segments {
  double input_side;
  double output_side;
};

// Dispersion θ(ω) = θ₀ + τ_rt·ω is split evenly between the two segments.
Segments segment_phases(const CavityConfig& c, double delta) {
  const double dispersion = 0.25 * c.round_trip_time * units::energy_to_rate(delta);
  return {c.emitter_position_phase + dispersion,
          0.5 * c.round_trip_phase_at_center - c.emitter_position_phase + dispersion};
}

SystemAmplitudes extract(const TwoPort& system, const Segments& s) {
  // Reference planes: divide out the empty-waveguide one-way phase for t and
  // the input-segment round trip for r.
  SystemAmplitudes out;
  out.t = system.t_forward * std::polar(1.0, -(s.input_side + s.output_side));
  out.r = system.r_input * std::polar(1.0, -2.0 * s.input_side);
  return out;
}

}  // namespace

SystemAmplitudes fp_compose_point(const TwoPort& emitter, const CavityConfig& cavity, double delta) {
  if (cavity.mirror_reflectivity == 0 && cavity.mirror_transmissivity == 1) {
    return {emitter.t_forward, emitter.r_input};
  }
  const Segments s = segment_phases(cavity, delta);
  TwoPort system = cascade(input_mirror(cavity), propagation(s.input_side));
  system = cascade(system, emitter);
  system = cascade(system, propagation(s.output_side));
  system = cascade(system, output_mirror(cavity));
  const SystemAmplitudes out = extract(system, s);
  if (std::norm(out.t) > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "composed |t|^2 = " << std::norm(out.t) << " exceeds 1 at detuning " << delta
        << " ueV; mirror parameters are nonphysical";
    throw DegenerateInput(msg.str());
  }
  return out;
}

std::vector<SystemAmplitudes> fp_compose(std::span<const TwoPort> emitter,
                                         const CavityConfig& cavity, std::span<const double> grid) {
  if (emitter.size() != grid.size()) {
    throw GridMismatch("fp_compose: emitter response and grid lengths differ");
  }
  std::vector<SystemAmplitudes> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = fp_compose_point(emitter[i], cavity, grid[i]);
  return out;
}

SystemAmplitudes bare_cavity(const CavityConfig& cavity, double delta) {
  return fp_compose_point(TwoPort{}, cavity, delta);
}

CavityConfig mirrored(const CavityConfig& c) {
  CavityConfig m = c;
  m.emitter_position_phase = 0.5 * c.round_trip_phase_at_center - c.emitter_position_phase;
  return m;
}

}  // namespace chiralwg
