#include "chiralwg/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chiralwg/errors.hpp"
#include "chiralwg/units.hpp"

namespace chiralwg {

namespace {

constexpr Complex kI{0.0, 1.0};

// 1/(γ⊥ + iΔ) with Δ in ns⁻¹: the emitter's linear susceptibility up to a rate.
Complex response(double delta_rate, const DirectionalRates& r) {
  return 1.0 / Complex(r.gamma_perp, delta_rate);
}

}  // namespace

BlochState bloch_steady_state(double delta, double omega, const DirectionalRates& r) {
  const double d = units::energy_to_rate(delta);
  const double lorentz = r.gamma_perp * r.gamma_perp + d * d;
  const double k = omega * omega * r.gamma_perp / lorentz;

  BlochState s;
  s.inversion = -r.gamma_total / (r.gamma_total + k);
  s.population = k / (2.0 * (r.gamma_total + k));
  s.sigma_minus = kI * (0.5 * omega) * s.inversion * response(d, r);
  return s;
}

Complex weak_transmission_amplitude(double delta, const DirectionalRates& r) {
  return 1.0 - r.gamma_f * response(units::energy_to_rate(delta), r);
}

Complex weak_reflection_amplitude(double delta, const DirectionalRates& r) {
  return -std::sqrt(r.gamma_f * r.gamma_b) * response(units::energy_to_rate(delta), r);
}

ScatterResult scatter_at_flux(double delta, double flux, const DirectionalRates& r) {
  if (!(flux >= 0)) throw InvalidParameter("flux", "must be >= 0");
  const double d = units::energy_to_rate(delta);
  const double lorentz = r.gamma_perp * r.gamma_perp + d * d;

  // Everything below is normalised by the incident flux so Φ → 0 is regular.
  // Ω² = 4γ_fΦ, so K/Φ = 4γ_fγ⊥/(γ⊥² + Δ²).
  const double k_per_flux = 4.0 * r.gamma_f * r.gamma_perp / lorentz;
  const double k = k_per_flux * flux;
  const double inversion = -r.gamma_total / (r.gamma_total + k);
  const double population_per_flux = k_per_flux / (2.0 * (r.gamma_total + k));

  // ⟨σ⁻⟩/α_in = i√γ_f ⟨σ_z⟩/(γ⊥ + iΔ); output field α_out = α_in − i√γ_f⟨σ⁻⟩.
  const Complex chi = response(d, r);
  const Complex t = 1.0 + r.gamma_f * inversion * chi;
  const double coherence_per_flux = r.gamma_f * inversion * inversion / lorentz;  // |⟨σ⁻⟩|²/Φ

  ScatterResult out;
  out.t_coherent = t;
  out.phase = std::arg(t);
  out.T = std::norm(t) + r.gamma_f * (population_per_flux - coherence_per_flux);
  out.R = r.gamma_b * population_per_flux;
  out.L = r.gamma_loss * population_per_flux;
  return out;
}

ScatterResult scatter(double delta, double omega, const DirectionalRates& r) {
  if (!(omega >= 0)) throw InvalidParameter("omega", "must be >= 0");
  if (omega == 0) return scatter_at_flux(delta, 0.0, r);
  if (r.gamma_f <= 0) {
    throw DegenerateInput("finite Rabi frequency with gamma_f = 0 implies no finite incident flux");
  }
  return scatter_at_flux(delta, omega * omega / (4.0 * r.gamma_f), r);
}

ScatterResult compose_transitions(const ScatterResult& plus, const ScatterResult& minus) {
  ScatterResult out;
  out.t_coherent = plus.t_coherent * minus.t_coherent;
  out.phase = std::arg(out.t_coherent);
  out.T = plus.T * minus.T;
  out.R = plus.R + minus.R;
  out.L = 1.0 - out.T - out.R;
  return out;
}

std::optional<std::string> branch_separation_warning(const EmitterConfig& emitter,
                                                     Direction direction) {
  const auto plus = derive_rates(emitter, Branch::SigmaPlus, direction);
  const auto minus = derive_rates(emitter, Branch::SigmaMinus, direction);
  const double fwhm = 2.0 * units::rate_to_energy(std::max(plus.gamma_perp, minus.gamma_perp));
  if (emitter.zeeman_splitting >= 10.0 * fwhm) return std::nullopt;
  std::ostringstream msg;
  msg << "Zeeman splitting " << emitter.zeeman_splitting << " ueV is below 10x the homogeneous FWHM "
      << fwhm << " ueV; independent-branch composition is approximate";
  return msg.str();
}

namespace {

double abs_phase(double d_rate, const DirectionalRates& r) {
  return std::abs(std::arg(1.0 - r.gamma_f * response(d_rate, r)));
}

}  // namespace

PhaseShift max_phase_shift(const DirectionalRates& r) {
  if (r.gamma_f > r.gamma_perp) {
    return {std::numbers::pi, 0.0, std::abs(1.0 - r.gamma_f / r.gamma_perp)};
  }
  if (r.gamma_f == r.gamma_perp) {
    // t(Δ) = iΔ/(γ⊥ + iΔ): the phase tends to π/2 as Δ → 0 while |t| → 0.
    return {0.5 * std::numbers::pi, 0.0, 0.0};
  }
  if (r.gamma_f <= 0) return {0.0, 0.0, 1.0};

  // arg t is odd in Δ, so search Δ ≥ 0 on a log grid spanning the scales
  // (γ⊥ − γ_f) and γ⊥, then refine the bracket by golden section.
  constexpr int kGrid = 4001;
  const double lo = 1e-9 * r.gamma_perp;
  const double hi = 1e4 * r.gamma_perp;
  const double step = std::log(hi / lo) / (kGrid - 1);
  int best = 0;
  double best_value = -1;
  for (int i = 0; i < kGrid; ++i) {
    const double value = abs_phase(lo * std::exp(step * i), r);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = std::log(lo) + step * std::max(best - 1, 0);
  double b = std::log(lo) + step * std::min(best + 1, kGrid - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = abs_phase(std::exp(c), r);
  double fd = abs_phase(std::exp(d), r);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = abs_phase(std::exp(c), r);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = abs_phase(std::exp(d), r);
    }
  }
  const double d_best = std::exp(0.5 * (a + b));
  const Complex t = 1.0 - r.gamma_f * response(d_best, r);
  return {std::abs(std::arg(t)), units::rate_to_energy(d_best), std::abs(t)};
}

}  // namespace chiralwg
