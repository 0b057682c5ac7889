#include "chiralwg/params.hpp"

#include <cmath>
#include <string>

#include "chiralwg/errors.hpp"
#include "chiralwg/units.hpp"

namespace chiralwg {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw InvalidParameter(field, what);
}

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void validate(const EmitterConfig& e) {
  require(in_unit_interval(e.beta), "emitter.beta", "must lie in [0, 1]");
  require(std::isfinite(e.beta_d_LR) && e.beta_d_LR >= 0.5 && e.beta_d_LR <= 1.0,
          "emitter.beta_d_LR", "must lie in [0.5, 1]");
  require(std::isfinite(e.beta_d_RL) && e.beta_d_RL >= 0.5 && e.beta_d_RL <= 1.0,
          "emitter.beta_d_RL", "must lie in [0.5, 1]");
  require(std::isfinite(e.lifetime_tau) && e.lifetime_tau > 0, "emitter.lifetime_tau",
          "must be > 0 ns");
  require(std::isfinite(e.dephasing_tau_d) && e.dephasing_tau_d > 0, "emitter.dephasing_tau_d",
          "must be > 0 ns");
  require(std::isfinite(e.center_energy) && e.center_energy > 0, "emitter.center_energy",
          "must be > 0 eV");
  require(std::isfinite(e.zeeman_splitting) && e.zeeman_splitting >= 0,
          "emitter.zeeman_splitting", "must be >= 0 μeV");
}

void validate(const EnsembleConfig& c) {
  require(std::isfinite(c.wandering_sigma) && c.wandering_sigma >= 0, "ensemble.wandering_sigma",
          "must be >= 0 μeV");
  require(in_unit_interval(c.p_dark), "ensemble.p_dark", "must lie in [0, 1]");
  require(c.quadrature_order >= 1 && c.quadrature_order % 2 == 1, "ensemble.quadrature_order",
          "must be a positive odd integer");
}

void validate(const DriveConfig& d) {
  require(std::isfinite(d.power_in_waveguide) && d.power_in_waveguide >= 0,
          "drive.power_in_waveguide", "must be >= 0 W");
  const auto& grid = d.laser_detuning_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]), "drive.laser_detuning_grid",
            "non-finite value at index " + std::to_string(i));
    if (i > 0) {
      require(grid[i] > grid[i - 1], "drive.laser_detuning_grid",
              "not strictly increasing at index " + std::to_string(i));
    }
  }
}

double coherence_decay(double gamma_total, double dephasing_tau_d, DephasingConvention convention) {
  const double pure = 1.0 / dephasing_tau_d;
  return convention == DephasingConvention::HalfRate ? 0.5 * gamma_total + 0.5 * pure
                                                     : 0.5 * gamma_total + pure;
}

DirectionalRates derive_rates(const EmitterConfig& e, Branch branch, Direction direction) {
  const double beta_d = direction == Direction::LtoR ? e.beta_d_LR : e.beta_d_RL;
  require(in_unit_interval(e.beta), "emitter.beta", "must lie in [0, 1]");
  require(in_unit_interval(beta_d),
          direction == Direction::LtoR ? "emitter.beta_d_LR" : "emitter.beta_d_RL",
          "must lie in [0, 1]");
  require(std::isfinite(e.lifetime_tau) && e.lifetime_tau > 0, "emitter.lifetime_tau",
          "must be > 0 ns");
  require(std::isfinite(e.dephasing_tau_d) && e.dephasing_tau_d > 0, "emitter.dephasing_tau_d",
          "must be > 0 ns");

  DirectionalRates r;
  r.gamma_total = 1.0 / e.lifetime_tau;
  const double guided = e.beta * r.gamma_total;
  const double preferred = e.beta * beta_d * r.gamma_total;
  const double counter = e.beta * (1.0 - beta_d) * r.gamma_total;
  if (branch == forward_coupled_branch(direction)) {
    r.gamma_f = preferred;
    r.gamma_b = counter;
  } else {
    r.gamma_f = counter;
    r.gamma_b = preferred;
  }
  // Computed as the remainder so the partition closes to rounding.
  r.gamma_loss = r.gamma_total - guided;
  r.gamma_perp = coherence_decay(r.gamma_total, e.dephasing_tau_d);
  return r;
}

double branch_offset(const EmitterConfig& e, Branch branch) {
  const double half = 0.5 * e.zeeman_splitting;
  const double sigma_minus = e.strong_branch == SpectralSide::HighEnergy ? half : -half;
  return branch == Branch::SigmaMinus ? sigma_minus : -sigma_minus;
}

double power_to_flux(double power_watts, double photon_energy_ev) {
  if (!(power_watts >= 0)) throw InvalidParameter("power", "must be >= 0 W");
  if (!(photon_energy_ev > 0)) throw InvalidParameter("photon_energy", "must be > 0 eV");
  const double photons_per_second = power_watts / (photon_energy_ev * units::kJoulePerEv);
  return photons_per_second * units::kSecondsPerNs;
}

double rabi_from_flux(double flux, double gamma_f) {
  if (!(flux >= 0)) throw InvalidParameter("flux", "must be >= 0");
  if (!(gamma_f >= 0)) throw InvalidParameter("gamma_f", "must be >= 0");
  return 2.0 * std::sqrt(gamma_f * flux);
}

double predicted_pl_contrast(double beta_d) { return beta_d - (1.0 - beta_d); }

std::string_view to_string(Branch b) { return b == Branch::SigmaPlus ? "sigma_plus" : "sigma_minus"; }
std::string_view to_string(Direction d) { return d == Direction::LtoR ? "ltr" : "rtl"; }
std::string_view to_string(SpectralSide s) {
  return s == SpectralSide::HighEnergy ? "HighEnergy" : "LowEnergy";
}
std::string_view to_string(QuadratureMethod m) {
  return m == QuadratureMethod::Adaptive ? "adaptive" : "gauss_hermite";
}

}  // namespace chiralwg
