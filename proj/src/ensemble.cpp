#include "chiralwg/ensemble.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "chiralwg/errors.hpp"
#include "chiralwg/units.hpp"

namespace chiralwg {

namespace {

std::size_t index_of(Branch branch) { return branch == Branch::SigmaPlus ? 0 : 1; }

}  // namespace

double wandering_average(const OffsetFunction& fn, double sigma, const EnsembleConfig& ensemble) {
  if (sigma == 0) return fn(0.0);
  if (ensemble.quadrature_method == QuadratureMethod::GaussHermite) {
    return gauss_hermite_average(fn, sigma, cached_gauss_hermite_rule(ensemble.quadrature_order));
  }
  return adaptive_gaussian_average(fn, sigma);
}

MonteCarloEstimate monte_carlo_average(const OffsetFunction& fn, double sigma, std::size_t samples,
                                       std::uint64_t seed) {
  if (samples < 2) throw InvalidParameter("samples", "need at least 2 Monte-Carlo samples");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Welford accumulation keeps the variance stable for 10⁶+ samples.
  double mean = 0;
  double m2 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = fn(sigma * normal(rng));
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

Spectrum apply_blinking(const Spectrum& bright, const Spectrum& dark, double p_dark) {
  if (!(p_dark >= 0 && p_dark <= 1)) throw InvalidParameter("p_dark", "must lie in [0, 1]");
  require_aligned(bright, dark, "apply_blinking");
  std::vector<double> mixed(bright.size());
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    mixed[i] = (1.0 - p_dark) * bright.values()[i] + p_dark * dark.values()[i];
  }
  return bright.with_values(std::move(mixed), bright.kind());
}

namespace {

void require_positive_baseline(const Spectrum& baseline, std::string_view context) {
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (!(baseline.values()[i] > 0)) {
      std::ostringstream msg;
      msg << context << ": transmitted baseline is " << baseline.values()[i] << " at detuning "
          << baseline.detunings()[i] << " ueV; a non-positive baseline is nonphysical";
      throw DegenerateInput(msg.str());
    }
  }
}

}  // namespace

Spectrum differential_transmission(const Spectrum& on, const Spectrum& off) {
  require_aligned(on, off, "differential_transmission");
  require_positive_baseline(off, "differential_transmission");
  std::vector<double> out(on.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (on.values()[i] - off.values()[i]) / off.values()[i];
  }
  return on.with_values(std::move(out), SpectrumKind::DeltaT);
}

Spectrum differential_reflectivity(const Spectrum& r_on, const Spectrum& r_off,
                                   const Spectrum& t_off) {
  require_aligned(r_on, r_off, "differential_reflectivity");
  require_aligned(r_on, t_off, "differential_reflectivity");
  require_positive_baseline(t_off, "differential_reflectivity");
  std::vector<double> out(r_on.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (r_on.values()[i] - r_off.values()[i]) / t_off.values()[i];
  }
  return r_on.with_values(std::move(out), SpectrumKind::DeltaR);
}

std::optional<std::string> quadrature_resolution_warning(const EmitterConfig& emitter,
                                                         const EnsembleConfig& ensemble) {
  if (ensemble.quadrature_method != QuadratureMethod::GaussHermite) return std::nullopt;
  if (ensemble.wandering_sigma == 0 || ensemble.quadrature_order < 2) return std::nullopt;
  const auto nodes = cached_gauss_hermite_rule(ensemble.quadrature_order).nodes();
  const std::size_t mid = nodes.size() / 2;
  const double spacing = ensemble.wandering_sigma * (nodes[mid] - nodes[mid - 1]);
  const double hwhm = units::kHbar * coherence_decay(1.0 / emitter.lifetime_tau, emitter.dephasing_tau_d);
  if (spacing <= hwhm) return std::nullopt;
  std::ostringstream msg;
  msg << "Gauss-Hermite node spacing " << spacing << " ueV exceeds the homogeneous half-width "
      << hwhm << " ueV; raise ensemble.quadrature_order or use the adaptive method";
  return msg.str();
}

EmitterResponseModel::EmitterResponseModel(const EmitterConfig& emitter, Direction direction,
                                           double power_watts, std::optional<CavityConfig> cavity)
    : emitter_(emitter),
      direction_(direction),
      flux_(power_to_flux(power_watts, emitter.center_energy)),
      cavity_(std::move(cavity)) {
  validate(emitter_);
  if (cavity_) {
    validate(*cavity_);
    // The cavity is described from the L→R input side.
    if (direction_ == Direction::RtoL) cavity_ = mirrored(*cavity_);
  }
  for (Branch b : {Branch::SigmaPlus, Branch::SigmaMinus}) {
    rates_[index_of(b)] = derive_rates(emitter_, b, direction_);
    offsets_[index_of(b)] = branch_offset(emitter_, b);
  }
}

const DirectionalRates& EmitterResponseModel::rates(Branch branch) const {
  return rates_[index_of(branch)];
}

double EmitterResponseModel::offset(Branch branch) const { return offsets_[index_of(branch)]; }

double EmitterResponseModel::saturation_parameter() const {
  const auto& r = rates(forward_coupled_branch(direction_));
  const double omega = rabi_from_flux(flux_, r.gamma_f);
  return omega * omega / (r.gamma_total * r.gamma_perp);
}

kernels::PointValue EmitterResponseModel::displaced(double delta, double center_shift) const {
  const double plus_detuning = delta - offsets_[0] - center_shift;
  const double minus_detuning = delta - offsets_[1] - center_shift;
  if (cavity_) {
    const TwoPort emitter = compose_branches(emitter_two_port(plus_detuning, rates_[0]),
                                             emitter_two_port(minus_detuning, rates_[1]));
    const SystemAmplitudes sys = fp_compose_point(emitter, *cavity_, delta);
    return {std::norm(sys.t), std::norm(sys.r)};
  }
  const ScatterResult combined = compose_transitions(scatter_at_flux(plus_detuning, flux_, rates_[0]),
                                                     scatter_at_flux(minus_detuning, flux_, rates_[1]));
  return {combined.T, combined.R};
}

kernels::PointValue EmitterResponseModel::dark(double delta) const {
  if (cavity_) {
    const SystemAmplitudes sys = bare_cavity(*cavity_, delta);
    return {std::norm(sys.t), std::norm(sys.r)};
  }
  return {1.0, 0.0};
}

kernels::PointValue EmitterResponseModel::averaged(double delta,
                                                   const EnsembleConfig& ensemble) const {
  const double sigma = ensemble.wandering_sigma;
  const double t = wandering_average(
      [&](double shift) { return displaced(delta, shift).transmission; }, sigma, ensemble);
  const double r = wandering_average(
      [&](double shift) { return displaced(delta, shift).reflection; }, sigma, ensemble);
  return {t, r};
}

namespace {

Spectrum make_spectrum(std::span<const double> grid, const std::vector<kernels::PointValue>& values,
                       bool transmission, const SpectrumMetadata& metadata) {
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = transmission ? values[i].transmission : values[i].reflection;
  }
  return Spectrum(std::vector<double>(grid.begin(), grid.end()), std::move(v),
                  transmission ? SpectrumKind::Transmission : SpectrumKind::Reflection, metadata);
}

}  // namespace

SpectrumSet simulate_spectrum(const EmitterConfig& emitter, const EnsembleConfig& ensemble,
                              const DriveConfig& drive, const std::optional<CavityConfig>& cavity,
                              kernels::Execution execution) {
  validate(emitter);
  validate(ensemble);
  validate(drive);
  if (drive.laser_detuning_grid.empty()) {
    throw InvalidParameter("drive.laser_detuning_grid", "must not be empty");
  }

  std::vector<std::string> warnings;
  if (auto w = branch_separation_warning(emitter, drive.direction)) warnings.push_back(*w);

  if (auto w = quadrature_resolution_warning(emitter, ensemble)) warnings.push_back(*w);

  const EmitterResponseModel model(emitter, drive.direction, drive.power_in_waveguide, cavity);
  if (cavity) {
    // Probe the saturating model only to decide whether to warn.
    const EmitterResponseModel saturating(emitter, drive.direction, drive.power_in_waveguide);
    if (saturating.saturation_parameter() > kCavitySaturationThreshold) {
      std::ostringstream msg;
      msg << "cavity composition uses linear response; drive saturation parameter "
          << saturating.saturation_parameter() << " is ignored";
      warnings.push_back(msg.str());
    }
  }

  const SpectrumMetadata metadata{drive.direction, drive.power_in_waveguide, {}};
  const auto& grid = drive.laser_detuning_grid;
  const auto bright_points = kernels::evaluate_grid(
      grid, [&](double delta) { return model.averaged(delta, ensemble); }, execution);
  const auto dark_points =
      kernels::evaluate_grid(grid, [&](double delta) { return model.dark(delta); }, execution);

  const Spectrum t_bright = make_spectrum(grid, bright_points, true, metadata);
  const Spectrum r_bright = make_spectrum(grid, bright_points, false, metadata);
  const Spectrum t_dark = make_spectrum(grid, dark_points, true, metadata);
  const Spectrum r_dark = make_spectrum(grid, dark_points, false, metadata);

  Spectrum t_on = apply_blinking(t_bright, t_dark, ensemble.p_dark);
  Spectrum r_on = apply_blinking(r_bright, r_dark, ensemble.p_dark);
  Spectrum delta_t = differential_transmission(t_on, t_dark);
  Spectrum delta_r = differential_reflectivity(r_on, r_dark, t_dark);
  return {std::move(t_on), std::move(r_on), std::move(delta_t), std::move(delta_r),
          std::move(warnings)};
}

namespace {

// |ΔT| or |ΔR| of the full pipeline at one detuning, without building spectra.
double pipeline_signal(const EmitterResponseModel& model, const EnsembleConfig& ensemble,
                       double delta, bool transmission) {
  const auto bright = model.averaged(delta, ensemble);
  const auto dark = model.dark(delta);
  const double p = ensemble.p_dark;
  if (transmission) {
    const double on = (1.0 - p) * bright.transmission + p * dark.transmission;
    return std::abs((on - dark.transmission) / dark.transmission);
  }
  const double on = (1.0 - p) * bright.reflection + p * dark.reflection;
  return std::abs((on - dark.reflection) / dark.transmission);
}

}  // namespace

std::vector<SaturationPoint> simulate_saturation(const EmitterConfig& emitter,
                                                 const EnsembleConfig& ensemble,
                                                 Direction direction,
                                                 std::span<const double> powers,
                                                 kernels::Execution execution) {
  validate(emitter);
  validate(ensemble);
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0) || !std::isfinite(powers[i])) {
      throw InvalidParameter("powers", "must be positive and finite (index " + std::to_string(i) + ")");
    }
  }
  const double resonance = branch_offset(emitter, forward_coupled_branch(direction));
  auto depth = [&](double power) {
    const EmitterResponseModel model(emitter, direction, power);
    return pipeline_signal(model, ensemble, resonance, true);
  };
  const auto depths = execution == kernels::Execution::Parallel ? kernels::map_parallel(powers, depth)
                                                                : kernels::map_serial(powers, depth);
  std::vector<SaturationPoint> out(powers.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {powers[i], depths[i]};
  return out;
}

std::array<double, 2> branch_peak_signals(const EmitterConfig& emitter,
                                          const EnsembleConfig& ensemble, Direction direction,
                                          double power_watts, bool transmission) {
  const EmitterResponseModel model(emitter, direction, power_watts);
  return {pipeline_signal(model, ensemble, model.offset(Branch::SigmaPlus), transmission),
          pipeline_signal(model, ensemble, model.offset(Branch::SigmaMinus), transmission)};
}

std::vector<double> log_grid(double start, double stop, int points) {
  if (!(start > 0 && stop > start) || points < 2) {
    throw InvalidParameter("grid", "log grid needs 0 < start < stop and at least 2 points");
  }
  std::vector<double> out(points);
  const double a = std::log10(start);
  const double step = (std::log10(stop) - a) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = std::pow(10.0, a + step * i);
  out.front() = start;
  out.back() = stop;
  return out;
}

std::vector<double> linear_grid(double start, double stop, int points) {
  if (!(stop > start) || points < 2) {
    throw InvalidParameter("grid", "linear grid needs start < stop and at least 2 points");
  }
  std::vector<double> out(points);
  const double step = (stop - start) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = start + step * i;
  out.back() = stop;
  return out;
}

}  // namespace chiralwg
