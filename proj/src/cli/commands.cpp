#include "chiralwg/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "chiralwg/config.hpp"
#include "chiralwg/ensemble.hpp"
#include "chiralwg/errors.hpp"
#include "chiralwg/io.hpp"
#include "chiralwg/kernels.hpp"
#include "chiralwg/scattering.hpp"
#include "json.hpp"

namespace chiralwg::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

Scenario load(const CommonOptions& common) {
  return common.config ? load_scenario(*common.config) : Scenario{};
}

class Manifest {
 public:
  Manifest(std::string command, const CommonOptions& common, const Scenario& scenario)
      : start_(std::chrono::steady_clock::now()), out_(common.out) {
    json_["scenario"] = scenario_to_json(scenario);
    json_["command"] = {{"name", std::move(command)}, {"args", common.argv}};
    json_["outputs"] = ojson::array();
  }

  void write(const std::string& name, const std::string& contents) {
    write_file_atomic(out_ / name, contents);
    json_["outputs"].push_back({{"path", name}, {"sha256", sha256_hex(contents)}});
  }

  void write_spectrum(const std::string& name, const Spectrum& s) {
    write_spectrum_csv(out_ / name, s);
    json_["outputs"].push_back({{"path", name}, {"sha256", sha256_hex(spectrum_to_csv(s))}});
  }

  ojson& extra() { return json_; }

  void finish() {
    json_["wall_time"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_file_atomic(out_ / "manifest.json", json_.dump(2) + "\n");
  }

 private:
  std::chrono::steady_clock::time_point start_;
  fs::path out_;
  ojson json_;
};

void prepare_out(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());
}

// Exceptions are mapped to exit codes here and nowhere else.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InvalidParameter& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const GridMismatch& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DegenerateInput& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const FormatError& e) {
    log << "input error: " << e.what() << "\n";
    return kIoError;
  } catch (const IoError& e) {
    log << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    log << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
}

ojson params_json(const FanoParams& p) {
  return {{"y0", p.y0}, {"A", p.A}, {"q", p.q}, {"gamma", p.gamma}, {"omega0", p.omega0}};
}

}  // namespace

int cmd_spectrum(const SpectrumOptions& o, std::ostream& log) {
  return guarded(log, [&] {
    Scenario scenario = load(o.common);
    if (o.direction) scenario.drive.direction = *o.direction;
    if (o.power_W) scenario.drive.power_in_waveguide = *o.power_W;
    if (scenario.drive.laser_detuning_grid.empty()) {
      scenario.drive.laser_detuning_grid = linear_grid(-200, 200, 801);
    }
    validate(scenario.drive);
    prepare_out(o.common.out);

    const SpectrumSet set =
        simulate_spectrum(scenario.emitter, scenario.ensemble, scenario.drive, scenario.cavity);
    for (const auto& w : set.warnings) log << "warning: " << w << "\n";

    const std::string digest = scenario_digest(scenario);
    auto tag = [&](const Spectrum& s) {
      SpectrumMetadata meta = s.metadata();
      meta.config_digest = digest;
      return Spectrum(std::vector<double>(s.detunings().begin(), s.detunings().end()),
                      std::vector<double>(s.values().begin(), s.values().end()), s.kind(), meta);
    };

    Manifest manifest("spectrum", o.common, scenario);
    manifest.write_spectrum("transmission.csv", tag(set.transmission));
    manifest.write_spectrum("reflection.csv", tag(set.reflection));
    if (o.differential) {
      manifest.write_spectrum("delta_t.csv", tag(set.delta_t));
      manifest.write_spectrum("delta_r.csv", tag(set.delta_r));
    }
    if (o.mc_samples > 0) {
      // Oracle column: same pipeline, wandering average by seeded sampling.
      const EmitterResponseModel model(scenario.emitter, scenario.drive.direction,
                                       scenario.drive.power_in_waveguide, scenario.cavity);
      const auto& grid = scenario.drive.laser_detuning_grid;
      const double p = scenario.ensemble.p_dark;
      std::string csv = "detuning_ueV,value,standard_error,quadrature\n";
      double worst = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid[i];
        const auto mc = monte_carlo_average(
            [&](double s) { return model.displaced(d, s).transmission; },
            scenario.ensemble.wandering_sigma, o.mc_samples, o.common.seed + i);
        const double dark = model.dark(d).transmission;
        const double value = (1 - p) * mc.mean + p * dark;
        const double se = (1 - p) * mc.standard_error;
        const double quad = set.transmission.values()[i];
        if (se > 0) worst = std::max(worst, std::abs(value - quad) / se);
        csv += format_double(d) + "," + format_double(value) + "," + format_double(se) + "," +
               format_double(quad) + "\n";
      }
      manifest.write("transmission_mc.csv", csv);
      manifest.extra()["mc_max_deviation_in_standard_errors"] = worst;
      log << "Monte-Carlo oracle: max |quadrature - MC| = " << worst << " standard errors\n";
    }
    manifest.finish();
    return static_cast<int>(kOk);
  });
}

int cmd_saturation(const SaturationOptions& o, std::ostream& log) {
  return guarded(log, [&] {
    Scenario scenario = load(o.common);
    if (o.direction) scenario.drive.direction = *o.direction;
    const auto powers = log_grid(o.powers.start, o.powers.stop, o.powers.points);
    prepare_out(o.common.out);
    const auto curve = simulate_saturation(scenario.emitter, scenario.ensemble,
                                           scenario.drive.direction, powers);
    std::string csv = "power_W,dip_depth\n";
    for (const auto& pt : curve) csv += format_double(pt.power_W) + "," + format_double(pt.dip_depth) + "\n";
    Manifest manifest("saturation", o.common, scenario);
    manifest.write("saturation.csv", csv);
    manifest.finish();
    return static_cast<int>(kOk);
  });
}

int cmd_fit(const FitOptions& o, std::ostream& log) {
  return guarded(log, [&] {
    if (o.inputs.empty()) throw InvalidParameter("inputs", "at least one CSV is required");
    const Scenario scenario = load(o.common);
    std::vector<FitWindow> windows = o.windows;
    if (windows.empty()) {
      for (Branch b : {Branch::SigmaPlus, Branch::SigmaMinus}) {
        const double c = branch_offset(scenario.emitter, b);
        windows.push_back({c - kDefaultHalfWindow, c + kDefaultHalfWindow});
      }
    }
    if (windows.size() > 2) throw InvalidParameter("window", "at most two windows (σ+, σ-)");
    std::vector<Spectrum> spectra;
    for (const auto& path : o.inputs) spectra.push_back(ingest_csv(path));
    prepare_out(o.common.out);

    ojson report;
    report["fits"] = ojson::array();
    std::vector<FanoFit> fits;
    bool all_converged = true;
    for (std::size_t k = 0; k < windows.size(); ++k) {
      const Spectrum& s = spectra[std::min(k, spectra.size() - 1)];
      const FanoFit fit = fano_fit(s, windows[k]);
      all_converged = all_converged && fit.converged;
      fits.push_back(fit);
      report["fits"].push_back({
          {"branch", k == 0 ? "sigma_plus" : "sigma_minus"},
          {"input", o.inputs[std::min(k, o.inputs.size() - 1)].string()},
          {"window", {windows[k].lo, windows[k].hi}},
          {"params", params_json(fit.params)},
          {"stderr", params_json(fit.stderr_)},
          {"rss", fit.rss},
          {"converged", fit.converged},
          {"iterations", fit.iterations},
          {"points", fit.points},
      });
      if (!fit.converged) log << "fit " << k << " did not converge\n";
    }
    if (fits.size() == 2 && all_converged) {
      const double sum = fits[0].params.A + fits[1].params.A;
      if (sum != 0) {
        report["contrast"] = fano_contrast(fits[0], fits[1]);
      } else {
        report["contrast"] = nullptr;
        log << "warning: contrast undefined, amplitudes cancel\n";
      }
      if (auto w = fano_contrast_warning(fits[0], fits[1])) {
        report["warning"] = *w;
        log << "warning: " << *w << "\n";
      }
    }
    Manifest manifest("fit", o.common, scenario);
    manifest.write("fit.json", report.dump(2) + "\n");
    manifest.finish();
    return static_cast<int>(all_converged ? kOk : kFitUnconverged);
  });
}

int cmd_phase(const PhaseOptions& o, std::ostream& log) {
  return guarded(log, [&] {
    Scenario scenario = load(o.common);
    if (o.direction) scenario.drive.direction = *o.direction;
    const Direction dir = scenario.drive.direction;
    const Branch branch = forward_coupled_branch(dir);
    prepare_out(o.common.out);

    const PhaseShift base = max_phase_shift(derive_rates(scenario.emitter, branch, dir));
    ojson report = {{"delta_phi", base.delta_phi},
                    {"detuning_ueV", base.detuning},
                    {"abs_t", base.abs_t}};
    log << "delta_phi = " << format_double(base.delta_phi) << " rad at "
        << format_double(base.detuning) << " ueV, |t| = " << format_double(base.abs_t) << "\n";

    Manifest manifest("phase", o.common, scenario);
    manifest.write("phase.json", report.dump(2) + "\n");
    if (!o.scan_beta.empty() || !o.scan_tau_d.empty()) {
      const std::vector<double> betas =
          o.scan_beta.empty() ? std::vector<double>{scenario.emitter.beta} : o.scan_beta;
      const std::vector<double> taus = o.scan_tau_d.empty()
                                           ? std::vector<double>{scenario.emitter.dephasing_tau_d}
                                           : o.scan_tau_d;
      std::string csv = "beta,dephasing_tau_d,delta_phi,detuning_ueV,abs_t\n";
      for (double beta : betas) {
        for (double tau_d : taus) {
          EmitterConfig e = scenario.emitter;
          e.beta = beta;
          e.dephasing_tau_d = tau_d;
          validate(e);
          const PhaseShift ps = max_phase_shift(derive_rates(e, branch, dir));
          csv += format_double(beta) + "," + format_double(tau_d) + "," +
                 format_double(ps.delta_phi) + "," + format_double(ps.detuning) + "," +
                 format_double(ps.abs_t) + "\n";
        }
      }
      manifest.write("phase_scan.csv", csv);
    }
    manifest.finish();
    return static_cast<int>(kOk);
  });
}

namespace {

std::optional<Direction> parse_direction(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s == "rtl" ? Direction::RtoL : Direction::LtoR;
}

std::vector<double> split_numbers(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidParameter(flag, "cannot parse '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chiral waveguide emitter simulator"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string config, direction;
  std::optional<double> power;
  bool differential = false;
  std::size_t mc_samples = 0;
  std::string powers_spec = "1e-13,1e-6,61";
  std::vector<std::string> window_specs;
  std::vector<std::string> inputs;
  std::string scan_beta, scan_tau_d;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output directory");
    sub->add_option("--seed", common.seed, "Seed for Monte-Carlo oracle modes");
  };
  auto add_direction = [&](CLI::App* sub) {
    sub->add_option("--direction", direction, "Drive direction")
        ->check(CLI::IsMember({"ltr", "rtl"}));
  };

  auto* spectrum = app.add_subcommand("spectrum", "Transmission and reflection spectra");
  add_common(spectrum);
  add_direction(spectrum);
  spectrum->add_option("--power", power, "Power in the waveguide, W");
  spectrum->add_flag("--differential", differential, "Also write dT/T and dR/T");
  spectrum->add_option("--mc-samples", mc_samples, "Monte-Carlo oracle samples per point");

  auto* saturation = app.add_subcommand("saturation", "Main dip depth against power");
  add_common(saturation);
  add_direction(saturation);
  saturation->add_option("--powers", powers_spec, "start,stop,points (W, log-spaced)");

  auto* fit = app.add_subcommand("fit", "Fano fits and directional contrast");
  add_common(fit);
  fit->add_option("inputs", inputs, "Spectrum CSV files")->required()->check(CLI::ExistingFile);
  fit->add_option("--window", window_specs, "lo,hi in ueV; first sigma+, second sigma-");

  auto* phase = app.add_subcommand("phase", "Maximum single-photon phase shift");
  add_common(phase);
  add_direction(phase);
  phase->add_option("--scan-beta", scan_beta, "Comma-separated beta values");
  phase->add_option("--scan-tau-d", scan_tau_d, "Comma-separated dephasing times, ns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(kConfigError);
  }

  for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);
  if (!config.empty()) common.config = config;

  return guarded(err, [&]() -> int {
    if (spectrum->parsed()) {
      return cmd_spectrum({common, parse_direction(direction), power, differential, mc_samples}, err);
    }
    if (saturation->parsed()) {
      const auto v = split_numbers(powers_spec, "--powers");
      if (v.size() != 3 || v[2] != std::floor(v[2])) {
        throw InvalidParameter("--powers", "expected start,stop,points");
      }
      return cmd_saturation({common, parse_direction(direction), {v[0], v[1], static_cast<int>(v[2])}},
                            err);
    }
    if (fit->parsed()) {
      FitOptions o{common, {}, {}};
      for (const auto& p : inputs) o.inputs.emplace_back(p);
      for (const auto& w : window_specs) {
        const auto v = split_numbers(w, "--window");
        if (v.size() != 2) throw InvalidParameter("--window", "expected lo,hi");
        o.windows.push_back({v[0], v[1]});
      }
      return cmd_fit(o, err);
    }
    PhaseOptions o{common, parse_direction(direction), {}, {}};
    if (!scan_beta.empty()) o.scan_beta = split_numbers(scan_beta, "--scan-beta");
    if (!scan_tau_d.empty()) o.scan_tau_d = split_numbers(scan_tau_d, "--scan-tau-d");
    const int code = cmd_phase(o, err);
    if (code == kOk) out << read_file(common.out / "phase.json");
    return code;
  });
}

}  // namespace chiralwg::cli
