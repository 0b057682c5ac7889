#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chiralwg/params.hpp"

namespace chiralwg {

enum class SpectrumKind { Transmission, Reflection, DeltaT, DeltaR, PL };

std::string_view to_string(SpectrumKind kind);
std::optional<SpectrumKind> spectrum_kind_from_string(std::string_view name);

struct SpectrumMetadata {
  std::optional<Direction> direction;
  std::optional<double> power_W;
  std::string config_digest;

  bool operator==(const SpectrumMetadata&) const = default;
};

// A sampled function of laser detuning (μeV). The grid is strictly
// increasing, values are finite and lengths agree; the constructor enforces
// all three.
class Spectrum {
 public:
  Spectrum(std::vector<double> detunings, std::vector<double> values, SpectrumKind kind,
           SpectrumMetadata metadata = {});

  std::span<const double> detunings() const noexcept { return detunings_; }
  std::span<const double> values() const noexcept { return values_; }
  SpectrumKind kind() const noexcept { return kind_; }
  const SpectrumMetadata& metadata() const noexcept { return metadata_; }
  std::size_t size() const noexcept { return values_.size(); }

  Spectrum with_values(std::vector<double> values, SpectrumKind kind) const;

  bool operator==(const Spectrum&) const = default;

 private:
  std::vector<double> detunings_;
  std::vector<double> values_;
  SpectrumKind kind_;
  SpectrumMetadata metadata_;
};

// Throws GridMismatch unless both grids are identical.
void require_aligned(const Spectrum& a, const Spectrum& b, std::string_view context);

}  // namespace chiralwg
