#include "chiralwg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chiralwg/errors.hpp"

namespace chiralwg {

std::string_view to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::Transmission: return "Transmission";
    case SpectrumKind::Reflection: return "Reflection";
    case SpectrumKind::DeltaT: return "DeltaT";
    case SpectrumKind::DeltaR: return "DeltaR";
    case SpectrumKind::PL: return "PL";
  }
  return "Transmission";
}

std::optional<SpectrumKind> spectrum_kind_from_string(std::string_view name) {
  for (auto kind : {SpectrumKind::Transmission, SpectrumKind::Reflection, SpectrumKind::DeltaT,
                    SpectrumKind::DeltaR, SpectrumKind::PL}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

Spectrum::Spectrum(std::vector<double> detunings, std::vector<double> values, SpectrumKind kind,
                   SpectrumMetadata metadata)
    : detunings_(std::move(detunings)),
      values_(std::move(values)),
      kind_(kind),
      metadata_(std::move(metadata)) {
  if (detunings_.size() != values_.size()) {
    throw GridMismatch("spectrum: " + std::to_string(detunings_.size()) + " detunings but " +
                       std::to_string(values_.size()) + " values");
  }
  for (std::size_t i = 0; i < detunings_.size(); ++i) {
    if (!std::isfinite(detunings_[i])) {
      throw InvalidParameter("spectrum.detunings", "non-finite at index " + std::to_string(i));
    }
    if (!std::isfinite(values_[i])) {
      throw InvalidParameter("spectrum.values", "non-finite at index " + std::to_string(i));
    }
    if (i > 0 && !(detunings_[i] > detunings_[i - 1])) {
      throw InvalidParameter("spectrum.detunings",
                             "not strictly increasing at index " + std::to_string(i));
    }
  }
}

Spectrum Spectrum::with_values(std::vector<double> values, SpectrumKind kind) const {
  return Spectrum(detunings_, std::move(values), kind, metadata_);
}

void require_aligned(const Spectrum& a, const Spectrum& b, std::string_view context) {
  if (!std::ranges::equal(a.detunings(), b.detunings())) {
    throw GridMismatch(std::string(context) + ": detuning grids differ");
  }
}

}  // namespace chiralwg
