#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chiralwg/spectrum.hpp"

namespace chiralwg {

inline constexpr std::size_t kMinSpectrumRows = 5;

// Shortest-round-trip is not used: every value is written with 17
// significant digits so output bytes depend only on the double.
std::string format_double(double value);

// Writes via a sibling temp file and rename, so readers never see a
// partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

// `detuning_ueV,value` CSV plus `<stem>.meta.json` beside it.
std::string spectrum_to_csv(const Spectrum& spectrum);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Parses a spectrum CSV; metadata and kind come from the sidecar when it
// exists. Throws FormatError with the 1-based file row on malformed, NaN or
// non-increasing rows and on files with fewer than kMinSpectrumRows points.
Spectrum ingest_csv(const std::filesystem::path& path);
Spectrum parse_spectrum_csv(std::string_view text, SpectrumKind kind = SpectrumKind::Transmission,
                            SpectrumMetadata metadata = {});

}  // namespace chiralwg
