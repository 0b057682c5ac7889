#include "chiralwg/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <system_error>

#include "chiralwg/errors.hpp"

namespace chiralwg {

namespace fs = std::filesystem;

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "detuning_ueV,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_double(s.detunings()[i]);
    out += ',';
    out += format_double(s.values()[i]);
    out += '\n';
  }
  return out;
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

void write_spectrum_csv(const fs::path& path, const Spectrum& s) {
  write_file_atomic(path, spectrum_to_csv(s));
  nlohmann::ordered_json meta;
  meta["kind"] = to_string(s.kind());
  meta["direction"] = s.metadata().direction ? nlohmann::ordered_json(to_string(*s.metadata().direction))
                                             : nlohmann::ordered_json(nullptr);
  meta["power_W"] = s.metadata().power_W ? nlohmann::ordered_json(*s.metadata().power_W)
                                         : nlohmann::ordered_json(nullptr);
  meta["config_digest"] = s.metadata().config_digest;
  write_file_atomic(sidecar_path(path), meta.dump(2) + "\n");
}

namespace {

double parse_field(std::string_view field, std::size_t row, const char* name) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw FormatError(row, std::string("cannot parse ") + name + " '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) throw FormatError(row, std::string(name) + " is not finite");
  return v;
}

}  // namespace

Spectrum parse_spectrum_csv(std::string_view text, SpectrumKind kind, SpectrumMetadata metadata) {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t row = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line != "detuning_ueV,value") {
        throw FormatError(row, "expected header 'detuning_ueV,value'");
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw FormatError(row, "expected exactly two comma-separated fields");
    }
    const double d = parse_field(line.substr(0, comma), row, "detuning");
    const double v = parse_field(line.substr(comma + 1), row, "value");
    if (!x.empty() && !(d > x.back())) {
      throw FormatError(row, "detuning grid is not strictly increasing");
    }
    x.push_back(d);
    y.push_back(v);
  }
  if (!header_seen) throw FormatError(1, "empty file");
  if (x.size() < kMinSpectrumRows) {
    throw FormatError(row, "only " + std::to_string(x.size()) + " data rows; at least " +
                               std::to_string(kMinSpectrumRows) + " are required");
  }
  return Spectrum(std::move(x), std::move(y), kind, std::move(metadata));
}

Spectrum ingest_csv(const fs::path& path) {
  const std::string text = read_file(path);
  SpectrumKind kind = SpectrumKind::Transmission;
  SpectrumMetadata metadata;
  const fs::path meta_path = sidecar_path(path);
  if (fs::exists(meta_path)) {
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(read_file(meta_path));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(1, meta_path.string() + ": " + e.what());
    }
    if (meta.contains("kind") && meta["kind"].is_string()) {
      if (auto k = spectrum_kind_from_string(meta["kind"].get<std::string>())) kind = *k;
    }
    if (meta.contains("direction") && meta["direction"].is_string()) {
      const auto d = meta["direction"].get<std::string>();
      if (d == "ltr") metadata.direction = Direction::LtoR;
      if (d == "rtl") metadata.direction = Direction::RtoL;
    }
    if (meta.contains("power_W") && meta["power_W"].is_number()) {
      metadata.power_W = meta["power_W"].get<double>();
    }
    if (meta.contains("config_digest") && meta["config_digest"].is_string()) {
      metadata.config_digest = meta["config_digest"].get<std::string>();
    }
  }
  return parse_spectrum_csv(text, kind, std::move(metadata));
}

}  // namespace chiralwg
