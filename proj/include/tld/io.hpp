#pragma once

// JSON and CSV forms of the core types. Rationals are "p/q" strings.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tld/collapse.hpp"
#include "tld/dynamics.hpp"
#include "tld/rate.hpp"

namespace tld {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);  // "p/q" string or integer

Json to_json(const TorusConfig& eta);  // {"ring": N, "sites": [...]}
TorusConfig config_from_json(const Json& j);

Json to_json(const PointConfig& x);  // ["p/q", ...]
PointConfig points_from_json(const Json& j);

/// {"breakpoints": [...], "densities": [...], "atoms": [{"at", "mass"}]}. Input may
/// instead give "pieces": [{"start", "length", "density"}].
Json to_json(const TorusMeasure& rho);
TorusMeasure measure_from_json(const Json& j);

Json to_json(const FluxProfile& flux);
Json to_json(const StationaryTable& table);
Json to_json(const RateResult& r);
Json to_json(const Arc& a);

/// Minimal CSV writer: quotes fields containing separators or quotes.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  std::string str() const;
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// SHA-1 of "blob <size>\0<text>", as git hashes file contents.
std::string git_blob_hash(const std::string& text);

}  // namespace tld
