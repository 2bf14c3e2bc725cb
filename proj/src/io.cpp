#include "tld/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tld {

Json to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(j.get<long>()));
  throw Error("expected a rational as a \"p/q\" string or an integer");
}

Json to_json(const TorusConfig& eta) { return Json{{"ring", eta.size()}, {"sites", eta.sites()}}; }

TorusConfig config_from_json(const Json& j) {
  if (j.is_string()) {
    // occupation string such as "0110"
    std::vector<std::uint8_t> bits;
    for (char c : j.get<std::string>()) {
      if (c != '0' && c != '1') throw Error("occupation strings use only 0 and 1");
      bits.push_back(c == '1');
    }
    return TorusConfig(std::move(bits));
  }
  const auto sites = j.at("sites").get<std::vector<int>>();
  return TorusConfig::from_sites(j.at("ring").get<int>(), sites);
}

Json to_json(const PointConfig& x) {
  Json out = Json::array();
  for (const auto& p : x.points()) out.push_back(to_json(p));
  return out;
}

PointConfig points_from_json(const Json& j) {
  std::vector<Rational> pts;
  for (const auto& p : j) pts.push_back(rational_from_json(p));
  return PointConfig(std::move(pts));
}

Json to_json(const TorusMeasure& rho) {
  Json out;
  Json b = Json::array(), d = Json::array(), a = Json::array();
  for (const auto& x : rho.breakpoints()) b.push_back(to_json(x));
  for (const auto& x : rho.densities()) d.push_back(to_json(x));
  for (const auto& at : rho.atoms()) a.push_back(Json{{"at", to_json(at.at)}, {"mass", to_json(at.mass)}});
  out["breakpoints"] = b;
  out["densities"] = d;
  out["atoms"] = a;
  out["mass"] = to_json(rho.total_mass());
  return out;
}

TorusMeasure measure_from_json(const Json& j) {
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) atoms.push_back({rational_from_json(a.at("at")), rational_from_json(a.at("mass"))});
  }
  if (j.contains("pieces")) {
    std::vector<Piece> pieces;
    for (const auto& p : j.at("pieces")) {
      pieces.push_back({rational_from_json(p.at("start")), rational_from_json(p.at("length")),
                        rational_from_json(p.at("density"))});
    }
    return TorusMeasure::from_pieces(pieces, std::move(atoms));
  }
  if (j.contains("constant")) {
    const auto c = TorusMeasure::constant(rational_from_json(j.at("constant")));
    return atoms.empty() ? c : combine(c, 1, TorusMeasure::atomic(std::move(atoms)), 1);
  }
  std::vector<Rational> b, d;
  for (const auto& x : j.at("breakpoints")) b.push_back(rational_from_json(x));
  for (const auto& x : j.at("densities")) d.push_back(rational_from_json(x));
  return TorusMeasure(std::move(b), std::move(d), std::move(atoms));
}

namespace {

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_json(r));
  return out;
}

}  // namespace

Json to_json(const FluxProfile& flux) {
  Json out;
  out["domain"] = flux.domain == FluxProfile::Domain::Sites ? "sites" : "grid";
  out["positions"] = rationals(flux.positions);
  out["values"] = rationals(flux.values);
  out["left_values"] = rationals(flux.left_values);
  Json iv = Json::array();
  for (const auto& i : flux.intervals) {
    iv.push_back(Json{{"left", to_json(i.left)}, {"right", to_json(i.right)}, {"left_closed", i.left_closed}});
  }
  out["intervals"] = iv;
  out["gamma_total"] = to_json(flux.gamma_total());
  out["full"] = flux.full;
  return out;
}

Json to_json(const StationaryTable& table) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < table.states.size(); ++i) {
    rows.push_back(Json{{"labels", table.states[i]}, {"probability", to_json(table.probabilities[i])}});
  }
  return Json{{"states", rows}};
}

Json to_json(const Arc& a) { return Json{{"start", to_json(a.start)}, {"length", to_json(a.length)}}; }

Json to_json(const RateResult& r) {
  Json out;
  out["finite"] = r.finite;
  if (r.finite) {
    out["value"] = r.value;
  } else {
    out["value"] = "inf";
    out["reason"] = r.reason;
  }
  out["diagonal"] = r.diagonal;
  Json plateaus = Json::array();
  for (const auto& a : r.plateaus.intervals) plateaus.push_back(to_json(a));
  out["plateaus"] = plateaus;
  out["plateaus_full"] = r.plateaus.full;
  Json env = Json::array();
  for (const auto& e : r.envelopes) env.push_back(to_json(e));
  out["envelopes"] = env;
  out["terms"] = Json{{"complement", r.terms.complement}, {"plateaus", r.terms.plateaus}, {"second", r.terms.second}};
  return out;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw InternalError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string git_blob_hash(const std::string& text) {
  const std::string payload = "blob " + std::to_string(text.size()) + '\0' + text;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(payload.data(), payload.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw InternalError("SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace tld
