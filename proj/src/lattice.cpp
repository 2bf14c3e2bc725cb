#include "tld/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tld {

int wrap_site(long long site, int ring) {
  long long r = site % ring;
  return static_cast<int>(r < 0 ? r + ring : r);
}

TorusInterval::TorusInterval(int ring, int first, int last) : ring_(ring), first_(first), last_(last) {
  if (ring <= 0) throw Error("ring size must be positive");
  if (first < 0 || first >= ring || last < 0 || last >= ring) {
    throw Error("interval endpoints must lie in [0, N)");
  }
}

TorusInterval TorusInterval::whole(int ring, int first) {
  return TorusInterval(ring, first, wrap_site(first - 1LL, ring));
}

int TorusInterval::length() const { return wrap_site(static_cast<long long>(last_) - first_, ring_) + 1; }

bool TorusInterval::contains(int site) const {
  return wrap_site(static_cast<long long>(site) - first_, ring_) < length();
}

TorusInterval TorusInterval::rotated(int shift) const {
  return TorusInterval(ring_, wrap_site(static_cast<long long>(first_) + shift, ring_),
                       wrap_site(static_cast<long long>(last_) + shift, ring_));
}

TorusConfig::TorusConfig(std::vector<std::uint8_t> occupation) : bits_(std::move(occupation)) {
  for (auto& b : bits_) {
    if (b > 1) throw Error("occupation values must be 0 or 1");
    particles_ += b;
  }
}

TorusConfig TorusConfig::from_sites(int ring, std::span<const int> sites) {
  if (ring <= 0) throw Error("ring size must be positive");
  std::vector<std::uint8_t> bits(ring, 0);
  for (int s : sites) {
    auto& b = bits[wrap_site(s, ring)];
    if (b) throw Error("site occupied twice");
    b = 1;
  }
  return TorusConfig(std::move(bits));
}

TorusConfig TorusConfig::empty(int ring) { return TorusConfig(std::vector<std::uint8_t>(ring, 0)); }

std::vector<int> TorusConfig::sites() const {
  std::vector<int> out;
  out.reserve(particles_);
  for (int x = 0; x < size(); ++x) {
    if (bits_[x]) out.push_back(x);
  }
  return out;
}

bool TorusConfig::dominated_by(const TorusConfig& other) const {
  if (other.size() != size()) return false;
  for (int x = 0; x < size(); ++x) {
    if (bits_[x] > other.bits_[x]) return false;
  }
  return true;
}

PointConfig::PointConfig(std::vector<Rational> points) : points_(std::move(points)) {
  for (auto& p : points_) {
    if (p < 0 || p >= 1) throw Error("points must lie in [0,1)");
  }
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
    throw Error("points of a configuration must be distinct");
  }
}

bool PointConfig::contains(const Rational& x) const {
  return std::binary_search(points_.begin(), points_.end(), x);
}

bool PointConfig::subset_of(const PointConfig& other) const {
  return std::includes(other.points_.begin(), other.points_.end(), points_.begin(), points_.end());
}

namespace {

std::string describe_violation(const OrderViolation& v) {
  std::ostringstream os;
  os << "tuple not ordered between parts " << v.pair << " and " << v.pair + 1;
  if (v.site) os << " at site " << *v.site;
  if (!v.detail.empty()) os << ": " << v.detail;
  return os.str();
}

}  // namespace

OrderError::OrderError(OrderViolation v) : Error(describe_violation(v)), violation_(std::move(v)) {}

OrderCheck validate_ordered(std::span<const TorusConfig> parts) {
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& a = parts[i];
    const auto& b = parts[i + 1];
    if (a.size() != b.size()) {
      return {false, OrderViolation{i, std::nullopt, "ring sizes differ"}};
    }
    for (int x = 0; x < a.size(); ++x) {
      if (a.occupied(x) && !b.occupied(x)) return {false, OrderViolation{i, x, {}}};
    }
  }
  return {};
}

OrderCheck validate_ordered(std::span<const PointConfig> parts) {
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& a = parts[i].points();
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!parts[i + 1].contains(a[j])) {
        return {false, OrderViolation{i, static_cast<int>(j), "point " + format_rational(a[j]) + " missing"}};
      }
    }
  }
  return {};
}

std::vector<int> class_label_encode(std::span<const TorusConfig> parts) {
  if (parts.empty()) throw Error("label encoding needs at least one class");
  if (auto check = validate_ordered(parts); !check.ok) throw OrderError(*check.violation);
  const int n = parts.front().size();
  std::vector<int> labels(n, 0);
  for (int x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].occupied(x)) {
        labels[x] = static_cast<int>(i) + 1;
        break;
      }
    }
  }
  return labels;
}

std::vector<TorusConfig> class_label_decode(std::span<const int> labels, int classes) {
  if (classes < 1) throw Error("label decoding needs at least one class");
  std::vector<TorusConfig> out;
  out.reserve(classes);
  for (int i = 1; i <= classes; ++i) {
    std::vector<std::uint8_t> bits(labels.size(), 0);
    for (std::size_t x = 0; x < labels.size(); ++x) {
      if (labels[x] < 0 || labels[x] > classes) throw Error("label out of range");
      bits[x] = labels[x] != 0 && labels[x] <= i;
    }
    out.emplace_back(std::move(bits));
  }
  return out;
}

int discrete_excess(const TorusConfig& first, const TorusConfig& second, const TorusInterval& interval) {
  if (first.size() != second.size() || first.size() != interval.ring()) {
    throw Error("excess needs configurations and interval on the same ring");
  }
  int total = 0;
  for (int step = 0, len = interval.length(); step < len; ++step) {
    const int z = wrap_site(static_cast<long long>(interval.first()) + step, interval.ring());
    total += static_cast<int>(first.occupied(z)) - static_cast<int>(second.occupied(z));
  }
  return total;
}

std::vector<TorusConfig> enumerate_configs(int ring, int particles) {
  if (ring > 12) throw Error("exhaustive enumeration refuses N > 12");
  if (ring < 0 || particles < 0 || particles > ring) throw Error("invalid (N, M) for enumeration");
  std::vector<std::uint8_t> bits(ring, 0);
  std::fill(bits.end() - particles, bits.end(), 1);
  std::vector<TorusConfig> out;
  do {
    out.emplace_back(bits);
  } while (std::next_permutation(bits.begin(), bits.end()));
  return out;
}

std::vector<std::vector<int>> enumerate_label_vectors(int ring, std::span<const int> counts) {
  if (ring > 12) throw Error("exhaustive enumeration refuses N > 12");
  const int k = static_cast<int>(counts.size());
  if (std::pow(static_cast<double>(k + 1), ring) > 1e7) {
    throw Error("exhaustive enumeration refuses (k+1)^N > 1e7");
  }
  int used = 0;
  for (int c : counts) {
    if (c < 0) throw Error("class counts must be nonnegative");
    used += c;
  }
  if (used > ring) throw Error("more particles than sites");
  std::vector<int> labels;
  labels.reserve(ring);
  labels.insert(labels.end(), ring - used, 0);
  for (int i = 0; i < k; ++i) labels.insert(labels.end(), counts[i], i + 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(labels);
  } while (std::next_permutation(labels.begin(), labels.end()));
  return out;
}

}  // namespace tld
