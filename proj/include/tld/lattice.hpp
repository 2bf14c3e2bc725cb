#pragma once

// Discrete ring Z_N, particle configurations, point sets on the unit torus
// and ordered multiclass tuples built from them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tld/rational.hpp"

namespace tld {

/// Reduces an integer site index into [0, ring).
int wrap_site(long long site, int ring);

/// Closed cyclic segment [first, last] of Z_N traversed rightward.
/// `last == first - 1 (mod N)` is the whole ring.
class TorusInterval {
 public:
  TorusInterval(int ring, int first, int last);

  static TorusInterval whole(int ring, int first = 0);

  int ring() const { return ring_; }
  int first() const { return first_; }
  int last() const { return last_; }
  bool wraps() const { return last_ < first_; }
  int length() const;
  bool contains(int site) const;
  TorusInterval rotated(int shift) const;

 private:
  int ring_;
  int first_;
  int last_;
};

/// Occupation vector on Z_N with cached particle count.
class TorusConfig {
 public:
  TorusConfig() = default;
  explicit TorusConfig(std::vector<std::uint8_t> occupation);

  static TorusConfig from_sites(int ring, std::span<const int> sites);
  static TorusConfig empty(int ring);

  int size() const { return static_cast<int>(bits_.size()); }
  int particles() const { return particles_; }
  bool occupied(long long site) const { return bits_[wrap_site(site, size())] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<int> sites() const;

  /// Componentwise order: every site occupied here is occupied in `other`.
  bool dominated_by(const TorusConfig& other) const;

  bool operator==(const TorusConfig& other) const { return bits_ == other.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  int particles_ = 0;
};

/// Finite set of distinct points of the unit torus, kept sorted in [0,1).
class PointConfig {
 public:
  PointConfig() = default;
  explicit PointConfig(std::vector<Rational> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Rational>& points() const { return points_; }
  const Rational& operator[](std::size_t i) const { return points_[i]; }
  bool contains(const Rational& x) const;
  bool subset_of(const PointConfig& other) const;

  bool operator==(const PointConfig& other) const { return points_ == other.points_; }

 private:
  std::vector<Rational> points_;
};

/// First place where consecutive parts of a tuple fail the order.
struct OrderViolation {
  std::size_t pair = 0;  // parts[pair] vs parts[pair + 1]
  std::optional<int> site;
  std::string detail;
};

struct OrderCheck {
  bool ok = true;
  std::optional<OrderViolation> violation;
  explicit operator bool() const { return ok; }
};

class OrderError : public Error {
 public:
  explicit OrderError(OrderViolation v);
  const OrderViolation& violation() const { return violation_; }

 private:
  OrderViolation violation_;
};

OrderCheck validate_ordered(std::span<const TorusConfig> parts);
OrderCheck validate_ordered(std::span<const PointConfig> parts);

/// k-tuple whose consecutive parts satisfy the partial order of T.
template <class T>
class OrderedTuple {
 public:
  OrderedTuple() = default;
  explicit OrderedTuple(std::vector<T> parts) : parts_(std::move(parts)) {
    if (auto check = validate_ordered(std::span<const T>(parts_)); !check.ok) {
      throw OrderError(*check.violation);
    }
  }

  const std::vector<T>& parts() const { return parts_; }
  std::size_t classes() const { return parts_.size(); }
  const T& operator[](std::size_t i) const { return parts_[i]; }
  bool operator==(const OrderedTuple& other) const { return parts_ == other.parts_; }

 private:
  std::vector<T> parts_;
};

/// Class label per site: 0 at holes, otherwise the first layer occupying it.
/// Throws OrderError naming the first unordered pair.
std::vector<int> class_label_encode(std::span<const TorusConfig> parts);
std::vector<TorusConfig> class_label_decode(std::span<const int> labels, int classes);

/// Sum over the cyclic interval of first(z) - second(z).
int discrete_excess(const TorusConfig& first, const TorusConfig& second,
                    const TorusInterval& interval);

/// All configurations of `particles` particles on Z_ring, lexicographic in the
/// occupation vector. Refuses ring > 12.
std::vector<TorusConfig> enumerate_configs(int ring, int particles);

/// All label vectors on Z_ring with `counts[i]` particles of class i+1,
/// remaining sites empty, in lexicographic order. Refuses ring > 12 or
/// (k+1)^ring > 1e7.
std::vector<std::vector<int>> enumerate_label_vectors(int ring, std::span<const int> counts);

}  // namespace tld
