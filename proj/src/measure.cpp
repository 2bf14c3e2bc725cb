#include "tld/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tld {

bool Arc::contains(const Rational& x) const { return full() || forward_distance(start, x) <= length; }

TorusMeasure::TorusMeasure() : TorusMeasure({}, {}, {}) {}

TorusMeasure::TorusMeasure(std::vector<Rational> breakpoints, std::vector<Rational> densities,
                           std::vector<Atom> atoms)
    : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)), atoms_(std::move(atoms)) {
  if (breakpoints_.size() != densities_.size()) {
    throw Error("measure needs one density per breakpoint");
  }
  if (breakpoints_.empty()) {
    breakpoints_.push_back(0);
    densities_.push_back(0);
  }
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
    if (breakpoints_[j] < 0 || breakpoints_[j] >= 1) throw Error("breakpoints must lie in [0,1)");
    if (j > 0 && breakpoints_[j] <= breakpoints_[j - 1]) throw Error("breakpoints must increase strictly");
    if (densities_[j] < 0) throw Error("densities must be nonnegative");
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    if (atoms_[j].at < 0 || atoms_[j].at >= 1) throw Error("atom locations must lie in [0,1)");
    if (atoms_[j].mass <= 0) throw Error("atom masses must be positive");
    if (j > 0 && atoms_[j].at == atoms_[j - 1].at) throw Error("atom locations must be distinct");
  }
  build_cache();
}

void TorusMeasure::build_cache() {
  seg_start_.clear();
  seg_density_.clear();
  seg_prefix_.clear();
  const std::size_t n = breakpoints_.size();
  if (breakpoints_.front() > 0) {
    seg_start_.push_back(0);
    seg_density_.push_back(densities_.back());
  }
  for (std::size_t j = 0; j < n; ++j) {
    seg_start_.push_back(breakpoints_[j]);
    seg_density_.push_back(densities_[j]);
  }
  Rational acc = 0;
  for (std::size_t s = 0; s < seg_start_.size(); ++s) {
    seg_prefix_.push_back(acc);
    const Rational end = s + 1 < seg_start_.size() ? seg_start_[s + 1] : Rational(1);
    acc += seg_density_[s] * (end - seg_start_[s]);
  }
  total_mass_ = acc;
  for (const auto& a : atoms_) total_mass_ += a.mass;
}

TorusMeasure TorusMeasure::constant(const Rational& density) { return TorusMeasure({Rational(0)}, {density}); }

TorusMeasure TorusMeasure::from_pieces(std::span<const Piece> pieces, std::vector<Atom> atoms) {
  struct Seg {
    Rational start, end, density;
  };
  std::vector<Seg> segs;
  for (const auto& p : pieces) {
    if (p.length <= 0) continue;
    if (p.length > 1) throw Error("piece longer than the torus");
    const Rational s = wrap_unit(p.start);
    const Rational e = s + p.length;
    if (e <= 1) {
      segs.push_back({s, e, p.density});
    } else {
      segs.push_back({s, 1, p.density});
      segs.push_back({0, e - 1, p.density});
    }
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.start < b.start; });
  std::vector<Rational> bps;
  std::vector<Rational> dens;
  Rational cursor = 0;
  for (const auto& s : segs) {
    if (s.start < cursor) throw Error("pieces overlap");
    if (s.start > cursor) {
      bps.push_back(cursor);
      dens.push_back(0);
    }
    bps.push_back(s.start);
    dens.push_back(s.density);
    cursor = s.end;
  }
  if (cursor < 1) {
    bps.push_back(cursor);
    dens.push_back(0);
  }
  return TorusMeasure(std::move(bps), std::move(dens), std::move(atoms)).canonical();
}

TorusMeasure TorusMeasure::indicator(const Rational& a, const Rational& b, const Rational& height) {
  const Rational start = wrap_unit(a);
  const Rational len = b > a ? Rational(b - a) : Rational(b - a + 1);
  const Piece p{start, len, height};
  return from_pieces(std::span<const Piece>(&p, 1));
}

TorusMeasure TorusMeasure::atomic(std::vector<Atom> atoms) { return TorusMeasure({}, {}, std::move(atoms)); }

bool TorusMeasure::bounded_density() const {
  return std::all_of(densities_.begin(), densities_.end(), [](const Rational& d) { return d <= 1; });
}

Rational TorusMeasure::max_density() const { return *std::max_element(densities_.begin(), densities_.end()); }

Rational TorusMeasure::density_at(const Rational& x) const {
  const Rational w = wrap_unit(x);
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), w);
  if (it == breakpoints_.begin()) return densities_.back();
  return densities_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

Rational TorusMeasure::atom_at(const Rational& x) const {
  const Rational w = wrap_unit(x);
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), w, [](const Atom& a, const Rational& v) { return a.at < v; });
  if (it != atoms_.end() && it->at == w) return it->mass;
  return 0;
}

Rational TorusMeasure::integral_from_zero(const Rational& t) const {
  auto it = std::upper_bound(seg_start_.begin(), seg_start_.end(), t);
  const auto j = static_cast<std::size_t>(it - seg_start_.begin()) - 1;
  return seg_prefix_[j] + seg_density_[j] * (t - seg_start_[j]);
}

Rational TorusMeasure::density_integral(const Rational& a, const Rational& b) const {
  const Rational wa = wrap_unit(a);
  const Rational wb = wrap_unit(b);
  if (wa == wb) return 0;
  if (wa < wb) return integral_from_zero(wb) - integral_from_zero(wa);
  return integral_from_zero(1) - integral_from_zero(wa) + integral_from_zero(wb);
}

TorusMeasure TorusMeasure::canonical() const {
  const std::size_t n = breakpoints_.size();
  std::vector<Rational> bps;
  std::vector<Rational> dens;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& prev = densities_[(j + n - 1) % n];
    if (densities_[j] != prev) {
      bps.push_back(breakpoints_[j]);
      dens.push_back(densities_[j]);
    }
  }
  if (bps.empty()) {
    bps.push_back(0);
    dens.push_back(densities_.front());
  }
  std::map<Rational, Rational> merged;
  for (const auto& a : atoms_) merged[a.at] += a.mass;
  std::vector<Atom> atoms;
  for (auto& [at, mass] : merged) {
    if (mass != 0) atoms.push_back({at, mass});
  }
  return TorusMeasure(std::move(bps), std::move(dens), std::move(atoms));
}

TorusMeasure TorusMeasure::scaled(const Rational& factor) const {
  if (factor < 0) throw Error("negative scale factor");
  if (factor == 0) return TorusMeasure();
  std::vector<Rational> dens = densities_;
  for (auto& d : dens) d *= factor;
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.mass *= factor;
  return TorusMeasure(breakpoints_, std::move(dens), std::move(atoms));
}

bool TorusMeasure::operator==(const TorusMeasure& other) const {
  const auto a = canonical();
  const auto b = other.canonical();
  return a.breakpoints_ == b.breakpoints_ && a.densities_ == b.densities_ && a.atoms_ == b.atoms_;
}

TorusMeasure combine(const TorusMeasure& a, const Rational& ca, const TorusMeasure& b, const Rational& cb) {
  const auto grid = common_grid({&a, &b});
  std::vector<Rational> dens;
  std::vector<Atom> atoms;
  for (const auto& g : grid) {
    dens.push_back(ca * a.density_at(g) + cb * b.density_at(g));
    if (dens.back() < 0) throw Error("combination has negative density");
    const Rational m = ca * a.atom_at(g) + cb * b.atom_at(g);
    if (m < 0) throw Error("combination has a negative atom");
    if (m > 0) atoms.push_back({g, m});
  }
  return TorusMeasure(grid, std::move(dens), std::move(atoms)).canonical();
}

Rational interval_mass(const TorusMeasure& rho, const Rational& a, const Rational& b) {
  const Rational wa = wrap_unit(a);
  const Rational wb = wrap_unit(b);
  if (wa == wb) return 0;
  Rational mass = rho.density_integral(wa, wb);
  for (const auto& atom : rho.atoms()) {
    const bool inside = wa < wb ? (atom.at > wa && atom.at <= wb) : (atom.at > wa || atom.at <= wb);
    if (inside) mass += atom.mass;
  }
  return mass;
}

std::vector<Rational> common_grid(std::initializer_list<const TorusMeasure*> measures, std::span<const Rational> extra) {
  std::vector<Rational> pts{Rational(0)};
  for (const auto* m : measures) {
    pts.insert(pts.end(), m->breakpoints().begin(), m->breakpoints().end());
    for (const auto& a : m->atoms()) pts.push_back(a.at);
  }
  for (const auto& e : extra) pts.push_back(wrap_unit(e));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool dominated_by(const TorusMeasure& lower, const TorusMeasure& upper) {
  for (const auto& g : common_grid({&lower, &upper})) {
    if (lower.density_at(g) > upper.density_at(g)) return false;
    if (lower.atom_at(g) > upper.atom_at(g)) return false;
  }
  return true;
}

OrderCheck validate_ordered(std::span<const TorusMeasure> parts) {
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const auto& lo = parts[i];
    const auto& hi = parts[i + 1];
    for (const auto& g : common_grid({&lo, &hi})) {
      if (lo.density_at(g) > hi.density_at(g)) {
        return {false, OrderViolation{i, std::nullopt, "density exceeds on the cell starting at " + format_rational(g)}};
      }
      if (lo.atom_at(g) > hi.atom_at(g)) {
        return {false, OrderViolation{i, std::nullopt, "atom exceeds at " + format_rational(g)}};
      }
    }
  }
  return {};
}

std::vector<Arc> PlateauDecomposition::complement() const {
  if (full) return {};
  if (intervals.empty()) return {Arc{0, 1}};
  std::vector<Arc> out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Rational from = intervals[i].end();
    const Rational to = intervals[(i + 1) % intervals.size()].start;
    Rational len = forward_distance(from, to);
    if (len == 0) len = intervals.size() == 1 ? Rational(1 - intervals[0].length) : Rational(0);
    if (len > 0) out.push_back({from, len});
  }
  return out;
}

bool PlateauDecomposition::contains(const Rational& x) const {
  if (full) return true;
  return std::any_of(intervals.begin(), intervals.end(), [&](const Arc& a) { return a.contains(x); });
}

PlateauDecomposition plateau_set(const TorusMeasure& rho1, const TorusMeasure& rho2, double eq_tol) {
  if (!rho1.absolutely_continuous() || !rho2.absolutely_continuous()) {
    throw Error("plateaus are defined only for measures without atoms");
  }
  const auto grid = common_grid({&rho1, &rho2});
  const std::size_t n = grid.size();
  std::vector<bool> equal(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Rational d1 = rho1.density_at(grid[j]);
    const Rational d2 = rho2.density_at(grid[j]);
    if (eq_tol > 0) {
      const double a = to_double(d1);
      const double b = to_double(d2);
      equal[j] = std::abs(a - b) <= eq_tol * std::max(std::abs(a), std::abs(b));
    } else {
      equal[j] = d1 == d2;
    }
  }
  PlateauDecomposition out;
  auto first_unequal = std::find(equal.begin(), equal.end(), false);
  if (first_unequal == equal.end()) {
    out.full = true;
    out.intervals.push_back(Arc{0, 1});
    return out;
  }
  const std::size_t origin = static_cast<std::size_t>(first_unequal - equal.begin());
  auto cell_end = [&](std::size_t j) { return j + 1 < n ? grid[j + 1] : Rational(1); };
  std::size_t step = 1;
  while (step <= n) {
    const std::size_t j = (origin + step) % n;
    if (!equal[j]) {
      ++step;
      continue;
    }
    const Rational start = grid[j];
    Rational length = 0;
    while (step <= n && equal[(origin + step) % n]) {
      const std::size_t c = (origin + step) % n;
      length += cell_end(c) - grid[c];
      ++step;
    }
    out.intervals.push_back(Arc{start, length});
  }
  std::sort(out.intervals.begin(), out.intervals.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
  return out;
}

CumulativeFunction::CumulativeFunction(Arc base, std::vector<Knot> knots) : base_(std::move(base)), knots_(std::move(knots)) {
  if (knots_.size() < 2) throw Error("cumulative function needs at least two knots");
  if (knots_.front().offset != 0 || knots_.back().offset != base_.length) {
    throw Error("knots must span the whole base arc");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].offset <= knots_[i - 1].offset) throw Error("knot offsets must increase strictly");
  }
}

std::optional<Rational> CumulativeFunction::at_offset(const Rational& t) const {
  if (t < 0 || t > base_.length) return std::nullopt;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](const Rational& v, const Knot& k) { return v < k.offset; });
  if (it == knots_.end()) return knots_.back().value;
  const Knot& right = *it;
  const Knot& left = *(it - 1);
  return Rational(left.value + (right.value - left.value) * (t - left.offset) / (right.offset - left.offset));
}

std::optional<Rational> CumulativeFunction::at(const Rational& u) const {
  if (!base_.contains(u)) return std::nullopt;
  Rational t = forward_distance(base_.start, u);
  return at_offset(t);
}

std::vector<Rational> CumulativeFunction::slopes() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    out.push_back((knots_[i].value - knots_[i - 1].value) / (knots_[i].offset - knots_[i - 1].offset));
  }
  return out;
}

bool CumulativeFunction::nondecreasing() const {
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].value < knots_[i - 1].value) return false;
  }
  return true;
}

CumulativeFunction cumulative(const TorusMeasure& rho, const Arc& base) {
  for (const auto& a : rho.atoms()) {
    if (base.contains(a.at)) throw Error("cumulative needs a measure without atoms on the arc");
  }
  std::vector<Rational> offsets{Rational(0), base.length};
  for (const auto& b : rho.breakpoints()) {
    const Rational off = forward_distance(base.start, b);
    if (off > 0 && off < base.length) offsets.push_back(off);
  }
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  std::vector<Knot> knots;
  knots.reserve(offsets.size());
  Rational value = 0;
  knots.push_back({0, 0});
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    value += rho.density_at(base.start + offsets[i - 1]) * (offsets[i] - offsets[i - 1]);
    knots.push_back({offsets[i], value});
  }
  return CumulativeFunction(base, std::move(knots));
}

Envelope concave_envelope(const CumulativeFunction& f) {
  if (!f.nondecreasing()) throw Error("concave envelope expects a nondecreasing function");
  const auto& pts = f.knots();
  std::vector<Knot> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const Knot& a = hull[hull.size() - 2];
      const Knot& b = hull.back();
      const Rational cross = (b.offset - a.offset) * (p.value - a.value) - (b.value - a.value) * (p.offset - a.offset);
      if (cross < 0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  CumulativeFunction envelope(f.base(), hull);
  std::vector<Piece> pieces;
  const auto slopes = envelope.slopes();
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    pieces.push_back({f.base().start + hull[i].offset, hull[i + 1].offset - hull[i].offset, slopes[i]});
  }
  return {std::move(envelope), TorusMeasure::from_pieces(pieces)};
}

}  // namespace tld
