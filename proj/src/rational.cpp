#include "tld/rational.hpp"

#include <cctype>

namespace tld {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t lead = 0;
  while (lead < s.size() && std::isspace(static_cast<unsigned char>(s[lead]))) ++lead;
  s = s.substr(lead);
  if (s.empty()) throw Error("empty rational literal");

  bool negative = false;
  std::string_view body(s);
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw Error("malformed rational '" + s + "'");
    BigInt n(std::string(num), 10);
    BigInt d(std::string(den), 10);
    if (d == 0) throw Error("zero denominator in '" + s + "'");
    out = Rational(n, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw Error("malformed decimal '" + s + "'");
    }
    BigInt n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    BigInt d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    out = Rational(n, d);
  } else {
    if (!all_digits(body)) throw Error("malformed rational '" + s + "'");
    out = Rational(BigInt(std::string(body), 10));
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string format_rational(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational wrap_unit(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  Rational out = r - Rational(q);
  return out;
}

Rational forward_distance(const Rational& a, const Rational& b) { return wrap_unit(b - a); }

Rational dyadic_from_bits(std::uint64_t bits) {
  const std::uint64_t k = bits >> 11;
  BigInt num;
  mpz_import(num.get_mpz_t(), 1, -1, sizeof(k), 0, 0, &k);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, 53);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::vector<std::string> format_rationals(const std::vector<Rational>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(format_rational(v));
  return out;
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& text) {
  std::vector<Rational> out;
  out.reserve(text.size());
  for (const auto& t : text) out.push_back(parse_rational(t));
  return out;
}

}  // namespace tld
