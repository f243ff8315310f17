#include "ergocert/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace ergocert {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return Rational{num / (g == 0 ? 1 : g), den / (g == 0 ? 1 : g)};
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = parse_int(text.substr(0, slash));
    auto d = parse_int(text.substr(slash + 1));
    if (!n || !d || *d == 0) return std::nullopt;
    return make(*n, *d);
  }

  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    auto n = parse_int(text);
    if (!n) return std::nullopt;
    return make(*n, 1);
  }

  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 17 || frac.empty()) return std::nullopt;
  bool negative = !whole.empty() && whole.front() == '-';
  if (negative) whole.remove_prefix(1);
  std::int64_t w = 0;
  if (!whole.empty()) {
    auto parsed = parse_int(whole);
    if (!parsed || *parsed < 0) return std::nullopt;
    w = *parsed;
  }
  auto f = parse_int(frac);
  if (!f || *f < 0) return std::nullopt;
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  if (w > (INT64_MAX - *f) / scale) return std::nullopt;
  std::int64_t n = w * scale + *f;
  return make(negative ? -n : n, scale);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den, b.den);
  const std::int64_t lhs_scale = b.den / g;
  const std::int64_t rhs_scale = a.den / g;
  std::int64_t num = 0, den = 0, t1 = 0, t2 = 0;
  if (__builtin_mul_overflow(a.num, lhs_scale, &t1) || __builtin_mul_overflow(b.num, rhs_scale, &t2) ||
      __builtin_add_overflow(t1, t2, &num) || __builtin_mul_overflow(a.den, lhs_scale, &den))
    throw std::overflow_error("rational overflow");
  return Rational::make(num, den);
}

}  // namespace ergocert
