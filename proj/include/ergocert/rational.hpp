#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ergocert {

/// Exact probability as a reduced fraction num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);

  /// Accepts "a/b", an integer, or a plain decimal such as "0.125".
  static std::optional<Rational> parse(std::string_view text);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator+(const Rational& a, const Rational& b);

}  // namespace ergocert
