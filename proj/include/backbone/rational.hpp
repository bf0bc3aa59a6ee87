#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <charconv>

namespace backbone {

using Rational = boost::rational<std::int64_t>;

// Reduced "p/q" text form; integers keep the "/1" denominator.
inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::optional<Rational> parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
  };
  std::int64_t num = 0, den = 1;
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!parse_int(text, num)) return std::nullopt;
  } else {
    if (!parse_int(text.substr(0, slash), num)) return std::nullopt;
    if (!parse_int(text.substr(slash + 1), den)) return std::nullopt;
    if (den == 0) return std::nullopt;
  }
  return Rational(num, den);
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline Rational abs_diff(const Rational& a, const Rational& b) {
  return a > b ? a - b : b - a;
}

// A length that may be +infinity. Used inside the dynamic programs only; the
// public solver interfaces report infeasibility by exception.
class Cost {
 public:
  Cost() = default;  // infinite
  Cost(Rational v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Cost(std::int64_t v) : value_(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  static Cost infinity() { return Cost(); }

  bool finite() const { return value_.has_value(); }
  const Rational& value() const { return *value_; }

  friend Cost operator+(const Cost& a, const Cost& b) {
    if (!a.finite() || !b.finite()) return {};
    return Cost(*a.value_ + *b.value_);
  }
  friend bool operator<(const Cost& a, const Cost& b) {
    if (!a.finite()) return false;
    if (!b.finite()) return true;
    return *a.value_ < *b.value_;
  }
  friend bool operator==(const Cost& a, const Cost& b) {
    if (a.finite() != b.finite()) return false;
    return !a.finite() || *a.value_ == *b.value_;
  }

 private:
  std::optional<Rational> value_;
};

}  // namespace backbone
