#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace narrsmooth {

// Timestamps and durations are kept at microsecond resolution so that every
// sum of interaction amounts is exact.
using Micros = std::chrono::microseconds;

inline constexpr std::int64_t kMicrosPerUnit = 1'000'000;

// Interaction amount: fixed-point with 1e-6 resolution. In seconds mode one
// unit is one second of speech; in count mode one unit is one speech turn.
class Amount {
 public:
  constexpr Amount() = default;

  static constexpr Amount from_micros(std::int64_t micros) { return Amount(micros); }
  static constexpr Amount from_duration(Micros d) { return Amount(d.count()); }
  static constexpr Amount units(std::int64_t n) { return Amount(n * kMicrosPerUnit); }

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double value() const { return static_cast<double>(micros_) / kMicrosPerUnit; }
  constexpr bool positive() const { return micros_ > 0; }

  constexpr Amount& operator+=(Amount o) { micros_ += o.micros_; return *this; }
  constexpr Amount& operator-=(Amount o) { micros_ -= o.micros_; return *this; }
  friend constexpr Amount operator+(Amount a, Amount b) { return a += b; }
  friend constexpr Amount operator-(Amount a, Amount b) { return a -= b; }
  friend constexpr Amount operator-(Amount a) { return Amount(-a.micros_); }
  friend constexpr auto operator<=>(Amount, Amount) = default;

 private:
  constexpr explicit Amount(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

// Smoothed raw weight over the extended reals: a finite amount balance or -inf.
class ExtendedWeight {
 public:
  constexpr ExtendedWeight() = default;  // -inf
  constexpr ExtendedWeight(Amount a) : finite_(a) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedWeight neg_inf() { return {}; }

  constexpr bool is_neg_inf() const { return !finite_.has_value(); }
  constexpr Amount amount() const { return finite_.value(); }
  constexpr double value() const {
    return finite_ ? finite_->value() : -std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(const ExtendedWeight&, const ExtendedWeight&) = default;
  friend constexpr std::strong_ordering operator<=>(const ExtendedWeight& a, const ExtendedWeight& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return !a.is_neg_inf() <=> !b.is_neg_inf();
    return a.amount() <=> b.amount();
  }

 private:
  std::optional<Amount> finite_;
};

inline ExtendedWeight max(const ExtendedWeight& a, const ExtendedWeight& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------
// Fixed decimal formatting and parsing

// Formats micros/1e6 with `precision` decimals, rounding half away from zero.
inline std::string format_fixed_micros(std::int64_t micros, int precision) {
  if (precision < 0 || precision > 9) throw std::invalid_argument("precision must be in [0, 9]");
  const bool negative = micros < 0;
  // |INT64_MIN| is not representable; amounts never get near it.
  std::uint64_t mag = negative ? static_cast<std::uint64_t>(-micros) : static_cast<std::uint64_t>(micros);
  std::uint64_t scale = 1;
  for (int p = precision; p < 6; ++p) scale *= 10;
  mag = (mag + scale / 2) / scale;  // now in units of 10^-min(precision,6)
  const int digits = precision < 6 ? precision : 6;
  std::uint64_t denom = 1;
  for (int p = 0; p < digits; ++p) denom *= 10;
  std::string out;
  if (negative && mag != 0) out.push_back('-');
  out += std::to_string(mag / denom);
  if (precision > 0) {
    out.push_back('.');
    std::string frac = std::to_string(mag % denom);
    out.append(static_cast<std::size_t>(digits) - frac.size(), '0');
    out += frac;
    out.append(static_cast<std::size_t>(precision - digits), '0');
  }
  return out;
}

inline std::string format_fixed(double value, int precision) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  if (res.ec != std::errc{}) throw std::runtime_error("format_fixed: value out of range");
  std::string out(buf, res.ptr);
  if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

inline std::string format_amount(Amount a, int precision) { return format_fixed_micros(a.micros(), precision); }

inline std::string format_weight(const ExtendedWeight& w, int precision) {
  return w.is_neg_inf() ? std::string("-inf") : format_amount(w.amount(), precision);
}

// Parses a non-empty decimal number of seconds, rounded to the microsecond.
inline std::optional<std::int64_t> parse_decimal_micros(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
  return static_cast<std::int64_t>(std::llround(v * kMicrosPerUnit));
}

}  // namespace narrsmooth
