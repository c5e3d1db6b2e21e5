#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chainmetric {

// Nonnegative real closed under addition and min/max, extended with +infinity.
// Never NaN; +infinity is absorbing under addition and compares greater than
// every finite value. Construction from a negative number or NaN is rejected.
class ExtReal {
 public:
  constexpr ExtReal() noexcept : v_(0.0) {}

  ExtReal(double v) : v_(v) {  // NOLINT: implicit by design, distances flow in
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
    if (v < 0.0)
      throw std::invalid_argument("ExtReal: negative value " +
                                  std::to_string(v));
  }

  static ExtReal infinity() noexcept {
    ExtReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  double value() const noexcept { return v_; }
  bool is_infinite() const noexcept { return std::isinf(v_); }
  bool is_finite() const noexcept { return !std::isinf(v_); }

  friend ExtReal operator+(ExtReal a, ExtReal b) noexcept {
    ExtReal r;
    r.v_ = a.v_ + b.v_;  // inf + x = inf; operands are never NaN or negative
    return r;
  }
  ExtReal& operator+=(ExtReal o) noexcept {
    v_ += o.v_;
    return *this;
  }

  friend bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
  friend bool operator!=(ExtReal a, ExtReal b) noexcept { return a.v_ != b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) noexcept { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) noexcept { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) noexcept { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) noexcept { return a.v_ >= b.v_; }

 private:
  double v_;
};

inline ExtReal min(ExtReal a, ExtReal b) noexcept { return a < b ? a : b; }
inline ExtReal max(ExtReal a, ExtReal b) noexcept { return a < b ? b : a; }

}  // namespace chainmetric
