#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace dvsim {

/// Simulation clock value with integer-nanosecond resolution.
///
/// Integer ticks keep event ordering and clock-offset arithmetic exact; the
/// same type is used for instants and durations.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ns(std::int64_t ns) { return SimTime(ns); }
  static SimTime from_seconds(double seconds);
  static constexpr SimTime max() { return SimTime(INT64_MAX); }

  constexpr std::int64_t ns() const { return ns_; }
  constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime other) const { return SimTime(ns_ + other.ns_); }
  constexpr SimTime operator-(SimTime other) const { return SimTime(ns_ - other.ns_); }
  constexpr SimTime& operator+=(SimTime other) {
    ns_ += other.ns_;
    return *this;
  }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(ns_ * k); }

 private:
  constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

inline SimTime seconds(double s) { return SimTime::from_seconds(s); }

/// Prints seconds with nine fractional digits ("12.000512000").
std::ostream& operator<<(std::ostream& os, SimTime t);

}  // namespace dvsim
