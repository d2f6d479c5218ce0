#include "dvsim/time.hpp"

#include <cmath>
#include <cstdio>

namespace dvsim {

SimTime SimTime::from_seconds(double s) {
  return SimTime::from_ns(static_cast<std::int64_t>(std::llround(s * 1e9)));
}

std::ostream& operator<<(std::ostream& os, SimTime t) {
  const std::int64_t ns = t.ns();
  const std::int64_t whole = ns / 1'000'000'000;
  std::int64_t frac = ns % 1'000'000'000;
  if (ns < 0 && frac != 0) frac = -frac;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%09lld", (ns < 0 && whole == 0) ? "-" : "",
                static_cast<long long>(whole), static_cast<long long>(frac));
  return os << buf;
}

}  // namespace dvsim
