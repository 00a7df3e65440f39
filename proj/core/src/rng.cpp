#include "mcqual/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcqual/errors.hpp"

namespace mcqual {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::string_view tag) {
  std::string s = std::to_string(master);
  s += ':';
  s += std::to_string(index);
  s += ':';
  s += tag;
  return fnv1a64(s);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("Rng::below: bound must be >= 1");
  // Reject the tail that would bias the modulus.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = gen_();
    if (r >= threshold) return r % bound;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double Rng::cauchy(double location, double scale) {
  // Inverse CDF; tan never overflows to inf because pi/2 is not exactly
  // representable, so the result stays finite (if astronomically large).
  const double u = uniform01();
  return location + scale * std::tan(std::numbers::pi * (u - 0.5));
}

}  // namespace mcqual
