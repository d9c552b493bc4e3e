#ifndef RELAXO_COMMON_HPP
#define RELAXO_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaxo {

// Reserved value standing in for +infinity in sampled data and piecewise
// branches. Kept finite so comparisons stay total; arithmetic on it is an
// error, not a silent propagation.
inline constexpr double kInfValue = 1.0e308;

inline bool is_inf_value(double v) { return v >= kInfValue; }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis-aligned box in R^1 or R^2.
struct Box {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};

  double measure() const {
    double m = 1.0;
    for (int d = 0; d < dim; ++d) m *= hi[d] - lo[d];
    return m;
  }
  bool contains(std::span<const double> p, double tol = 0.0) const {
    for (int d = 0; d < dim; ++d)
      if (p[d] < lo[d] - tol || p[d] > hi[d] + tol) return false;
    return true;
  }
  static Box interval(double a, double b) { return Box{1, {a, 0.0}, {b, 0.0}}; }
  static Box rect(double ax, double bx, double ay, double by) {
    return Box{2, {ax, ay}, {bx, by}};
  }
};

// Sums a vector by recursive halving. The reduction order is a function of
// the length only, so results are reproducible no matter how the terms were
// produced.
double pairwise_sum(std::span<const double> xs);

// Deterministic, platform-independent RNG (splitmix64 core).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * next_double(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  static Rng derived(std::uint64_t seed, std::uint64_t stream) {
    Rng mix(seed);
    mix.state_ ^= 0x589965cc75374cc3ull * (stream + 1);
    mix.next_u64();
    return mix;
  }

 private:
  std::uint64_t state_;
};

// FNV-1a 64-bit hash, used for config fingerprints.
std::uint64_t fnv1a64(std::span<const char> bytes);
std::string fnv1a64_hex(const std::string& text);

}  // namespace relaxo

#endif  // RELAXO_COMMON_HPP
